"""Smoothness certification for homogeneous forms.

A form is smooth when its partial derivatives vanish simultaneously only at
the origin.  The certifiers here are exact:

* split-variables: a sum of forms in disjoint variables is smooth iff each
  summand is;
* groebner-modp: the partials are reduced modulo primes p = 1 (mod N) that
  split the coefficient field; emptiness of the projective zero locus over
  the closure of F_p (checked chart by chart as unit-ideal Groebner runs)
  implies smoothness in characteristic 0 by properness;
* groebner-char0: a reduced Groebner basis of the Jacobian ideal over the
  cyclotomic coefficient field; the form is smooth iff the leading-term
  ideal contains a pure power of every variable.

A singular verdict is only ever issued from characteristic 0, with either an
exact witness point or the leading-term defect as certificate.
"""

from __future__ import annotations

import json
import random
from math import lcm

from .cyclotomic import CycNum, cyclotomic_polynomial, scalar_to_str
from .forms import ExactMatrix, Form, partials


class SmoothnessError(ValueError):
    pass


# -- monomial order (graded reverse lexicographic) ---------------------------


def grevlex_key(exps):
    return (sum(exps), tuple(-e for e in reversed(exps)))


# -- coefficient fields -------------------------------------------------------


class GF:
    """Prime field F_p with a reduction map from a cyclotomic field."""

    def __init__(self, p: int, conductor: int = 1):
        self.p = p
        self.conductor = conductor
        self.root = self._find_root(conductor) if conductor > 1 else 1

    def _find_root(self, n: int) -> int:
        p = self.p
        if (p - 1) % n:
            raise SmoothnessError("p = %d does not split conductor %d" % (p, n))
        phi = cyclotomic_polynomial(n)
        for a in range(2, p):
            r = pow(a, (p - 1) // n, p)
            val = 0
            for c in reversed(phi):
                val = (val * r + c) % p
            if val == 0 and pow(r, n, p) == 1 and all(pow(r, n // q, p) != 1 for q in _prime_factors(n)):
                return r
        raise SmoothnessError("no primitive root of the cyclotomic polynomial mod %d" % p)

    def from_cyc(self, c: CycNum) -> int:
        if c.n > 1 and self.conductor % c.n:
            raise SmoothnessError("coefficient conductor %d not handled by this prime" % c.n)
        if c.den % self.p == 0:
            raise SmoothnessError("denominator divisible by p = %d" % self.p)
        if c.n == 1:
            num = c.num[0]
        else:
            cc = c.to_conductor(self.conductor) if c.n != self.conductor else c
            r = self.root
            num = 0
            for coef in reversed(cc.num):
                num = (num * r + coef) % self.p
        return num * pow(c.den, -1, self.p) % self.p

    def inv(self, a):
        return pow(a, -1, self.p)


class CycField:
    """The cyclotomic coefficient field, used directly."""

    p = 0

    @staticmethod
    def from_cyc(c):
        return c

    @staticmethod
    def inv(a):
        return a.inverse()


def _prime_factors(n):
    out = []
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            out.append(p)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        out.append(m)
    return out


# -- packed-monomial Buchberger over F_p ---------------------------------------
#
# Exponent vectors are packed into one int laid out as
#   [total degree | 127 - e_{n-1} | ... | 127 - e_0]
# in 8-bit fields, so native int comparison is exactly grevlex order,
# monomial multiplication and division are int additions, and divisibility
# is a guard-bit borrow test.  Only usable while every exponent stays < 120.

_FIELD_BITS = 8
_FIELD_MASK = (1 << (_FIELD_BITS - 1)) - 1  # 127


def _pack_spec(nvars):
    guard = 0
    offset = 0
    for k in range(nvars):
        guard |= 1 << (k * _FIELD_BITS + _FIELD_BITS - 1)
        offset |= _FIELD_MASK << (k * _FIELD_BITS)
    return guard, offset, nvars * _FIELD_BITS


def _pack_mono(exps, degshift):
    # variable i sits in bit field i, so the most significant exponent field
    # is the last variable: integer order == grevlex
    out = sum(exps) << degshift
    for i, e in enumerate(exps):
        out |= (_FIELD_MASK - e) << (i * _FIELD_BITS)
    return out


def _unpack_mono(packed, nvars, degshift):
    return tuple(
        _FIELD_MASK - ((packed >> (i * _FIELD_BITS)) & ((1 << _FIELD_BITS) - 1))
        for i in range(nvars)
    )


def _gf_buchberger_packed(polys, p, nvars, degree_cap, pair_budget, stop_at_unit):
    """Grevlex Buchberger over F_p on packed-int monomials.

    polys: list of dicts {exponent tuple: coeff}.  Returns (basis as list of
    {packed: coeff} dicts with lms, complete flag, pairs processed); monomials
    convert back through _unpack_mono.
    """
    import heapq

    guard, offset, degshift = _pack_spec(nvars)
    unit = _pack_mono((0,) * nvars, degshift)

    def pack_poly(terms):
        out = {}
        for e, c in terms.items():
            c %= p
            if c:
                out[_pack_mono(e, degshift)] = c
        return out

    basis = []      # list of (terms dict, lm, lm coeff inverse)
    lms = []

    def degree_of(m):
        return m >> degshift

    def divides(a, b):
        # a | b: stored fields are 127 - e, so a's fields must dominate b's;
        # the degree compare is just a cheap pre-filter
        return (((a | guard) - b) & guard) == guard if degree_of(a) <= degree_of(b) else False

    def head_reduce(terms):
        """Reduce leading terms until the lead is irreducible or terms die."""
        while terms:
            lm = max(terms)
            red = None
            for k in range(len(basis)):
                if divides(lms[k], lm):
                    red = k
                    break
            if red is None:
                return terms, lm
            gterms, glm, ginv = basis[red]
            factor = terms.pop(lm) * ginv % p
            delta = lm - glm
            for e, c in gterms.items():
                if e == glm:
                    continue
                key = e + delta
                v = (terms.get(key, 0) - factor * c) % p
                if v:
                    terms[key] = v
                else:
                    terms.pop(key, None)
        return terms, None

    def add_poly(terms, lm):
        inv = pow(terms[lm], -1, p)
        basis.append((terms, lm, inv))
        lms.append(lm)

    prepared = []
    for terms in polys:
        packed = pack_poly(terms)
        if packed:
            prepared.append(packed)
    prepared.sort(key=lambda t: max(t))
    heap = []
    pair_set = set()

    def lcm_pack(a, b):
        ea, eb = _unpack_mono(a, nvars, degshift), _unpack_mono(b, nvars, degshift)
        return _pack_mono(tuple(max(x, y) for x, y in zip(ea, eb)), degshift)

    def push_pairs(k):
        for t in range(k):
            l = lcm_pack(lms[k], lms[t])
            heapq.heappush(heap, (degree_of(l), k, t, l))
            pair_set.add((k, t))

    for terms in prepared:
        terms, lm = head_reduce(dict(terms))
        if not terms:
            continue
        if stop_at_unit and lm == unit:
            return [({unit: 1}, unit)], True, 0
        add_poly(terms, lm)
        push_pairs(len(basis) - 1)

    processed = 0
    incomplete = False
    while heap:
        if processed > pair_budget:
            incomplete = True
            break
        ldeg, i, j, l = heapq.heappop(heap)
        if (i, j) not in pair_set:
            continue
        pair_set.discard((i, j))
        if degree_cap is not None and ldeg > degree_cap:
            incomplete = True
            continue
        fi, flm, finv = basis[i]
        fj, glm, ginv = basis[j]
        if l == flm + glm - offset:     # coprime leading monomials
            continue
        # chain criterion with proper-divisibility guards (equal-lcm triples
        # must not eliminate each other circularly)
        skip = False
        for k in range(len(basis)):
            if k in (i, j):
                continue
            if divides(lms[k], l):
                if lcm_pack(lms[i], lms[k]) == l or lcm_pack(lms[j], lms[k]) == l:
                    continue
                a = (max(i, k), min(i, k))
                b = (max(j, k), min(j, k))
                if a not in pair_set and b not in pair_set:
                    skip = True
                    break
        if skip:
            continue
        processed += 1
        # s-polynomial on packed keys
        terms = {}
        di = l - flm
        for e, c in fi.items():
            terms[e + di] = c * finv % p
        dj = l - glm
        for e, c in fj.items():
            key = e + dj
            v = (terms.get(key, 0) - c * ginv) % p
            if v:
                terms[key] = v
            else:
                terms.pop(key, None)
        terms, lm = head_reduce(terms)
        if not terms:
            continue
        if stop_at_unit and lm == unit:
            return [({unit: 1}, unit)], True, processed
        add_poly(terms, lm)
        push_pairs(len(basis) - 1)
    return [(t, lm) for (t, lm, _inv) in basis], not incomplete, processed


def _gf_packed_ok(polys, nvars, degree_cap):
    if nvars < 1 or nvars * _FIELD_BITS > 1 << 12:
        return False
    worst = 0
    for terms in polys:
        for e in terms:
            worst = max(worst, sum(e))
    limit = max(worst * 2, (degree_cap or 0) + worst)
    return limit < _FIELD_MASK - 8


# -- generic sparse polynomials over a field ----------------------------------


class _Poly:
    __slots__ = ("terms", "lm")

    def __init__(self, terms, field):
        if field.p:
            terms = {e: c % field.p for e, c in terms.items() if c % field.p}
        else:
            terms = {e: c for e, c in terms.items() if not c.is_zero()}
        self.terms = terms
        self.lm = max(terms, key=grevlex_key) if terms else None

    def is_zero(self):
        return not self.terms


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _mono_div(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _mono_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _reduce_poly(f: _Poly, basis, field) -> _Poly:
    """Full normal form of f with respect to the basis."""
    p = field.p
    work = dict(f.terms)
    out = {}
    while work:
        lm = max(work, key=grevlex_key)
        lc = work.pop(lm)
        reducer = None
        for g in basis:
            if _divides(g.lm, lm):
                reducer = g
                break
        if reducer is None:
            out[lm] = lc
            continue
        shift = _mono_div(lm, reducer.lm)
        factor = lc * field.inv(reducer.terms[reducer.lm])
        if p:
            factor %= p
        for e, c in reducer.terms.items():
            if e == reducer.lm:
                continue
            key = _mono_mul(e, shift)
            cur = work.get(key, 0 if p else CycNum.zero())
            val = cur - factor * c
            if p:
                val %= p
                if val:
                    work[key] = val
                elif key in work:
                    del work[key]
            else:
                if val.is_zero():
                    work.pop(key, None)
                else:
                    work[key] = val
    return _Poly(out, field)


def _spoly(f: _Poly, g: _Poly, field) -> _Poly:
    l = _mono_lcm(f.lm, g.lm)
    p = field.p
    cf = field.inv(f.terms[f.lm])
    cg = field.inv(g.terms[g.lm])
    sf, sg = _mono_div(l, f.lm), _mono_div(l, g.lm)
    terms = {}
    for e, c in f.terms.items():
        terms[_mono_mul(e, sf)] = c * cf
    for e, c in g.terms.items():
        key = _mono_mul(e, sg)
        cur = terms.get(key, 0 if p else CycNum.zero())
        terms[key] = cur - c * cg
    return _Poly(terms, field)


class GroebnerResult:
    def __init__(self, basis, complete, pairs_processed, degree_cap):
        self.basis = basis
        self.complete = complete
        self.pairs_processed = pairs_processed
        self.degree_cap = degree_cap

    def leading_monomials(self):
        return [g.lm for g in self.basis]


def buchberger(polys, field, degree_cap=None, pair_budget=200000, stop_at_unit=False):
    """Reduced Groebner basis under grevlex, sugar selection, both criteria.

    Exceeding the pair budget or needing a pair above the degree cap yields
    complete=False (never a wrong basis).  With stop_at_unit the run aborts
    as soon as a nonzero constant enters the basis.
    """
    import heapq

    basis = [f for f in polys if not f.is_zero()]
    if not basis:
        return GroebnerResult([], True, 0, degree_cap)
    nvars = len(basis[0].lm)
    if field.p and _gf_packed_ok([f.terms for f in basis], nvars, degree_cap):
        guard, offset, degshift = _pack_spec(nvars)
        packed, complete, processed = _gf_buchberger_packed(
            [f.terms for f in basis], field.p, nvars, degree_cap, pair_budget, stop_at_unit)
        raw = [_Poly({_unpack_mono(e, nvars, degshift): c for e, c in terms.items()}, field)
               for terms, _lm in packed]
        if stop_at_unit and len(raw) == 1 and raw[0].lm == tuple([0] * nvars):
            return GroebnerResult(raw, complete, processed, degree_cap)
        return GroebnerResult(_interreduce(raw, field), complete, processed, degree_cap)
    unit = tuple([0] * nvars)
    for g in basis:
        if stop_at_unit and sum(g.lm) == 0:
            return GroebnerResult([_Poly({unit: g.terms[g.lm]}, field)], True, 0, degree_cap)

    heap = []
    pair_set = set()

    def push(i, j):
        l = _mono_lcm(basis[i].lm, basis[j].lm)
        heapq.heappush(heap, (sum(l), i, j))
        pair_set.add((i, j))

    for i in range(len(basis)):
        for j in range(i):
            push(i, j)
    processed = 0
    incomplete = False
    while heap:
        if processed > pair_budget:
            incomplete = True
            break
        _, i, j = heapq.heappop(heap)
        if (i, j) not in pair_set:
            continue
        pair_set.discard((i, j))
        f, g = basis[i], basis[j]
        l = _mono_lcm(f.lm, g.lm)
        if degree_cap is not None and sum(l) > degree_cap:
            incomplete = True
            continue
        # first criterion: coprime leading monomials
        if l == _mono_mul(f.lm, g.lm):
            continue
        # chain criterion with proper-divisibility guards
        skip = False
        for k in range(len(basis)):
            if k in (i, j):
                continue
            if _divides(basis[k].lm, l):
                if _mono_lcm(basis[i].lm, basis[k].lm) == l or _mono_lcm(basis[j].lm, basis[k].lm) == l:
                    continue
                a = (max(i, k), min(i, k))
                b = (max(j, k), min(j, k))
                if a not in pair_set and b not in pair_set:
                    skip = True
                    break
        if skip:
            continue
        processed += 1
        s = _reduce_poly(_spoly(f, g, field), basis, field)
        if s.is_zero():
            continue
        if stop_at_unit and sum(s.lm) == 0:
            return GroebnerResult([_Poly({unit: s.terms[s.lm]}, field)], True, processed, degree_cap)
        k = len(basis)
        basis.append(s)
        for t in range(k):
            push(k, t)
    reduced = _interreduce(basis, field)
    return GroebnerResult(reduced, not incomplete, processed, degree_cap)


def _interreduce(basis, field):
    # minimalize: proper divisors of a leading monomial have lower degree,
    # so an ascending sweep keeps exactly one element per minimal lm
    ordered = sorted((g for g in basis if not g.is_zero()), key=lambda g: grevlex_key(g.lm))
    keep = []
    for g in ordered:
        if not any(_divides(h.lm, g.lm) for h in keep):
            keep.append(g)
    out = []
    for i, g in enumerate(keep):
        others = keep[:i] + keep[i + 1:]
        r = _reduce_poly(g, others, field) if others else g
        if r.is_zero():
            continue
        lc_inv = field.inv(r.terms[r.lm])
        if field.p:
            r = _Poly({e: c * lc_inv % field.p for e, c in r.terms.items()}, field)
        else:
            r = _Poly({e: c * lc_inv for e, c in r.terms.items()}, field)
        out.append(r)
    out.sort(key=lambda g: grevlex_key(g.lm))
    return out


def form_to_poly(form: Form, field) -> _Poly:
    return _Poly({e: field.from_cyc(c) for e, c in form.terms.items()}, field)


def groebner_basis(forms, field=None, degree_cap=None, pair_budget=200000):
    """Reduced grevlex Groebner basis of a list of Forms (or _Polys)."""
    field = field or CycField()
    polys = [form_to_poly(f, field) if isinstance(f, Form) else f for f in forms]
    return buchberger(polys, field, degree_cap=degree_cap, pair_budget=pair_budget)


# -- smoothness ----------------------------------------------------------------


class SmoothnessCertificate:
    def __init__(self, verdict, method, witness=None, primes=None, detail=None):
        self.verdict = verdict      # smooth | singular | undecided
        self.method = method        # groebner-char0 | groebner-modp | split-variables
        self.witness = witness      # tuple of CycNum for singular, when found
        self.primes = primes or []
        self.detail = detail or {}

    def to_json(self) -> str:
        payload = {
            "verdict": self.verdict,
            "method": self.method,
            "witness": [scalar_to_str(w) for w in self.witness] if self.witness else None,
            "primes": self.primes,
            "detail": self.detail,
        }
        return json.dumps(payload)

    def __repr__(self):
        return "SmoothnessCertificate(%s via %s)" % (self.verdict, self.method)


def form_conductor(form: Form) -> int:
    n = 1
    for c in form.terms.values():
        n = lcm(n, c.n)
    return n


def good_primes(conductor: int, count: int, seed: int = 0, lo: int = 1 << 20, hi: int = 1 << 21):
    """Random primes p = 1 (mod conductor) in [lo, hi), deterministic per seed."""
    rng = random.Random(seed)
    found = []
    seen = set()
    attempts = 0
    while len(found) < count:
        attempts += 1
        if attempts > 200000:
            raise SmoothnessError("cannot find enough split primes for conductor %d" % conductor)
        k = rng.randrange(lo // conductor, hi // conductor)
        p = k * conductor + 1
        if p < lo or p >= hi or p in seen:
            continue
        seen.add(p)
        if _is_prime(p):
            found.append(p)
    return found


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def variable_components(form: Form):
    """Connected components of variables linked by shared monomials."""
    r = form.nvars
    parent = list(range(r))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for e in form.terms:
        support = [i for i, x in enumerate(e) if x]
        for a, b in zip(support, support[1:]):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
    comps = {}
    for i in range(r):
        comps.setdefault(find(i), []).append(i)
    return sorted(comps.values())


def restrict_to_variables(form: Form, variables) -> Form:
    """Subform of the terms supported exactly on the given variables."""
    variables = list(variables)
    idx = {v: i for i, v in enumerate(variables)}
    terms = {}
    for e, c in form.terms.items():
        if all((x == 0) or (i in idx) for i, x in enumerate(e)):
            terms[tuple(e[v] for v in variables)] = c
    return Form(len(variables), terms, form.degree)


def _coordinate_witness(form: Form):
    """A standard basis vector killing every partial, if one exists."""
    ps = partials(form)
    for i in range(form.nvars):
        point = [CycNum.zero()] * form.nvars
        point[i] = CycNum.one()
        ok = True
        for p in ps:
            e_pure = tuple(form.degree - 1 if j == i else 0 for j in range(form.nvars))
            val = p.terms.get(e_pure)
            if val is not None and not val.is_zero():
                ok = False
                break
        if ok:
            return tuple(point)
    return None


def _char0_verdict(form: Form, degree_cap, pair_budget):
    gb = groebner_basis(partials(form), CycField(), degree_cap=degree_cap, pair_budget=pair_budget)
    if not gb.complete:
        return None, gb
    lms = gb.leading_monomials()
    missing = []
    for i in range(form.nvars):
        if not any(all(x == 0 for j, x in enumerate(lm) if j != i) and lm[i] > 0 for lm in lms):
            missing.append(i + 1)
    return missing, gb


def _modp_only_origin(form: Form, p: int, degree_cap, pair_budget):
    """True/False/None: is the zero locus of the partials mod p just the origin?"""
    field = GF(p, form_conductor(form))
    polys = [form_to_poly(f, field) for f in partials(form)]
    r = form.nvars
    for chart in range(r - 1, -1, -1):
        chart_polys = []
        any_nonzero = False
        for poly in polys:
            terms = {}
            for e, c in poly.terms.items():
                if any(e[j] for j in range(chart + 1, r)):
                    continue
                key = e[:chart]
                terms[key] = (terms.get(key, 0) + c) % p
            q = _Poly(terms, field)
            if not q.is_zero():
                any_nonzero = True
                chart_polys.append(q)
        if not any_nonzero:
            return False  # entire chart satisfies the system
        if chart == 0:
            # variables exhausted: constants; system infeasible iff some constant != 0
            continue
        gb = buchberger(chart_polys, field, degree_cap=degree_cap,
                        pair_budget=pair_budget, stop_at_unit=True)
        if not gb.complete:
            return None
        if not (len(gb.basis) == 1 and sum(gb.basis[0].lm) == 0):
            return False
    return True


def is_smooth(form: Form, strategy: str = "auto", primes=None, seed: int = 0,
              degree_cap=None, pair_budget=200000) -> SmoothnessCertificate:
    """Certify the smooth/singular verdict for a homogeneous form.

    strategy is one of auto, split, modp, char0.  The default pipeline is
    split-variables, then three mod-p certificates, then the characteristic-0
    Groebner fallback.  A singular reduction mod p is never reported as
    singular; it falls through to characteristic 0.
    """
    if form.degree < 2:
        raise SmoothnessError("smoothness needs degree >= 2")
    if degree_cap is None:
        degree_cap = 4 * form.degree

    if strategy in ("auto", "split"):
        comps = variable_components(form)
        used = {i for e in form.terms for i, x in enumerate(e) if x}
        for i in range(form.nvars):
            if i not in used:
                point = [CycNum.zero()] * form.nvars
                point[i] = CycNum.one()
                return SmoothnessCertificate("singular", "split-variables", tuple(point),
                                             detail={"reason": "unused variable x%d" % (i + 1)})
        if len(comps) > 1:
            for comp in comps:
                sub = restrict_to_variables(form, comp)
                cert = is_smooth(sub, "auto", primes=primes, seed=seed,
                                 degree_cap=degree_cap, pair_budget=pair_budget)
                if cert.verdict == "singular":
                    witness = [CycNum.zero()] * form.nvars
                    if cert.witness:
                        for v, w in zip(comp, cert.witness):
                            witness[v] = w
                        return SmoothnessCertificate("singular", "split-variables", tuple(witness),
                                                     detail={"component": [v + 1 for v in comp]})
                    return SmoothnessCertificate("singular", "split-variables", None,
                                                 detail={"component": [v + 1 for v in comp],
                                                         "inner": cert.detail})
                if cert.verdict == "undecided":
                    return SmoothnessCertificate("undecided", "split-variables",
                                                 detail={"component": [v + 1 for v in comp]})
            return SmoothnessCertificate("smooth", "split-variables",
                                         detail={"components": [[v + 1 for v in c] for c in comps]})
        if strategy == "split":
            strategy = "auto"  # single component: fall through to the default route

    if form.nvars == 1:
        # x^d with nonzero coefficient: the only critical point is the origin
        return SmoothnessCertificate("smooth", "groebner-char0",
                                     detail={"reason": "single variable pure power"})

    witness = _coordinate_witness(form)
    if witness is not None:
        return SmoothnessCertificate("singular", "groebner-char0", witness,
                                     detail={"reason": "coordinate point kills all partials"})

    if strategy in ("auto", "modp"):
        conductor = form_conductor(form)
        ps = list(primes) if primes else good_primes(conductor, 3, seed=seed)
        verdicts = []
        for p in ps:
            v = _modp_only_origin(form, p, degree_cap, pair_budget)
            verdicts.append((p, v))
        if all(v is True for _, v in verdicts):
            return SmoothnessCertificate("smooth", "groebner-modp", primes=[p for p, _ in verdicts],
                                         detail={"conductor": conductor})
        if strategy == "modp":
            return SmoothnessCertificate("undecided", "groebner-modp", primes=[p for p, _ in verdicts],
                                         detail={"per_prime": {str(p): v for p, v in verdicts}})
        # fall through: possible bad reduction

    missing, gb = _char0_verdict(form, degree_cap, pair_budget)
    if missing is None:
        return SmoothnessCertificate("undecided", "groebner-char0",
                                     detail={"reason": "budget exhausted",
                                             "pairs": gb.pairs_processed})
    if not missing:
        return SmoothnessCertificate("smooth", "groebner-char0",
                                     detail={"basis_size": len(gb.basis)})
    return SmoothnessCertificate("singular", "groebner-char0", None,
                                 detail={"reason": "leading-term ideal misses pure powers",
                                         "variables": missing})


# -- the binary resultant oracle ----------------------------------------------


def sylvester_resultant(f: Form, g: Form) -> CycNum:
    """Resultant of two binary forms via the Sylvester determinant."""
    if f.nvars != 2 or g.nvars != 2:
        raise SmoothnessError("resultant oracle is for binary forms")
    m, n = f.degree, g.degree
    fc = [f.terms.get((m - i, i), CycNum.zero()) for i in range(m + 1)]
    gc = [g.terms.get((n - i, i), CycNum.zero()) for i in range(n + 1)]
    size = m + n
    rows = []
    for i in range(n):
        rows.append([CycNum.zero()] * i + fc + [CycNum.zero()] * (size - m - 1 - i))
    for i in range(m):
        rows.append([CycNum.zero()] * i + gc + [CycNum.zero()] * (size - n - 1 - i))
    return ExactMatrix(rows).determinant()


def smooth_by_resultant(form: Form) -> bool:
    """Independent r = 2 oracle: smooth iff the partials have nonzero resultant."""
    if form.nvars != 2:
        raise SmoothnessError("resultant oracle is for binary forms")
    p1, p2 = partials(form)
    if p1.is_zero() or p2.is_zero():
        return False
    return not sylvester_resultant(p1, p2).is_zero()


# -- the monomial-shape witness of restricted singularities --------------------


def smtosm_witness(form: Form, k: int, a: int):
    """Term of shape x1^d1 .. xk^dk * x_(k+j) forced by a singular restriction.

    Preconditions: the form (in k + a variables) is smooth while its
    restriction to the first k variables is not.  Returns the witness term,
    or raises if the guarantee fails (which would contradict smoothness).
    """
    if form.nvars != k + a or k < 2 or a < 1:
        raise SmoothnessError("need nvars = k + a with k >= 2, a > 0")
    restriction = restrict_to_variables(form, list(range(k)))
    if not restriction.is_zero():
        cert = is_smooth(restriction)
        if cert.verdict == "smooth":
            raise SmoothnessError("restriction to the first %d variables is smooth" % k)
    for e in sorted(form.terms, key=grevlex_key):
        tail = e[k:]
        if sum(tail) == 1:
            return e
    raise SmoothnessError("no witness monomial: smoothness hypothesis violated")
