"""Decomposition certificates and the two associated exact sequences.

A certificate asserts a block structure C^r = (+) V_i, V_i = (+)_j W_ij on a
matrix group.  Verification checks that every group element permutes the
blocks of each V_i, extracts the permutation images K_i, the principal
subgroup P (trivial block permutation), the block-scalar kernel N and the
projective constituent orders |H_ij|, and confirms the order bookkeeping
|G| = |P| * |psi(G)| and |P| = |N| * |phi(P)| exactly.

Verification tiers:

* full-closure: the group is materialized; everything is counted by
  streaming over its elements.
* compositional: only per-block closures are materialized.  psi(G) comes
  from generator block patterns, P from Schreier generators, phi(P) from an
  exact closure of projective class tuples over per-block Cayley tables, and
  N by comparing the supplied block-scalar generators against the full
  Smith-normal-form stabilizer lattice.  This proves orders far beyond the
  element-enumeration cap.
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import factorial

from .cyclotomic import scalar_to_str
from .diaglattice import block_scalar_group
from .forms import ExactMatrix, Form, act
from .matgroups import DEFAULT_CAP, GroupError, MatGroup, closure, matrices_conductor
from .sequences import SubdegreeSequence, canonical_bound
from .sequences import ratioprod_check  # noqa: F401  (structure-level check, ratio arithmetic)


class CertificateError(ValueError):
    pass


class DecompositionCertificate:
    """Claimed block structure: sizes grouped by irreducible summand."""

    def __init__(self, grouped_sizes, basis_change: ExactMatrix | None = None):
        self.grouped_sizes = [list(map(int, grp)) for grp in grouped_sizes]
        if not self.grouped_sizes or any(not g for g in self.grouped_sizes):
            raise CertificateError("empty grouping")
        for grp in self.grouped_sizes:
            if len(set(grp)) != 1:
                raise CertificateError("blocks of one summand must share a dimension")
        self.basis_change = basis_change
        self.dim = sum(sum(g) for g in self.grouped_sizes)

    @property
    def flat_sizes(self):
        return [s for grp in self.grouped_sizes for s in grp]

    @property
    def grouping(self):
        return [len(grp) for grp in self.grouped_sizes]

    def block_ranges(self):
        """[(i, j, start, stop)] in certificate order."""
        out = []
        pos = 0
        for i, grp in enumerate(self.grouped_sizes):
            for j, size in enumerate(grp):
                out.append((i, j, pos, pos + size))
                pos += size
        return out

    def to_json(self) -> str:
        payload = {
            "basis_change": [[scalar_to_str(c) for c in row] for row in self.basis_change.entries]
            if self.basis_change else None,
            "blocks": [{"i": i + 1, "j": j + 1, "size": stop - start}
                       for i, j, start, stop in self.block_ranges()],
            "grouping": self.grouping,
        }
        return json.dumps(payload)

    @classmethod
    def from_json(cls, text: str) -> DecompositionCertificate:
        payload = json.loads(text)
        grouped = {}
        for blk in payload["blocks"]:
            grouped.setdefault(blk["i"], []).append((blk["j"], blk["size"]))
        grouped_sizes = []
        for i in sorted(grouped):
            grouped_sizes.append([size for _, size in sorted(grouped[i])])
        if [len(g) for g in grouped_sizes] != list(payload["grouping"]):
            raise CertificateError("grouping does not match the block list")
        basis = payload.get("basis_change")
        bc = ExactMatrix(basis) if basis else None
        return cls(grouped_sizes, bc)


class StructureReport:
    def __init__(self, **kw):
        self.group_order = kw["group_order"]
        self.psi_image_order = kw["psi_image_order"]
        self.k_orders = kw["k_orders"]
        self.principal_order = kw["principal_order"]
        self.kernel_order = kw["kernel_order"]
        self.phi_image_order = kw["phi_image_order"]
        self.constituent_orders = kw["constituent_orders"]   # {(i,j): order}, 1-based
        self.subdegrees = kw["subdegrees"]
        self.intrinsic_multiplicities = kw["intrinsic_multiplicities"]
        self.tier = kw["tier"]
        self.degree = kw.get("degree")
        self.canonical_bound = kw.get("canonical_bound")
        self.fermat_ratio = kw.get("fermat_ratio")
        self.derived = kw.get("derived", {})

    def identities_hold(self) -> bool:
        return (self.group_order == self.principal_order * self.psi_image_order
                and self.principal_order == self.kernel_order * self.phi_image_order)

    def to_json(self) -> str:
        payload = {
            "tier": self.tier,
            "group_order": self.group_order,
            "psi_image_order": self.psi_image_order,
            "k_orders": self.k_orders,
            "principal_order": self.principal_order,
            "kernel_order": self.kernel_order,
            "phi_image_order": self.phi_image_order,
            "constituents": {"%d,%d" % key: val for key, val in sorted(self.constituent_orders.items())},
            "subdegree_sequence": str(self.subdegrees),
            "intrinsic_multiplicities": list(self.intrinsic_multiplicities),
            "identities_hold": self.identities_hold(),
        }
        if self.canonical_bound is not None:
            payload["canonical_bound"] = self.canonical_bound
        if self.fermat_ratio is not None:
            payload["fermat_ratio"] = "%d/%d" % (self.fermat_ratio.numerator, self.fermat_ratio.denominator)
        return json.dumps(payload)


# -- block combinatorics --------------------------------------------------------


def _block_pattern(matrix: ExactMatrix, ranges):
    """Map each column block to the unique row block it lands in, or None."""
    mapping = {}
    for (i, j, c0, c1) in ranges:
        target = None
        for (i2, j2, r0, r1) in ranges:
            nonzero = any(not matrix.entries[r][c].is_zero()
                          for r in range(r0, r1) for c in range(c0, c1))
            if nonzero:
                if target is not None:
                    return None
                target = (i2, j2, r0, r1)
        if target is None:
            return None
        i2, j2, r0, r1 = target
        if i2 != i or (r1 - r0) != (c1 - c0):
            return None
        mapping[(i, j)] = j2
    return mapping


def _psi_tuple(mapping, grouping):
    """Per-summand permutation tuples (j -> image block) from a mapping."""
    out = []
    for i, k in enumerate(grouping):
        perm = tuple(mapping[(i, j)] for j in range(k))
        if sorted(perm) != list(range(k)):
            return None
        out.append(perm)
    return tuple(out)


def _psi_compose(a, b):
    """psi(A @ B) from psi(A), psi(B): block j goes through B first, then A."""
    return tuple(tuple(ta[tb[j]] for j in range(len(ta))) for ta, tb in zip(a, b))


def _restrict(matrix: ExactMatrix, r0, r1, c0, c1) -> ExactMatrix:
    return ExactMatrix([[matrix.entries[r][c] for c in range(c0, c1)] for r in range(r0, r1)])


def _projective_key(matrix: ExactMatrix, conductor: int) -> bytes:
    """Class key in PGL: scale by the first nonzero entry, fixed conductor."""
    lead = None
    for row in matrix.entries:
        for c in row:
            if not c.is_zero():
                lead = c
                break
        if lead is not None:
            break
    if lead is None:
        raise CertificateError("zero block in a group element")
    inv = lead.inverse()
    parts = []
    for row in matrix.entries:
        for c in row:
            v = c * inv
            v = v.to_conductor(conductor) if v.n != conductor else v
            parts.append(b"%d:%r" % (v.den, v.num))
    return b"|".join(parts)


def _matrix_key(matrix: ExactMatrix, conductor: int) -> bytes:
    parts = []
    for row in matrix.entries:
        for c in row:
            v = c.to_conductor(conductor) if c.n != conductor else c
            parts.append(b"%d:%r" % (v.den, v.num))
    return b"|".join(parts)


def irreducible_span(matrices, size: int) -> bool:
    """Burnside criterion: the restrictions span the full matrix space."""
    if size == 1:
        return any(not m.entries[0][0].is_zero() for m in matrices)
    target = size * size
    basis = []
    for m in matrices:
        vec = [m.entries[i][j] for i in range(size) for j in range(size)]
        for pivot, bvec in basis:
            c = vec[pivot]
            if not c.is_zero():
                vec = [x - c * y for x, y in zip(vec, bvec)]
        piv = next((k for k, x in enumerate(vec) if not x.is_zero()), None)
        if piv is None:
            continue
        inv = vec[piv].inverse()
        vec = [x * inv for x in vec]
        basis.append((piv, vec))
        if len(basis) == target:
            return True
    return len(basis) == target


def _is_scalar_matrix(m: ExactMatrix) -> bool:
    lead = m.entries[0][0]
    for i in range(m.dim):
        for j in range(m.dim):
            c = m.entries[i][j]
            if i == j:
                if c != lead:
                    return False
            elif not c.is_zero():
                return False
    return True


# -- closed-tier verification ------------------------------------------------------


def verify_certificate(group: MatGroup, cert: DecompositionCertificate,
                       form: Form | None = None) -> StructureReport:
    """Verify a certificate against a closed group by streaming its elements."""
    if not group.closed:
        raise GroupError("closed-tier verification needs a closed group")
    if cert.dim != group.dim:
        raise CertificateError("certificate dimension mismatch")
    ranges = cert.block_ranges()
    grouping = cert.grouping
    conductor = group.conductor

    T = cert.basis_change
    Tinv = T.inverse() if T else None

    psi_values = set()
    principal_count = 0
    kernel_count = 0
    phi_tuples = set()
    block_keys = [set() for _ in ranges]
    span_samples = [[] for _ in ranges]
    identity_tuple = tuple(tuple(range(k)) for k in grouping)

    for g in group.elements():
        if T:
            g = Tinv * g * T
        mapping = _block_pattern(g, ranges)
        tup = _psi_tuple(mapping, grouping) if mapping else None
        if tup is None:
            raise CertificateError("an element does not permute the certificate blocks")
        psi_values.add(tup)
        restrictions = {}
        for bi, (i, j, r0, r1) in enumerate(ranges):
            if tup[i][j] == j:
                sub = _restrict(g, r0, r1, r0, r1)
                restrictions[bi] = sub
                block_keys[bi].add(_projective_key(sub, conductor))
                size = r1 - r0
                if len(span_samples[bi]) < 4 * size * size + 8:
                    span_samples[bi].append(sub)
        if tup == identity_tuple:
            principal_count += 1
            phi_tuples.add(tuple(_projective_key(restrictions[bi], conductor)
                                 for bi in range(len(ranges))))
            if all(_is_scalar_matrix(restrictions[bi]) for bi in range(len(ranges))):
                kernel_count += 1

    k_orders = _check_transitive(psi_values, grouping)
    for bi, (i, j, r0, r1) in enumerate(ranges):
        if not irreducible_span(span_samples[bi], r1 - r0):
            raise CertificateError("stabilizer restriction to block (%d,%d) is reducible" % (i + 1, j + 1))
    constituent_orders = {(i + 1, j + 1): len(block_keys[bi])
                          for bi, (i, j, _r0, _r1) in enumerate(ranges)}

    return _finish_report(
        tier="full-closure",
        group_order=group.order,
        psi_order=len(psi_values),
        k_orders=k_orders,
        principal_order=principal_count,
        kernel_order=kernel_count,
        phi_order=len(phi_tuples),
        constituent_orders=constituent_orders,
        cert=cert,
        form=form,
    )


def _check_transitive(psi_values, grouping):
    k_orders = []
    for i, k in enumerate(grouping):
        proj = {tup[i] for tup in psi_values}
        k_orders.append(len(proj))
        orbit = {0}
        frontier = [0]
        while frontier:
            a = frontier.pop()
            for perm in proj:
                if perm[a] not in orbit:
                    orbit.add(perm[a])
                    frontier.append(perm[a])
        if len(orbit) != k:
            raise CertificateError("block permutations of summand %d are not transitive" % (i + 1))
    return k_orders


def _finish_report(tier, group_order, psi_order, k_orders, principal_order,
                   kernel_order, phi_order, constituent_orders, cert, form,
                   derived=None):
    subdeg = SubdegreeSequence(cert.flat_sizes)
    intrinsic = cert.grouping
    bound = None
    ratio = None
    degree = None
    if form is not None:
        degree = form.degree
        groups = [(stop - start, constituent_orders[(i + 1, j + 1)])
                  for (i, j, start, stop) in cert.block_ranges()]
        bound = canonical_bound(groups, intrinsic, degree)
        ratio = Fraction(group_order, degree ** form.nvars * factorial(form.nvars))
        if group_order > bound:
            raise CertificateError("group order %d exceeds its canonical bound %d" % (group_order, bound))
    report = StructureReport(
        group_order=group_order,
        psi_image_order=psi_order,
        k_orders=k_orders,
        principal_order=principal_order,
        kernel_order=kernel_order,
        phi_image_order=phi_order,
        constituent_orders=constituent_orders,
        subdegrees=subdeg,
        intrinsic_multiplicities=intrinsic,
        tier=tier,
        degree=degree,
        canonical_bound=bound,
        fermat_ratio=ratio,
        derived=derived or {},
    )
    if not report.identities_hold():
        raise CertificateError(
            "exact-sequence bookkeeping failed: |G|=%d, |P|=%d, |psi|=%d, |N|=%d, |phi|=%d"
            % (group_order, principal_order, psi_order, kernel_order, phi_order))
    return report


# -- compositional verification -----------------------------------------------------


def verify_compositional(generators, cert: DecompositionCertificate, form: Form,
                         block_cap: int = DEFAULT_CAP) -> StructureReport:
    """Prove the group order from generators without materializing the group.

    The generator list must contain block-scalar generators spanning the full
    kernel lattice (checked against the Smith-normal-form stabilizer of the
    form); everything else is derived: psi(G) by permutation closure, P by
    Schreier generators, phi(P) by closing projective class tuples over
    per-block Cayley tables.
    """
    ranges = cert.block_ranges()
    grouping = cert.grouping
    gens = list(generators)
    if not gens:
        raise CertificateError("need generators")
    conductor = matrices_conductor(gens)
    for g in gens:
        if act(form, g) != form:
            raise CertificateError("a supplied generator does not preserve the form")

    gen_tuples = []
    for g in gens:
        mapping = _block_pattern(g, ranges)
        tup = _psi_tuple(mapping, grouping) if mapping else None
        if tup is None:
            raise CertificateError("a generator does not permute the certificate blocks")
        gen_tuples.append(tup)

    identity = tuple(tuple(range(k)) for k in grouping)
    transversal = {identity: ()}
    frontier = [identity]
    while frontier:
        cur = frontier.pop()
        for gi, tup in enumerate(gen_tuples):
            nxt = _psi_compose(cur, tup)
            if nxt not in transversal:
                transversal[nxt] = transversal[cur] + (gi,)
                frontier.append(nxt)
    psi_order = len(transversal)
    k_orders = _check_transitive(set(transversal), grouping)

    def word_matrix(word):
        m = ExactMatrix.identity(cert.dim)
        for gi in word:
            m = m * gens[gi]
        return m

    def psi_of(matrix):
        mapping = _block_pattern(matrix, ranges)
        tup = _psi_tuple(mapping, grouping) if mapping else None
        if tup is None:
            raise CertificateError("product fell off the block lattice")
        return tup

    rep_mats = {tup: word_matrix(word) for tup, word in transversal.items()}
    rep_invs = {tup: m.inverse() for tup, m in rep_mats.items()}

    def preimage_generators(member):
        """Schreier generators of the psi-preimage of the subgroup {member}."""
        sub = [tup for tup in transversal if member(tup)]
        reps = {}
        coset_of = {}
        for tup in transversal:
            marker = frozenset(_psi_compose(s, tup) for s in sub)
            if marker not in reps:
                reps[marker] = tup
            coset_of[tup] = reps[marker]
        out = []
        seen = set()
        for rep_tup in set(coset_of.values()):
            rep = rep_mats[rep_tup]
            for g in gens:
                u = rep * g
                target = coset_of[psi_of(u)]
                s = u * rep_invs[target]
                if not member(psi_of(s)):
                    raise CertificateError("Schreier generator escaped the subgroup")
                key = _matrix_key(s, conductor)
                if key not in seen:
                    seen.add(key)
                    out.append(s)
        return out

    schreier = preimage_generators(lambda tup: tup == identity)

    # kernel lattice vs supplied block-scalar generators
    lattice = block_scalar_group(form, cert.flat_sizes)
    if lattice.order is None:
        raise CertificateError("block-scalar stabilizer is infinite")
    supplied_scalars = []
    for g in gens:
        mapping = _block_pattern(g, ranges)
        tup = _psi_tuple(mapping, grouping) if mapping else None
        if tup != identity:
            continue
        if all(_is_scalar_matrix(_restrict(g, r0, r1, r0, r1)) for (_i, _j, r0, r1) in ranges):
            supplied_scalars.append(g)
    if not supplied_scalars:
        raise CertificateError("no block-scalar generators supplied for the kernel check")
    sub = closure(supplied_scalars, cap=max(4 * lattice.order, 1024))
    if not sub.closed or sub.order != lattice.order:
        raise CertificateError(
            "supplied block-scalar generators span order %s, lattice says %d"
            % (sub.order if sub.closed else ">cap", lattice.order))
    kernel_order = lattice.order

    # per-block closures of the principal restrictions
    block_groups = []
    for (i, j, r0, r1) in ranges:
        restrictions = [_restrict(s, r0, r1, r0, r1) for s in schreier]
        grp = closure(restrictions, cap=block_cap)
        if not grp.closed:
            raise CertificateError("per-block closure exceeded its cap")
        block_groups.append(grp)

    # projective classes and Cayley tables per block
    class_tables = []
    class_index = []
    for grp in block_groups:
        reps = []
        index = {}
        for m in grp.elements():
            key = _projective_key(m, conductor)
            if key not in index:
                index[key] = len(reps)
                reps.append(m)
        table = [[index[_projective_key(ma * mb, conductor)] for mb in reps] for ma in reps]
        class_tables.append(table)
        class_index.append(index)

    gen_class_tuples = set()
    for s in schreier:
        tup = []
        for bi, (i, j, r0, r1) in enumerate(ranges):
            key = _projective_key(_restrict(s, r0, r1, r0, r1), conductor)
            if key not in class_index[bi]:
                raise CertificateError("restriction fell outside its per-block closure")
            tup.append(class_index[bi][key])
        gen_class_tuples.add(tuple(tup))
    nblocks = len(ranges)
    ident_tuple = tuple(class_index[bi][_projective_key(ExactMatrix.identity(stop - start), conductor)]
                        for bi, (_i, _j, start, stop) in enumerate(ranges))
    phi_image = {ident_tuple}
    frontier = [ident_tuple]
    while frontier:
        cur = frontier.pop()
        for gt in gen_class_tuples:
            nxt = tuple(class_tables[bi][cur[bi]][gt[bi]] for bi in range(nblocks))
            if nxt not in phi_image:
                phi_image.add(nxt)
                frontier.append(nxt)
    phi_order = len(phi_image)

    principal_order = kernel_order * phi_order
    group_order = principal_order * psi_order

    # constituent orders |H_ij| from block-stabilizer preimages
    constituent_orders = {}
    for bi, (i, j, r0, r1) in enumerate(ranges):
        stab_gens = preimage_generators(lambda tup, i=i, j=j: tup[i][j] == j)
        size = r1 - r0
        restrictions = [_restrict(s, r0, r1, r0, r1) for s in stab_gens]
        sgrp = closure(restrictions, cap=block_cap)
        if not sgrp.closed:
            raise CertificateError("stabilizer block closure exceeded its cap")
        keys = set()
        sample = []
        for m in sgrp.elements():
            keys.add(_projective_key(m, conductor))
            if len(sample) < 4 * size * size + 8:
                sample.append(m)
        if not irreducible_span(sample, size):
            raise CertificateError("stabilizer restriction to block (%d,%d) is reducible" % (i + 1, j + 1))
        constituent_orders[(i + 1, j + 1)] = len(keys)

    return _finish_report(
        tier="compositional",
        group_order=group_order,
        psi_order=psi_order,
        k_orders=k_orders,
        principal_order=principal_order,
        kernel_order=kernel_order,
        phi_order=phi_order,
        constituent_orders=constituent_orders,
        cert=cert,
        form=form,
        derived={"schreier_generators": len(schreier)},
    )


# -- refined bounds ---------------------------------------------------------------


def refined_bound(report: StructureReport, d: int, lemma: str, *,
                  pattern_established: bool = False, summand: int | None = None,
                  normal_index: int | None = None, pattern_count: int | None = None) -> int:
    """Upper bounds for |G| once a special monomial pattern is established.

    lemma is one of 'type2', 'classify', 'd1d2', 'typeII'.  The caller must
    have located the corresponding monomial with forms.has_monomial_pattern
    on the actual form and pass pattern_established=True.
    """
    if not pattern_established:
        raise CertificateError("establish the monomial pattern on the form first")
    B = report.canonical_bound
    if B is None:
        raise CertificateError("report carries no canonical bound (no form supplied)")
    if lemma == "type2":
        if summand is None:
            raise CertificateError("type2 needs the summand index")
        k = report.intrinsic_multiplicities[summand - 1]
        h = report.constituent_orders[(summand, 1)]
        return B // (h ** k)
    if lemma == "classify":
        if summand is None:
            raise CertificateError("classify needs the summand index")
        k = report.intrinsic_multiplicities[summand - 1]
        if k < 2:
            raise CertificateError("classify needs an intrinsic multiplicity of at least 2")
        h = report.constituent_orders[(summand, 1)]
        return B // h if k == 2 else B // (2 * h)
    if lemma == "d1d2":
        if normal_index is None or normal_index < 1:
            raise CertificateError("d1d2 needs the normal-subgroup index")
        return B // normal_index
    if lemma == "typeII":
        if pattern_count is None or pattern_count < 1:
            raise CertificateError("typeII needs the pattern count c >= 1")
        return B // (d ** (pattern_count - 1))
    raise CertificateError("unknown lemma %r" % lemma)
