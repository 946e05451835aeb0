"""Subdegree sequences, the JC table, Fermat-test ratios and the finite searches.

Everything here is exact: ratios are fractions.Fraction, searches are integer
comparisons.  A subdegree sequence is a weakly decreasing tuple of positive
integers, usually written in caret notation like '8^1 6^2 1^3'.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

# Maximal orders of finite primitive projective linear groups in small degree.
# For r = 10, 11 and r >= 13 the maximum is (r+1)!.
_JC_TABLE = {
    1: 1,
    2: 60,
    3: 360,
    4: 25920,
    5: 25920,
    6: 6531840,
    7: 1451520,
    8: 348364800,
    9: 4199040,
    12: 448345497600,
}


def jc(r: int) -> int:
    """Largest order of a finite primitive subgroup of PGL(r, C)."""
    if r < 1:
        raise ValueError("degree must be positive")
    got = _JC_TABLE.get(r)
    return got if got is not None else factorial(r + 1)


class SequenceError(ValueError):
    pass


class SubdegreeSequence:
    """A weakly decreasing tuple of positive integers."""

    __slots__ = ("parts",)

    def __init__(self, parts):
        p = tuple(sorted((int(x) for x in parts), reverse=True))
        if not p:
            raise SequenceError("sequence must be nonempty")
        if p[-1] < 1:
            raise SequenceError("parts must be positive")
        object.__setattr__(self, "parts", p)

    def __setattr__(self, *a):
        raise AttributeError("SubdegreeSequence is immutable")

    @classmethod
    def from_text(cls, text: str) -> SubdegreeSequence:
        """Parse caret notation: '2^13', '8^1 6^2 1^3', or plain '3 2 1'."""
        parts = []
        for chunk in re.split(r"[,\s]+", text.strip()):
            if not chunk:
                continue
            m = re.fullmatch(r"(\d+)(?:\^(\d+))?", chunk)
            if not m:
                raise SequenceError("bad sequence chunk %r" % chunk)
            r, k = int(m.group(1)), int(m.group(2)) if m.group(2) else 1
            parts.extend([r] * k)
        return cls(parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    @property
    def total(self) -> int:
        """v(l), the sum of the parts."""
        return sum(self.parts)

    def multiplicities(self):
        """Distinct parts r1 > r2 > ... with multiplicities, as (r_i, k_i) pairs."""
        out = []
        for p in self.parts:
            if out and out[-1][0] == p:
                out[-1] = (p, out[-1][1] + 1)
            else:
                out.append((p, 1))
        return out

    def exponential_type(self) -> str:
        return " ".join("%d^%d" % (r, k) for r, k in self.multiplicities())

    def count(self, part: int) -> int:
        return sum(1 for p in self.parts if p == part)

    def __add__(self, other):
        if isinstance(other, SubdegreeSequence):
            return SubdegreeSequence(self.parts + other.parts)
        return NotImplemented

    def __sub__(self, other):
        if not isinstance(other, SubdegreeSequence):
            return NotImplemented
        remaining = list(self.parts)
        for p in other.parts:
            try:
                remaining.remove(p)
            except ValueError:
                raise SequenceError("%s is not contained in %s" % (other, self))
        if not remaining:
            raise SequenceError("difference of sequences is empty")
        return SubdegreeSequence(remaining)

    def __eq__(self, other):
        if not isinstance(other, SubdegreeSequence):
            return NotImplemented
        return self.parts == other.parts

    def __hash__(self):
        return hash(self.parts)

    def __repr__(self):
        return "SubdegreeSequence(%r)" % (self.exponential_type(),)

    def __str__(self):
        return self.exponential_type()


def _as_seq(l) -> SubdegreeSequence:
    if isinstance(l, SubdegreeSequence):
        return l
    if isinstance(l, str):
        return SubdegreeSequence.from_text(l)
    return SubdegreeSequence(l)


@lru_cache(maxsize=None)
def _ratio_numerator_parts(parts: tuple) -> int:
    """prod JC(r_i) * prod k_j! for a sorted parts tuple."""
    prod = 1
    run = 0
    prev = None
    for p in parts:
        prod *= jc(p)
        if p == prev:
            run += 1
        else:
            prod *= factorial(run)
            run = 1
            prev = p
    prod *= factorial(run)
    return prod


def ratio(l, d: int) -> Fraction:
    """Fermat-test ratio R(l, d) = d^s * prod JC(r_i) * prod k_j! / (d^v * v!)."""
    seq = _as_seq(l)
    if d < 3:
        raise SequenceError("degree must be at least 3")
    s, v = seq.length, seq.total
    return Fraction(_ratio_numerator_parts(seq.parts), d ** (v - s) * factorial(v))


def ratio_with_groups(groups, d: int) -> Fraction:
    """R(H, d) with explicit constituent orders in place of the JC maxima.

    groups is a sequence of (subdegree, order) pairs.
    """
    if d < 3:
        raise SequenceError("degree must be at least 3")
    pairs = [(int(r), int(h)) for r, h in groups]
    for r, h in pairs:
        if h < 1 or h > jc(r):
            raise SequenceError("order %d exceeds the primitive maximum JC(%d) = %d" % (h, r, jc(r)))
    seq = SubdegreeSequence([r for r, _ in pairs])
    s, v = seq.length, seq.total
    num = d ** s
    for _, h in pairs:
        num *= h
    for _, k in seq.multiplicities():
        num *= factorial(k)
    return Fraction(num, d ** v * factorial(v))


def canonical_bound(groups, intrinsic_multiplicities, d: int) -> int:
    """B = d^s * prod |H_i| * prod k_j! over the intrinsic grouping.

    groups lists (subdegree, order) pairs in grouping order; consecutive runs
    of sizes k_j must have constant subdegree (blocks of one V_i share their
    dimension).
    """
    if d < 3:
        raise SequenceError("degree must be at least 3")
    pairs = [(int(r), int(h)) for r, h in groups]
    ks = [int(k) for k in intrinsic_multiplicities]
    if any(k < 1 for k in ks):
        raise SequenceError("intrinsic multiplicities must be positive")
    if sum(ks) != len(pairs):
        raise SequenceError("intrinsic multiplicities sum to %d, expected %d" % (sum(ks), len(pairs)))
    for r, h in pairs:
        if h < 1 or h > jc(r):
            raise SequenceError("order %d exceeds JC(%d)" % (h, r))
    bound = d ** len(pairs)
    pos = 0
    for k in ks:
        block = pairs[pos:pos + k]
        if len({r for r, _ in block}) != 1:
            raise SequenceError("intrinsic group %r mixes subdegrees" % (block,))
        bound *= factorial(k)
        pos += k
    for _, h in pairs:
        bound *= h
    return bound


def ratio_quotient_law(l, d: int, d2: int) -> bool:
    """Check R(l,d)/R(l,d') = (d'/d)^(v(l)-s) exactly."""
    seq = _as_seq(l)
    lhs = ratio(seq, d) / ratio(seq, d2)
    rhs = Fraction(d2, d) ** (seq.total - seq.length)
    return lhs == rhs


def lambda_addr0(l, r0: int, k0: int, d: int) -> Fraction:
    """The decay factor R(l + (r0), d) / R(l, d) in closed form.

    Equals v! / (v + r0)! * JC(r0) * (k0 + 1) / d^(r0 - 1), where k0 is the
    multiplicity of r0 in l; the closed form is asserted against the direct
    quotient.
    """
    seq = _as_seq(l)
    if r0 <= 1:
        raise SequenceError("r0 must exceed 1")
    if seq.count(r0) != k0 or k0 < 1:
        raise SequenceError("r0 = %d does not occur in %s with multiplicity %d" % (r0, seq, k0))
    v = seq.total
    lam = Fraction(factorial(v), factorial(v + r0)) * Fraction(jc(r0) * (k0 + 1), d ** (r0 - 1))
    direct = ratio(seq + SubdegreeSequence([r0]), d) / ratio(seq, d)
    if lam != direct:
        raise ArithmeticError("closed form disagrees with the direct quotient")
    return lam


def enumerate_sequences(total: int, predicate=None, max_part: int | None = None):
    """All partitions of total in descending-lex order, optionally filtered."""
    if total < 1:
        raise SequenceError("total must be positive")

    def rec(remaining, cap, prefix):
        if remaining == 0:
            seq = SubdegreeSequence(prefix)
            if predicate is None or predicate(seq):
                yield seq
            return
        top = min(cap, remaining)
        for p in range(top, 0, -1):
            yield from rec(remaining - p, p, prefix + [p])

    yield from rec(total, max_part if max_part else total, [])


def survivors_for(v: int, d: int):
    """Partitions of v with a part > 1 and R(l, d) >= 1, with exact ratios.

    The comparison is done in integers: R >= 1 iff the numerator parts beat
    d^(v-s) * v!.
    """
    out = []
    fact_v = factorial(v)
    for seq in enumerate_sequences(v):
        if seq.parts[0] == 1:
            continue
        num = _ratio_numerator_parts(seq.parts)
        rhs = d ** (v - seq.length) * fact_v
        if num >= rhs:
            out.append((seq, Fraction(num, rhs)))
    return out


def classification_search(n_values, d_values):
    """Survivor report over the requested (n, d) grid.

    Returns a dict with the checked ranges and one record per survivor:
    (n, d, sequence, ratio).  An empty survivor list over n >= 26 or d >= 18
    is the finite verification of the asymptotic classification bound.
    """
    n_list = sorted(set(int(n) for n in n_values))
    d_list = sorted(set(int(d) for d in d_values))
    if any(n < 1 for n in n_list):
        raise SequenceError("n must be at least 1")
    if any(d < 3 for d in d_list):
        raise SequenceError("d must be at least 3")
    records = []
    for n in n_list:
        for d in d_list:
            for seq, rat in survivors_for(n + 2, d):
                records.append({"n": n, "d": d, "sequence": seq, "ratio": rat})
    return {"n_values": n_list, "d_values": d_list, "survivors": records}


def uniform_bounds_check(l, d: int) -> dict:
    """Evaluate R(l, d) against the uniform bounds 106 / 60 / 3 / 11.

    R < 106 always; R < 60 once there are two distinct subdegrees; R < 3
    (resp. < 11) when the multiplicity of 1 is at least 2 (resp. at least 1).
    """
    seq = _as_seq(l)
    r = ratio(seq, d)
    mults = seq.multiplicities()
    ones = seq.count(1)
    report = {
        "sequence": seq,
        "d": d,
        "ratio": r,
        "below_106": r < 106,
        "below_60": r < 60 if len(mults) >= 2 else None,
        "below_3": r < 3 if ones >= 2 else None,
        "below_11": r < 11 if ones >= 1 else None,
    }
    report["ok"] = all(v for v in (report["below_106"], report["below_60"],
                                   report["below_3"], report["below_11"]) if v is not None)
    return report


# Domain over which the mixed-subdegree facts are verified exhaustively; the
# d-range collapses to d = 3 by monotonicity of R in d, and totals beyond 30
# are covered by the v >= 28 decay of all-parts-large sequences.
BOUNDS_SCAN_MAX_TOTAL = 30
BOUNDS_SCAN_MAX_D = 20


def mixed_sequence_scan(max_total: int = BOUNDS_SCAN_MAX_TOTAL,
                        max_d: int = BOUNDS_SCAN_MAX_D):
    """All (l, d, R) with 1 in l, some part > 1 and R(l, d) >= 1.

    For each sequence, d runs upward from 3 until R drops below 1 (R is
    strictly decreasing in d when a part exceeds 1), capped at max_d.
    """
    hits = []
    for v in range(2, max_total + 1):
        for seq in enumerate_sequences(v):
            if seq.parts[0] == 1 or seq.parts[-1] != 1:
                continue
            for d in range(3, max_d + 1):
                r = ratio(seq, d)
                if r < 1:
                    break
                hits.append((seq, d, r))
    return hits


def ratioprod_check(n_tuple) -> tuple[bool, Fraction]:
    """q = prod q_i n_i! / (sum n_i)! with q_i = 5/2 for n_i >= 2 else 1.

    Returns (q >= 1, q).  Over all tuples the test passes only at (2, 2).
    """
    ns = sorted((int(n) for n in n_tuple), reverse=True)
    if len(ns) < 2 or any(n < 1 for n in ns):
        raise SequenceError("need m >= 2 positive block sizes")
    q = Fraction(1)
    for n in ns:
        q *= Fraction(5, 2) if n >= 2 else 1
        q *= factorial(n)
    q /= factorial(sum(ns))
    return q >= 1, q


def binomial_supermultiplicativity(l1, l2, d: int):
    """Return (lhs, rhs, disjoint) for C(v1+v2, v1) R(l1+l2) >= R(l1) R(l2)."""
    s1, s2 = _as_seq(l1), _as_seq(l2)
    lhs = comb(s1.total + s2.total, s1.total) * ratio(s1 + s2, d)
    rhs = ratio(s1, d) * ratio(s2, d)
    disjoint = not (set(s1.parts) & set(s2.parts))
    return lhs, rhs, disjoint
