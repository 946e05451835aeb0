import random

import pytest

from formaut.cyclotomic import CycNum
from formaut.forms import Form, parse
from formaut.smoothness import (GF, SmoothnessError, buchberger, good_primes,
                                groebner_basis, is_smooth, smooth_by_resultant, smtosm_witness,
                                sylvester_resultant, variable_components)

rng = random.Random(8128)


def test_groebner_trivial_cases():
    gb = groebner_basis([parse("x1^2", nvars=2), parse("x2^2", nvars=2)])
    assert sorted(g.lm for g in gb.basis) == [(0, 2), (2, 0)]
    gb = groebner_basis([parse("3*x1^2", nvars=3), parse("3*x2^2", nvars=3),
                         parse("3*x3^2", nvars=3)])
    assert all(str(g.terms[g.lm]) == "1" for g in gb.basis)


def test_groebner_klein_pure_powers():
    from formaut.forms import partials
    gb = groebner_basis(partials(parse("x1^3*x2 + x2^3*x3 + x3^3*x1")))
    assert gb.complete
    lms = gb.leading_monomials()
    for i in range(3):
        assert any(lm[i] > 0 and all(x == 0 for j, x in enumerate(lm) if j != i) for lm in lms)


def test_packed_and_generic_gf_agree():
    import formaut.smoothness as sm
    field = GF(32003, 1)
    for _ in range(25):
        n = rng.randint(2, 3)
        polys = []
        for _ in range(rng.randint(2, 4)):
            terms = {}
            for _ in range(rng.randint(1, 4)):
                e = tuple(rng.randint(0, 3) for _ in range(n))
                terms[e] = rng.randint(1, 32002)
            if terms:
                polys.append(sm._Poly(terms, field))
        if not polys:
            continue
        saved = sm._gf_packed_ok
        sm._gf_packed_ok = lambda *a: False
        generic = buchberger([sm._Poly(dict(p.terms), field) for p in polys], field)
        sm._gf_packed_ok = saved
        packed = buchberger([sm._Poly(dict(p.terms), field) for p in polys], field)
        key = lambda res: sorted((g.lm, tuple(sorted(g.terms.items()))) for g in res.basis)
        assert key(generic) == key(packed)


@pytest.mark.parametrize("d,n", [(3, 1), (6, 2), (17, 25)])
def test_fermat_smooth(d, n):
    cert = is_smooth(Form.fermat(d, n + 2))
    assert cert.verdict == "smooth" and cert.method == "split-variables"


def test_catalog_small_forms_smooth_modp_and_char0_agree():
    forms = [
        parse("x1^3*x2 + x2^3*x3 + x3^3*x1"),
        parse("x1^6 + x2^6 + x3^6 - 10*(x1^3*x2^3 + x2^3*x3^3 + x3^3*x1^3)"),
        parse("10*x1^3*x2^3+9*(x1^5+x2^5)*x3-45*x1^2*x2^2*x3^2-135*x1*x2*x3^4+27*x3^6"),
    ]
    for F in forms:
        modp = is_smooth(F, "modp")
        char0 = is_smooth(F, "char0")
        assert modp.verdict == char0.verdict == "smooth"


def test_icosahedral_block_smooth_and_resultant():
    ico = parse("x1^11*x2 + 11*x1^6*x2^6 - x1*x2^11")
    assert is_smooth(ico, "char0").verdict == "smooth"
    assert smooth_by_resultant(ico)


def test_singular_controls_with_witness():
    cert = is_smooth(parse("x1^3*x2", nvars=2))
    assert cert.verdict == "singular"
    assert [str(w) for w in cert.witness] == ["0", "1"]
    cert = is_smooth(parse("x1^3 + x2^3", nvars=3))
    assert cert.verdict == "singular"
    assert [str(w) for w in cert.witness] == ["0", "0", "1"]


def test_split_strategy_block_form():
    F = parse("x1^5*x2 + x2^5*x1 + x3^5*x4 + x4^5*x3")
    cert = is_smooth(F, "split")
    assert cert.verdict == "smooth" and cert.method == "split-variables"
    assert variable_components(F) == [[0, 1], [2, 3]]


def random_binary_form(d):
    terms = {}
    for i in range(d + 1):
        c = rng.randint(-3, 3)
        if c:
            terms[(d - i, i)] = CycNum.from_int(c)
    if not terms:
        terms[(d, 0)] = CycNum.one()
    return Form(2, terms, d)


def test_binary_groebner_agrees_with_resultant():
    for _ in range(60):
        F = random_binary_form(rng.randint(2, 6))
        cert = is_smooth(F, "char0")
        assert cert.verdict in ("smooth", "singular")
        assert (cert.verdict == "smooth") == smooth_by_resultant(F)


def test_resultant_basic():
    f = parse("x1^2 - x2^2")
    g = parse("x1 - x2", nvars=2)
    assert sylvester_resultant(f, g).is_zero()
    g2 = parse("x1 + 2*x2", nvars=2)
    assert not sylvester_resultant(f, g2).is_zero()


def test_good_primes_split_conductor():
    primes = good_primes(12, 3, seed=5)
    assert len(set(primes)) == 3
    for p in primes:
        assert (1 << 20) <= p < (1 << 21) and p % 12 == 1
    # reduction map is a ring homomorphism
    field = GF(primes[0], 12)
    from formaut.cyclotomic import root_of_unity
    z = root_of_unity(12)
    assert pow(field.from_cyc(z), 12, field.p) == 1
    a = z + 2
    b = 3 * z ** 5 - 1
    assert field.from_cyc(a * b) == field.from_cyc(a) * field.from_cyc(b) % field.p


def test_smtosm_witness_examples():
    F = parse("x1^3*x3 + x2^4 + x3^4", nvars=3)
    assert smtosm_witness(F, 2, 1) == (3, 0, 1)
    F = parse("x1^2*x3 + x2^3 + x3^3")
    assert smtosm_witness(F, 2, 1) == (2, 0, 1)


def test_smtosm_witness_randomized():
    found = 0
    while found < 25:
        # build a smooth form whose restriction to x1..x2 is singular:
        # start from a singular binary head and repair with tail monomials
        head = parse("x1^3*x2", nvars=3)
        tail_terms = {(0, 0, 4): CycNum.one(), (0, 3, 1): CycNum.one(),
                      (3 if rng.random() < 0.5 else 2, 0, 1 if rng.random() < 0.5 else 2): CycNum.one()}
        tail_terms = {e: c for e, c in tail_terms.items() if sum(e) == 4}
        F = head + Form(3, tail_terms, 4)
        cert = is_smooth(F)
        if cert.verdict != "smooth":
            continue
        w = smtosm_witness(F, 2, 1)
        assert sum(w[2:]) == 1
        found += 1


def test_smtosm_rejects_smooth_restriction():
    F = Form.fermat(4, 3)
    with pytest.raises(SmoothnessError):
        smtosm_witness(F, 2, 1)
