from fractions import Fraction

import pytest

from fgl.bp import (
    BPContext,
    bp_fgl_coeff,
    bp_fgl_series,
    bp_log_closed,
    bp_log_recursive,
    bp_summand_count,
    bp_vartable,
    express_v_in_alphas,
    leading_alpha_relation,
)
from fgl.errors import DomainError
from fgl.mpoly import Poly, Q, VarTable, parse_poly
from fgl.pseries import check_fgl_axioms


def _vpoly(text, p, n_max):
    return parse_poly(text, Q, bp_vartable(p, n_max))


def test_log_recursion_base():
    (l1,) = bp_log_recursive(2, 1)
    assert l1 == _vpoly("1/2*v1", 2, 1)
    (l1,) = bp_log_recursive(3, 1)
    assert l1 == _vpoly("1/3*v1", 3, 1)


def test_log_recursion_step_two():
    l1, l2 = bp_log_recursive(2, 2)
    assert l2 == _vpoly("1/2*v2 + 1/4*v1^3", 2, 2)


def test_log_closed_l1():
    assert bp_log_closed(2, 1) == _vpoly("1/2*v1", 2, 1)


def test_l4_has_eight_summands():
    assert bp_summand_count(2, 4) == 8
    ls = bp_log_recursive(2, 4)
    assert len(ls[3].terms) == 8


def test_l4_closed_display():
    # l4 = v4/p + v1 v3^p/p^2 + v2 v2^(p^2)/p^2 + v3 v1^(p^3)/p^2
    #      + v1 v1^p v2^(p^2)/p^3 + v1 v2^p v1^(p^3)/p^3 + v2 v1^(p^2) v1^(p^3)/p^3
    #      + v1 v1^p v1^(p^2) v1^(p^3)/p^4
    for p in (2, 3):
        vt = bp_vartable(p, 4)
        v = {k: Poly.var(Q, vt, f"v{k}") for k in (1, 2, 3, 4)}
        expect = (
            v[4].scale(Fraction(1, p))
            + (v[1] * v[3] ** p).scale(Fraction(1, p**2))
            + (v[2] * v[2] ** (p**2)).scale(Fraction(1, p**2))
            + (v[3] * v[1] ** (p**3)).scale(Fraction(1, p**2))
            + (v[1] * v[1] ** p * v[2] ** (p**2)).scale(Fraction(1, p**3))
            + (v[1] * v[2] ** p * v[1] ** (p**3)).scale(Fraction(1, p**3))
            + (v[2] * v[1] ** (p**2) * v[1] ** (p**3)).scale(Fraction(1, p**3))
            + (v[1] * v[1] ** p * v[1] ** (p**2) * v[1] ** (p**3)).scale(Fraction(1, p**4))
        )
        assert bp_log_closed(p, 4) == expect


def test_log_closed_equals_recursive():
    for p in (2, 3, 5):
        ls = bp_log_recursive(p, 5)
        for n in range(1, 6):
            embedded = bp_log_closed(p, n).substitute(
                {f"v{k}": Poly.var(Q, bp_vartable(p, 5), f"v{k}") for k in range(1, n + 1)}
            )
            assert embedded == ls[n - 1], (p, n)


def test_log_homogeneity_and_leading_term():
    for p in (2, 3):
        ctx = BPContext(p, 4)
        for n in range(1, 5):
            assert ctx.l(n).weight() == p**n - 1
        assert ctx.l(1).scale(p) == ctx.v(1)


def test_alpha_11_p2():
    assert bp_fgl_coeff(2, 1, 1) == _vpoly("-v1", 2, 1)


def test_alpha_11_p3_vanishes():
    assert bp_fgl_coeff(3, 1, 1).is_zero()


def test_alpha_22_p2_frozen():
    # hand-derived: alpha_22 = -3 v2 - 4 v1^3
    assert bp_fgl_coeff(2, 2, 2) == _vpoly("-3*v2 - 4*v1^3", 2, 2)


def test_alpha_matches_series_oracle():
    for p, bound in ((2, 5), (3, 10)):
        F = bp_fgl_series(p, bound)
        for i in range(1, bound):
            for j in range(i, bound + 1 - i):
                direct = bp_fgl_coeff(p, i, j)
                series = F.coeff(i, j)
                # embed into the common (larger) table before comparing
                n_max = max(len(direct.vars), len(series.vars))
                vt = bp_vartable(p, n_max)
                emb = {f"v{k}": Poly.var(Q, vt, f"v{k}") for k in range(1, n_max + 1)}
                assert direct.substitute(emb) == series.substitute(emb), (p, i, j)


def test_alpha_symmetry_homogeneity_vanishing():
    for p in (2, 3):
        for i in range(1, 5):
            for j in range(i, 6 - i):
                a = bp_fgl_coeff(p, i, j)
                assert a == bp_fgl_coeff(p, j, i).substitute(
                    {n: Poly.var(Q, a.vars, n) for n in a.vars.names}
                ) or a == bp_fgl_coeff(p, j, i)
                if (i + j - 1) % (p - 1) != 0:
                    assert a.is_zero()
                elif not a.is_zero():
                    assert a.weight() == i + j - 1


def test_bp_fgl_axioms_to_degree_8():
    for p in (2, 3):
        F = bp_fgl_series(p, 8)
        rep = check_fgl_axioms(F)
        assert rep.ok, (p, rep.failures)


def test_leading_alpha_relation_values():
    c, w = leading_alpha_relation(2, 0, 1)
    assert c == Fraction(-1)
    assert w.is_zero()  # alpha_11 = -v1 = -2*l_1 exactly
    c, w = leading_alpha_relation(2, 1, 1)
    assert c == Fraction(-1, 3)
    assert w.coeff_of({"v2": 1}) == 0
    c, w = leading_alpha_relation(3, 1, 1)
    assert c == Fraction(-1, 28)
    c, w = leading_alpha_relation(3, 1, 2)
    assert c == Fraction(-1, 28)


def test_express_v1():
    for p, name in ((2, "alpha_1_1"), (3, "alpha_1_2")):
        e = express_v_in_alphas(p, 1)
        assert str(e) == f"-{name}"


def test_express_v2_p2():
    e = express_v_in_alphas(2, 2)
    vt = VarTable([("alpha_1_1", 1), ("alpha_2_2", 3)])
    assert e == parse_poly("-1/3*alpha_2_2 + 4/3*alpha_1_1^3", Q, vt)


def test_express_v3_p2():
    # The published display prints -1/35*a44 + 302/315*a11^4*a22 - 170/63*a11^7,
    # which fails exact back-substitution (the v1^4*v2 component does not cancel).
    # The expression in the polynomial generators a11, a22, a44 is unique;
    # the corrected value below back-substitutes to v3 exactly (recorded
    # erratum; see the reproduce report).
    e = express_v_in_alphas(2, 3)
    vt = VarTable([("alpha_1_1", 1), ("alpha_2_2", 3), ("alpha_4_4", 7)])
    assert e == parse_poly(
        "-1/35*alpha_4_4 + 302/315*alpha_1_1*alpha_2_2^2"
        " - 109/315*alpha_1_1^4*alpha_2_2 - 170/63*alpha_1_1^7",
        Q,
        vt,
    )


def test_express_v2_p3():
    e = express_v_in_alphas(3, 2)
    vt = VarTable([("alpha_1_2", 2), ("alpha_3_6", 8)])
    assert e == parse_poly("-1/28*alpha_3_6 + 27/28*alpha_1_2^4", Q, vt)


def test_express_v3_p3():
    # Last term corrected to +20612623337247/17147530400 (the display prints
    # minus; that sign fails exact back-substitution -- recorded erratum).
    e = express_v_in_alphas(3, 3)
    vt = VarTable([("alpha_1_2", 2), ("alpha_3_6", 8), ("alpha_9_18", 26)])
    expect = parse_poly(
        "-1/1562275*alpha_9_18"
        " + 90115407/17147530400*alpha_1_2*alpha_3_6^3"
        " + 27811961973/17147530400*alpha_1_2^5*alpha_3_6^2"
        " - 328516118111/3429506080*alpha_1_2^9*alpha_3_6"
        " + 20612623337247/17147530400*alpha_1_2^13",
        Q,
        vt,
    )
    assert e == expect


def test_express_v_coefficients_p_local():
    for p, n in ((2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3)):
        e = express_v_in_alphas(p, n)
        for c in e.terms.values():
            assert c.denominator % p != 0, (p, n, c)


def test_express_v_round_trip():
    # substituting the alpha expansions back recovers v_n exactly
    for p, nmax in ((2, 3),):
        for n in range(1, nmax + 1):
            e = express_v_in_alphas(p, n)
            vt = bp_vartable(p, n)
            emb = {f"v{k}": Poly.var(Q, vt, f"v{k}") for k in range(1, n + 1)}
            bindings = {}
            for m in range(n):
                a = bp_fgl_coeff(p, 2**m, 2**m)
                bindings[f"alpha_{2**m}_{2**m}"] = a.substitute(emb)
            assert e.substitute(bindings) == Poly.var(Q, vt, f"v{n}")


def test_express_v_rejects_bad_k():
    with pytest.raises(DomainError):
        express_v_in_alphas(3, 2, [1, 3])


def test_bp_fgl_table_invariants():
    from fgl.bp import bp_fgl_table

    t = bp_fgl_table(2, 6)
    one = Poly.const(Q, t.coeff(1, 1).vars, 1)
    assert t.coeff(1, 0) == one and t.coeff(0, 1) == one
    for (i, j), c in t.entries.items():
        assert t.entries[(j, i)] == c
        if i >= 1 and j >= 1:
            assert c.weight() == i + j - 1
