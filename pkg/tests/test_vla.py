from fractions import Fraction

import pytest

from opelab.scalars import Scalar, ONE, sc
from opelab.vla import (Gen, BrValue, VertexLieData, check_sesquilinearity,
                        check_skew_symmetry, check_jacobi, current_algebra,
                        heisenberg, kac_moody_sl2, virasoro, weyl_pair,
                        direct_sum, poisson_limit)


def test_virasoro_table():
    L = virasoro(Scalar.variable("c"))
    l = L.gen("l")
    assert L.stored(l, l, 0) == BrValue({(l, 1): ONE})
    assert L.stored(l, l, 1) == BrValue({(l, 0): sc(2)})
    assert L.stored(l, l, 2).is_zero()
    assert L.stored(l, l, 3).central == Scalar.variable("c").scale(
        Fraction(1, 2))


def test_derived_brackets():
    L = virasoro(Scalar.variable("c"))
    l = L.gen("l")
    # (T l)_(n) l = -n l_(n-1) l
    assert L.bracket(l, 1, 1, l, 0) == BrValue({(l, 1): sc(-1)})
    assert L.bracket(l, 1, 0, l, 0).is_zero()
    # l_(1) (T l) = T(l_(1) l) + l_(0) l = 2 Tl + Tl
    assert L.bracket(l, 0, 1, l, 1) == BrValue({(l, 1): sc(3)})
    # central parts are killed by T: l_(3)(Tl) = T(c/2) + 3 l_(2)l = 0
    assert L.bracket(l, 0, 3, l, 1).is_zero()
    # but resurface one mode up: l_(4)(Tl) = 4 l_(3)l = 2c
    assert L.bracket(l, 0, 4, l, 1) == \
        BrValue({}, Scalar.variable("c").scale(2))


@pytest.mark.parametrize("L", [
    virasoro(Scalar.variable("c")),
    kac_moody_sl2(Scalar.variable("k")),
    heisenberg(Scalar.variable("t")),
    weyl_pair(odd=False),
    weyl_pair(odd=True, names=("psi", "psi_star")),
])
def test_presets_satisfy_axioms(L):
    assert check_sesquilinearity(L).ok
    assert check_skew_symmetry(L).ok
    assert check_jacobi(L).ok


def test_direct_sum_is_still_a_vla():
    L = direct_sum(kac_moody_sl2(sc(3)),
                   weyl_pair(odd=True, names=("psi", "psi_star")))
    assert len(L.gens) == 5
    assert check_sesquilinearity(L).ok
    assert check_skew_symmetry(L).ok
    assert check_jacobi(L).ok
    # cross brackets vanish
    assert L.bracket(L.gen("e"), 0, 0, L.gen("psi"), 0).is_zero()


def test_broken_structure_constant_fails_jacobi():
    bad_struct = {
        (0, 1): [(0, -3)], (1, 0): [(0, 3)],   # [h,e] = 3e: inconsistent
        (1, 2): [(2, -2)], (2, 1): [(2, 2)],
        (0, 2): [(1, 1)], (2, 0): [(1, -1)],
    }
    from opelab.vla import SL2_KAPPA
    L = current_algebra(["e", "h", "f"], bad_struct, SL2_KAPPA, sc(1))
    rep = check_jacobi(L)
    assert not rep.ok
    w = rep.violations[0]["witness"]
    assert len(w) == 5 and set(w[:3]) <= {"e", "h", "f"}


def test_noninvariant_pairing_fails_jacobi():
    from opelab.vla import SL2_STRUCT
    kappa = {(0, 2): ONE, (2, 0): ONE, (1, 1): sc(3)}  # kappa(h,h) != 2
    L = current_algebra(["e", "h", "f"], SL2_STRUCT, kappa, sc(1))
    assert not check_jacobi(L).ok


def test_weight_inhomogeneous_bracket_fails_sesquilinearity():
    gens = [Gen("a", 1), Gen("b", 1)]
    brackets = {(0, 1, 0): BrValue({(1, 1): ONE})}  # T b has weight 2 != 1
    L = VertexLieData(gens, brackets, central=False)
    rep = check_sesquilinearity(L)
    assert not rep.ok
    assert rep.violations[0]["pair"] == ("a", "b", 0)


def test_pole_bound_violation_reported():
    gens = [Gen("a", 1), Gen("b", 1)]
    # n = 2 exceeds the bound wt a + wt b - 1 = 1
    L = VertexLieData(gens, {(0, 1, 2): BrValue({(0, 0): ONE})})
    rep = check_sesquilinearity(L)
    assert not rep.ok
    assert "pole bound" in rep.violations[0]["message"]


def test_skew_symmetry_violation():
    gens = [Gen("a", 1), Gen("b", 1)]
    L = VertexLieData(gens, {(0, 1, 0): BrValue({(0, 1): ONE})})
    # b_(n)a is identically zero, so skew-symmetry must fail
    assert not check_skew_symmetry(L).ok


def test_weyl_pair_zero_pole_signs():
    even = weyl_pair(odd=False)
    assert even.stored(0, 1, 0).central == ONE
    assert even.stored(1, 0, 0).central == sc(-1)
    odd = weyl_pair(odd=True)
    assert odd.stored(0, 1, 0).central == ONE
    assert odd.stored(1, 0, 0).central == ONE


def test_serialization_roundtrip():
    for L in (virasoro(Scalar.variable("c")),
              kac_moody_sl2(Scalar.variable("k")),
              weyl_pair(odd=True)):
        data = L.to_dict()
        L2 = VertexLieData.from_dict(data)
        assert L2.to_dict() == data
        assert [g.name for g in L2.gens] == [g.name for g in L.gens]
        assert L2.brackets.keys() == L.brackets.keys()
        for k in L.brackets:
            assert L2.brackets[k] == L.brackets[k]


def test_poisson_limit_heisenberg():
    h = Scalar.variable("h")
    L = heisenberg(h)
    P = poisson_limit(L)
    assert P.ring is None
    assert P.stored(0, 0, 1).central == ONE


def test_poisson_limit_rejects_noncommutative_fibre():
    h = Scalar.variable("h")
    with pytest.raises(ValueError, match="central fibre not commutative"):
        poisson_limit(virasoro(h))
    with pytest.raises(ValueError, match="l_\\(0\\)l"):
        poisson_limit(virasoro(h))


def test_poisson_limit_scaled_current_algebra():
    # scale all sl2 structure by h: the limit keeps only the pairing
    h = Scalar.variable("h")
    struct = {k: [(g, sc(c) * h) for g, c in v]
              for k, v in
              {(0, 1): [(0, -2)], (1, 0): [(0, 2)],
               (1, 2): [(2, -2)], (2, 1): [(2, 2)],
               (0, 2): [(1, 1)], (2, 0): [(1, -1)]}.items()}
    from opelab.vla import SL2_KAPPA
    L = current_algebra(["e", "h_", "f"], struct, SL2_KAPPA, h)
    P = poisson_limit(L)
    assert P.stored(0, 1, 0) == BrValue({(0, 0): sc(-2)})
    assert P.stored(0, 2, 1).central == ONE
