import random
from dataclasses import replace
from fractions import Fraction

import pytest

from fano24 import linalg
from fano24.ambient import ANTICANONICAL, ZariskiError, exceptional_class
from fano24.exactnum import Poly2, Region, U, V
from fano24.surface import (
    PRESETS,
    SING,
    SMOOTH,
    DPLattice,
    Germ,
    SurfaceClass,
    grow_support,
    intersect,
    numeric_zariski_oracle,
    pseff_threshold,
    restrict_to_fiber,
    vol_surface,
    zariski_at,
    zariski_surface,
)

F = Fraction
K_S = SMOOTH.anticanonical_class
K_A = SING.anticanonical_class


@pytest.mark.parametrize("lat", PRESETS.values(), ids=PRESETS.keys())
def test_preset_invariants(lat):
    K = lat.anticanonical
    assert lat.pair(K, K) == 6
    for e in lat.negative_curves:
        assert lat.pair(lat.vector(e), K) == 1
        assert lat.pair(lat.vector(e), lat.vector(e)) < 0
    n = lat.rank
    assert all(lat.gram[i][j] == lat.gram[j][i] for i in range(n) for j in range(n))


def test_smooth_hexagon():
    curves = SMOOTH.negative_curves
    assert len(curves) == 6
    for e in curves:
        meets = [f for f in curves if f != e and SMOOTH.pair(SMOOTH.vector(e), SMOOTH.vector(f)) != 0]
        assert len(meets) == 2
        assert all(SMOOTH.pair(SMOOTH.vector(e), SMOOTH.vector(f)) == 1 for f in meets)
    z = SMOOTH.vector("L-e1")
    assert sum(SMOOTH.pair(z, SMOOTH.vector(e)) != 0 for e in curves) == 2


def test_sing_gram_degenerate():
    assert linalg.det(SING.gram) == 0
    assert SING.pair(SING.vector("E1"), SING.vector("E1")) == F(-1, 2)


def test_bad_lattice_rejected():
    with pytest.raises(ValueError):
        replace(SMOOTH, anticanonical=(F(2), F(-1), F(-1), F(-1)))
    with pytest.raises(ValueError):
        replace(SMOOTH, gram=((F(1), F(1), F(0), F(0)),) + SMOOTH.gram[1:])


def test_intersect_examples():
    assert intersect(K_S, K_S) == 6
    assert intersect(K_A, K_A) == 6
    assert intersect(SMOOTH.cls("C'"), SMOOTH.cls("L-e1")) == 2
    assert intersect(SING.cls("C'"), SING.cls("Z")) == 2
    assert intersect(SMOOTH.cls("L-e1"), SMOOTH.cls("L-e1")) == 0
    with pytest.raises(ValueError):
        intersect(K_S, K_A)


def test_restriction_to_fiber():
    S = exceptional_class((2, 3, 4))
    for lat in PRESETS.values():
        c = restrict_to_fiber(S, lat)
        assert c == lat.cls("C'")
        assert intersect(c, c, lat) == 6
    assert restrict_to_fiber(ANTICANONICAL, SMOOTH) == K_S


def test_smooth_conic_flag_chambers():
    Z = SMOOTH.cls("L-e1")
    dec = zariski_surface(K_S - Z * V, SMOOTH, Region(0, 1, 0, 2))
    first, second = dec.chambers
    assert first.region == Region(0, 1, 0, 1) and first.negative == {}
    assert second.region == Region(0, 1, 1, 2)
    assert second.negative == {"e1": V - 1, "L-e2-e3": V - 1}
    assert first.volume(SMOOTH) == 6 - 4 * V
    assert second.volume(SMOOTH) == 6 - 4 * V + 2 * (V - 1) ** 2


def test_sing_flag_chamber():
    Z = SING.cls("Z")
    dec = zariski_surface(K_A - Z * V, SING, Region(0, 1, 1, 2))
    (ch,) = dec.chambers
    assert ch.negative == {"E1": 2 * (V - 1)}
    assert intersect(ch.positive, Z, SING) == 4 - 2 * V


def test_sing_second_chamber_pairing():
    Z = SING.cls("Z")
    C = SING.cls("C'")
    dec = zariski_surface(K_A - Z * V - C * (U - 1), SING, Region(1, 2, 2 - U, 4 - 2 * U))
    (ch,) = dec.chambers
    assert ch.negative == {"E1": 2 * (U + V - 2)}
    assert intersect(ch.positive, Z, SING) == 8 - 4 * U - 2 * V


def test_line_flag_upper_chamber():
    Z = SMOOTH.cls("e1")
    C = SMOOTH.cls("C'")
    dec = zariski_surface(K_S - Z * V - C * (U - 1), SMOOTH, Region(1, 2, 2 - U, 4 - 2 * U))
    (ch,) = dec.chambers
    # the two hexagon curves meeting e1
    assert ch.negative == {"L-e1-e2": U + V - 2, "L-e1-e3": U + V - 2}


def test_vol_surface_values():
    vol = vol_surface(K_S - SMOOTH.cls("L-e1") * V, SMOOTH, Region(0, 1, 0, 2))
    for v in (F(0), F(1, 3), F(1)):
        assert vol(F(1, 2), v) == 6 - 4 * v
    vol_line = vol_surface(K_S - SMOOTH.cls("e1") * V, SMOOTH, Region(0, 1, 0, 1))
    for v in (F(0), F(1, 2), F(1)):
        assert vol_line(0, v) == 6 - 2 * v - v * v
    assert vol(F(1, 2), F(5, 2)) == 0
    assert vol(F(1, 2), 3) == 0
    vol_a = vol_surface(K_A - SING.cls("Z") * V, SING, Region(0, 1, 0, 2))
    assert vol_a(0, F(5, 2)) == 0


def test_numeric_oracle_examples():
    d = [float(x) for x in (K_S - SMOOTH.cls("L-e1") * V).at(0, F(3, 2))]
    vol, coeffs = numeric_zariski_oracle(d, SMOOTH)
    assert vol == pytest.approx(0.5, abs=1e-12)
    assert set(coeffs) == {"e1", "L-e2-e3"}
    d = [float(x) for x in (K_A - SING.cls("Z") * V).at(0, F(3, 2))]
    assert numeric_zariski_oracle(d, SING)[0] == pytest.approx(0.5, abs=1e-12)
    d = [float(x) for x in (K_S - SMOOTH.cls("L-e1") * V).at(0, 1)]
    vol, coeffs = numeric_zariski_oracle(d, SMOOTH)
    assert all(abs(c) < 1e-12 for c in coeffs.values())
    assert vol == pytest.approx(2.0)


def test_not_pseudo_effective_points():
    for lat, z in ((SMOOTH, "L-e1"), (SMOOTH, "e1"), (SING, "Z")):
        D = lat.anticanonical_class - lat.cls(z) * V
        assert not zariski_at(D, lat, 0, 3).pseudo_effective
        assert numeric_zariski_oracle([float(x) for x in D.at(0, 3)], lat) == (0.0, {})


def test_surface_pseff_threshold():
    for lat, z, t in ((SMOOTH, "L-e1", 2), (SMOOTH, "e1", 2), (SING, "Z", 2)):
        assert pseff_threshold(lat.anticanonical, lat.vector(z), lat) == t


def test_germ_ordering():
    assert Germ(1, -1) < Germ(1)
    assert Germ(0, 1) > 0
    assert Germ(0, 0) == 0


@pytest.mark.parametrize("seed", range(5))
def test_support_order_independent(seed):
    order = list(SMOOTH.negative_curves)
    random.Random(seed).shuffle(order)
    shuffled = replace(SMOOTH, negative_curves=tuple(order))
    for z in ("L-e1", "e1"):
        for u, v in ((F(1, 2), F(3, 2)), (F(3, 2), F(1, 4)), (F(5, 4), F(3, 2))):
            D = K_S - SMOOTH.cls(z) * V - SMOOTH.cls("C'") * (U - 1) * int(u > 1)
            a = zariski_at(D, SMOOTH, u, v)
            b = zariski_at(D, shuffled, u, v)
            assert set(a.support) == set(b.support)
            assert a.coefficients == {e: b.coefficients[e] for e in a.support}


def test_zero_divisor():
    zero = SurfaceClass(tuple(Poly2() for _ in range(SMOOTH.rank)), "SMOOTH")
    dec = zariski_surface(zero, SMOOTH, Region(0, 1, 0, 1))
    assert dec.chambers == ()
    assert vol_surface(zero, SMOOTH, Region(0, 1, 0, 1))(F(1, 2), F(1, 2)) == 0
    assert grow_support((F(0),) * 4, SMOOTH).volume(SMOOTH) == 0


def test_non_pseff_family_rejected():
    with pytest.raises(ZariskiError):
        zariski_surface(K_S - SMOOTH.cls("L-e1") * V, SMOOTH, Region(0, 1, 0, 3))
    with pytest.raises(ValueError):
        zariski_surface(K_S - SMOOTH.cls("L-e1") * (V * V), SMOOTH, Region(0, 1, 0, 1))


def test_walls_continuity():
    dec = zariski_surface(K_S - SMOOTH.cls("L-e1") * V, SMOOTH, Region(0, 1, 0, 2))
    walls = dec.walls()
    assert walls
    for a, b, pts in walls:
        for u, v in pts:
            assert a.volume(SMOOTH).eval_at(u, v) == b.volume(SMOOTH).eval_at(u, v)


def test_table_dump():
    text = SING.to_table()
    assert "-1/2" in text and "E1" in text
    assert isinstance(SMOOTH, DPLattice)
