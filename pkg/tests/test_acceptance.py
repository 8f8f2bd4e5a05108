"""Acceptance suite: one test per criterion, each reporting a PASS/FAIL line.

Run with pytest (lines appear in the terminal summary) or directly with
``python3 tests/test_acceptance.py``.
"""

import functools
import random
import sys
from fractions import Fraction

from fano24 import ambient, linalg
from fano24.ambient import ANTICANONICAL, MultiDegree, fiber_class, is_pseff, is_pseff_enumerate
from fano24.azflag import CASES, evaluate
from fano24.cli import run
from fano24.exactnum import U, integrate_interval
from fano24.report import build_report, oracle_sweep
from fano24.surface import grow_support

F = Fraction
RESULTS: dict[int, tuple[str, bool]] = {}


def criterion(number, title):
    def wrap(fn):
        @functools.wraps(fn)
        def inner(*args, **kwargs):
            ok = False
            try:
                fn(*args, **kwargs)
                ok = True
            finally:
                RESULTS[number] = (title, ok)
                print(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}")

        return inner

    return wrap


def _values(name):
    return evaluate(CASES[name]).values()


def _erratum_flagged(name, key, computed, printed):
    block = build_report([name], divisorial=False).cases[0]
    line = next(ln for ln in block.lines if ln.key == key)
    assert line.value == computed and line.paper == printed
    assert line.erratum and line.match is False
    assert computed < 1 and printed < 1


@criterion(1, "intersection engine")
def test_criterion_01_intersections():
    K = ANTICANONICAL
    assert ambient.triple_on_X(K, K, K) == 24
    D = K - U * fiber_class(1)
    assert ambient.triple_on_X(D, D, D) == 24 - 18 * U
    P = MultiDegree(0, 2 - U, 2 - U, 2 - U)
    assert ambient.volume(P) == 6 * (2 - U) ** 3
    assert ambient.zariski_threefold("Y1").chambers[1].volume() == 6 * (2 - U) ** 3


@criterion(2, "divisorial stability")
def test_criterion_02_divisorial():
    for tag in ("Y1", "Y2", "Y3", "Y4"):
        assert ambient.S_X(tag) == F(33, 48)
        assert ambient.beta(tag) == F(15, 48) > 0
    assert integrate_interval(24 - 18 * U, 0, 1) / 24 == F(5, 8)


@criterion(3, "smooth fiber, no line through P")
def test_criterion_03_no_line():
    v = _values("smooth-no-line")
    assert [v[f"quadratic_partial_{i}"] for i in range(1, 5)] == [4, F(4, 3), 1, F(1, 3)]
    assert v["quadratic_term"] == F(5, 6)
    assert v["ord_term"] == F(1, 16)
    assert v["S_WYZ_P"] == F(43, 48)
    assert [v["vol_partial_1"], v["vol_partial_2"]] == [F(14, 3), F(7, 6)]
    assert v["S_WY_Z"] == F(35, 48)
    _erratum_flagged("smooth-no-line", "S_WY_Z", F(35, 48), F(41, 48))
    assert v["delta_lower"] == F(48, 43) > 1


@criterion(4, "smooth fiber, one line through P")
def test_criterion_04_one_line():
    v = _values("smooth-one-line")
    assert [v[f"quadratic_partial_{i}"] for i in range(1, 5)] == [F(7, 3), F(7, 3), F(7, 12), F(7, 12)]
    assert v["quadratic_term"] == F(35, 48)
    assert v["ord_term"] == F(1, 16)
    assert v["S_WYZ_P"] == F(19, 24)
    _erratum_flagged("smooth-one-line", "S_WYZ_P", F(19, 24), F(47, 48))
    assert v["S_WY_Z"] == F(15, 16)
    assert v["delta_lower"] == F(16, 15) > 1


@criterion(5, "smooth fiber, two lines through P")
def test_criterion_05_two_lines():
    v = _values("smooth-two-lines")
    partials = [v["ord_partial_1"], v["ord_partial_2"], v["ord_partial_3"]]
    assert partials == [F(2, 3), F(1, 8), F(7, 24)]
    assert sum(partials) == F(13, 12)
    assert v["ord_term"] == F(13, 48)
    assert v["quadratic_term"] == F(35, 48)
    assert v["S_WYZ_P"] == 1
    assert v["S_WY_Z"] == F(15, 16)
    assert v["delta_lower"] == 1


@criterion(6, "fiber with an A1 point")
def test_criterion_06_singular():
    v = _values("singular-fiber")
    assert v["ord_term"] == 0
    assert v["S_WYZ_P"] == F(5, 6)
    assert v["S_WY_Z"] == F(35, 48)
    assert v["delta_lower"] == F(6, 5) > 1


def _random_point(rng, region):
    u = region.u_lo + F(rng.randint(0, 96), 96) * (region.u_hi - region.u_lo)
    lo, hi = region.v_lo.eval_at(u), region.v_hi.eval_at(u)
    return u, lo + F(rng.randint(0, 96), 96) * (hi - lo)


@criterion(7, "Zariski decomposition properties on 1000 random points")
def test_criterion_07_zariski_properties():
    rng = random.Random(20240417)
    families = [fc for cfg in CASES.values() for fc in evaluate(cfg).chambers]
    assert {fc.zariski.lattice.name for fc in families} == {"SMOOTH", "SING"}
    checked = 0
    for k in range(1000):
        fc = families[k % len(families)]
        dec, lat = fc.zariski, fc.zariski.lattice
        u, v = _random_point(rng, fc.domain)
        ch = dec.chamber_at(u, v)
        P = ch.positive.at(u, v)
        for e in lat.negative_curves:
            pe = lat.pair(P, lat.vector(e))
            assert pe >= 0
            if e in ch.support:
                assert pe == 0
        if ch.support:
            assert linalg.is_negative_definite(lat.support_gram(ch.support))
        for e, c in ch.negative.items():
            assert c.eval_at(u, v) >= 0
        # the chamber formula agrees with a fresh pointwise decomposition
        point = grow_support(dec.divisor.at(u, v), lat)
        assert point.pseudo_effective
        assert point.volume(lat) == ch.volume(lat).eval_at(u, v)
        checked += 1
    assert checked == 1000
    walls = 0
    for fc in families:
        lat = fc.zariski.lattice
        for a, b, pts in fc.zariski.walls():
            for u, v in pts:
                assert a.volume(lat).eval_at(u, v) == b.volume(lat).eval_at(u, v)
                walls += 1
    assert walls > 0


@criterion(8, "symbolic volumes and integrals against the float oracles")
def test_criterion_08_oracle():
    for name, cfg in CASES.items():
        res = oracle_sweep(cfg, evaluate(cfg), 50)
        assert res.points == 50 * 50 * len(evaluate(cfg).chambers)
        assert res.max_volume_deviation < 1e-6, name
        assert res.max_integral_rel_error < 1e-4, name


@criterion(9, "cone membership and thresholds")
def test_criterion_09_cones():
    rng = random.Random(7)
    positives = 0
    for _ in range(1000):
        d = MultiDegree(*(F(rng.randint(-12, 12), rng.randint(1, 4)) for _ in range(4)))
        a = is_pseff(d)
        assert a == is_pseff_enumerate(d)
        positives += a
    # the sample must exercise both answers
    assert 0 < positives < 1000
    assert ambient.nef_threshold(ANTICANONICAL, fiber_class(1)) == 1
    assert ambient.pseff_threshold(ANTICANONICAL, fiber_class(1)) == 2


@criterion(10, "verify --all returns PASS")
def test_criterion_10_verdict():
    assert run(["verify", "--all"]) == 0
    assert build_report(list(CASES)).verdict == "PASS"


if __name__ == "__main__":
    tests = [obj for name, obj in sorted(globals().items()) if name.startswith("test_criterion_")]
    failed = 0
    for t in tests:
        try:
            t()
        except Exception:
            failed += 1
    sys.exit(1 if failed else 0)
