"""Verification report: computed values against printed ones, plus the verdict."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import ambient
from .azflag import CASES, QUANTITIES, AZReport, CaseConfig, evaluate, label
from .exactnum import fmt_rational, integrate_region, midpoint_integral
from .surface import intersect, numeric_zariski_oracle

VOLUME_TOL = 1e-6
INTEGRAL_RTOL = 1e-4
PRINTED_S_X_FIBER = Fraction(33, 48)


@dataclass
class QuantityLine:
    key: str
    value: Fraction
    paper: Fraction | None = None
    erratum: bool = False
    note: str = ""

    @property
    def match(self) -> bool | None:
        return None if self.paper is None else self.value == self.paper

    @property
    def ok(self) -> bool:
        return self.paper is None or self.match or self.erratum

    def to_json(self) -> dict:
        return {
            "name": self.key,
            "label": label(self.key),
            "value": fmt_rational(self.value),
            "paper": None if self.paper is None else fmt_rational(self.paper),
            "match": self.match,
            "erratum": self.erratum,
            "note": self.note,
        }

    def to_text(self) -> str:
        paper = "—" if self.paper is None else fmt_rational(self.paper)
        mark = "" if self.paper is None else (" ✓" if self.match else " ✗")
        line = f"{label(self.key)} = {fmt_rational(self.value)} (paper: {paper}){mark}"
        if self.erratum and not self.match:
            line += f"  [ERRATUM: {self.note}]"
        elif not self.ok:
            line += "  [MISMATCH]"
        return line


@dataclass
class OracleResult:
    grid: int
    points: int
    max_volume_deviation: float
    max_integral_rel_error: float

    @property
    def ok(self) -> bool:
        return self.max_volume_deviation < VOLUME_TOL and self.max_integral_rel_error < INTEGRAL_RTOL

    def to_json(self) -> dict:
        return {
            "grid": self.grid,
            "points": self.points,
            "max_volume_deviation": f"{self.max_volume_deviation:.3e}",
            "max_integral_relative_error": f"{self.max_integral_rel_error:.3e}",
            "pass": self.ok,
        }


@dataclass
class CaseBlock:
    config: CaseConfig
    result: AZReport
    lines: list[QuantityLine]
    oracle: OracleResult | None = None

    @property
    def delta_ok(self) -> bool:
        return self.result.delta_lower >= 1

    @property
    def ok(self) -> bool:
        errata_hold = all(
            ln.value < 1 and ln.paper < 1 for ln in self.lines if ln.erratum and not ln.match
        )
        oracle_ok = self.oracle is None or self.oracle.ok
        return self.delta_ok and errata_hold and oracle_ok and all(ln.ok for ln in self.lines)


@dataclass
class DivisorialLine:
    generator: str
    S_X: Fraction
    beta: Fraction
    paper: Fraction | None

    @property
    def ok(self) -> bool:
        return self.beta > 0 and (self.paper is None or self.paper == self.S_X)

    def to_json(self) -> dict:
        return {
            "generator": self.generator,
            "S_X": fmt_rational(self.S_X),
            "beta": fmt_rational(self.beta),
            "paper_S_X": None if self.paper is None else fmt_rational(self.paper),
            "beta_positive": self.beta > 0,
        }


@dataclass
class VerificationReport:
    cases: list[CaseBlock]
    divisorial: list[DivisorialLine] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.cases) and all(d.ok for d in self.divisorial)

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def errata(self) -> list[dict]:
        out = []
        for c in self.cases:
            for ln in c.lines:
                if ln.erratum and not ln.match:
                    out.append({
                        "case": c.config.name,
                        "quantity": ln.key,
                        "computed": fmt_rational(ln.value),
                        "paper": fmt_rational(ln.paper),
                        "conclusion_unaffected": ln.value < 1 and ln.paper < 1,
                        "note": ln.note,
                    })
        return out

    def to_json(self) -> str:
        doc = {
            "cases": [
                {
                    "case": c.config.name,
                    "description": c.config.description,
                    "lattice": c.config.lattice.name,
                    "flag_curve": c.config.flag_curve,
                    "quantities": [ln.to_json() for ln in c.lines],
                    "delta_lower": fmt_rational(c.result.delta_lower),
                    "delta_at_least_one": c.delta_ok,
                    "chambers": [
                        sc.describe() for fc in c.result.chambers for sc in fc.zariski.chambers
                    ],
                    "oracle": None if c.oracle is None else c.oracle.to_json(),
                    "pass": c.ok,
                }
                for c in self.cases
            ],
            "divisorial": [d.to_json() for d in self.divisorial],
            "verdict": self.verdict,
            "errata": self.errata(),
        }
        return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False)

    def to_text(self) -> str:
        out = []
        for c in self.cases:
            out.append(f"== {c.config.name}: {c.config.description}")
            out.append(f"   lattice {c.config.lattice.name}, Z = {c.config.flag_curve}")
            for fc in c.result.chambers:
                for sc in fc.zariski.chambers:
                    out.append(f"   chamber {sc.describe()}")
            for ln in c.lines:
                out.append("   " + ln.to_text())
            rel = ">=" if c.delta_ok else "<"
            out.append(f"   delta_P >= {fmt_rational(c.result.delta_lower)} {rel} 1")
            if c.oracle is not None:
                o = c.oracle
                out.append(
                    f"   oracle ({o.grid}x{o.grid}): max |vol - vol_float| = {o.max_volume_deviation:.3e}, "
                    f"max integral rel. error = {o.max_integral_rel_error:.3e} {'✓' if o.ok else '✗'}"
                )
            out.append(f"   case {'PASS' if c.ok else 'FAIL'}")
            out.append("")
        if self.divisorial:
            out.append("== divisorial stability")
            for d in self.divisorial:
                paper = "—" if d.paper is None else fmt_rational(d.paper)
                out.append(
                    f"   S_X({d.generator}) = {fmt_rational(d.S_X)} (paper: {paper}), "
                    f"beta = {fmt_rational(d.beta)} {'> 0 ✓' if d.beta > 0 else '<= 0 ✗'}"
                )
            out.append("")
        out.append(f"verdict: {self.verdict}")
        return "\n".join(out)


def case_block(cfg: CaseConfig, oracle_grid: int | None = None) -> CaseBlock:
    result = evaluate(cfg)
    values = result.values()
    keys = list(QUANTITIES) + sorted(k for k in values if k not in QUANTITIES)
    lines = [
        QuantityLine(k, values[k], cfg.expected.get(k), k in cfg.errata, cfg.errata.get(k, ""))
        for k in keys
    ]
    oracle = oracle_sweep(cfg, result, oracle_grid) if oracle_grid else None
    return CaseBlock(cfg, result, lines, oracle)


def divisorial_block() -> list[DivisorialLine]:
    lines = []
    for g in ambient.DIVISOR_GENERATORS:
        s = ambient.S_X(g)
        paper = PRINTED_S_X_FIBER if g.tag.startswith("Y") else None
        lines.append(DivisorialLine(g.tag, s, 1 - s, paper))
    return lines


def build_report(names: Sequence[str], oracle_grid: int | None = None, divisorial: bool = True) -> VerificationReport:
    blocks = [case_block(CASES[n], oracle_grid) for n in names]
    return VerificationReport(blocks, divisorial_block() if divisorial else [])


def oracle_sweep(cfg: CaseConfig, result: AZReport, n: int) -> OracleResult:
    """Compare exact chamber volumes with the float oracle on an ``n x n`` grid
    per threefold chamber, and exact integrals with the midpoint rule."""
    lat = cfg.lattice
    max_dev = 0.0
    points = 0
    for fc in result.chambers:
        dom = fc.domain
        vols = [(c.region, c.volume(lat)) for c in fc.zariski.chambers]
        fr = (np.arange(n) + 0.5) / n
        for su in fr:
            u = float(dom.u_lo) + su * float(dom.u_hi - dom.u_lo)
            lo, hi = dom.v_lo.eval_float(u), dom.v_hi.eval_float(u)
            for sv in fr:
                v = lo + sv * (hi - lo)
                vol = next(p for r, p in vols if r.contains_float(u, v))
                exact = vol.eval_float(u, v)
                vec = [c.eval_float(u, v) for c in fc.zariski.divisor.coords]
                approx, _ = numeric_zariski_oracle(vec, lat)
                max_dev = max(max_dev, abs(exact - approx))
                points += 1
    max_rel = 0.0
    m = max(n, 200)
    for fc in result.chambers:
        for sc in fc.zariski.chambers:
            pz = intersect(sc.positive, cfg.Z, lat)
            for integrand in (pz * pz, sc.volume(lat)):
                exact = integrate_region(integrand, sc.region)
                approx = midpoint_integral(integrand, sc.region, m)
                if exact != 0:
                    max_rel = max(max_rel, abs(approx - float(exact)) / abs(float(exact)))
                else:
                    max_rel = max(max_rel, abs(approx))
    return OracleResult(n, points, max_dev, max_rel)
