"""Self-check suites driven by ``dds verify``.

``identities`` re-derives every internal relation the library relies on.
``golden`` compares against published constants.  Published values that
this library reproduces to a different number are listed as ``erratum``
rows: they are reported with both numbers but do not change the exit status.
Rows of kind ``observation`` record facts that are not theorems.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import bounds, diophantine, elliptic, series, special
from .envelope import ResultEnvelope
from .precision import HiPrecValue, power, sin
from .precision.constants import PI
from .precision.summation import sum_arrays

SUITES = ("identities", "golden", "all")


@dataclass
class Check:
    name: str
    measured: float
    tolerance: float
    passed: bool
    kind: str = "check"  # check | erratum | observation
    detail: dict = field(default_factory=dict)


def _rel(a, b) -> float:
    a, b = HiPrecValue.of(a), HiPrecValue.of(b)
    d = abs(float(a - b))
    return d / abs(float(b)) if float(b) != 0.0 else d


def _check(name, measured, tol, **detail) -> Check:
    measured = float(measured)
    return Check(name, measured, tol, bool(measured <= tol), "check", detail)


def _sig4(x: float) -> str:
    return format(x, ".4g") if abs(x) < 1e4 else format(round(x, -int(math.floor(math.log10(abs(x)))) + 3), ".6g")


# ------------------------------------------------------------------ identities


def _identity_checks():
    pi = HiPrecValue(*PI)

    lam_b, resid = series.lambda_bessel(10001, with_residue=True)
    lam_e = series.lambda_elementary(10001)
    yield _check("lambda: Bessel vs elementary path, sigma=10001", _rel(lam_b, lam_e), 1e-12)
    yield _check("lambda: Bessel imaginary residue, sigma=10001", resid, series.IMAG_TOL)

    for sigma in (2, 10, 100, 1000, 10001):
        direct = series.partial_sum(series.FLINT_HILLS, 1, sigma - 1).value
        yield _check(f"reconstruction Psi({sigma}) vs direct sum", _rel(series.psi_reconstruction(sigma), direct), 1e-9)

    csc, cot, cube = series.cot_sec_identity_check(10_000, tol=1.0)
    yield _check("csc^2 - cot^2 = 1 over n <= 1e4", _rel(csc - cot, cube), 1e-18)

    worst = 0.0
    for x in (1.0, 2.5, 7.0):
        target = 1 / sin(x) ** 2
        for m in range(1, 21):
            worst = max(worst, _rel(series.recursion_decompose(x, m).total, target))
    yield _check("recursive half-angle substitution, m <= 20", worst, 1e-13)

    spec = series.FLINT_HILLS
    direct = series.partial_sum(spec, 1, 1000).value
    lhs, rhs = series.abel_check(spec, 1000)
    yield _check("Abel summation by parts, N=1000", _rel(rhs, lhs), 1e-18)
    tail = series.partial_sum(spec, 2, 1000).value
    yield _check("floor-Stieltjes integral over (1, 1000]", _rel(series.stieltjes_floor_sum(spec, 1, 1000), tail), 1e-25)
    yield _check("A(0) = 0", abs(float(series.partial_sum_function(spec, 0.0))), 0.0)

    seq = series.partial_sum(series.FLINT_HILLS, 1, 300_000).value
    par = series.partial_sum(series.FLINT_HILLS, 1, 300_000, workers=4).value
    yield _check("parallel vs sequential summation, n <= 3e5", _rel(par, seq), 1e-20)

    zeta3 = special.zeta(3)
    yield _check("psi'(1) = pi^2/6", _rel(special.polygamma(1, 1), pi * pi / 6), 1e-15)
    yield _check("psi''(1) = -2 zeta(3)", _rel(special.polygamma(2, 1), -2 * zeta3), 1e-15)
    worst = 0.0
    for m in range(1, special.MAX_ORDER + 1):
        for x in (0.25, 1.0, 3.5, 40.0, 1e4):
            step = HiPrecValue.of(math.factorial(m)) / HiPrecValue.of(x) ** (m + 1)
            step = step if m % 2 else -step
            worst = max(worst, _rel(special.polygamma(m, x + 1) - special.polygamma(m, x), -step))
    yield _check("polygamma recurrence, orders 1..6", worst, 1e-25)
    worst = 0.0
    for sigma in (1, 2, 10, 100, 1000):
        head = HiPrecValue(0.0) if sigma == 1 else series.partial_sum(series.SeriesSpec("one", 0.0, 3.0), 1, sigma - 1).value
        worst = max(worst, _rel(special.zeta3_tail(sigma), zeta3 - head))
    yield _check("sum_{n>=sigma} n^-3 = -psi''(sigma)/2", worst, 1e-12)

    worst = 0.0
    for p in (1, 2, 3, 5, 10):
        worst = max(worst, _rel(special.fermi_dirac_F(p, 0.0), (1 - HiPrecValue(2.0**-p)) * special.zeta(p + 1)))
    yield _check("F_p(0) = (1 - 2^-p) zeta(p+1)", worst, 1e-14)
    yield _check("G_s = zeta(s+1) at s=2", _rel(special.bose_einstein_G(2), special.zeta(3)), 0.0)

    worst = 0.0
    for x in (0.5, 1.0, 10.0, 355.0):
        closed = (2 / (pi * x)).sqrt() * sin(x)
        worst = max(worst, _rel(special.bessel_J_half(x), closed), _rel(special.struve_H_minus_half(x), closed))
    yield _check("J_{1/2} = H_{-1/2} = sqrt(2/(pi x)) sin x", worst, 1e-28)

    fails = []
    for p in (1.5, 2.0, 4.0, 8.0, 64.0):
        for N in (1, 10, 1000):
            if not bounds.holder_truncated(p, N).satisfied:
                fails.append((p, N))
    yield Check("finite Hoelder grid p in {1.5,2,4,8,64}, N in {1,10,1000}", len(fails), 0, not fails, detail={"failures": fails})

    worst = 0.0
    for p in (2.0, 4.0, 8.0):
        h = bounds.holder_truncated(p, 1000)
        f = bounds.fermi_weighted_holder(p, 0.0, 1000)
        scale = power(special.fermi_dirac_F(p, 0.0) / special.zeta(p), 1 / p)
        worst = max(worst, _rel(f.rhs, h.rhs * scale), _rel(f.lhs, h.lhs))
    yield _check("Fermi-weighted bound at x=0 equals Hoelder with F_p(0) prefactor", worst, 1e-25)
    for p, x, N in ((2.0, 0.0, 1), (2.0, -1.0, 1), (2.0, -1.0, 500), (4.0, 0.0, 1000), (64.0, 0.0, 1)):
        r = bounds.fermi_weighted_holder(p, x, N)
        yield Check(f"Fermi-weighted bound p={p:g} x={x:g} N={N}", float(r.lhs - r.rhs), 0.0, r.satisfied, "observation",
                    {"lhs": float(r.lhs), "rhs": float(r.rhs), "satisfied": r.satisfied})

    bad = [x for x in (0.25, 0.5, 1.0, 2.0, 10.0, 100.0, 10001.0, 1e5) if not bounds.monotonic_PQ_check(x).satisfied]
    yield Check("trigamma/tetragamma two-sided bound", len(bad), 0, not bad, detail={"failures": bad})

    conv = diophantine.convergents_of(count=12)
    bad = []
    for c, nxt in zip(conv, conv[1:]):
        err = abs(c.error)
        if not Fraction(1, c.q * (nxt.q + c.q)) < err < Fraction(1, c.q * nxt.q):
            bad.append(c.p)
    yield Check("convergent sandwich 1/(q(q'+q)) < |pi - p/q| < 1/(q q')", len(bad), 0, not bad, detail={"failures": bad})
    mu = diophantine.effective_mu([c for c in conv if c.q <= 33102])
    yield Check("effective exponent over q <= 33102 in (2, 3.5)", mu, 3.5, 2.0 < mu < 3.5)

    ex = elliptic.full_expansion(1, 10_000, 2)
    yield _check("elliptic pair expansion over [1, 1e4]", _rel(ex.value, ex.direct), 1e-9)
    yield Check("kappa_total = 1e4", abs(ex.kappa_total - 10_000), 0, ex.kappa_total == 10_000)
    yield Check("pair discriminants nonzero", ex.min_abs_discriminant, 0.0, ex.min_abs_discriminant > 0.0)
    worst = 0.0
    for lo in range(1, 200, 2):
        term = elliptic.ExpansionTerm.covering(*_pair(lo), lo, lo + 1)
        direct = series.partial_sum(series.FLINT_HILLS, lo, lo + 1).value
        worst = max(worst, _rel(elliptic.class_partial_sum(term), direct))
    yield _check("per-pair reconstruction for lambda <= 200", worst, 1e-10)

    t = np.linspace(1.0, 10.0, 10)
    slopes = [float(series.lambda_slope(x)) for x in t]
    yield Check("Lambda'(t) < 0 on [1, 10]", max(slopes), 0.0, max(slopes) < 0.0)
    flat = abs(float(series.lambda_slope(10001)))
    yield _check("|Lambda'(10001)| <= 1e-10", flat, 1e-10)

    s = series.split_S1_S2(355, 20, 8)
    c_min = math.cos(355 / 2.0**10) ** 2
    inside = s.s2_geometric <= float(s.s2) <= s.s2_geometric / c_min
    yield Check("S2 within its geometric bracket (n=355, m=20, L=8)", float(s.s2) / s.s2_geometric - 1, 1 / c_min - 1, inside)

    chi = series.character_series((1, 0, -1, 0), 2.0, 1000)
    direct = sum_arrays(np.array([(-1.0) ** k / (2 * k + 1) ** 2 for k in range(500)]))
    yield _check("character series (1,0,-1,0) equals its odd-term sum", _rel(chi, direct), 1e-15)

    env = ResultEnvelope("lambda", {"sigma": 10001}, {"value": lam_b, "f": Fraction(1, 3)}, {"x": [1.5, 2]})
    rt = ResultEnvelope.from_json(env.to_json())
    yield Check("JSON envelope round trip", 0.0, 0.0, rt.to_dict() == env.to_dict())


def _pair(lo: int):
    ah, al, bh, bl = elliptic.fit_pairs(np.array([lo]), np.array([lo + 1]))
    return HiPrecValue(ah[0], al[0]), HiPrecValue(bh[0], bl[0])


# ------------------------------------------------------------------ golden values

LAMBDA_10001 = 78.1160806386
CSC_TABLE = {1: 1.1884, 3: 7.08617, 22: 112.978, 333: 113.364, 355: 33173.7}


def _golden_checks():
    lam = series.lambda_bessel(10001)
    yield _check("Lambda(10001) = 78.1160806386", abs(float(lam) - LAMBDA_10001), 1e-4, value=float(lam))
    zt = series.zeta3_term()
    yield _check("(4/3) zeta(3) = 1.602742537", abs(float(zt) - 1.602742537), 1e-9, value=float(zt))
    d = bounds.delta_from_c1(LAMBDA_10001)
    yield _check("delta = 0.23294263", abs(float(d) - 0.23294263), 1e-6, value=float(d))
    yield _check("delta^2 = 0.054262268", abs(float(d * d) - 0.054262268), 1e-7, value=float(d * d))

    for n, published in CSC_TABLE.items():
        val = 1 / abs(float(sin(n)))
        ok = _sig4(val) == _sig4(published)
        yield Check(f"|csc({n})| = {published}", abs(val - published) / published, 5e-4, ok, detail={"value": val})

    nums = [c.p for c in diophantine.convergents_of(count=6)]
    want = [3, 22, 333, 355, 103993, 104348]
    yield Check("first six convergent numerators of pi", float(nums != want), 0.0, nums == want, detail={"numerators": nums})

    spikes = [n for n, _ in series.spike_records(120_000)]
    yield Check("record indices of |csc(n)| up to 355", 0.0, 0.0, spikes[:5] == [1, 3, 22, 333, 355], detail={"records": spikes})

    # published values that do not reproduce
    rep = bounds.double_sided_bounds(10001)
    c = rep.components
    yield _erratum("middle term (upper) published as 5.55e-15", float(c["middle_upper"]), 5.55e-15)
    yield _erratum("middle term (lower) published as 5.55e-16", float(c["middle_lower"]), 5.55e-16)
    yield _erratum("(2 sqrt3/(3 pi)) Lambda published as 28.6893", float(c["lambda_term"]), 28.6893)
    yield _erratum("-(2/3) psi'(10001)^2 published as 1.55e-10", float(c["psi1_squared_term"]), 1.55e-10)
    yield _erratum("lower bound at sigma=10001 published as 30.284206291623365", float(rep.lower), 30.284206291623365)
    yield _erratum("upper bound at sigma=10001 published as 30.292042537", float(rep.upper), 30.292042537)
    val = 1 / abs(float(sin(103993)))
    yield _erratum("|csc(103993)| published as 33173.7", val, 33173.7)
    yield _erratum("record set up to 120000 published without 104348", float(104348 in spikes), 0.0,
                   records=spikes)
    yield Check("Psi(10001) inside the computed bounds", float(rep.psi_value - rep.upper), 0.0, rep.inside, "observation",
                {"lower": float(rep.lower), "psi": float(rep.psi_value), "upper": float(rep.upper)})


def _erratum(name, measured, published, **extra) -> Check:
    return Check(name, measured, published, False, "erratum", {"published": published, "computed": measured, **extra})


# ------------------------------------------------------------------ driver


def run_suite(suite: str) -> list[Check]:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; expected one of {SUITES}")
    out = []
    gens = []
    if suite in ("identities", "all"):
        gens.append(_identity_checks)
    if suite in ("golden", "all"):
        gens.append(_golden_checks)
    for g in gens:
        for chk in g():
            out.append(chk)
    return out


def summarize(checks: list[Check], elapsed: float) -> dict:
    hard = [c for c in checks if c.kind == "check"]
    failed = [c.name for c in hard if not c.passed]
    return {
        "passed": not failed,
        "n_checks": len(hard),
        "n_failed": len(failed),
        "failed": failed,
        "n_errata": sum(c.kind == "erratum" for c in checks),
        "elapsed_s": round(elapsed, 3),
    }


def timed_run(suite: str):
    t0 = time.perf_counter()
    checks = run_suite(suite)
    return checks, summarize(checks, time.perf_counter() - t0)
