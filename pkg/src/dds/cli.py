"""``dds`` command-line interface.

Exit codes: 0 success, 1 verification failure, 2 domain error,
3 pole or common discontinuity, 64 usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__, bounds, diophantine, elliptic, series, special, verify
from .cache import ResultCache, cache_key
from .config import ConfigError, default_cache_dir, load_config
from .envelope import ResultEnvelope, dumps
from .errors import DDSError, DomainError, InternalConsistencyError, PoleError
from .precision import HiPrecValue

EXIT_OK, EXIT_VERIFY, EXIT_DOMAIN, EXIT_POLE, EXIT_USAGE = 0, 1, 2, 3, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        kwargs.setdefault("allow_abbrev", False)
        super().__init__(*args, **kwargs)

    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _dd(v: HiPrecValue) -> list:
    return [v.hi, v.lo]


# ------------------------------------------------------------------ commands


def _parse_weight(text: str | None):
    if not text:
        return None
    kind, _, body = text.partition(":")
    try:
        if kind == "periodic":
            return series.PeriodicWeight(tuple(float(c) for c in body.split(",")))
        if kind == "exp":
            return series.ExpWeight(float(body))
    except ValueError as exc:
        raise UsageError(f"bad --weight {text!r}: {exc}") from None
    raise UsageError(f"--weight must look like 'periodic:1,0,-1,0' or 'exp:-0.5', got {text!r}")


def cmd_sum(a, cfg):
    phase_pi = None
    if a.phase_pi:
        try:
            phase_pi = Fraction(a.phase_pi)
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"--phase-pi must be a fraction such as 1/3, got {a.phase_pi!r}") from None
    spec = series.SeriesSpec(a.kernel, a.v, a.s, a.phase, phase_pi, _parse_weight(a.weight))
    rep = series.partial_sum(spec, a.n_lo, a.n_hi, precision=cfg.precision, workers=a.workers)
    results = {"series": spec.describe(), "n_lo": a.n_lo, "n_hi": a.n_hi, "value": rep.value, "value_dd": _dd(rep.value)}
    diag = {
        "n_terms": rep.n_terms,
        "error_bound": rep.error_bound,
        "max_term": rep.max_term,
        "max_term_index": rep.max_term_index,
        "spikes": [[n, f] for n, f in rep.spikes],
        "precision_used": cfg.precision,
    }
    return results, diag


def cmd_lambda(a, cfg):
    lam, resid = series.lambda_bessel(a.sigma, with_residue=True)
    elem = series.lambda_elementary(a.sigma)
    rel = abs(float(lam - elem)) / max(abs(float(lam)), 1e-300)
    if rel > 1e-12:
        raise InternalConsistencyError(f"Bessel and elementary paths differ by {rel:.3e} relative")
    results = {"sigma": a.sigma, "lambda": lam, "lambda_dd": _dd(lam), "lambda_elementary": elem, "path_rel_diff": rel}
    return results, {"imag_residue": resid, "precision_used": "extended"}


def cmd_reconstruct(a, cfg):
    psi = series.psi_reconstruction(a.sigma)
    direct = series.partial_sum(series.FLINT_HILLS, 1, a.sigma - 1).value
    diff = psi - direct
    results = {"sigma": a.sigma, "psi": psi, "psi_dd": _dd(psi), "direct": direct, "difference": diff,
               "rel_difference": abs(float(diff)) / abs(float(direct))}
    return results, {"precision_used": "extended"}


def cmd_bounds(a, cfg):
    rep = bounds.double_sided_bounds(a.sigma)
    results = {"sigma": a.sigma, "lower": rep.lower, "upper": rep.upper, "psi": rep.psi_value, "inside": rep.inside,
               "components": rep.components}
    if a.pq_x is not None:
        pq = bounds.monotonic_PQ_check(a.pq_x)
        results["pq_check"] = {"x": pq.x, "lower": pq.lower, "value": pq.value, "upper": pq.upper, "satisfied": pq.satisfied}
    return results, {"precision_used": "extended"}


def _bound_results(rep):
    return {"lhs": rep.lhs, "rhs": rep.rhs, "satisfied": rep.satisfied, "margin": rep.margin, **rep.params}


def cmd_holder(a, cfg):
    return _bound_results(bounds.holder_truncated(a.p, a.n)), {"precision_used": "extended"}


def cmd_fermi(a, cfg):
    fp = special.fermi_dirac_F(a.p, a.x)
    results = {"p": a.p, "x": a.x, "F_p": fp, "F_p_dd": _dd(fp)}
    if a.x == 0.0:
        results["closed_form"] = (1 - HiPrecValue(2.0**-a.p)) * special.zeta(a.p + 1)
    diag = {"precision_used": "extended"}
    if a.n is not None:
        results["weighted_bound"] = _bound_results(bounds.fermi_weighted_holder(a.p, a.x, a.n))
        diag["note"] = "the weighted bound is an observation, not an instance of Hoelder's inequality"
    return results, diag


def cmd_spikes(a, cfg):
    digits = _digits(cfg)
    flags = dict(diophantine.spike_correlate(a.n_max, digits))
    recs = series.spike_records(a.n_max)
    rows = [{"n": n, "abs_csc": f, "convergent_numerator": flags[n]} for n, f in recs]
    return {"n_max": a.n_max, "rows": rows}, {"precision_used": "extended"}


def cmd_convergents(a, cfg):
    digits = _digits(cfg)
    conv = diophantine.convergents_of(digits, a.count)
    rows = [{"k": k, "p": c.p, "q": c.q, "abs_error": c.abs_error, "eff_exponent": c.eff_exponent}
            for k, c in enumerate(conv)]
    results = {"count": a.count, "rows": rows}
    usable = [c for c in conv if c.q >= 2 and c.error != 0]
    if usable:
        results["effective_mu"] = diophantine.effective_mu(usable)
        fc = diophantine.floor_constant_C(conv, a.exponent)
        results["floor_constant"] = {"exponent": a.exponent, "C": fc.value, "p": fc.p, "q": fc.q}
    results["historical_mu_pi"] = [{"upper_bound": m, "author": who, "year": y} for m, who, y in diophantine.HISTORICAL_MU_PI]
    return results, {"safe_depth": diophantine.safe_depth(diophantine.parse_digits(digits)), "precision_used": "exact"}


def cmd_elliptic(a, cfg):
    if a.members:
        cls = elliptic.fit_class([int(m) for m in a.members.split(",")])
        results = {"members": list(cls.members), "a": cls.a, "b": cls.b, "discriminant": cls.discriminant,
                   "residuals": cls.residuals, "exact": cls.exact}
        return results, {"precision_used": "extended"}
    ex = elliptic.full_expansion(a.n_lo, a.n_hi, a.chunk, a.offset)
    results = {"n_lo": a.n_lo, "n_hi": a.n_hi, "chunk": a.chunk, "offset": a.offset, "kappa_total": ex.kappa_total,
               "correction_sum": ex.correction_sum, "value": ex.value, "direct": ex.direct, "gap": ex.gap,
               "rel_gap": abs(float(ex.gap)) / abs(float(ex.direct))}
    diag = {"n_blocks": ex.n_blocks, "max_residual": ex.max_residual, "min_abs_discriminant": ex.min_abs_discriminant,
            "approximate_blocks": ex.approximate_blocks, "precision_used": "extended"}
    return results, diag


def cmd_slope_field(a, cfg):
    if not 0 < a.t_lo < a.t_hi:
        raise DomainError("need 0 < t_lo < t_hi")
    if a.steps < 2:
        raise DomainError("steps must be >= 2")
    rows = [{"t": float(t), "lambda_prime": series.lambda_slope(float(t))} for t in np.linspace(a.t_lo, a.t_hi, a.steps)]
    return {"rows": rows}, {"precision_used": "extended"}


def _digits(cfg) -> str:
    if cfg.pi_digits_path:
        return diophantine.load_digit_file(cfg.pi_digits_path)
    return diophantine.PI_DIGITS


COMMANDS = {
    "sum": cmd_sum,
    "lambda": cmd_lambda,
    "reconstruct": cmd_reconstruct,
    "bounds": cmd_bounds,
    "holder": cmd_holder,
    "fermi": cmd_fermi,
    "spikes": cmd_spikes,
    "convergents": cmd_convergents,
    "elliptic": cmd_elliptic,
    "slope-field": cmd_slope_field,
}


# ------------------------------------------------------------------ parser


def _global_flags(p: argparse.ArgumentParser, suppress: bool):
    d = argparse.SUPPRESS if suppress else None
    p.add_argument("--format", choices=("table", "json", "csv"), default=d)
    p.add_argument("--out", dest="out_path", metavar="PATH", default=d)
    p.add_argument("--precision", choices=("fast", "extended"), default=d)
    p.add_argument("--no-cache", action="store_true", default=argparse.SUPPRESS if suppress else False)
    p.add_argument("--cache-dir", metavar="DIR", default=d)
    p.add_argument("--pi-digits", dest="pi_digits_path", metavar="FILE", default=d)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="dds", description="Extended-precision evaluation of trigonometric Dirichlet series.")
    ap.add_argument("--version", action="version", version=f"dds {__version__}")
    _global_flags(ap, suppress=False)
    common = _Parser(add_help=False)
    _global_flags(common, suppress=True)
    sub = ap.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("sum", parents=[common], help="partial sum of a kernel series")
    p.add_argument("--kernel", choices=series.KERNELS, default="csc")
    p.add_argument("--v", type=float, default=2.0, help="kernel power")
    p.add_argument("--s", type=float, default=3.0, help="exponent of n in the denominator")
    p.add_argument("--phase", type=float, default=1.0, help="phase phi (argument is phi*n)")
    p.add_argument("--phase-pi", default=None, help="phase as a rational multiple of pi, e.g. 1/3")
    p.add_argument("--from", dest="n_lo", type=int, default=1)
    p.add_argument("--to", dest="n_hi", type=int, required=True)
    p.add_argument("--weight", default=None, help="periodic:c1,c2,... or exp:RATE")
    p.add_argument("--workers", type=int, default=None)

    for name, helptext in (("lambda", "Lambda(sigma) on both evaluation paths"),
                           ("reconstruct", "Psi(sigma) against the direct partial sum"),
                           ("bounds", "double-sided polygamma bounds at sigma")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--sigma", type=int, required=True)
        if name == "bounds":
            p.add_argument("--pq-x", type=float, default=None, help="also check the trigamma/tetragamma bound at x")

    p = sub.add_parser("holder", parents=[common], help="truncated Hoelder inequality")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("fermi", parents=[common], help="complete Fermi-Dirac integral F_p(x), x <= 0")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--x", type=float, default=0.0)
    p.add_argument("--n", type=int, default=None, help="also evaluate the weighted bound to N")

    p = sub.add_parser("spikes", parents=[common], help="running records of |csc(n)|")
    p.add_argument("--n-max", type=int, required=True)

    p = sub.add_parser("convergents", parents=[common], help="continued-fraction convergents of pi (or --pi-digits)")
    p.add_argument("--count", type=int, default=6)
    p.add_argument("--exponent", type=float, default=2.5, help="exponent for the floor constant C")

    p = sub.add_parser("elliptic", parents=[common], help="Weierstrass class fits and the polygamma expansion")
    p.add_argument("--from", dest="n_lo", type=int, default=1)
    p.add_argument("--to", dest="n_hi", type=int, default=10_000)
    p.add_argument("--chunk", type=int, default=2)
    p.add_argument("--offset", type=int, default=0)
    p.add_argument("--members", default=None, help="comma-separated members for a single class fit")

    p = sub.add_parser("slope-field", parents=[common], help="Lambda'(t) on a grid")
    p.add_argument("--t-lo", type=float, required=True)
    p.add_argument("--t-hi", type=float, required=True)
    p.add_argument("--steps", type=int, default=10)

    p = sub.add_parser("verify", parents=[common], help="run the self-check suites")
    p.add_argument("--suite", choices=verify.SUITES, required=True)
    return ap


# ------------------------------------------------------------------ driver

_CONFIG_KEYS = ("format", "out_path", "precision", "no_cache", "cache_dir", "pi_digits_path")
_NON_PARAMS = set(_CONFIG_KEYS) | {"command", "workers"}


def _emit(text: str, cfg) -> None:
    if cfg is not None and cfg.out_path:
        Path(cfg.out_path).write_text(text)
    else:
        sys.stdout.write(text)


def _error(exc: BaseException, code: int, fmt: str, cfg=None) -> int:
    kind = type(exc).__name__
    if fmt == "json":
        _emit(dumps({"error": {"type": kind, "message": str(exc), "exit_code": code}}) + "\n", cfg)
    print(f"dds: {kind}: {exc}", file=sys.stderr)
    return code


def _run_verify(a, cfg) -> int:
    checks, summary = verify.timed_run(a.suite)
    if cfg.format == "table":
        lines = []
        for c in checks:
            tag = {"check": "PASS" if c.passed else "FAIL", "erratum": "ERRATUM", "observation": "NOTE"}[c.kind]
            if c.kind == "erratum":
                lines.append(f"{tag:<8} {c.name}: computed {c.measured:.12g}, published {c.tolerance:.12g}")
            else:
                lines.append(f"{tag:<8} {c.name}: measured {c.measured:.6g} (tolerance {c.tolerance:.3g})")
        lines.append(f"{summary['n_checks'] - summary['n_failed']}/{summary['n_checks']} checks passed, "
                     f"{summary['n_errata']} errata, {summary['elapsed_s']} s")
        _emit("\n".join(lines) + "\n", cfg)
    else:
        env = ResultEnvelope("verify", {"suite": a.suite}, {"summary": summary, "rows": checks_as_rows(checks)}, {})
        _emit(env.render(cfg.format), cfg)
    return EXIT_OK if summary["passed"] else EXIT_VERIFY


def checks_as_rows(checks) -> list[dict]:
    return [{"name": c.name, "kind": c.kind, "measured": c.measured, "tolerance": c.tolerance, "passed": c.passed}
            for c in checks]


def _params(a, cfg) -> dict:
    params = {k: v for k, v in vars(a).items() if k not in _NON_PARAMS}
    params["precision"] = cfg.precision
    if a.command in ("spikes", "convergents") and cfg.pi_digits_path:
        params["digits_sha256"] = hashlib.sha256(_digits(cfg).encode()).hexdigest()
    return params


def main(argv=None) -> int:
    fmt = "table"
    cfg = None
    try:
        a = build_parser().parse_args(argv)
        fmt = getattr(a, "format", None) or fmt
        cfg = load_config({k: getattr(a, k, None) for k in _CONFIG_KEYS if getattr(a, k, None) not in (None, False)})
        fmt = cfg.format
        if a.command == "verify":
            return _run_verify(a, cfg)
        params = _params(a, cfg)
        cache = None if cfg.no_cache else ResultCache(cfg.cache_dir or default_cache_dir())
        key = cache_key(a.command, params, __version__)
        hit = cache.get(key) if cache else None
        if hit is not None:
            env = ResultEnvelope.from_dict(hit)
            env.diagnostics["cache_hit"] = True
        else:
            results, diag = COMMANDS[a.command](a, cfg)
            env = ResultEnvelope(a.command, params, results, diag)
            env = ResultEnvelope.from_dict(env.to_dict())
            if cache:
                cache.put(key, env.to_dict())
            env.diagnostics["cache_hit"] = False
        _emit(env.render(fmt), cfg)
        return EXIT_OK
    except UsageError as exc:
        return _error(exc, EXIT_USAGE, fmt, cfg)
    except ConfigError as exc:
        return _error(exc, EXIT_USAGE, fmt, cfg)
    except PoleError as exc:
        return _error(exc, EXIT_POLE, fmt, cfg)
    except InternalConsistencyError as exc:
        return _error(exc, EXIT_VERIFY, fmt, cfg)
    except (DDSError, ValueError, OverflowError) as exc:
        return _error(exc, EXIT_DOMAIN, fmt, cfg)
    except OSError as exc:
        return _error(exc, EXIT_DOMAIN, fmt, cfg)


if __name__ == "__main__":
    sys.exit(main())
