"""Command-line front end.

Subcommands: ``verify``, ``special-value``, ``decay``, ``invariance`` and
``chain``. Settings come from a flat ``key=value`` config file (path from
``--config`` or the ``GEOPERIOD_CONFIG`` environment variable), overridden by
flags. Exit codes: 0 success, 1 failed check, 2 configuration or input
error.
"""

import argparse
import csv
import io
import json
import math
import os
import re
import sys
from dataclasses import dataclass, fields
from typing import Optional

from .errors import ConvergenceRegionError, DomainError, GeoPeriodError, PoleError

CONFIG_ENV = "GEOPERIOD_CONFIG"
CSV_HEADER = ("lambda", "nuprime_im", "abs_ell", "abs_ell_sq", "envelope", "ratio", "b_value")
EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class ConfigError(GeoPeriodError, ValueError):
    """Invalid configuration or command-line input."""


@dataclass(frozen=True)
class RunConfig:
    """Run settings shared by all subcommands.

    ``tol_1d`` is the pass threshold for one-dimensional oracles (complex
    orders get ten times more), ``tol_nd`` for multidimensional quadrature.
    ``eval_budget`` is validated and kept for callers that cap integrand
    evaluations; the built-in suites use fixed rule schedules.
    """

    tol_1d: float = 1e-7
    tol_nd: float = 1e-4
    seed: int = 0
    eval_budget: int = 10_000_000
    output_format: str = "json"
    output_path: Optional[str] = None

    def validate(self):
        for name in ("tol_1d", "tol_nd"):
            v = getattr(self, name)
            if not (isinstance(v, float) and 0.0 < v < 1.0):
                raise ConfigError(f"{name} must lie in (0, 1), got {v!r}")
        if self.eval_budget < 10_000:
            raise ConfigError(f"eval_budget must be >= 1e4, got {self.eval_budget}")
        if self.output_format not in ("json", "csv"):
            raise ConfigError(f"output_format must be json or csv, got {self.output_format!r}")
        return self


_FIELD_TYPES = {"tol_1d": float, "tol_nd": float, "seed": int, "eval_budget": int,
                "output_format": str, "output_path": str}


def _coerce(key, value):
    if key not in _FIELD_TYPES:
        raise ConfigError(f"unknown config key {key!r}")
    typ = _FIELD_TYPES[key]
    try:
        if typ is int:
            f = float(value)
            if not f.is_integer():
                raise ValueError
            return int(f)
        return typ(value)
    except (TypeError, ValueError):
        raise ConfigError(f"bad value for {key}: {value!r}") from None


def read_config_file(path):
    """Parse ``key=value`` lines; ``#`` starts a comment."""
    out = {}
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    for k, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{k}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key] = _coerce(key, value)
    return out


def build_config(args, environ=None):
    """Defaults, then the config file, then flags."""
    environ = os.environ if environ is None else environ
    values = {}
    path = getattr(args, "config", None) or environ.get(CONFIG_ENV)
    if path:
        values.update(read_config_file(path))
    for f in fields(RunConfig):
        v = getattr(args, f.name, None)
        if v is not None:
            values[f.name] = _coerce(f.name, v)
    return RunConfig(**values).validate()


_COMPLEX_CHARS = re.compile(r"^[0-9eE.+\-j]+$")


def parse_complex(text):
    """Parse ``a+bi`` with optional parts: ``3``, ``7i``, ``0+7i``, ``-1.5-2e-1i``."""
    s = str(text).strip().replace("i", "j")
    # a bare unit: "j", "+j", "2-j"
    s = re.sub(r"(^|[+-])j$", r"\g<1>1j", s)
    if not _COMPLEX_CHARS.match(s):
        raise ConfigError(f"cannot parse complex number {text!r} (format a+bi)")
    try:
        return complex(s)
    except ValueError:
        raise ConfigError(f"cannot parse complex number {text!r} (format a+bi)") from None


# ---------------------------------------------------------------------------
# output


def _fmt(x):
    return f"{x:.12g}"


def _emit(text, config):
    if config.output_path:
        with open(config.output_path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _reports_text(reports, config):
    if config.output_format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["identity_id", "rel_residual", "tol", "pass"])
        for r in reports:
            w.writerow([r.identity_id, _fmt(r.rel_residual), _fmt(r.tol), int(r.passed)])
        return buf.getvalue()
    return json.dumps([r.as_dict() for r in reports], indent=1) + "\n"


def _complex_json(z):
    z = complex(z)
    return {"re": z.real, "im": z.imag}


# ---------------------------------------------------------------------------
# subcommands


def cmd_verify(suite, config, draws=50):
    """Run one or all report suites; exit 0 iff every report passes."""
    from . import verify

    reports = []
    if suite in ("appendix", "all"):
        for key in verify.IDENTITIES:
            reports.extend(verify.sweep(key, draws, seed=config.seed, tol=config.tol_1d))
    if suite in ("forms", "all"):
        reports.extend(verify.forms_suite(tol_1d=config.tol_1d, tol_nd=config.tol_nd))
    if suite in ("geometry", "all"):
        for n in (3, 4, 5):
            reports.extend(verify.geometry_suite(n, count=100, seed=config.seed,
                                                 tol=min(1e-9, 1e-2 * config.tol_1d),
                                                 tol_quad=config.tol_nd))
    _emit(_reports_text(reports, config), config)
    failed = [r for r in reports if not r.passed]
    print(f"{len(reports)} reports, {len(failed)} failed", file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


def cmd_special_value(n, m, nu, nuprime, config):
    """Print the closed form, its classification and, inside the
    convergence region, the direct-quadrature cross-check."""
    from .forms import FormParams, classify, ell_mod_closed, ell_mod_direct
    from .repr import spherical_vector

    p = FormParams(n, m, nu, nuprime)
    v = classify(p)
    value = ell_mod_closed(p)
    rec = {"n": n, "m": m, "nu": _complex_json(p.nu), "nuprime": _complex_json(p.nuprime),
           "value": _complex_json(value), "in_convergence_region": v.in_convergence_region}
    status = EXIT_OK
    if v.in_convergence_region:
        f2 = None if m == 1 else spherical_vector(p.rep_prime())
        d = ell_mod_direct(spherical_vector(p.rep()), f2, p, tol=min(1e-5, 0.1 * config.tol_nd))
        direct = d.value * (2.0 if m == 1 else 1.0)
        res = abs(direct - value) / abs(value)
        rec.update(direct=_complex_json(direct), residual=res, passed=bool(res <= config.tol_nd))
        if res > config.tol_nd:
            status = EXIT_FAIL
    else:
        rec["note"] = "continuation-only value: no direct oracle"
    _emit(json.dumps(rec, indent=1) + "\n", config)
    return status


def decay_rows(n, m, nu, t_min, t_max, step):
    """Rows of the decay table; a failed row holds NaN and an error string."""
    from .asym import b_coefficient, sharpness_scan, t_grid

    ts = t_grid(t_min, t_max, step)
    rows = []
    for t in ts:
        try:
            (rec,) = sharpness_scan(n, m, nu, [t])
            a = abs(rec.ell_value)
            rows.append(((rec.lam, rec.t, a, a * a, rec.envelope, rec.ratio,
                          b_coefficient(rec.ell_value, rec.lam)), None))
        except GeoPeriodError as exc:
            lam = 0.25 * (m - 1) ** 2 + t * t
            rows.append(((lam, t) + (math.nan,) * 5, str(exc)))
    return rows


def cmd_decay(n, m, nu, t_min, t_max, step, config):
    """Write the decay table as CSV (12 significant digits)."""
    if not step > 0:
        raise ConfigError("step must be positive")
    if t_min > t_max:
        raise ConfigError("empty grid: t_min > t_max")
    if t_min < 1.0:
        raise ConfigError("the envelope needs t >= 1")
    rows = decay_rows(n, m, nu, t_min, t_max, step)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    errors = 0
    for vals, err in rows:
        w.writerow([_fmt(x) for x in vals])
        if err is not None:
            errors += 1
            print(f"row t={_fmt(vals[1])}: {err}", file=sys.stderr)
    _emit(buf.getvalue(), config)
    return EXIT_FAIL if errors == len(rows) else EXIT_OK


def cmd_invariance(n, m, nu, nuprime, count, config):
    from .forms import FormParams
    from .verify import invariance_suite

    reports = invariance_suite(FormParams(n, m, nu, nuprime), count=count, seed=config.seed,
                               tol=config.tol_nd)
    _emit(_reports_text(reports, config), config)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def cmd_chain(n, m, nu, nuprime, config):
    from .forms import FormParams, chain_verify

    steps = chain_verify(FormParams(n, m, nu, nuprime), tol=1e-8)
    out = [{"step": s.name, "value_from": _complex_json(s.value_from),
            "value_to": _complex_json(s.value_to), "residual": s.residual,
            "converged": s.converged} for s in steps]
    _emit(json.dumps(out, indent=1) + "\n", config)
    return EXIT_OK if all(s.residual <= config.tol_nd for s in steps) else EXIT_FAIL


# ---------------------------------------------------------------------------
# argument parsing


def _add_common(p):
    p.add_argument("--config", help=f"key=value config file (default ${CONFIG_ENV})")
    p.add_argument("--tol-1d", dest="tol_1d", type=float)
    p.add_argument("--tol-nd", dest="tol_nd", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--eval-budget", dest="eval_budget", type=int)
    p.add_argument("--format", dest="output_format", choices=("json", "csv"))
    p.add_argument("--output", "-o", dest="output_path")


def _add_params(p, prime=True):
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-m", type=int, required=True)
    p.add_argument("--nu", type=str, required=True)
    if prime:
        p.add_argument("--nuprime", type=str, required=True)


def build_parser():
    parser = argparse.ArgumentParser(prog="geoperiod",
                                     description="Special values of model invariant forms.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("verify", help="run identity report suites")
    p.add_argument("--suite", choices=("appendix", "forms", "geometry", "all"), default="all")
    p.add_argument("--draws", type=int, default=50)
    _add_common(p)
    p = sub.add_parser("special-value", help="closed-form special value and cross-check")
    _add_params(p)
    _add_common(p)
    p = sub.add_parser("decay", help="decay table along the unitary axis (CSV)")
    _add_params(p, prime=False)
    p.add_argument("--t-min", type=float, default=5.0)
    p.add_argument("--t-max", type=float, default=40.0)
    p.add_argument("--step", type=float, default=0.5)
    _add_common(p)
    p = sub.add_parser("invariance", help="invariance under random subgroup elements")
    _add_params(p)
    p.add_argument("--count", type=int, default=20)
    _add_common(p)
    p = sub.add_parser("chain", help="stage-by-stage derivation chain")
    _add_params(p)
    _add_common(p)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = build_config(args)
        if args.command == "verify":
            if args.draws < 1:
                raise ConfigError("draws must be >= 1")
            return cmd_verify(args.suite, config, draws=args.draws)
        nu = parse_complex(args.nu)
        if args.command == "decay":
            return cmd_decay(args.n, args.m, nu, args.t_min, args.t_max, args.step, config)
        nup = parse_complex(args.nuprime)
        if args.command == "special-value":
            return cmd_special_value(args.n, args.m, nu, nup, config)
        if args.command == "invariance":
            return cmd_invariance(args.n, args.m, nu, nup, args.count, config)
        return cmd_chain(args.n, args.m, nu, nup, config)
    except PoleError as exc:
        factor = f" [{exc.factor}]" if exc.factor else ""
        print(f"error: pole{factor}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConfigError, DomainError, ConvergenceRegionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
