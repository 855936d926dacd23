"""Command-line front end: ``thetamod {expand,verify,filtration}``.

Exit codes: 0 on success, 1 when a verification does not pass, 2 on usage
or precision errors.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from datetime import datetime, timezone

from . import eisenstein
from .checks import CHECKS, Grid, run_check
from .errors import ThetaModError
from .forms import default_precision, delta, weight_filtration
from .named import UnknownForm, load_form, resolve_form
from .qseries import QSeries, Zpm, theta_naive
from .thetapm import km, theta_pm

try:  # Python >= 3.11
    import tomllib
except ModuleNotFoundError:  # pragma: no cover - depends on interpreter
    import tomli as tomllib

log = logging.getLogger("thetamod")

SERIES = ["G2", "E2", "G", "E", "delta", "Gstar", "Gstar-direct", "theta", "form"]


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _str_list(text: str) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def _first(values, name):
    if values is None:
        raise UsageError(f"--{name} is required")
    return values[0]


class UsageError(Exception):
    pass


def _emit(payload, fmt: str, text: str) -> None:
    if fmt == "json":
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        print(text)


def _series_text(series: QSeries) -> str:
    width = len(str(series.precision - 1))
    lines = [f"# ring {series.ring}, precision {series.precision}"]
    lines += [f"{n:>{width}}  {c}" for n, c in enumerate(series.coeffs)]
    return "\n".join(lines)


def _ring(args):
    if args.p is None:
        return None
    return Zpm(args.p[0], args.m[0] if args.m else 1)


def cmd_expand(args) -> int:
    name = args.series
    ring = _ring(args)
    if name == "theta":
        p, m = _first(args.p, "p"), _first(args.m, "m")
        f = resolve_form(args.f or "delta")
        result = theta_pm(f, p, m)
        n = args.precision or default_precision(result.weight)
        series = result.output.expansion(n)
    elif name in ("Gstar", "Gstar-direct"):
        k, p, t = _first(args.k, "k"), _first(args.p, "p"), _first(args.t, "t")
        n = args.precision or 10
        build = eisenstein.G_star if name == "Gstar" else eisenstein.G_star_direct
        series = build(k, p, t, n)
    elif name in ("G2", "E2"):
        n = args.precision or 10
        series = getattr(eisenstein, name)(n)
        series = series.change_ring(ring) if ring else series
    elif name in ("G", "E"):
        k = _first(args.k, "k")
        n = args.precision or default_precision(k)
        series = getattr(eisenstein, name)(k, n)
        series = series.change_ring(ring) if ring else series
    elif name == "delta":
        n = args.precision or 10
        series = delta(n)
        series = series.change_ring(ring) if ring else series
    else:
        f = resolve_form(_first([args.f] if args.f else None, "f"))
        n = args.precision or default_precision(f.weight)
        series = f.expansion(n)
        series = series.change_ring(ring) if ring else series
    _emit(series.to_dict(), args.format, _series_text(series))
    return 0


def _grid_from(args) -> Grid:
    config = {}
    if args.config:
        with open(args.config, "rb") as fh:
            config = tomllib.load(fh)

    def pick(key, flag):
        if flag is not None:
            return flag
        value = config.get(key)
        if value is None:
            return None
        return value if isinstance(value, list) else [value]

    precision = args.precision if args.precision is not None else config.get("precision")
    return Grid(p=pick("p", args.p), m=pick("m", args.m), k=pick("k", args.k),
                t=pick("t", args.t), f=pick("f", args.f_list), ell=pick("ell", args.ell),
                precision=precision)


def cmd_verify(args) -> int:
    reports = run_check(args.check, _grid_from(args))
    passed = all(r.passed for r in reports)
    payload = {"check": args.check, "status": "pass" if passed else "fail",
               "reports": [r.to_dict() for r in reports]}
    if not args.reproducible:
        payload["timestamp"] = datetime.now(timezone.utc).isoformat()
    text = "\n".join(f"{r.status:>18}  {r.check}  "
                     + " ".join(f"{k}={v}" for k, v in sorted(r.to_dict()["params"].items()))
                     for r in reports)
    _emit(payload, args.format, text)
    return 0 if passed else 1


def cmd_filtration(args) -> int:
    p, m = _first(args.p, "p"), args.m[0] if args.m else 1
    if args.coords:
        f = load_form(args.coords)
        target, weight = f, f.weight
    elif args.f:
        name = args.f.strip().lower()
        if name == "g2":
            raise UsageError("g2 is not a modular form; it has no weight filtration")
        if name.startswith("theta:"):
            f = resolve_form(name.split(":", 1)[1])
            weight = f.weight + km(p, m)
            n = args.precision or 2 * default_precision(weight)
            target = theta_naive(f.expansion(n)).change_ring(Zpm(p, m))
        else:
            target = resolve_form(name)
            weight = target.weight
    else:
        raise UsageError("give a form with --f or --coords")
    report = weight_filtration(target, weight, p, m, args.precision)
    _emit(report.to_dict(), args.format,
          f"w_{p}^{m} = {report.w} (input weight {weight}; rejected {report.rejected_weights})")
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=_int_list, help="prime(s) p >= 5, comma separated")
    common.add_argument("--m", type=_int_list, help="exponent(s) m >= 1")
    common.add_argument("--k", type=_int_list, help="weight(s)")
    common.add_argument("--t", type=_int_list, help="exponent t of the modulus p^t")
    common.add_argument("--precision", type=int, help="number of q-expansion coefficients")
    common.add_argument("--format", choices=["json", "text"], default="json")
    common.add_argument("--reproducible", action="store_true",
                        help="omit timestamps so identical flags give identical output")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="thetamod", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    expand = sub.add_parser("expand", parents=[common], help="print a q-expansion")
    expand.add_argument("--series", choices=SERIES, required=True)
    expand.add_argument("--f", help="form name for --series theta/form")
    expand.set_defaults(func=cmd_expand)

    verify = sub.add_parser("verify", parents=[common], help="run a verification")
    verify.add_argument("check", choices=sorted(CHECKS) + ["all"])
    verify.add_argument("--f", dest="f_list", type=_str_list, help="form name(s)")
    verify.add_argument("--ell", type=_int_list, help="Hecke prime(s)")
    verify.add_argument("--config", help="TOML file pinning the grid (keys p, m, k, t, f, ell)")
    verify.set_defaults(func=cmd_verify)

    filtration = sub.add_parser("filtration", parents=[common], help="weight filtration")
    filtration.add_argument("--f", help="form name, e.g. delta, e4*delta, theta:delta")
    filtration.add_argument("--coords", help="JSON file with weight and coordinates")
    filtration.set_defaults(func=cmd_filtration)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, UnknownForm, KeyError, ValueError, OSError, ThetaModError) as exc:
        print(f"thetamod: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
