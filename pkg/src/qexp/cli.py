"""Command-line front door for the library.

Subcommands read channels, priors, sources, and matrices from JSON files,
run the requested computation or property-check suites, and emit JSON or
CSV.  Every run can record a manifest sidecar (command, inputs, parameters,
seed, tool version) so results are exactly replayable.  Values are in nats
unless --units bits is given; infinite values appear as the string "+inf"
because JSON has no infinity literal.

Exit codes: 0 success, 1 property-suite failure, 2 malformed input or
usage, 3 numerical failure (an optimizer or fixed point did not converge).
"""

import argparse
import csv
import dataclasses
import io
import json
import math
import sys

import numpy as np

from . import __version__
from .divergence import INF, DivergenceKind, divergence
from .matcalc import matrix_from_json, matrix_to_json
from .information import (
    CqChannel,
    MeanResult,
    NonConvergence,
    augustin_info,
    augustin_mean_petz,
    channel_from_json,
    prior_from_json,
    renyi_info,
    renyi_mean_petz,
)
from .exponents import (
    CqSource,
    ExponentOptions,
    ExponentResult,
    capacity,
    channel_exponent,
    channel_exponent_fixed_prior,
    e0,
    source_exponent,
)
from . import propcheck

LN2 = math.log(2.0)

_EXIT_OK = 0
_EXIT_SUITE_FAILURE = 1
_EXIT_BAD_INPUT = 2
_EXIT_NUMERICAL = 3

_KINDS = {
    "petz": DivergenceKind.PETZ,
    "sandwiched": DivergenceKind.SANDWICHED,
    "log-euclidean": DivergenceKind.LOG_EUCLIDEAN,
}


@dataclasses.dataclass(frozen=True)
class RunManifest:
    """Reproducibility record written alongside an output file."""

    command: str
    inputs: tuple
    parameters: dict
    seed: int
    tool_version: str = __version__

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "inputs": list(self.inputs),
            "parameters": dict(self.parameters),
            "seed": int(self.seed),
            "tool_version": self.tool_version,
        }


def _encode_value(x) -> object:
    x = float(x)
    if math.isinf(x):
        return "+inf" if x > 0 else "-inf"
    return x


def _parse_alpha(text: str) -> float:
    text = text.strip().lower()
    if text in ("inf", "+inf", "infinity", "oo"):
        return INF
    return float(text)


def _parse_grid(text: str) -> list[float]:
    """Grid spec: comma-separated values or start:stop:step (inclusive)."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid spec {text!r} is not start:stop:step")
        start, stop, step = (float(p) for p in parts)
        if step <= 0.0:
            raise ValueError("grid step must be positive")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        if count < 1:
            raise ValueError(f"grid spec {text!r} is empty")
        return [round(start + i * step, 12) for i in range(count)]
    return [_parse_alpha(p) for p in text.split(",") if p.strip()]


def _load_json(path: str) -> dict:
    with open(path, encoding="utf-8") as handle:
        return json.load(handle)


def _load_channel(path: str) -> CqChannel:
    return channel_from_json(_load_json(path))


def _load_prior(args, size: int) -> np.ndarray:
    if getattr(args, "uniform", False):
        return np.full(size, 1.0 / size)
    if getattr(args, "prior", None) is None:
        raise ValueError("provide a prior file or pass --uniform")
    return prior_from_json(_load_json(args.prior))


def _load_source(path: str) -> CqSource:
    obj = _load_json(path)
    try:
        prior = prior_from_json(obj["prior"])
        side = channel_from_json(obj["side_info"])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed source object: {exc}") from exc
    return CqSource(prior=prior, side_info=side)


def _unit_scale(args) -> float:
    return LN2 if args.units == "bits" else 1.0


def _emit(args, text: str, manifest: RunManifest) -> None:
    out = getattr(args, "out", None)
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)
            if not text.endswith("\n"):
                handle.write("\n")
        sidecar = out + ".manifest.json"
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
        sidecar = getattr(args, "manifest", None)
    if sidecar:
        with open(sidecar, "w", encoding="utf-8") as handle:
            json.dump(manifest.to_json(), handle, indent=2, sort_keys=True)
            handle.write("\n")


def _manifest(args, command: str, inputs, **parameters) -> RunManifest:
    parameters = {k: v for k, v in parameters.items() if v is not None}
    parameters["units"] = args.units
    return RunManifest(command=command,
                       inputs=tuple(p for p in inputs if p is not None),
                       parameters=parameters,
                       seed=int(getattr(args, "seed", 0) or 0))


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def cmd_divergence(args) -> int:
    rho = matrix_from_json(_load_json(args.rho))
    sigma = matrix_from_json(_load_json(args.sigma))
    kind = _KINDS[args.kind]
    scale = _unit_scale(args)
    alphas = [_parse_alpha(a) for a in args.alpha]
    values = [_encode_value(divergence(kind, rho, sigma, a) / scale)
              for a in alphas]
    payload = {
        "kind": args.kind,
        "values": [{"alpha": _encode_value(a), "value": v}
                   for a, v in zip(alphas, values)],
    }
    if len(values) == 1:
        payload["value"] = values[0]
    manifest = _manifest(args, "divergence", (args.rho, args.sigma),
                         kind=args.kind,
                         alpha=[_encode_value(a) for a in alphas])
    _emit(args, _dump(payload), manifest)
    return _EXIT_OK


def _mean_payload(args, result: MeanResult, scale: float) -> dict:
    return {
        "value": _encode_value(result.value / scale),
        "mean": matrix_to_json(result.mean),
        "iterations": int(result.iterations),
        "residual": _encode_value(result.residual),
    }


def cmd_info(args) -> int:
    channel = _load_channel(args.channel)
    prior = _load_prior(args, channel.size)
    kind = _KINDS[args.kind]
    alpha = _parse_alpha(args.alpha)
    scale = _unit_scale(args)
    info = renyi_info if args.i == 1 else augustin_info
    result = info(kind, prior, channel, alpha)
    payload = _mean_payload(args, result, scale)
    manifest = _manifest(args, "info", (args.channel, args.prior),
                         kind=args.kind, i=args.i,
                         alpha=_encode_value(alpha),
                         uniform=args.uniform or None)
    _emit(args, _dump(payload), manifest)
    return _EXIT_OK


def cmd_mean(args) -> int:
    channel = _load_channel(args.channel)
    prior = _load_prior(args, channel.size)
    alpha = _parse_alpha(args.alpha)
    scale = _unit_scale(args)
    if args.kind == "petz":
        mean = renyi_mean_petz if args.i == 1 else augustin_mean_petz
        result = mean(prior, channel, alpha)
    else:
        info = renyi_info if args.i == 1 else augustin_info
        result = info(_KINDS[args.kind], prior, channel, alpha)
    payload = _mean_payload(args, result, scale)
    manifest = _manifest(args, "mean", (args.channel, args.prior),
                         kind=args.kind, i=args.i,
                         alpha=_encode_value(alpha),
                         uniform=args.uniform or None)
    _emit(args, _dump(payload), manifest)
    return _EXIT_OK


def cmd_capacity(args) -> int:
    channel = _load_channel(args.channel)
    kind = _KINDS[args.kind]
    alpha = _parse_alpha(args.alpha)
    scale = _unit_scale(args)
    result = capacity(kind, args.i, channel, alpha)
    payload = {
        "value": _encode_value(result.value / scale),
        "argmax_prior": [float(p) for p in result.argmax_prior],
    }
    manifest = _manifest(args, "capacity", (args.channel,), kind=args.kind,
                         i=args.i, alpha=_encode_value(alpha))
    _emit(args, _dump(payload), manifest)
    return _EXIT_OK


def _csv_text(header, rows) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def cmd_e0_curve(args) -> int:
    channel = _load_channel(args.channel)
    prior = _load_prior(args, channel.size)
    kind = _KINDS[args.kind]
    scale = _unit_scale(args)
    grid = _parse_grid(args.s_grid)
    rows = [(_encode_value(s),
             _encode_value(e0(args.i, kind, s, prior, channel) / scale))
            for s in grid]
    manifest = _manifest(args, "e0-curve", (args.channel, args.prior),
                         kind=args.kind, i=args.i, s_grid=args.s_grid,
                         uniform=args.uniform or None)
    _emit(args, _csv_text(("s", "value"), rows), manifest)
    return _EXIT_OK


def _exponent_row(rate: float, result: ExponentResult,
                  scale: float) -> tuple:
    return (
        _encode_value(rate / scale),
        _encode_value(result.value / scale),
        "" if result.argmax_s is None else _encode_value(result.argmax_s),
        int(bool(result.unbounded)),
    )


def cmd_exponent(args) -> int:
    scale = _unit_scale(args)
    rates = [float(r) for spec in args.rate for r in _parse_grid(spec)]
    opts = (ExponentOptions() if args.seed is None
            else ExponentOptions(seed=int(args.seed)))
    rows = []
    if args.source is not None:
        source = _load_source(args.source)
        for rate in rates:
            rows.append(_exponent_row(
                rate, source_exponent(rate, source, opts), scale))
        inputs = (args.source,)
    else:
        if args.channel is None:
            raise ValueError("provide --channel or --source")
        channel = _load_channel(args.channel)
        if args.prior is None and not args.uniform:
            for rate in rates:
                rows.append(_exponent_row(
                    rate, channel_exponent(rate, channel, opts), scale))
        else:
            prior = _load_prior(args, channel.size)
            for rate in rates:
                rows.append(_exponent_row(
                    rate,
                    channel_exponent_fixed_prior(rate, prior, channel,
                                                 opts),
                    scale))
        inputs = (args.channel, args.prior)
    manifest = _manifest(args, "exponent", inputs, rate=args.rate,
                         uniform=args.uniform or None)
    _emit(args, _csv_text(("rate", "value", "argmax_s", "unbounded"), rows),
          manifest)
    return _EXIT_OK


_SUITE_ALIASES = {name.replace("_", "-"): name
                  for name in propcheck.ALL_SUITES}

_TRIAL_FIELDS = {
    "divergence_laws": "law_trials",
    "classical_reduction": "classical_trials",
    "prior_shape": "prior_shape_trials",
    "equicontinuity_renyi": "equicontinuity_trials",
    "equicontinuity_augustin": "equicontinuity_trials",
    "interpolation_petz": "interpolation_trials",
    "interpolation_product": "product_trials",
    "derivative_identities": "derivative_trials",
}


def _sanitize(obj):
    """Replace non-finite floats so the result is strict JSON."""
    if isinstance(obj, dict):
        return {k: _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return _encode_value(obj) if not math.isnan(obj) else "nan"
    return obj


def _report_json(report: propcheck.CheckReport) -> dict:
    return {
        "suite": report.suite,
        "instances": int(report.instances),
        "skipped": int(report.skipped),
        "max_violation": _sanitize(float(report.max_violation)),
        "tolerance": _encode_value(report.tolerance),
        "passed": bool(report.passed),
        "witnesses": _sanitize(list(report.witnesses)),
    }


def cmd_check(args) -> int:
    requested = [s.strip().lower() for s in args.suite]
    overrides: dict = {}
    if args.seed is not None:
        overrides["seed"] = int(args.seed)
    if "all" in requested:
        names = propcheck.ALL_SUITES
    elif requested == ["none"]:
        names = ()
    else:
        unknown = [s for s in requested
                   if s not in _SUITE_ALIASES and s not in
                   propcheck.ALL_SUITES]
        if unknown:
            raise ValueError(f"unknown suites: {', '.join(unknown)}")
        names = tuple(_SUITE_ALIASES.get(s, s) for s in requested)
    overrides["suites"] = names
    if args.trials is not None:
        for name in names:
            field = _TRIAL_FIELDS.get(name)
            if field:
                overrides[field] = int(args.trials)
    if args.dim is not None:
        d = int(args.dim)
        overrides["law_dims"] = (d,)
        overrides["channel_sizes"] = ((d, 2), (d, 3))
    config = propcheck.CheckConfig(**overrides)
    reports = propcheck.run_all(config)
    all_passed = all(r.passed for r in reports)
    payload = {
        "seed": config.seed,
        "suites": [_report_json(r) for r in reports],
        "passed": all_passed,
    }
    manifest = _manifest(args, "check", (), suites=list(names),
                         trials=args.trials, dim=args.dim)
    _emit(args, _dump(payload), manifest)
    return _EXIT_OK if all_passed else _EXIT_SUITE_FAILURE


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--units", choices=("nats", "bits"),
                        default="nats",
                        help="output unit for entropic values")
    parser.add_argument("--out", help="write the result to this file "
                        "instead of stdout (a manifest sidecar "
                        "<out>.manifest.json is written too)")
    parser.add_argument("--manifest", help="manifest path when printing "
                        "to stdout")
    parser.add_argument("--seed", type=int, default=None,
                        help="seed recorded in the manifest and used by "
                        "seeded computations")


def _add_prior_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--prior", help="prior JSON file")
    group.add_argument("--uniform", action="store_true",
                       help="use the uniform prior")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qexp",
        description="Renyi/Augustin information measures, capacities, "
                    "auxiliary functions, exponent transforms, and "
                    "property-check suites for classical-quantum "
                    "channels.")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("divergence",
                       help="order-alpha divergence of two operators")
    p.add_argument("rho", help="matrix JSON file")
    p.add_argument("sigma", help="matrix JSON file")
    p.add_argument("--kind", choices=sorted(_KINDS), required=True)
    p.add_argument("--alpha", action="append", required=True,
                   help="order (repeatable; inf allowed)")
    _add_common(p)
    p.set_defaults(func=cmd_divergence)

    p = sub.add_parser("info", help="order-alpha information of a channel")
    p.add_argument("channel", help="channel JSON file")
    _add_prior_flags(p)
    p.add_argument("--i", type=int, choices=(1, 2), required=True,
                   help="information type")
    p.add_argument("--kind", choices=sorted(_KINDS), required=True)
    p.add_argument("--alpha", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("mean", help="optimizing output state of an "
                       "information quantity")
    p.add_argument("channel", help="channel JSON file")
    _add_prior_flags(p)
    p.add_argument("--i", type=int, choices=(1, 2), required=True)
    p.add_argument("--kind", choices=sorted(_KINDS), required=True)
    p.add_argument("--alpha", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_mean)

    p = sub.add_parser("capacity", help="order-alpha capacity of a channel")
    p.add_argument("channel", help="channel JSON file")
    p.add_argument("--i", type=int, choices=(1, 2), required=True)
    p.add_argument("--kind", choices=sorted(_KINDS), required=True)
    p.add_argument("--alpha", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_capacity)

    p = sub.add_parser("e0-curve", help="auxiliary-function curve over s")
    p.add_argument("channel", help="channel JSON file")
    _add_prior_flags(p)
    p.add_argument("--i", type=int, choices=(1, 2), required=True)
    p.add_argument("--kind", choices=sorted(_KINDS), required=True)
    p.add_argument("--s-grid", required=True,
                   help="comma list or start:stop:step")
    _add_common(p)
    p.set_defaults(func=cmd_e0_curve)

    p = sub.add_parser("exponent", help="channel or source exponent curve "
                       "over rates")
    p.add_argument("--channel", help="channel JSON file")
    p.add_argument("--source", help="source JSON file "
                   '({"prior": ..., "side_info": ...})')
    _add_prior_flags(p)
    p.add_argument("--rate", action="append", required=True,
                   help="rate or rate grid (repeatable)")
    _add_common(p)
    p.set_defaults(func=cmd_exponent)

    p = sub.add_parser("check", help="run property-check suites")
    p.add_argument("--suite", action="append", default=None,
                   help='suite name (repeatable), "all", or "none"')
    p.add_argument("--trials", type=int, default=None,
                   help="override the per-suite trial count")
    p.add_argument("--dim", type=int, default=None,
                   help="output dimension for randomized channels")
    _add_common(p)
    p.set_defaults(func=cmd_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "check" and not args.suite:
        args.suite = ["all"]
    try:
        return args.func(args)
    except NonConvergence as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return _EXIT_NUMERICAL
    except (ValueError, KeyError, OSError,
            json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_BAD_INPUT
    except RuntimeError as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return _EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
