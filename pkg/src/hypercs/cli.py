"""Command-line front end.

Exit codes: 0 success, 1 input or validation error, 2 numerical failure
or failed verification.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import re
import sys
from dataclasses import dataclass
from typing import Sequence

from . import kernels, states, verify
from .errors import InputError, NumericalError, ValidationError
from .model import CANONICAL, ModelParams, validate

__all__ = ["RunConfig", "parse_complex", "to_json", "build_parser", "main"]

_REAL = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX = re.compile(rf"(?P<re>[+-]?{_REAL})(?:(?P<im>[+-]{_REAL})i)?|(?P<pure>[+-]?{_REAL})i")
_L_MAX = 30


class _UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    params: ModelParams
    tol: float = 1e-10
    trunc: int | None = None
    output_format: str = "json"
    seed: int = 0


def parse_complex(text: str) -> complex:
    """Read ``a+bi``, ``a-bi``, a bare real or a bare imaginary ``bi``."""
    m = _COMPLEX.fullmatch(text.strip())
    if m is None:
        raise ValidationError(f"cannot parse complex literal {text!r}; use the form a+bi")
    if m.group("pure") is not None:
        return complex(0.0, float(m.group("pure")))
    return complex(float(m.group("re")), float(m.group("im") or 0.0))


def _fmt_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        return "null"
    return format(x, ".17g")


def to_json(obj) -> str:
    """Serialize with every float at 17 significant digits."""
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, complex):
        return to_json({"re": obj.real, "im": obj.imag})
    if isinstance(obj, str):
        return '"' + obj.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{to_json(str(k))}: {to_json(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(to_json(v) for v in obj) + "]"
    if hasattr(obj, "item"):
        return to_json(obj.item())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _coeff_list(state) -> list[dict]:
    return [{"re": float(c.real), "im": float(c.imag)} for c in state.coeffs]


def _write_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()) if rows else [], lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: (_fmt_float(v) if isinstance(v, float) else v) for k, v in row.items()})
    return buf.getvalue()


def _emit(cfg: RunConfig, payload: dict, rows: list[dict]) -> str:
    return to_json(payload) + "\n" if cfg.output_format == "json" else _write_csv(rows)


def cmd_state(cfg: RunConfig, kind: str, z: complex) -> str:
    build = states.bg_state if kind == "bg" else states.kp_state
    s = build(cfg.params, z, cfg.tol, trunc=cfg.trunc)
    payload = {
        "params": cfg.params.format(),
        "z": z,
        "kind": kind,
        "trunc": s.trunc,
        "coeffs": _coeff_list(s),
        "norm_residual": abs(s.norm() ** 2 - 1.0),
        "tail_bound": s.tail_bound,
    }
    rows = [{"n": n, "re": float(c.real), "im": float(c.imag)} for n, c in enumerate(s.coeffs)]
    return _emit(cfg, payload, rows)


def cmd_shift(cfg: RunConfig, eps: float, z: complex, lam: float, sigma: complex) -> str:
    shift = states.ShiftSpec(eps, z, lam, sigma)
    cmp = states.compare_routes(cfg.params, shift, cfg.tol, trunc=cfg.trunc)
    payload = {
        "params": cfg.params.format(),
        "eps": eps,
        "z": z,
        "lam": lam,
        "sigma": sigma,
        "trunc": cmp.direct.trunc,
        "direct": _coeff_list(cmp.direct),
        "sequential": _coeff_list(cmp.sequential),
        "max_gap": cmp.max_gap,
        "factor": cmp.factor,
        "factor_expected": cmp.factor_expected,
        "norm_module": cmp.norm_module,
        "norm_literal": cmp.norm_literal,
        "literal_gap": cmp.literal_gap,
    }
    rows = [
        {"n": n, "direct_re": float(d.real), "direct_im": float(d.imag), "sequential_re": float(s.real), "sequential_im": float(s.imag)}
        for n, (d, s) in enumerate(zip(cmp.direct.coeffs, cmp.sequential.coeffs))
    ]
    return _emit(cfg, payload, rows)


def cmd_overlap(cfg: RunConfig, z: complex, w: complex) -> str:
    kernel, inner = states.overlap_routes(cfg.params, z, w, min(cfg.tol, 1e-14))
    payload = {"params": cfg.params.format(), "z": z, "w": w, "kernel": kernel, "inner": inner, "gap": abs(kernel - inner)}
    rows = [{"kernel_re": kernel.real, "kernel_im": kernel.imag, "inner_re": inner.real, "inner_im": inner.imag, "gap": abs(kernel - inner)}]
    return _emit(cfg, payload, rows)


def cmd_moments(cfg: RunConfig, l_max: int) -> str:
    if not 0 <= l_max <= _L_MAX:
        raise ValidationError(f"--l-max must lie in 0..{_L_MAX}")
    mf = kernels.MomentFunctional(cfg.params)
    quad = kernels.has_kernel(cfg.params)
    rows = []
    for l in range(l_max + 1):
        row = {"l": l, "moment_exact": kernels.moment_exact(mf, l)}
        if quad:
            q = kernels.moment_quadrature(cfg.params, l, max(cfg.tol, 1e-12))
            row["moment_quadrature"] = q
            row["rel_gap"] = abs(q / row["moment_exact"] - 1.0)
        rows.append(row)
    payload = {"params": cfg.params.format(), "normalization": mf.normalization, "rows": rows}
    return _emit(cfg, payload, rows)


def cmd_verify(cfg: RunConfig, suite: str) -> tuple[str, int]:
    results = verify.run_suite(suite, cfg.params, cfg.seed)
    failed = sum(r.status != "pass" for r in results)
    payload = {"suite": suite, "params": cfg.params.format(), "checks": [r.as_dict() for r in results], "failed_count": failed}
    return _emit(cfg, payload, [r.as_dict() for r in results]), failed


def _tol(text: str) -> float:
    try:
        val = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid tolerance {text!r}")
    if not 0.0 < val <= 1e-2:
        raise argparse.ArgumentTypeError("tolerance must lie in (0, 1e-2]")
    return val


def _trunc(text: str) -> int | None:
    if text == "auto":
        return None
    try:
        val = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--trunc takes an integer or 'auto', got {text!r}")
    if not 1 <= val <= states.MAX_TRUNC:
        raise argparse.ArgumentTypeError(f"--trunc must lie in 1..{states.MAX_TRUNC}")
    return val


def _cplx(text: str) -> complex:
    try:
        return parse_complex(text)
    except ValidationError as exc:
        raise argparse.ArgumentTypeError(str(exc))


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}")


def _add_common(parser: argparse.ArgumentParser, suppress: bool) -> None:
    # accepted before or after the subcommand; the subcommand copy wins when given
    def default(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument("--params", default=default(CANONICAL.format()), help="family, e.g. 'p=0,q=1;a=;b=1.5'")
    parser.add_argument("--tol", type=_tol, default=default(1e-10), help="truncation tolerance in (0, 1e-2]")
    parser.add_argument("--trunc", type=_trunc, default=default(None), help="Fock truncation N or 'auto'")
    parser.add_argument("--format", dest="output_format", choices=("json", "csv"), default=default("json"))
    parser.add_argument("--seed", type=int, default=default(0), help="seed for randomized sweeps")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    _add_common(common, suppress=True)

    parser = _Parser(prog="hypercs", description="Generalized hypergeometric coherent states.")
    _add_common(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("state", parents=[common], help="coherent-state coefficients")
    p.add_argument("--kind", choices=("bg", "kp"), default="bg")
    p.add_argument("--z", type=_cplx, required=True)

    p = sub.add_parser("shift", parents=[common], help="shifted state by both routes")
    p.add_argument("--eps", type=float, default=1.0)
    p.add_argument("--z", type=_cplx, required=True)
    p.add_argument("--lam", type=float, default=1.0)
    p.add_argument("--sigma", type=_cplx, required=True)

    p = sub.add_parser("overlap", parents=[common], help="overlap <z|w> by both routes")
    p.add_argument("--z", type=_cplx, required=True)
    p.add_argument("--w", type=_cplx, required=True)

    p = sub.add_parser("moments", parents=[common], help="table of measure moments")
    p.add_argument("--l-max", type=int, default=10)

    p = sub.add_parser("verify", parents=[common], help="run an identity suite")
    p.add_argument("--suite", choices=verify.SUITES, default="all")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = RunConfig(validate(ModelParams.parse(args.params)), args.tol, args.trunc, args.output_format, args.seed)
        status = 0
        if args.command == "state":
            out = cmd_state(cfg, args.kind, args.z)
        elif args.command == "shift":
            out = cmd_shift(cfg, args.eps, args.z, args.lam, args.sigma)
        elif args.command == "overlap":
            out = cmd_overlap(cfg, args.z, args.w)
        elif args.command == "moments":
            out = cmd_moments(cfg, args.l_max)
        else:
            out, failed = cmd_verify(cfg, args.suite)
            status = 2 if failed else 0
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except InputError as exc:
        print(f"hypercs: input error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"hypercs: numerical error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(out)
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
