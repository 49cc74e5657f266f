"""Command-line interface: evaluation, reduction, uniformisation, shuffle algebra and verification.

All commands print one JSON document on stdout.  Errors are printed as
``{"error": {"code": ..., "message": ...}}`` on stderr.

Exit codes: 0 on success; for ``verify``, 1 + the index of the first failing
suite in ``SUITES``; 64 for malformed input; 65 for errors raised by the
numerical or symbolic modules.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import __version__, diffalg, gamma, hyperlog, shuffle, uniformize
from .config import SCHEMA, ConfigError, RunConfig, load_config, parse_complex
from .itint import Path, PathError, parse_path
from .kronecker import kronecker_g
from .lattice import SingularityError, eisenstein_function, eisenstein_series
from .verify import SUITES, run_suite

EXIT_USAGE = 64
EXIT_MODULE = 65


class UsageError(ValueError):
    pass


def _pair(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _emit(obj, cfg: RunConfig | None, stream=None) -> None:
    stream = stream or sys.stdout
    if cfg is not None and cfg.output == "text":
        for key, val in obj.items():
            print(f"{key}: {json.dumps(val, separators=(',', ':'))}", file=stream)
    else:
        print(json.dumps(obj, separators=(",", ":")), file=stream)


def _complex_arg(text: str, name: str) -> complex:
    try:
        return parse_complex(text)
    except ConfigError as exc:
        raise UsageError(f"--{name}: {exc}") from None


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


def cmd_eval_g(args, cfg: RunConfig) -> dict:
    ctx = cfg.context()
    z = _complex_arg(args.z, "z")
    a = _complex_arg(args.a, "a") if args.a is not None else 0j
    return {"value": _pair(kronecker_g(ctx, args.n, z, a))}


def cmd_eval_E(args, cfg: RunConfig) -> dict:
    ctx = cfg.context()
    if args.z is None:
        return {"value": _pair(eisenstein_series(ctx, args.r))}
    return {"value": _pair(eisenstein_function(ctx, args.r, _complex_arg(args.z, "z")))}


def _gamma_path(args, cfg: RunConfig, punctures):
    ctx = cfg.context()
    if args.path is not None:
        try:
            path = parse_path(args.path)
        except PathError as exc:
            raise UsageError(f"--path: {exc}") from None
        if args.z is not None and abs(_complex_arg(args.z, "z") - path.end) > 1e-12:
            raise UsageError("--z differs from the end point of --path")
        gamma.check_gamma_path(ctx, punctures, path)
        return ctx, path
    if args.z is None:
        raise UsageError("either --z or --path is required")
    return ctx, gamma.standard_path(ctx, punctures, _complex_arg(args.z, "z"), cfg.delta)


def cmd_eval_gamma(args, cfg: RunConfig) -> dict:
    punctures = cfg.puncture_set()
    try:
        word = shuffle.parse_word(args.word, punctures.label_map)
    except ValueError as exc:
        raise UsageError(f"--word: {exc}") from None
    ctx, path = _gamma_path(args, cfg, punctures)
    out: dict = {"method": args.method, "path": [_pair(v) for v in path.vertices]}
    if args.method in ("shuffle", "both"):
        val = gamma.gamma_shuffle(ctx, word, path, punctures)
        out["value"] = _pair(val)
        out["residual"] = {}
    if args.method in ("tangential", "both"):
        res = gamma.gamma_tangential(ctx, word, path, punctures)
        diag = {"fit_residual": res.fit_residual, "log_degree": len(res.log_polynomial) - 1}
        if args.method == "both":
            diag["route_difference"] = abs(res.value - val)
        else:
            out["value"] = _pair(res.value)
        out["residual"] = diag
    return out


def cmd_eval_hl(args, cfg: RunConfig) -> dict:
    punctures = cfg.puncture_set()
    try:
        word = hyperlog.parse_hl_word(args.word if args.word.strip().startswith(("[", "L")) else f"[{args.word}]",
                                      punctures.label_map)
    except ValueError as exc:
        raise UsageError(f"--word: {exc}") from None
    if args.path is not None:
        try:
            path = parse_path(args.path)
        except PathError as exc:
            raise UsageError(f"--path: {exc}") from None
    else:
        if args.z0 is None or args.z is None:
            raise UsageError("--z0 and --z (or --path) are required")
        path = Path((_complex_arg(args.z0, "z0"), _complex_arg(args.z, "z")))
    return {"value": _pair(hyperlog.hl_eval(cfg.context(), word, path, punctures))}


def cmd_reduce(args, cfg: RunConfig) -> dict:
    try:
        u = diffalg.parse_expression(args.expr)
    except diffalg.ExpressionError as exc:
        raise UsageError(f"--expr: {exc}") from None
    res = diffalg.reduce_mod_derivative(u)
    num = res.numeric(cfg.context())
    return {
        "c": _pair(num["c"]),
        "c_symbolic": diffalg.format_poly(res.c),
        "lambdas": {str(n): _pair(v) for n, v in num["lambdas"].items()},
        "lambdas_symbolic": {str(n): diffalg.format_poly(v) for n, v in sorted(res.lambdas.items())},
        "primitive": diffalg.format_poly(res.primitive),
    }


def cmd_uniformize(args, cfg: RunConfig) -> dict:
    a = [_complex_arg(x, name) for x, name in ((args.a1, "a1"), (args.a2, "a2"), (args.a3, "a3"))]
    u = uniformize.uniformize(*a)
    return {
        "tau": _pair(u.tau),
        "a": _pair(u.a),
        "b": _pair(u.b),
        "a_three_halves": _pair(u.a_three_halves),
        "j": _pair(uniformize.j_invariant(u.tau)),
        "residuals": dict(u.residuals),
    }


def _format_element(x: shuffle.ShuffleElement) -> str:
    if x.is_zero():
        return "0"
    parts = []
    for w in sorted(x.terms, key=shuffle._word_key):
        parts.append(f"{x.terms[w]}*G{shuffle.format_word(w)}")
    return " + ".join(parts)


def cmd_shuffle(args, cfg: RunConfig) -> dict:
    labels = cfg.puncture_set().label_map
    try:
        u = shuffle.ShuffleElement.word(shuffle.parse_word(args.u, labels))
        v = shuffle.ShuffleElement.word(shuffle.parse_word(args.v, labels)) if args.v is not None else None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.op == "product":
        if v is None:
            raise UsageError("--v is required for the product")
        return {"result": _format_element(u * v)}
    if args.op == "coproduct":
        terms = sorted(u.coproduct().items(), key=lambda kv: len(kv[0][0]))
        return {"result": " + ".join(
            f"{c}*G{shuffle.format_word(a)} (x) G{shuffle.format_word(b)}" for (a, b), c in terms
        )}
    if args.op == "antipode":
        return {"result": _format_element(shuffle.antipode(u))}
    poly = shuffle.star_decompose(u)
    return {"result": {str(k): _format_element(c) for k, c in enumerate(poly.coeffs) if not c.is_zero()}}


def cmd_verify(args, cfg: RunConfig) -> tuple[dict, int]:
    names = SUITES if args.suite == "all" else (args.suite,)
    reports = []
    code = 0
    for i, name in enumerate(SUITES):
        if name not in names:
            continue
        t0 = time.perf_counter()
        checks = run_suite(name, cfg)
        ok = all(c.passed for c in checks)
        rep = {"suite": name, "pass": ok, "checks": [c.to_dict() for c in checks]}
        if args.timing:
            rep["wall_time"] = time.perf_counter() - t0
        reports.append(rep)
        if not ok and code == 0:
            code = 1 + i
    doc = {
        "schema": SCHEMA,
        "suite": args.suite,
        "seed": cfg.seed,
        "config": cfg.to_dict(),
        "pass": code == 0,
        "suites": reports,
    }
    return doc, code


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # noqa: D401
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON configuration file (default: $ELLIPTIKIT_CONFIG)")
    common.add_argument("--tau", help="lattice parameter, RE,IM or a literal such as 0.5+1.5i")
    common.add_argument("--seed", type=int)
    common.add_argument("--output", choices=("json", "text"))

    p = _Parser(prog="elliptikit", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"elliptikit {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("eval-g", parents=[common], help="g_n(z - a)")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--z", required=True)
    s.add_argument("--a")

    s = sub.add_parser("eval-E", parents=[common], help="E_r(z), or e_r without --z")
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--z")

    s = sub.add_parser("eval-gamma", parents=[common], help="regularised iterated integral from 0")
    s.add_argument("--word", required=True)
    s.add_argument("--z")
    s.add_argument("--path")
    s.add_argument("--method", choices=("shuffle", "tangential", "both"), default="shuffle")

    s = sub.add_parser("eval-hl", parents=[common], help="elliptic hyperlogarithm from z0 to z")
    s.add_argument("--word", required=True)
    s.add_argument("--z0")
    s.add_argument("--z")
    s.add_argument("--path")

    s = sub.add_parser("reduce", parents=[common], help="reduce a polynomial in P, Q, X modulo derivatives")
    s.add_argument("--expr", required=True)

    s = sub.add_parser("uniformize", parents=[common], help="realise three branch points by half periods")
    for name in ("a1", "a2", "a3"):
        s.add_argument(f"--{name}", required=True)

    s = sub.add_parser("shuffle", parents=[common], help="shuffle algebra operations on words")
    s.add_argument("--op", choices=("product", "coproduct", "antipode", "decompose"), required=True)
    s.add_argument("--u", required=True)
    s.add_argument("--v")

    s = sub.add_parser("verify", parents=[common], help="run a verification suite")
    s.add_argument("--suite", choices=SUITES + ("all",), default="all")
    s.add_argument("--timing", action="store_true", help="include wall time (makes output non-deterministic)")
    return p


COMMANDS = {
    "eval-g": cmd_eval_g,
    "eval-E": cmd_eval_E,
    "eval-gamma": cmd_eval_gamma,
    "eval-hl": cmd_eval_hl,
    "reduce": cmd_reduce,
    "uniformize": cmd_uniformize,
    "shuffle": cmd_shuffle,
}

_MODULE_ERRORS = (
    (SingularityError, "singularity"),
    (PathError, "path_error"),
    (gamma.RegularizationError, "regularization_error"),
    (diffalg.ReductionError, "reduction_error"),
    (uniformize.UniformizationError, "uniformization_error"),
    (ValueError, "invalid_argument"),
)


def _error(code: str, message: str, exit_code: int) -> int:
    _emit({"error": {"code": code, "message": message}}, None, sys.stderr)
    return exit_code


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = load_config(args.config)
        cfg = cfg.with_overrides(
            tau=_complex_arg(args.tau, "tau") if args.tau else None, seed=args.seed, output=args.output
        )
    except UsageError as exc:
        return _error("usage", str(exc), EXIT_USAGE)
    except ConfigError as exc:
        return _error("config_error", str(exc), EXIT_USAGE)
    try:
        if args.command == "verify":
            doc, code = cmd_verify(args, cfg)
            _emit(doc, cfg)
            return code
        _emit(COMMANDS[args.command](args, cfg), cfg)
        return 0
    except (UsageError, ConfigError) as exc:
        return _error("parse_error", str(exc), EXIT_USAGE)
    except Exception as exc:
        for cls, code in _MODULE_ERRORS:
            if isinstance(exc, cls):
                return _error(code, str(exc), EXIT_MODULE)
        raise


if __name__ == "__main__":
    sys.exit(main())
