"""Command-line interface: one subcommand per module, JSON in and out.

Exit codes
----------
0  success (``compat``: Compatible)
1  ``compat``: Incompatible; ``son-check``/``selftest``: a check failed
2  malformed or missing input
3  domain error
4  ``compat``: Undetermined
5  quadrature node budget exceeded
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import acceptance, circle, compat, polarizer, son, toeplitz
from .errors import BudgetExceededError, DomainError
from .fourier import FourierFunction
from .plane import SymMat2

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_DOMAIN, EXIT_UNDETERMINED, EXIT_BUDGET = 0, 1, 2, 3, 4, 5


class InputError(Exception):
    """Input could not be read or does not match the expected schema."""


def load_json(arg: str):
    """Inline JSON text, or a path to a JSON file."""
    text = arg.strip()
    path = Path(arg)
    if not text.startswith(("{", "[")):
        try:
            return json.loads(text)
        except json.JSONDecodeError:
            pass
        if not path.is_file():
            raise InputError(f"no such file: {arg}")
        text = path.read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc}") from None


def _require_keys(obj, required: set[str], optional: set[str] = frozenset(), what: str = "object"):
    if not isinstance(obj, dict):
        raise InputError(f"{what} must be a JSON object")
    unknown = set(obj) - required - set(optional)
    missing = required - set(obj)
    if unknown:
        raise InputError(f"unknown {what} keys: {sorted(unknown)}")
    if missing:
        raise InputError(f"missing {what} keys: {sorted(missing)}")
    for k, v in obj.items():
        if k != "harmonics" and not isinstance(v, (int, float, dict)):
            raise InputError(f"{what} key {k!r} must be numeric")
    return obj


def parse_fourier(arg: str) -> FourierFunction:
    obj = _require_keys(load_json(arg), set(), {"a0", "harmonics"}, "function")
    harm = obj.get("harmonics", [])
    if not isinstance(harm, list) or any(
        not isinstance(h, list) or len(h) != 3 or not all(isinstance(x, (int, float)) for x in h) for h in harm
    ):
        raise InputError("harmonics must be a list of [k, ck, sk] numbers")
    return FourierFunction.from_json(obj)


def parse_matrix(arg: str) -> SymMat2:
    m = load_json(arg)
    if not (isinstance(m, list) and len(m) == 2 and all(isinstance(r, list) and len(r) == 2 for r in m)):
        raise InputError("matrix must be [[a, b], [c, d]]")
    if not all(isinstance(x, (int, float)) for r in m for x in r):
        raise InputError("matrix entries must be numbers")
    return SymMat2.from_array(m)


def parse_effect(arg: str) -> compat.Effect:
    return compat.Effect.from_json(_require_keys(load_json(arg), {"alpha", "phi", "r"}, what="effect"))


def parse_float_list(arg: str, what: str) -> list:
    obj = load_json(arg)
    if not isinstance(obj, list) or not all(isinstance(x, (int, float)) for x in obj):
        raise InputError(f"{what} must be a JSON list of numbers")
    return obj


def _mat(m) -> list:
    arr = m.to_array() if isinstance(m, SymMat2) else np.asarray(m)
    return arr.tolist()


def _emit(obj, out: str | None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True, default=float)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def cmd_quantize(args) -> int:
    f = parse_fourier(args.f)
    q = circle.QuantizerConfig(args.r, args.phi0)
    a = circle.quantize(f, q, args.method, args.nodes)
    mean, cc, cs = circle.mean_and_doubled_fourier(f.shift(q.phi0))
    _emit({"matrix": _mat(a), "mean": mean, "C_c": cc, "C_s": cs}, args.output)
    return EXIT_OK


def cmd_symbol(args) -> int:
    a = parse_matrix(args.matrix)
    q = circle.QuantizerConfig(args.r, args.phi0)
    f = circle.lower_symbol(a, q) if args.kind == "lower" else circle.upper_symbol(a, q)
    _emit({"kind": args.kind, "symbol": f.to_json()}, args.output)
    return EXIT_OK


def cmd_toeplitz(args) -> int:
    f = parse_fourier(args.f)
    comp = toeplitz.toeplitz_compress(f, args.j)
    direct = circle.quantize(f, circle.QuantizerConfig(1.0, 0.0 if args.j == 1 else math.pi / 2))
    _emit({"j": args.j, "compressed": _mat(comp), "direct": _mat(direct),
           "residual": float(np.max(np.abs(comp - direct.to_array())))}, args.output)
    return EXIT_OK


def cmd_naimark(args) -> int:
    if args.partition:
        arcs = load_json(args.partition)
        if not isinstance(arcs, list) or not all(isinstance(p, list) and len(p) == 2 for p in arcs):
            raise InputError("partition must be a list of [a, b] arcs")
        rep = toeplitz.povm_additivity_check([(float(a), float(b)) for a, b in arcs])
        _emit({"residual": rep.residual, "min_eigenvalue": rep.min_eigenvalue, "traces": list(rep.traces)},
              args.output)
        return EXIT_OK
    if args.a is None or args.b is None:
        raise InputError("naimark needs --a and --b, or --partition")
    _emit({"F": _mat(toeplitz.arc_povm(args.a, args.b)),
           "compressed": _mat(toeplitz.compressed_indicator(args.a, args.b)),
           "residual": toeplitz.naimark_arc_check(args.a, args.b)}, args.output)
    return EXIT_OK


def cmd_compat(args) -> int:
    e1, e2 = parse_effect(args.e1), parse_effect(args.e2)
    holds, value = compat.necessary_condition(e1, e2)
    res = compat.compatibility_decide(e1, e2, args.tol)
    out = res.to_json()
    out.update({"necessary_value": value, "necessary_holds": holds,
                "effects": [e1.to_json(), e2.to_json()]})
    _emit(out, args.output)
    return {compat.Verdict.COMPATIBLE: EXIT_OK, compat.Verdict.INCOMPATIBLE: EXIT_FAIL,
            compat.Verdict.UNDETERMINED: EXIT_UNDETERMINED}[res.verdict]


def cmd_sequential(args) -> int:
    povm = compat.sequential_povm(args.first, args.second)
    out = {"plus": _mat(povm.plus), "minus": _mat(povm.minus)}
    if args.rho:
        p1, p0 = compat.sequential_probabilities(parse_matrix(args.rho), args.first, args.second)
        out.update({"p1": p1, "p0": p0})
    _emit(out, args.output)
    return EXIT_OK


def cmd_polarizer(args) -> int:
    obj = _require_keys(load_json(args.scenario), {"pointer", "beam", "device"}, what="scenario")
    _require_keys(obj["pointer"], {"s", "theta"}, what="pointer")
    _require_keys(obj["beam"], {"r", "phi"}, what="beam")
    _require_keys(obj["device"], {"r", "phi"}, what="device")
    res = polarizer.measure(polarizer.MeasurementScenario.from_json(obj))
    _emit(res.to_json(), args.output)
    return EXIT_OK


SON_TOL = {2: 1e-12, 3: 1e-8, 4: 1e-6}


def cmd_son_check(args) -> int:
    n = args.n
    nodes = None
    if args.nodes is not None:
        raw = load_json(args.nodes)
        if isinstance(raw, int):
            nodes = raw
        elif isinstance(raw, list) and all(isinstance(x, int) for x in raw):
            nodes = raw
        else:
            raise InputError("nodes must be an integer or a list of integers")
    grid = son.HaarGrid.build(n, nodes)
    eta = son.SimplexEta(tuple(parse_float_list(args.eta, "eta"))) if args.eta else son.SimplexEta((0.0,) * n)
    vol = son.haar_volume(n, grid)
    ident = son.resolution_identity_n(eta, grid)
    orth = son.matrix_element_orthonormality_n(grid)
    tol = args.tol if args.tol is not None else SON_TOL.get(n, 1e-6)
    # the full delta-delta relation does not hold for the abelian SO(2)
    orth_res = orth.row_residual if n == 2 else orth.max_residual
    ok = ident <= tol and orth_res <= tol and orth.zero_mean_residual <= tol
    _emit({"n": n, "nodes": list(grid.nodes), "grid_size": grid.size, "volume": vol.to_json(),
           "identity_residual": ident, "orthonormality_residual": orth.max_residual,
           "row_orthonormality_residual": orth.row_residual, "zero_mean_residual": orth.zero_mean_residual,
           "tolerance": tol, "passed": ok}, args.output)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_selftest(args) -> int:
    results = acceptance.run_all()
    if args.json:
        _emit({"passed": all(r.passed for r in results), "criteria": [r.to_json() for r in results]}, args.output)
    else:
        for r in results:
            print(r.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="planepovm", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("-o", "--output", help="write JSON here instead of stdout")
        sp.set_defaults(func=fn)
        return sp

    sp = add("quantize", cmd_quantize, "quantize a trigonometric polynomial on the circle")
    sp.add_argument("--f", required=True, help='function JSON {"a0": .., "harmonics": [[k, ck, sk], ..]} or file')
    sp.add_argument("--r", type=float, default=1.0, help="mixing parameter (default 1)")
    sp.add_argument("--phi0", type=float, default=0.0, help="orientation offset (default 0)")
    sp.add_argument("--method", choices=("exact", "trapezoid"), default="exact")
    sp.add_argument("--nodes", type=int, default=circle.DEFAULT_NODES, help="trapezoid nodes (default 64)")

    sp = add("symbol", cmd_symbol, "lower or upper symbol of a symmetric 2x2 matrix")
    sp.add_argument("kind", choices=("lower", "upper"))
    sp.add_argument("--matrix", required=True, help="[[a, b], [b, d]] or file")
    sp.add_argument("--r", type=float, default=1.0)
    sp.add_argument("--phi0", type=float, default=0.0)

    sp = add("toeplitz", cmd_toeplitz, "compress M_f onto O1 or O2")
    sp.add_argument("--f", required=True)
    sp.add_argument("--j", type=int, choices=(1, 2), default=1)

    sp = add("naimark", cmd_naimark, "arc POVM against the compressed indicator")
    sp.add_argument("--a", type=float)
    sp.add_argument("--b", type=float)
    sp.add_argument("--partition", help="list of [a, b] arcs covering [0, 2pi)")

    sp = add("compat", cmd_compat, "decide joint measurability of two effects")
    sp.add_argument("--e1", required=True, help='{"alpha": .., "phi": .., "r": ..} or file')
    sp.add_argument("--e2", required=True)
    sp.add_argument("--tol", type=float, default=1e-10, help="slack tolerance (default 1e-10)")

    sp = add("sequential", cmd_sequential, "POVM of two polarizers in sequence")
    sp.add_argument("--first", type=float, required=True)
    sp.add_argument("--second", type=float, required=True)
    sp.add_argument("--rho", help="density matrix for outcome probabilities")

    sp = add("polarizer", cmd_polarizer, "pointer-beam measurement probabilities")
    sp.add_argument("scenario", help='{"pointer": {"s","theta"}, "beam": {"r","phi"}, "device": {"r","phi"}}')

    sp = add("son-check", cmd_son_check, "SO(n) volume, identity and orthonormality residuals")
    sp.add_argument("--n", type=int, default=3)
    sp.add_argument("--eta", help="JSON list, sums to zero (default all zeros)")
    sp.add_argument("--nodes", help="nodes per angle: integer or JSON list (defaults: n=2,3: 16; n=4: 8)")
    sp.add_argument("--tol", type=float, help="pass tolerance (defaults: n=2 1e-12, n=3 1e-8, n=4 1e-6)")

    sp = add("selftest", cmd_selftest, "run the acceptance suite")
    sp.add_argument("--json", action="store_true", help="structured output")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
