"""Command-line front end.

Exit codes: 0 success, 1 a checked property is violated, 2 usage or input
error, 3 search budget exhausted (the report says Unknown).
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys

from .constructions import (
    ConstructionBundle,
    apex_grid,
    build_bn,
    build_bn_prime,
    build_g,
    build_gg,
    pd_grid,
)
from .graph import UNBOUNDED, Graph, GraphError, complete_graph, cycle_graph, girth, grid_graph, path_graph, subdivide
from .io import FORMATS, dumps, read_graph, write_graph
from .lifting import (
    NormalizationError,
    SubdividedCliqueModel,
    check_claims,
    lift_to_bprime,
    normalize_model,
)
from .minors import Kind, MinorModel, find_model, verify_model
from .rig import RIGRepresentation, find_rig_representation, verify_representation
from .suite import CHECKS, run_suite
from .treedec import TreeDecomposition, verify_td

EXIT_OK = 0
EXIT_VIOLATED = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

BUDGET_ENV = "RIGBENCH_BUDGET"

FAMILIES = ("apex", "pd", "bn", "bnprime", "g", "gg", "complete", "cycle", "path", "grid")


class UsageError(Exception):
    pass


def _emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def generate(family: str, n: int, g: int | None) -> Graph | ConstructionBundle:
    if family == "apex":
        return apex_grid(n)
    if family == "pd":
        return pd_grid(n)
    if family == "bn":
        return build_bn(g or 1, n)
    if family == "bnprime":
        return build_bn_prime(g or 1, n)
    if family == "g":
        return build_g(n)
    if family == "gg":
        if g is None:
            raise UsageError("family gg needs --g")
        return build_gg(g, n)
    if family == "complete":
        return complete_graph(n)
    if family == "cycle":
        return cycle_graph(n)
    if family == "path":
        return path_graph(n)
    if family == "grid":
        return grid_graph(n, n)
    raise UsageError(f"unknown family {family}")


_NAMED = re.compile(r"^(k|c|p|a|grid)(\d+)(?:s(\d+))?$")


def named_graph(spec: str) -> Graph | None:
    """``k6``, ``c4``, ``p4``, ``a3`` (apex grid), ``grid3``; suffix ``s<l>`` subdivides, as in ``k6s1``."""
    m = _NAMED.match(spec.lower())
    if not m:
        return None
    kind, size, ell = m.group(1), int(m.group(2)), m.group(3)
    make = {"k": complete_graph, "c": cycle_graph, "p": path_graph, "a": apex_grid}
    g = grid_graph(size, size) if kind == "grid" else make[kind](size)
    return subdivide(g, int(ell)) if ell else g


def _read_text(source: str) -> str:
    if source == "-":
        return sys.stdin.read()
    with open(source, encoding="utf-8") as fh:
        return fh.read()


def load_graph(spec: str, fmt: str | None = None) -> Graph:
    """A file path, ``-`` for stdin, or a graph name accepted by ``named_graph``."""
    if spec != "-" and not os.path.exists(spec):
        g = named_graph(spec)
        if g is None:
            raise UsageError(f"no such file or graph name: {spec}")
        return g
    return read_graph(_read_text(spec), fmt)


def load_json(spec: str) -> dict:
    return json.loads(_read_text(spec))


def _budget(args) -> int | None:
    if args.budget is not None:
        return args.budget
    env = os.environ.get(BUDGET_ENV)
    if env:
        try:
            return int(env)
        except ValueError as exc:
            raise UsageError(f"{BUDGET_ENV} must be an integer") from exc
    return None


# ---------------------------------------------------------------------------
# subcommands


def cmd_gen(args) -> int:
    obj = generate(args.family, args.n, args.g)
    if isinstance(obj, ConstructionBundle):
        if args.format == "json":
            _emit(dumps(obj.to_dict()))
            return EXIT_OK
        obj = obj.graph
    _emit(write_graph(obj, args.format))
    return EXIT_OK


def cmd_convert(args) -> int:
    g = load_graph(args.input, args.source_format)
    _emit(write_graph(g, args.to))
    return EXIT_OK


def _outcome_report(out, as_json: bool) -> str:
    if as_json:
        payload = {"status": str(out), "nodes": out.nodes}
        if out.model is not None:
            payload["model"] = out.model.to_dict()
        return dumps(payload)
    return str(out)


def cmd_girth(args) -> int:
    g = load_graph(args.input)
    value = girth(g)
    _emit("Unbounded" if value is UNBOUNDED else str(value))
    return EXIT_OK


def _cmd_minor(args, kind: Kind) -> int:
    pattern = load_graph(args.pattern)
    host = load_graph(args.host)
    out = find_model(pattern, host, kind, budget=_budget(args), engine=args.engine)
    _emit(_outcome_report(out, args.json))
    return EXIT_BUDGET if out.unknown else EXIT_OK


def cmd_minor(args) -> int:
    return _cmd_minor(args, Kind.ORDINARY)


def cmd_induced_minor(args) -> int:
    return _cmd_minor(args, Kind.INDUCED)


def cmd_rig_find(args) -> int:
    g = load_graph(args.graph)
    host = load_graph(args.host)
    out = find_rig_representation(g, host, args.max_region, _budget(args))
    if args.json:
        payload = {"status": str(out), "nodes": out.nodes}
        if out.model is not None:
            payload["representation"] = out.model.to_dict()
        _emit(dumps(payload))
    else:
        _emit(str(out))
    return EXIT_BUDGET if out.unknown else EXIT_OK


def _verdict_report(verdict, extra: dict | None = None, as_json: bool = False) -> str:
    if as_json:
        payload = {"valid": verdict.ok, "reason": verdict.reason, "detail": verdict.detail}
        payload.update(extra or {})
        return dumps(payload)
    if verdict.ok:
        tail = "".join(f" {k}={v}" for k, v in (extra or {}).items())
        return "valid" + tail
    return f"invalid: {verdict.reason} ({verdict.detail})"


def cmd_verify_model(args) -> int:
    pattern = load_graph(args.pattern)
    host = load_graph(args.host)
    data = load_json(args.model)
    if "model" in data and "assignment" not in data:
        data = data["model"]
    model = MinorModel.from_dict(data)
    verdict = verify_model(pattern, host, model)
    _emit(_verdict_report(verdict, as_json=args.json))
    return EXIT_OK if verdict else EXIT_VIOLATED


def cmd_verify_rep(args) -> int:
    g = load_graph(args.graph)
    data = load_json(args.rep)
    if "representation" in data:
        data = data["representation"]
    verdict = verify_representation(g, RIGRepresentation.from_dict(data))
    _emit(_verdict_report(verdict, as_json=args.json))
    return EXIT_OK if verdict else EXIT_VIOLATED


def cmd_verify_td(args) -> int:
    g = load_graph(args.graph)
    td = TreeDecomposition.from_dict(load_json(args.td))
    verdict = verify_td(g, td)
    extra = {"width": verdict.width, "adhesion": verdict.adhesion} if verdict else {}
    _emit(_verdict_report(verdict, extra, args.json))
    return EXIT_OK if verdict else EXIT_VIOLATED


def cmd_lift(args) -> int:
    bundle = build_g(args.n) if args.g is None else build_gg(args.g, args.n)
    data = load_json(args.model)
    if "model" in data and "assignment" not in data:
        data = data["model"]
    model = MinorModel.from_dict(data)
    s = args.s
    if s is None:
        # K_s^(1) has s + s(s-1)/2 vertices
        k = len(model.assignment)
        s = next((t for t in range(2, k + 1) if t + t * (t - 1) // 2 == k), None)
        if s is None:
            raise UsageError("model size is not that of any K_s^(1)")
    m = SubdividedCliqueModel(s, model, bundle)
    payload: dict = {"s": s}
    try:
        m = normalize_model(m)
    except NormalizationError as exc:
        payload["normalization"] = {"ok": False, "reason": exc.reason}
        payload["claims"] = check_claims(exc.model).to_dict()
        _emit(dumps(payload))
        return EXIT_VIOLATED
    payload["normalization"] = {"ok": True, "model": m.model.to_dict()}
    result = lift_to_bprime(m)
    payload["lift"] = result.to_dict()
    _emit(dumps(payload))
    return EXIT_OK if result.valid else EXIT_VIOLATED


def cmd_paper_suite(args) -> int:
    only = None
    if args.only:
        try:
            only = {int(x) for x in args.only.split(",")}
        except ValueError as exc:
            raise UsageError("--only takes comma-separated check numbers") from exc
        if not only <= {c.number for c in CHECKS}:
            raise UsageError("unknown check number")
    rows = run_suite(args.level, only, args.jobs)
    width = max(len(c.name) for c, _, _ in rows)
    for check, res, secs in rows:
        line = f"{check.number:>2}  {check.name:<{width}}  {'PASS' if res.passed else 'FAIL'}  {res.detail}"
        if args.timings:
            line += f"  [{secs:.1f}s]"
        _emit(line)
    failed = sum(not res.passed for _, res, _ in rows)
    _emit(f"{len(rows) - failed}/{len(rows)} passed")
    return EXIT_OK if not failed else EXIT_VIOLATED


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rigbench",
        description="Build the apex-grid family and check minors, RIGs and tree decompositions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a graph or construction bundle")
    p.add_argument("family", choices=FAMILIES)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--g", type=int, default=None, help="subdivision parameter (bn, bnprime, gg)")
    p.add_argument("--format", choices=FORMATS, default="json")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("convert", help="convert a graph between formats")
    p.add_argument("input", nargs="?", default="-")
    p.add_argument("--to", choices=FORMATS, required=True)
    p.add_argument("--from", dest="source_format", choices=FORMATS, default=None)
    p.set_defaults(func=cmd_convert)

    check = sub.add_parser("check", help="run one check")
    csub = check.add_subparsers(dest="check", required=True)

    def common(q, budget=True):
        if budget:
            q.add_argument("--budget", type=int, default=None, help=f"node budget (default ${BUDGET_ENV})")
        q.add_argument("--json", action="store_true", help="machine-readable output")

    q = csub.add_parser("girth", help="girth of a graph")
    q.add_argument("input", nargs="?", default="-")
    q.set_defaults(func=cmd_girth)

    for name, func in (("minor", cmd_minor), ("induced-minor", cmd_induced_minor)):
        q = csub.add_parser(name, help=f"search for an {name} model")
        q.add_argument("--pattern", required=True)
        q.add_argument("--host", default="-")
        q.add_argument("--engine", choices=("auto", "python", "compiled"), default="auto")
        common(q)
        q.set_defaults(func=func)

    q = csub.add_parser("rig-find", help="search for a region intersection representation")
    q.add_argument("--graph", required=True)
    q.add_argument("--host", required=True)
    q.add_argument("--max-region", type=int, default=None)
    common(q)
    q.set_defaults(func=cmd_rig_find)

    q = csub.add_parser("verify-model", help="verify a minor model given as JSON")
    q.add_argument("--pattern", required=True)
    q.add_argument("--host", required=True)
    q.add_argument("--model", required=True)
    common(q, budget=False)
    q.set_defaults(func=cmd_verify_model)

    q = csub.add_parser("verify-rep", help="verify a region intersection representation")
    q.add_argument("--graph", required=True)
    q.add_argument("--rep", required=True)
    common(q, budget=False)
    q.set_defaults(func=cmd_verify_rep)

    q = csub.add_parser("verify-td", help="verify a tree decomposition")
    q.add_argument("--graph", required=True)
    q.add_argument("--td", required=True)
    common(q, budget=False)
    q.set_defaults(func=cmd_verify_td)

    q = csub.add_parser("lift", help="normalise and lift an induced K_s^(1) model of G into B'")
    q.add_argument("--model", required=True)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--g", type=int, default=None, help="use G_{g,n} instead of G")
    q.add_argument("--s", type=int, default=None)
    q.set_defaults(func=cmd_lift)

    p = sub.add_parser("paper-suite", help="run the verification battery")
    p.add_argument("--level", choices=("fast", "full"), default="fast")
    p.add_argument("--only", default=None, help="comma-separated check numbers")
    p.add_argument("--jobs", type=int, default=1, help="run checks in parallel processes")
    p.add_argument("--timings", action="store_true", help="append wall-clock times")
    p.set_defaults(func=cmd_paper_suite)
    return parser


def dispatch(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, GraphError, OSError, ValueError, KeyError) as exc:
        sys.stderr.write(f"rigbench: {exc}\n")
        return EXIT_USAGE


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
