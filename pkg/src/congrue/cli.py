"""Command-line front end.

Each invocation reads one document (file path or standard input) and writes
one JSON document to standard output.  Exit codes: 0 success, 1 a check
returned false, 2 invalid or unsolvable input, 3 internal tripwire.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Any

from . import cgg, crt, eqvlat, newton, ultra
from .errors import CarrierTooLarge, CongrueError, InternalError, InvalidInput, NotPreserving, Unsolvable

EXIT_OK, EXIT_FALSE, EXIT_INVALID, EXIT_INTERNAL = 0, 1, 2, 3


def _range_arg(text: str) -> tuple[int, int]:
    try:
        lo, hi = text.split("..")
        lo_i, hi_i = int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo..hi, got {text!r}") from None
    if lo_i > hi_i:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo_i, hi_i


def _read_text(path: str | None) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InvalidInput(f"input: cannot read {path}: {exc.strerror}") from None


def _read_json(path: str | None) -> Any:
    text = _read_text(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"input: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def _load_function(doc: Any):
    """A NewtonPoly or PnSeries from its JSON form."""
    if isinstance(doc, dict) and doc.get("basis") == "pn":
        return cgg.series_from_json(doc)
    poly = newton.poly_from_json(doc)
    if isinstance(poly, newton.MonomialPoly):
        poly = newton.from_monomial(poly)
    return poly


def _values_doc(f, points) -> dict:
    return {"values": {str(x): str(f(x)) for x in sorted(points)}}


def _default_tower(f) -> int:
    if isinstance(f, cgg.PnSeries):
        return len(f)
    return f.degree + 1


def cmd_poly_check(args) -> tuple[dict, int]:
    f = _load_function(_read_json(args.input))
    if isinstance(f, cgg.PnSeries):
        out: dict[str, Any] = {"certified": cgg.certify_series(f)}
    else:
        out = {"certified": cgg.certify_newton(f)}
    if args.window:
        out["window"] = cgg.window_oracle(f, *args.window)
    ok = all(out.values())
    return out, EXIT_OK if ok else EXIT_FALSE


def cmd_poly_eval(args) -> tuple[dict, int]:
    f = _load_function(_read_json(args.input))
    if args.window:
        lo, hi = args.window
        points = range(lo, hi + 1)
    else:
        points = cgg.tower_interval(args.tower if args.tower is not None else _default_tower(f))
    return _values_doc(f, points), EXIT_OK


def cmd_poly_decompose(args) -> tuple[dict, int]:
    doc = _read_json(args.input)
    if isinstance(doc, dict) and "basis" in doc:
        f = _load_function(doc)
        n_terms = args.tower if args.tower is not None else _default_tower(f)
        return cgg.decompose(f, n_terms).to_json(), EXIT_OK
    if not isinstance(doc, dict) or not isinstance(doc.get("values"), dict):
        raise InvalidInput('values: expected an object {"x": "f(x)", ...}')
    values = _int_map(doc["values"], "values")
    n_terms = args.tower if args.tower is not None else cgg.tower_size_for(values)
    missing = [x for x in cgg.tower_interval(n_terms) if x not in values]
    if missing:
        raise InvalidInput(f"values: missing points {missing} of the tower A_{n_terms}")
    return cgg.decompose(values.__getitem__, n_terms).to_json(), EXIT_OK


def _int_map(obj: dict, where: str) -> dict[int, int]:
    out = {}
    for k, v in obj.items():
        x = newton._parse_int(k, f"{where} key {k!r}")
        out[x] = newton._parse_int(v, f"{where}[{k!r}]")
    return out


def cmd_map_extend(args) -> tuple[dict, int]:
    doc = _read_json(args.input)
    if not isinstance(doc, dict) or not isinstance(doc.get("points"), dict):
        raise InvalidInput('points: expected an object {"x": "f(x)", ...}')
    pm = crt.PartialMap(_int_map(doc["points"], "points"))
    try:
        series = crt.extend_to_polynomial(pm)
    except NotPreserving as exc:
        return {"not_preserving": [str(v) for v in exc.pair]}, EXIT_INVALID
    return series.to_json(), EXIT_OK


def cmd_crt_solve(args) -> tuple[dict, int]:
    lines = [ln for ln in _read_text(args.input).splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    system = []
    for i, ln in enumerate(lines):
        try:
            system.append(crt.parse_constraint(ln))
        except InvalidInput as exc:
            raise InvalidInput(f"constraint {i}: {exc}") from None
    try:
        sol = crt.solve(system)
    except Unsolvable as exc:
        return {"unsolvable": list(exc.pair)}, EXIT_INVALID
    return {"residue": str(sol.residue), "modulus": str(sol.modulus)}, EXIT_OK


def cmd_lattice_analyze(args) -> tuple[dict, int]:
    doc = _read_json(args.input)
    n = None
    if isinstance(doc, dict):
        n = doc.get("carrier")
        if n is not None and (not isinstance(n, int) or n < 1):
            raise InvalidInput("carrier: expected a positive integer")
        doc = doc.get("partitions")
    if not isinstance(doc, list):
        raise InvalidInput("partitions: expected a list of partitions")
    parts = [eqvlat.partition_from_json(p, n, where=f"partitions[{i}]") for i, p in enumerate(doc)]
    if n is None:
        if not parts:
            raise InvalidInput("carrier: required when the partition list is empty")
        n = parts[0].n
    for i, p in enumerate(parts):
        if p.n != n:
            raise InvalidInput(f"partitions[{i}]: carrier {p.n} differs from {n}")
    L = eqvlat.lattice_closure(parts, n)
    out: dict[str, Any] = {
        "carrier": n,
        "closure_size": len(L),
        "distributive": eqvlat.is_distributive(L),
        "commuting": all(eqvlat.commutes(p, q) for p in L for q in L),
    }
    out["arithmetical"] = out["distributive"] and out["commuting"]
    out["crc"] = eqvlat.crc_holds(L)
    try:
        out["dense"] = eqvlat.is_dense(L)
    except CarrierTooLarge:
        out["dense"] = None
    return out, EXIT_OK


def _read_semilattice(doc) -> tuple[ultra.FiniteSemilattice, Any]:
    if isinstance(doc, dict) and "semilattice" in doc:
        return ultra.semilattice_from_json(doc["semilattice"]), doc.get("space")
    return ultra.semilattice_from_json(doc), None


def cmd_ultra_analyze(args) -> tuple[dict, int]:
    V, space_doc = _read_semilattice(_read_json(args.input))
    out: dict[str, Any] = {"size": V.size, "residuated": ultra.is_residuated(V)}
    if V.meet is not None:
        out["distributive"] = ultra.lattice_is_distributive(V)
    if space_doc is not None:
        S = ultra.space_from_json(space_doc, V)
    elif out["residuated"]:
        S = ultra.dv_space(V)
    else:
        S = ultra.dvee_space(V)
    out["space"] = S.to_json()
    violations = ultra.verify_axioms(S)
    out["violations"] = [{"axiom": v.axiom, "points": list(v.points)} for v in violations]
    if violations:
        out["convex"] = out["hyperconvex"] = None
    else:
        out["convex"] = ultra.is_convex(S)
        out["hyperconvex"] = ultra.is_hyperconvex(S)
    return out, EXIT_OK


def cmd_ultra_represent(args) -> tuple[dict, int]:
    V, _ = _read_semilattice(_read_json(args.input))
    ok = ultra.representation_check(V)
    return {"representable": ok}, EXIT_OK if ok else EXIT_FALSE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="congrue", description=__doc__.splitlines()[0])
    parser.add_argument("--verbose", action="store_true", help="summary on standard error")
    groups = parser.add_subparsers(dest="group", required=True)

    def add(group, verb, func, help_, window=False, tower=False):
        p = group.add_parser(verb, help=help_)
        p.add_argument("input", nargs="?", help="input document (default: standard input)")
        p.add_argument("--verbose", action="store_true", default=argparse.SUPPRESS)
        if window:
            p.add_argument("--window", type=_range_arg, metavar="LO..HI")
        if tower:
            p.add_argument("--tower", type=int, metavar="N")
        p.set_defaults(func=func)

    poly = groups.add_parser("poly", help="integer-valued polynomials").add_subparsers(dest="verb", required=True)
    add(poly, "check", cmd_poly_check, "certify congruence preservation", window=True)
    add(poly, "eval", cmd_poly_eval, "evaluate on a window or tower", window=True, tower=True)
    add(poly, "decompose", cmd_poly_decompose, "P_n coefficients of values on A_N", tower=True)

    pmap = groups.add_parser("map", help="finite partial maps").add_subparsers(dest="verb", required=True)
    add(pmap, "extend", cmd_map_extend, "extend to a certified polynomial")

    crt_p = groups.add_parser("crt", help="Chinese remainder systems").add_subparsers(dest="verb", required=True)
    add(crt_p, "solve", cmd_crt_solve, "solve 'a mod r' lines")

    lat = groups.add_parser("lattice", help="sublattices of Eqv(A)").add_subparsers(dest="verb", required=True)
    add(lat, "analyze", cmd_lattice_analyze, "closure, distributivity, CRC, density")

    ul = groups.add_parser("ultra", help="ultrametric spaces over semilattices").add_subparsers(dest="verb", required=True)
    add(ul, "analyze", cmd_ultra_analyze, "axioms, convexity, hyperconvexity")
    add(ul, "represent", cmd_ultra_represent, "distributive lattice representation check")
    return parser


def run(argv: list[str] | None = None) -> tuple[int, str]:
    """Execute a command; returns (exit code, standard-output text)."""
    args = build_parser().parse_args(argv)
    try:
        doc, code = args.func(args)
    except InternalError as exc:
        doc, code = {"error": f"internal: {exc}"}, EXIT_INTERNAL
    except (CongrueError, InvalidInput) as exc:
        doc, code = {"error": str(exc)}, EXIT_INVALID
    if "error" in doc:
        print(f"congrue: {doc['error']}", file=sys.stderr)
    if args.verbose:
        summary = ", ".join(f"{k}={v}" for k, v in doc.items() if not isinstance(v, (dict, list)))
        print(f"congrue {args.group} {args.verb}: exit {code}; {summary}", file=sys.stderr)
    return code, json.dumps(doc, separators=(",", ":")) + "\n"


def main(argv: list[str] | None = None) -> int:
    code, text = run(argv)
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
