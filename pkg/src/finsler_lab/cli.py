"""Command-line front end.

    finsler-lab john    --body B.json [--tol T]
    finsler-lab bl      --body B.json [--method exact|montecarlo|auto] [--samples N] [--seed S]
    finsler-lab dist    --domain D.json --metric funk|rfunk|hilbert --from x,y --to x,y
    finsler-lab pathlen --domain D.json --metric funk|rfunk|hilbert|counterexample --from .. --to .. [--path P.json]
    finsler-lab zermelo-bl --domain OMEGA.json --from u1,u2
    finsler-lab verify  SUITE [--dim N] [--seed S] [--out report.csv] [--format csv|json]

Body arguments are JSON files, or inline JSON when the argument starts with
"{".  Exit codes: 0 pass, 1 check failure, 2 parse error, 3 numerical
failure, 4 domain error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .binet_legendre import bl_dual_metric, bl_metric, zermelo_bl_closed_form
from .bodies import (
    Body,
    EllipsoidBody,
    LinearImage,
    PBall,
    PolytopeH,
    PolytopeV,
    Symmetrized,
    Translate,
    default_directions,
    is_symmetric,
)
from .domain_geometry import (
    HilbertField,
    Polyline,
    counterexample_field,
    funk_distance,
    funk_field,
    hilbert_distance,
    path_length,
    reverse_funk_field,
    rfunk_distance,
)
from .errors import FinslerLabError
from .john import check_inclusion, max_inscribed_ellipsoid, shifted
from .verify import SUITES, run_suite

EXIT_OK, EXIT_CHECK, EXIT_PARSE, EXIT_NUMERIC, EXIT_DOMAIN = 0, 1, 2, 3, 4


class SpecError(ValueError):
    """Malformed input: bad JSON, unknown body type, missing or mistyped field."""


# ---------------------------------------------------------------------------
# body specs


def _array(obj: dict, key: str, ndim: int) -> np.ndarray:
    if key not in obj:
        raise SpecError(f"missing field {key!r} in {obj.get('type', 'body')} spec")
    try:
        a = np.asarray(obj[key], dtype=float)
    except (TypeError, ValueError) as exc:
        raise SpecError(f"field {key!r} must be numeric") from exc
    if a.ndim != ndim:
        raise SpecError(f"field {key!r} must be a {ndim}-d array")
    return a


def body_from_spec(obj) -> Body:
    """Build a body from its JSON description."""
    if not isinstance(obj, dict) or "type" not in obj:
        raise SpecError("a body spec must be an object with a 'type' field")
    kind = obj["type"]
    if kind == "polytope_h":
        return PolytopeH(_array(obj, "A", 2), _array(obj, "b", 1))
    if kind == "polytope_v":
        return PolytopeV(_array(obj, "vertices", 2))
    if kind == "pball":
        try:
            p, dim = float(obj["p"]), int(obj["dim"])
        except (KeyError, TypeError, ValueError) as exc:
            raise SpecError("pball needs numeric 'p' and integer 'dim'") from exc
        return PBall(p, dim)
    if kind == "ellipsoid":
        center = _array(obj, "center", 1)
        if "shape" in obj:
            return EllipsoidBody.from_shape(center, _array(obj, "shape", 2))
        return EllipsoidBody(center, _array(obj, "factor", 2))
    if kind in ("translate", "linear_image", "symmetrize"):
        if "inner" not in obj:
            raise SpecError(f"{kind} needs an 'inner' body")
        inner = body_from_spec(obj["inner"])
        if kind == "translate":
            return Translate(inner, _array(obj, "offset", 1))
        if kind == "linear_image":
            return LinearImage(inner, _array(obj, "map", 2))
        return Symmetrized(inner)
    raise SpecError(f"unknown body type {kind!r}")


def _load_json(arg: str):
    text = arg if arg.lstrip().startswith("{") else _read(arg)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise SpecError(f"cannot read {path}: {exc.strerror}") from exc


def load_body(arg: Optional[str], flag: str) -> Body:
    if not arg:
        raise SpecError(f"{flag} is required")
    return body_from_spec(_load_json(arg))


def parse_point(text: Optional[str], flag: str, dim: int) -> np.ndarray:
    if text is None:
        raise SpecError(f"{flag} is required")
    try:
        x = np.array([float(t) for t in text.split(",")])
    except ValueError as exc:
        raise SpecError(f"{flag} must be comma-separated reals") from exc
    if x.shape != (dim,) or not np.all(np.isfinite(x)):
        raise SpecError(f"{flag} must have {dim} finite coordinates")
    return x


# ---------------------------------------------------------------------------
# commands


def _meta(args) -> dict:
    return {"tool": "finsler_lab", "version": __version__, "command": args.command,
            "seed": args.seed, "samples": args.samples, "tol": args.tol}


def cmd_john(args) -> tuple[dict, int]:
    body = load_body(args.body, "--body")
    n = body.dim
    E = max_inscribed_ellipsoid(body, args.tol, args.seed)
    J0, Q = E.centered(), E.center
    dirs = default_directions(n, args.seed)
    local = shifted(body, Q)  # has the John point at the origin
    certs = [("john-inside", check_inclusion(J0, local, 1.0, dirs))]
    if body.origin_interior and is_symmetric(body, dirs):
        certs.append(("sym-sqrt-n", check_inclusion(body, E, math.sqrt(n), dirs)))
    else:
        certs.append(("john-point-n", check_inclusion(local, J0, float(n), dirs)))
        if body.origin_interior:
            certs.append(("centered-2n", check_inclusion(body, J0, 2.0 * n, dirs)))
            certs.append(("centered-improved", check_inclusion(body, J0, math.sqrt(2 * n * (n + 1)), dirs)))
    out = {"meta": _meta(args), "ellipsoid": E.to_json(), "radius": E.radius, "john_point": Q.tolist(),
           "cuts": E.cuts, "certificates": [dict(check_id=k, **c.to_json()) for k, c in certs]}
    return out, EXIT_OK if all(c.passed for _, c in certs) else EXIT_CHECK


def cmd_bl(args) -> tuple[dict, int]:
    body = load_body(args.body, "--body")
    g = bl_metric(body, args.method, args.samples, args.seed)
    dual = bl_dual_metric(body, args.method, args.samples, args.seed)
    out = {"meta": _meta(args), "metric": g.to_json(), "dual": dual.to_json(),
           "condition_number": g.condition_number}
    return out, EXIT_OK


_DISTANCES = {"funk": funk_distance, "rfunk": rfunk_distance, "hilbert": hilbert_distance}


def cmd_dist(args) -> tuple[dict, int]:
    domain = load_body(args.domain, "--domain")
    if args.metric not in _DISTANCES:
        raise SpecError(f"--metric must be one of {', '.join(_DISTANCES)}")
    p = parse_point(getattr(args, "from"), "--from", domain.dim)
    q = parse_point(args.to, "--to", domain.dim)
    d = float(_DISTANCES[args.metric](domain, p, q))
    return {"meta": _meta(args), "metric": args.metric, "from": p.tolist(), "to": q.tolist(),
            "distance": d}, EXIT_OK


def cmd_pathlen(args) -> tuple[dict, int]:
    if args.metric == "counterexample":
        dim = args.dim
        field = counterexample_field(dim)
    else:
        domain = load_body(args.domain, "--domain")
        dim = domain.dim
        makers = {"funk": funk_field, "rfunk": reverse_funk_field, "hilbert": HilbertField}
        if args.metric not in makers:
            raise SpecError("--metric must be funk, rfunk, hilbert or counterexample")
        field = makers[args.metric](domain)
    if args.path:
        obj = _load_json(args.path)
        try:
            path = Polyline.from_json(obj)
        except (KeyError, TypeError, ValueError) as exc:
            raise SpecError(f"bad polyline: {exc}") from exc
    else:
        path = Polyline.segment(parse_point(getattr(args, "from"), "--from", dim),
                                parse_point(args.to, "--to", dim))
    length = path_length(field, path)
    return {"meta": _meta(args), "metric": args.metric, "path": path.to_json(), "length": length}, EXIT_OK


def cmd_zermelo_bl(args) -> tuple[dict, int]:
    omega = load_body(args.domain, "--domain")
    u = parse_point(getattr(args, "from"), "--from", omega.dim)
    z = zermelo_bl_closed_form(omega, u, args.method, args.samples, args.seed)
    return {"meta": _meta(args), "u": u.tolist(), "gamma": omega.dim + 2, "metric": z.metric.tolist(),
            "T": z.T.tolist(), "beta": z.beta.tolist(), "pulled_back": z.pulled_back().tolist()}, EXIT_OK


def cmd_verify(args):
    rep = run_suite(args.suite, args.dim, args.seed, args.samples, args.tol)
    code = EXIT_OK if rep.passed else EXIT_CHECK
    if args.format == "json":
        return rep.to_json(), code
    text = rep.to_csv()
    if args.out:
        summary = Path(args.out).with_suffix(".summary.json")
        summary.write_text(json.dumps(rep.summary(), indent=2, sort_keys=True) + "\n")
    return text, code


COMMANDS = {"john": cmd_john, "bl": cmd_bl, "dist": cmd_dist, "pathlen": cmd_pathlen,
            "zermelo-bl": cmd_zermelo_bl, "verify": cmd_verify}


# ---------------------------------------------------------------------------
# entry point


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int, default=200_000)
    common.add_argument("--tol", type=float, default=None)
    common.add_argument("--out", default=None, help="output path (stdout when omitted)")
    common.add_argument("--format", choices=("json", "csv"), default=None)
    common.add_argument("--method", choices=("auto", "exact", "montecarlo"), default="auto")

    parser = _Parser(prog="finsler-lab", description="Binet-Legendre, John and Funk/Hilbert geometry tools.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = sub.add_parser("john", parents=[common], help="John ellipsoid with inclusion certificates")
    p.add_argument("--body")
    p = sub.add_parser("bl", parents=[common], help="Binet-Legendre metric")
    p.add_argument("--body")
    for name in ("dist", "pathlen", "zermelo-bl"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--domain")
        p.add_argument("--from", dest="from")
        p.add_argument("--to")
        if name != "zermelo-bl":
            p.add_argument("--metric", default="funk")
        if name == "pathlen":
            p.add_argument("--path", help="polyline JSON {points, order}")
            p.add_argument("--dim", type=int, default=2)
    p = sub.add_parser("verify", parents=[common], help="run a bounds suite")
    p.add_argument("suite", choices=SUITES)
    p.add_argument("--dim", type=int, default=2)
    return parser


def _emit(payload, args) -> None:
    if isinstance(payload, dict):
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    else:
        text = payload
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        payload, code = COMMANDS[args.command](args)
    except SpecError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except FinslerLabError as exc:
        kind = type(exc).__name__
        print(f"{kind}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC if isinstance(exc, RuntimeError) else EXIT_DOMAIN
    except (np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    _emit(payload, args)
    return code


if __name__ == "__main__":
    sys.exit(main())
