"""Command-line front end.

    substitutive info FILE
    substitutive prefix FILE N
    substitutive analyze FILE [trials=N]
    substitutive scan FILE {uniform,bounded-gap,abelian,factorization,powers} [key=value ...]

``FILE`` is a substitution file or the name of a bundled example
(``thue_morse``, ``ex1111``, ``dekking``, ``fibonacci``, ``tribonacci``,
``justin_pirillo``). ``analyze`` and ``scan`` write one JSON object per line.

Exit codes: 0 when no witness was found (or the output is informational),
2 when a witness was found, 3 when the window was too short, and 10 or more
for errors (11 usage, 12 bad input, 13 coloring not applicable).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from . import __version__
from .colorings import (
    ConstantColoring,
    FactorizationColoring,
    FrequencyColoring,
    IdentityColoring,
    UniformColoring,
)
from .errors import NoRadius, NoSeed, NotPrimitive, ParseError, PeriodicWord, SubstitutiveError, WindowExhausted
from .frequency import FrequencyVector
from .recognizability import check_presuf, estimate_recognizability_index
from .substitution import fixed_point, fixed_point_seeds, incidence_matrix, is_primitive, load_substitution
from .verifiers import (
    COVERS,
    NO_WITNESS,
    WITNESSES,
    Certificate,
    scan_abelian_powers,
    scan_bounded_gap_monochromatic,
    scan_powers,
    scan_uniform_monochromatic,
    search_monochromatic_factorization,
)

EXIT_OK = 0
EXIT_WITNESS = 2
EXIT_EXHAUSTED = 3
EXIT_INTERNAL = 10
EXIT_USAGE = 11
EXIT_INPUT = 12
EXIT_INAPPLICABLE = 13

SCANS = ("uniform", "bounded-gap", "abelian", "factorization", "powers")
DEFAULT_COLORING = {"uniform": "uniform", "bounded-gap": "frequency", "factorization": "factorization"}
MIN_WINDOW = 1024


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which would read as "witness found"
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--window", type=int, default=65536, help="window length W (>= 1024, default 65536)")
    common.add_argument("--seed", help="seed letter of the fixed point (default: first valid)")
    common.add_argument("--coloring", help="coloring spec, e.g. uniform:r=1,K=0 or frequency or factorization:K=0")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument(
        "--auto-grow", type=int, default=None, metavar="MAX_W", help="double the window on exhaustion up to MAX_W"
    )
    common.add_argument("--threads", type=int, default=1, help="accepted for compatibility; scans are vectorized")
    common.add_argument("--no-timing", action="store_true", help="report elapsed_ms as 0 for reproducible output")

    parser = _Parser(prog="substitutive", description="Fixed points of substitutions, colorings and scans.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = sub.add_parser("info", parents=[common], help="describe a substitution")
    p.add_argument("file")
    p = sub.add_parser("prefix", parents=[common], help="print u[1..N]")
    p.add_argument("file")
    p.add_argument("n", type=int)
    p = sub.add_parser("analyze", parents=[common], help="recognizability certificates")
    p.add_argument("file")
    p.add_argument("params", nargs="*", metavar="key=value")
    p = sub.add_parser("scan", parents=[common], help="run a scanner")
    p.add_argument("file")
    p.add_argument("scan", choices=SCANS)
    p.add_argument("params", nargs="*", metavar="key=value")
    return parser


def parse_params(items) -> dict[str, int]:
    out = {}
    for item in items or ():
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise UsageError(f"expected key=value, got {item!r}")
        try:
            out[key] = int(value)
        except ValueError:
            raise UsageError(f"parameter {key} must be an integer, got {value!r}") from None
    return out


def parse_coloring_spec(spec: str) -> tuple[str, dict[str, int]]:
    """``"uniform:r=1,K=0"`` -> ``("uniform", {"r": 1, "K": 0})``."""
    name, _, rest = spec.partition(":")
    params = parse_params([p for p in rest.split(",") if p]) if rest else {}
    if name not in ("uniform", "frequency", "factorization", "identity", "constant"):
        raise UsageError(f"unknown coloring {name!r}")
    return name, params


def make_coloring(spec: str, u):
    name, params = parse_coloring_spec(spec)
    allowed = {"uniform": {"r", "K"}, "factorization": {"K"}}.get(name, set())
    bad = set(params) - allowed
    if bad:
        raise UsageError(f"coloring {name} does not take {sorted(bad)}")
    if name == "uniform":
        if u.substitution.constant_length() is None:
            raise NoRadius("the uniform coloring needs a constant-length substitution")
        return UniformColoring.build(u, K=params.get("K"), r=params.get("r"))
    if name == "frequency":
        return FrequencyColoring.build(u.substitution)
    if name == "factorization":
        return FactorizationColoring.build(u, K=params.get("K"))
    if name == "identity":
        return IdentityColoring()
    return ConstantColoring()


def _take(params: dict, allowed: dict[str, int | None]) -> dict:
    bad = set(params) - set(allowed)
    if bad:
        raise UsageError(f"unknown parameters {sorted(bad)}; allowed: {sorted(allowed)}")
    return {k: params.get(k, v) for k, v in allowed.items()}


def run_scan(scan: str, u, coloring_spec: str | None, params: dict):
    """Run one scan; returns ``(certificate, exit code)``."""
    if scan == "uniform":
        p = _take(params, {"k": 4, "lmin": 1, "lmax": 64, "skip_multiples": 0})
        if p["k"] < 2 or p["lmin"] < 1 or p["lmax"] < p["lmin"]:
            raise UsageError("need k >= 2 and 1 <= lmin <= lmax")
        lengths = [l for l in range(p["lmin"], p["lmax"] + 1) if not (p["skip_multiples"] and l % p["skip_multiples"] == 0)]
        if not lengths:
            raise UsageError("no block lengths left after skip_multiples")
        coloring = make_coloring(coloring_spec or DEFAULT_COLORING[scan], u)
        cert = scan_uniform_monochromatic(coloring, u, p["k"], lengths)
        cert.params["skip_multiples"] = p["skip_multiples"]
        return cert, EXIT_WITNESS if cert.outcome == WITNESSES else EXIT_OK
    if scan == "bounded-gap":
        p = _take(params, {"p": 30, "k_target": None})
        if p["p"] < 2:
            raise UsageError("need p >= 2")
        coloring = make_coloring(coloring_spec or DEFAULT_COLORING[scan], u)
        cert = scan_bounded_gap_monochromatic(coloring, u, p["p"], p["k_target"])
        if p["k_target"] is None:
            cert.flags.append("no-target")
            return cert, EXIT_OK
        return cert, EXIT_WITNESS if cert.outcome == WITNESSES else EXIT_OK
    if scan == "abelian":
        p = _take(params, {"k": 3, "max_len": 300})
        if p["k"] < 2:
            raise UsageError("abelian powers need k >= 2")
        cert = scan_abelian_powers(u, p["k"], p["max_len"])
        return cert, EXIT_WITNESS if cert.outcome == WITNESSES else EXIT_OK
    if scan == "factorization":
        p = _take(params, {"horizon": None})
        coloring = make_coloring(coloring_spec or DEFAULT_COLORING[scan], u)
        cert = search_monochromatic_factorization(coloring, u, p["horizon"])
        frontier = cert.extra.pop("frontier", None)
        if frontier is not None:
            cert.extra["frontier_size"] = len(frontier)
            cert.extra["frontier_max_position"] = max((f.position for f in frontier), default=0)
        return cert, EXIT_WITNESS if cert.outcome == COVERS else EXIT_OK
    # powers
    p = _take(params, {"max_len": 8, "k": None})
    table = scan_powers(u, p["max_len"])
    params_out = {"max_len": p["max_len"], "k": p["k"]}
    extra = {"max_exponent": table.max_exponent, "k0": table.k0}
    w, pos = table.witness
    witness = [{"word": w, "exponent": table.max_exponent, "p": pos}]
    if p["k"] is not None and table.max_exponent < p["k"]:
        return Certificate("powers", u.W, params_out, NO_WITNESS, extra=extra), EXIT_OK
    cert = Certificate("powers", u.W, params_out, WITNESSES, witnesses=witness, extra=extra)
    return cert, EXIT_WITNESS if p["k"] is not None else EXIT_OK


def cmd_info(args, out) -> int:
    zeta = load_substitution(args.file)
    L = zeta.constant_length()
    prim = is_primitive(zeta)
    print(f"substitution: {zeta.name}", file=out)
    print(f"alphabet: {zeta.alphabet}", file=out)
    print("images:", file=out)
    for a, img in zip(zeta.alphabet, zeta.images):
        print(f"  {a} -> {img}", file=out)
    if L is not None:
        print(f"constant length: {L}", file=out)
    else:
        print(f"constant length: no (lengths {','.join(map(str, zeta.lengths))})", file=out)
    if prim:
        print(f"primitive: true (all entries of M^{prim.exponent} positive)", file=out)
    else:
        print("primitive: false", file=out)
    seeds = fixed_point_seeds(zeta)
    print(f"seeds: {' '.join(seeds) if seeds else '(none)'}", file=out)
    print("incidence matrix (row b, column a: |zeta(a)|_b):", file=out)
    for row in incidence_matrix(zeta).tolist():
        print("  " + " ".join(f"{x:3d}" for x in row), file=out)
    if prim:
        fv = FrequencyVector(zeta)
        if fv.exact is not None:
            print(f"Perron eigenvalue: {fv.eigenvalue}", file=out)
            body = ", ".join(f"{a}={d}" for a, d in zip(zeta.alphabet, fv.exact))
        else:
            lo, hi = fv.eigenvalue_interval(Fraction(1, 10**12))
            print(f"Perron eigenvalue: {float((lo + hi) / 2):.12f} (root of {fv.minpoly.as_expr()})", file=out)
            body = ", ".join(f"{a}~{d:.12f}" for a, d in zip(zeta.alphabet, fv.approx()))
        print(f"frequencies: {body}", file=out)
    return EXIT_OK


def _window(args, zeta):
    if args.window < MIN_WINDOW:
        raise UsageError(f"--window must be at least {MIN_WINDOW}")
    if args.auto_grow is not None and args.auto_grow < args.window:
        raise UsageError("--auto-grow must be at least --window")
    if args.threads < 1:
        raise UsageError("--threads must be positive")
    return fixed_point(zeta, args.window, args.seed)


def _record(zeta, u, cert_dict, elapsed, args, extra_flags=()):
    rec = {
        "v": 1,
        "kind": cert_dict.pop("kind"),
        "subst": zeta.name,
        "seed": u.seed,
        "window": u.W,
        "params": cert_dict.pop("params", {}),
        "outcome": cert_dict.pop("outcome"),
        "witnesses": cert_dict.pop("witnesses", []),
        "flags": list(extra_flags) + cert_dict.pop("flags", []),
        "elapsed_ms": 0 if args.no_timing else int(round(elapsed * 1000)),
    }
    cert_dict.pop("window", None)
    rec.update(cert_dict)
    return rec


def _emit(rec, out):
    out.write(json.dumps(rec, sort_keys=False, separators=(", ", ": ")) + "\n")


def cmd_analyze(args, out) -> int:
    zeta = load_substitution(args.file)
    params = _take(parse_params(args.params), {"trials": 10_000})
    u = _window(args, zeta)
    L = zeta.max_length
    if u.W < 4 * L * L:
        raise WindowExhausted(f"analyze needs W >= 4 L^2 = {4 * L * L}", needed=4 * L * L)
    code = EXIT_OK
    certs = []
    for level in (1, 2):
        t0 = time.perf_counter()
        c = estimate_recognizability_index(u, k=level)
        d = c.to_dict()
        rec = {
            "kind": "recognizability",
            "params": {"level": level, "cap": d["cap"]},
            "outcome": d["status"],
            "witnesses": [d["witness"]] if d["witness"] else [],
            "K_hat": d["K_hat"],
        }
        certs.append(_record(zeta, u, rec, time.perf_counter() - t0, args))
        if level == 1:
            K = c.K_hat
    t0 = time.perf_counter()
    report = check_presuf(u, K, trials=params["trials"])
    rec = {
        "kind": "presuf",
        "params": {"K": K, "trials": params["trials"], "threshold": report.threshold},
        "outcome": "NoWitness" if report.passed else "Witnesses",
        "witnesses": [[[I.lo, I.hi], [J.lo, J.hi], what] for I, J, what in report.failures[:10]],
    }
    if not report.passed:
        code = EXIT_WITNESS
    certs.append(_record(zeta, u, rec, time.perf_counter() - t0, args))
    rec = {
        "kind": "cutting-bars",
        "params": {"sample": 16},
        "outcome": "NoWitness",
        "bars": {str(k): [int(b) for b in u.bars(k)[:16]] for k in (1, 2)},
    }
    certs.append(_record(zeta, u, rec, 0.0, args))
    for rec in certs:
        _emit(rec, out)
    return code


def cmd_scan(args, out) -> int:
    zeta = load_substitution(args.file)
    params = parse_params(args.params)
    u = _window(args, zeta)
    grown = []
    while True:
        t0 = time.perf_counter()
        try:
            cert, code = run_scan(args.scan, u, args.coloring, params)
            break
        except WindowExhausted as exc:
            limit = args.auto_grow or u.W
            if u.W >= limit:
                rec = {
                    "kind": args.scan,
                    "params": params,
                    "outcome": "WindowExhausted",
                    "witnesses": [],
                    "flags": [f"grown:{g}" for g in grown],
                    "message": str(exc),
                }
                _emit(_record(zeta, u, rec, time.perf_counter() - t0, args), out)
                return EXIT_EXHAUSTED
            new_w = min(2 * u.W, limit)
            grown.append(f"{u.W}->{new_w}")
            u = fixed_point(zeta, new_w, u.seed)
    rec = _record(zeta, u, cert.to_dict(), time.perf_counter() - t0, args, [f"grown:{g}" for g in grown])
    if args.threads != 1:
        rec["flags"].append(f"threads-ignored:{args.threads}")
    _emit(rec, out)
    return code


def cmd_prefix(args, out) -> int:
    zeta = load_substitution(args.file)
    if args.n < 1:
        raise UsageError("N must be positive")
    u = fixed_point(zeta, args.n, args.seed)
    print(u.prefix(args.n), file=out)
    return EXIT_OK


COMMANDS = {"info": cmd_info, "prefix": cmd_prefix, "analyze": cmd_analyze, "scan": cmd_scan}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except WindowExhausted as exc:
        print(f"window exhausted: {exc}", file=sys.stderr)
        return EXIT_EXHAUSTED
    except (NoRadius, NotPrimitive, PeriodicWord) as exc:
        print(f"coloring not applicable: {exc}", file=sys.stderr)
        return EXIT_INAPPLICABLE
    except (ParseError, NoSeed, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SubstitutiveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    finally:
        if out is not sys.stdout:
            out.close()


if __name__ == "__main__":
    sys.exit(main())
