"""mdlie command-line interface.

Exit codes: 0 ok / proved, 1 usage or parse error, 2 invalid algebra,
3 refuted, 4 inconclusive.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from .algebra import (
    LieAlgebra,
    ad_matrix,
    center,
    derived_algebra,
    derived_series,
    is_solvable,
    lower_central_series,
    series_dims,
    split_central_factor,
    validate,
)
from .catalog import catalog, check_entry, get_entry, theta_scan
from .coadjoint import kirillov_form, stabilizer, symbolic_kirillov
from .fileio import (
    FormatError,
    dumps_report,
    dumps_table,
    load_table,
    make_report,
    matrix_strings,
    verdict_to_dict,
)
from .linalg import rank
from .md import VerdictKind, generic_rank, md_check
from .poly import default_names
from .scalars import format_scalar, format_vector, parse_scalar, parse_vector
from .search import SHAPES, SearchConfig, codim1_abelian_shape, lattice_search

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_REFUTED, EXIT_INCONCLUSIVE = 0, 1, 2, 3, 4
VERDICT_EXIT = {
    VerdictKind.PROVED: EXIT_OK,
    VerdictKind.REFUTED: EXIT_REFUTED,
    VerdictKind.INCONCLUSIVE: EXIT_INCONCLUSIVE,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _load(source: str):
    """An algebra file path, or ``catalog:NAME``."""
    if source.startswith("catalog:"):
        try:
            return get_entry(source[len("catalog:") :]).table
        except KeyError as exc:
            raise UsageError(exc.args[0]) from None
    try:
        return load_table(source)
    except OSError as exc:
        raise UsageError(f"{source}: {exc.strerror}") from None
    except FormatError as exc:
        raise UsageError(f"{source}: {exc}") from None


def _algebra(source: str):
    """Load and validate; returns (LieAlgebra or None, violations)."""
    t = _load(source)
    a = validate(t)
    if isinstance(a, LieAlgebra):
        return a, []
    return None, a


def _vector(text: str, n: int, d, what: str):
    try:
        v = parse_vector(text, d)
    except ValueError as exc:
        raise UsageError(f"--{what}: {exc}") from None
    if len(v) != n:
        raise UsageError(f"--{what}: expected {n} coordinates, got {len(v)}")
    return v


def _violations(bad) -> list[dict]:
    return [{"triple": list(v.triple), "residual": format_vector(v.residual)} for v in bad]


def _emit(args, report: dict, text: str) -> None:
    if args.json:
        sys.stdout.write(dumps_report(report))
    else:
        print(text)


def _invalid(args, command, inputs, bad) -> int:
    report = make_report(command, inputs, {"valid": False, "violations": _violations(bad)})
    lines = ["invalid: Jacobi identity fails"] + [
        f"  ({v.triple[0]},{v.triple[1]},{v.triple[2]}): residual {format_vector(v.residual)}" for v in bad
    ]
    _emit(args, report, "\n".join(lines))
    return EXIT_INVALID


# -- commands ---------------------------------------------------------------------------


def cmd_validate(args) -> int:
    inputs = {"algebra": args.algebra}
    a, bad = _algebra(args.algebra)
    if a is None:
        return _invalid(args, "validate", inputs, bad)
    _emit(args, make_report("validate", inputs, {"valid": True, "violations": []}), "valid")
    return EXIT_OK


def cmd_series(args) -> int:
    inputs = {"algebra": args.algebra}
    a, bad = _algebra(args.algebra)
    if a is None:
        return _invalid(args, "series", inputs, bad)
    ds = series_dims(derived_series(a))
    ls = series_dims(lower_central_series(a))
    z = center(a)
    split = split_central_factor(a)
    results = {
        "derived_dims": list(ds),
        "lower_central_dims": list(ls),
        "derived_basis": [format_vector(v) for v in derived_algebra(a).basis],
        "center_basis": [format_vector(v) for v in z.basis],
        "solvable": is_solvable(a),
        "central_split": format_vector(split.z) if split else None,
        "fingerprint": [a.dim, list(ds), list(ls), z.dim],
    }
    text = "\n".join(
        [
            f"derived series dims: {list(ds)}",
            f"lower central dims:  {list(ls)}",
            f"center dim:          {z.dim}",
            f"solvable:            {results['solvable']}",
            f"central split:       {results['central_split']}",
        ]
    )
    _emit(args, make_report("series", inputs, results), text)
    return EXIT_OK


def cmd_ad(args) -> int:
    inputs = {"algebra": args.algebra, "element": args.element, "on": args.on}
    a, bad = _algebra(args.algebra)
    if a is None:
        return _invalid(args, "ad", inputs, bad)
    z = _vector(args.element, a.dim, None, "element")
    restriction = derived_algebra(a) if args.on == "derived" else None
    try:
        m = ad_matrix(a, z, restriction)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    results = {"matrix": matrix_strings(m), "trace": format_scalar(m.trace())}
    text = "\n".join(" ".join(f"{x:>6}" for x in row) for row in results["matrix"])
    _emit(args, make_report("ad", inputs, results), text)
    return EXIT_OK


def cmd_orbit(args) -> int:
    inputs = {"algebra": args.algebra, "functional": args.functional, "d": args.d}
    a, bad = _algebra(args.algebra)
    if a is None:
        return _invalid(args, "orbit", inputs, bad)
    f = _vector(args.functional, a.dim, args.d, "functional")
    b = kirillov_form(a, f)
    r = rank(b)
    stab = stabilizer(a, f)
    results = {
        "kirillov_form": matrix_strings(b),
        "rank": r,
        "orbit_dimension": r,
        "stabilizer_basis": [format_vector(v) for v in stab.basis],
    }
    text = "\n".join(
        [f"rank B_F = {r}", f"stabilizer (dim {stab.dim}): {results['stabilizer_basis']}"]
        + [" ".join(f"{x:>8}" for x in row) for row in results["kirillov_form"]]
    )
    _emit(args, make_report("orbit", inputs, results), text)
    return EXIT_OK


def cmd_kirillov(args) -> int:
    inputs = {"algebra": args.algebra, "symbolic": args.symbolic, "functional": args.functional}
    a, bad = _algebra(args.algebra)
    if a is None:
        return _invalid(args, "kirillov", inputs, bad)
    if args.symbolic:
        entries = symbolic_kirillov(a).to_strings()
        results = {"variables": list(default_names(a.dim)), "entries": entries}
    elif args.functional:
        entries = matrix_strings(kirillov_form(a, _vector(args.functional, a.dim, args.d, "functional")))
        results = {"entries": entries}
    else:
        raise UsageError("kirillov needs --symbolic or --functional")
    width = max(len(x) for row in entries for x in row)
    text = "\n".join(" ".join(f"{x:>{width}}" for x in row) for row in entries)
    _emit(args, make_report("kirillov", inputs, results), text)
    return EXIT_OK


def cmd_pfaffians(args) -> int:
    inputs = {"algebra": args.algebra}
    a, bad = _algebra(args.algebra)
    if a is None:
        return _invalid(args, "pfaffians", inputs, bad)
    gr = generic_rank(a)
    names = default_names(a.dim)
    results = {
        "generic_rank": gr.rank,
        "pfaffians": {
            str(size): [{"subset": list(s), "poly": p.to_string(names)} for s, p in rows]
            for size, rows in gr.pfaffians.items()
        },
    }
    lines = [f"generic rank {gr.rank}"]
    for size, rows in gr.pfaffians.items():
        for s, p in rows:
            lines.append(f"Pf{list(s)} = {p.to_string(names)}")
    _emit(args, make_report("pfaffians", inputs, results), "\n".join(lines))
    return EXIT_OK


def _verdict_text(v) -> str:
    lines = [f"verdict: {v.kind.value} (generic rank {v.generic_rank})"]
    if v.certificate is not None:
        lines.append(f"certificate: {v.certificate.kind}")
        for level, res in v.certificate.reductions:
            for k, rnd in enumerate(res.rounds, start=1):
                for step in rnd:
                    forms = ", ".join(str(f) for f in step.forms)
                    lines.append(f"  level {level} round {k}: {step.reduced} is {step.definiteness.value} => {forms} = 0")
    if v.reason:
        lines.append(f"reason: {v.reason}")
    for f, r in v.witnesses:
        lines.append(f"witness rank {r}: ({', '.join(format_vector(f))})")
    return "\n".join(lines)


def cmd_md_check(args) -> int:
    if args.bound < 1:
        raise UsageError("--bound must be >= 1")
    inputs = {"algebra": args.algebra, "bound": args.bound, "samples": args.samples, "seed": args.seed}
    a, bad = _algebra(args.algebra)
    if a is None:
        return _invalid(args, "md-check", inputs, bad)
    v = md_check(a, bound=args.bound, seed=args.seed, samples=args.samples, workers=args.workers)
    _emit(args, make_report("md-check", inputs, verdict_to_dict(v, a.dim)), _verdict_text(v))
    return VERDICT_EXIT[v.kind]


def cmd_catalog(args) -> int:
    if args.action == "list":
        rows = [
            {
                "name": e.name,
                "dim": e.table.dim,
                "raw": e.raw,
                "expected": e.expected_kind.value if e.expected_kind else None,
                "generic_rank": e.expected_rank,
                "description": e.description,
            }
            for e in catalog()
        ]
        text = "\n".join(
            f"{r['name']:<20} n={r['dim']}  {r['expected'] or 'raw':<12} {r['description']}" for r in rows
        )
        _emit(args, make_report("catalog list", {}, rows), text)
        return EXIT_OK
    if args.action == "emit":
        if not args.name:
            raise UsageError("catalog emit needs a NAME")
        try:
            e = get_entry(args.name)
        except KeyError as exc:
            raise UsageError(exc.args[0]) from None
        meta = {"description": e.description, "raw": e.raw}
        if e.expected_kind:
            meta["expected"] = e.expected_kind.value
        text = dumps_table(e.table, meta)
        if args.output:
            Path(args.output).write_text(text)
        else:
            sys.stdout.write(text)
        return EXIT_OK
    # check-all
    inputs = {"bound": args.bound, "samples": args.samples, "seed": args.seed}
    checks = [check_entry(e, args.bound, args.samples, args.seed, args.workers) for e in catalog()]
    results = [{"name": c.name, "ok": c.ok, "detail": c.detail} for c in checks]
    text = "\n".join(f"{'ok  ' if c.ok else 'FAIL'} {c.name}: {c.detail}" for c in checks)
    _emit(args, make_report("catalog check-all", inputs, results), text)
    return EXIT_OK if all(c.ok for c in checks) else EXIT_INVALID


def _scalar_list(text: str, what: str) -> list[Fraction]:
    try:
        vals = [parse_scalar(p) for p in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"--{what}: {exc}") from None
    if any(not isinstance(x, Fraction) for x in vals):
        raise UsageError(f"--{what}: values must be rational")
    return vals


def cmd_theta(args) -> int:
    thetas = _scalar_list(args.grid, "grid")
    mu, lam = _scalar_list(args.mu, "mu")[0], _scalar_list(args.lam, "lam")[0]
    inputs = {"grid": args.grid, "mu": format_scalar(mu), "lam": format_scalar(lam), "bound": args.bound,
              "samples": args.samples, "seed": args.seed}
    res = theta_scan(thetas, mu, lam, args.bound, args.seed, args.samples)
    results = []
    lines = []
    for th, r in res.items():
        row = {"theta": format_scalar(th), "degenerate": r.degenerate}
        if r.verdict is not None:
            row["verdict"] = r.verdict.kind.value
            row["witnesses"] = [{"functional": format_vector(f), "rank": k} for f, k in r.verdict.witnesses]
            wit = "; ".join(f"({', '.join(format_vector(f))}) rank {k}" for f, k in r.verdict.witnesses)
            lines.append(f"theta={format_scalar(th):>6}  {r.verdict.kind.value:<12} {wit}")
        else:
            lines.append(f"theta={format_scalar(th):>6}  degenerate: {r.degenerate}")
        results.append(row)
    _emit(args, make_report("theta", inputs, results), "\n".join(lines))
    return EXIT_OK


def cmd_search(args) -> int:
    if args.shape not in SHAPES:
        raise UsageError(f"unknown shape {args.shape!r}; choose from {sorted(SHAPES)}")
    if args.shape == "codim1-abelian":
        shape = codim1_abelian_shape(args.n, args.pattern)
    else:
        shape = SHAPES[args.shape]()
    config = SearchConfig(bound=args.bound, budget=args.budget, seed=args.seed, workers=args.workers)
    inputs = {"shape": shape.name, "bound": args.bound, "budget": args.budget, "seed": args.seed}
    res = lattice_search(shape, config)
    classes = [
        {
            "fingerprint": [h.fingerprint[0], list(h.fingerprint[1]), list(h.fingerprint[2]), h.fingerprint[3]],
            "verdict": h.kind,
            "decomposable": h.decomposable,
            "count": len(h.points),
            "first_point": list(h.points[0]),
        }
        for h in res.hits
    ]
    results = {**res.summary(), "slots": list(shape.slot_names), "classes": classes}
    lines = [f"{k}: {v}" for k, v in res.summary().items()]
    for c in classes:
        lines.append(f"  {c['verdict']:<12} decomposable={c['decomposable']!s:<5} x{c['count']} {c['fingerprint']}")
    _emit(args, make_report("search", inputs, results), "\n".join(lines))
    return EXIT_OK


# -- parser ------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mdlie", description="Exact coadjoint-orbit and MD-property analysis.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, algebra=True):
        if algebra:
            sp.add_argument("algebra", help="algebra JSON file, or catalog:NAME")
        sp.add_argument("--json", action="store_true", help="print a machine-readable report")

    def scan_opts(sp):
        sp.add_argument("--bound", type=int, default=2)
        sp.add_argument("--samples", type=int, default=100)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--workers", type=int, default=1)

    sp = sub.add_parser("validate", help="check the Jacobi identity")
    common(sp)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("series", help="derived and lower central series, center")
    common(sp)
    sp.set_defaults(func=cmd_series)

    sp = sub.add_parser("ad", help="matrix of ad_z")
    common(sp)
    sp.add_argument("--element", required=True)
    sp.add_argument("--on", choices=["all", "derived"], default="all")
    sp.set_defaults(func=cmd_ad)

    sp = sub.add_parser("orbit", help="Kirillov form, orbit dimension and stabilizer at F")
    common(sp)
    sp.add_argument("--functional", required=True)
    sp.add_argument("--d", type=int, default=None, help="discriminant of Q(sqrt(d)) for the functional")
    sp.set_defaults(func=cmd_orbit)

    sp = sub.add_parser("kirillov", help="Kirillov form, symbolic or at a functional")
    common(sp)
    sp.add_argument("--symbolic", action="store_true")
    sp.add_argument("--functional")
    sp.add_argument("--d", type=int, default=None)
    sp.set_defaults(func=cmd_kirillov)

    sp = sub.add_parser("pfaffians", help="principal Pfaffians and generic rank")
    common(sp)
    sp.set_defaults(func=cmd_pfaffians)

    sp = sub.add_parser("md-check", help="decide the MD property")
    common(sp)
    scan_opts(sp)
    sp.set_defaults(func=cmd_md_check)

    sp = sub.add_parser("catalog", help="built-in algebras")
    common(sp, algebra=False)
    sp.add_argument("action", choices=["list", "emit", "check-all"])
    sp.add_argument("name", nargs="?")
    sp.add_argument("-o", "--output")
    scan_opts(sp)
    sp.set_defaults(func=cmd_catalog)

    sp = sub.add_parser("theta", help="MD verdicts along the theta family")
    common(sp, algebra=False)
    sp.add_argument("--grid", required=True, help='comma-separated thetas, e.g. "-2,-1,1,2"')
    sp.add_argument("--mu", default="1")
    sp.add_argument("--lam", default="0")
    scan_opts(sp)
    sp.set_defaults(func=cmd_theta)

    sp = sub.add_parser("search", help="exhaustive integer search over a bracket shape")
    common(sp, algebra=False)
    sp.add_argument("--shape", required=True, help=f"one of {sorted(SHAPES)}")
    sp.add_argument("--bound", type=int, default=2)
    sp.add_argument("--budget", type=int, default=1_000_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--n", type=int, default=4, help="dimension for codim1-abelian")
    sp.add_argument("--pattern", choices=["full", "upper", "diagonal"], default="upper")
    sp.set_defaults(func=cmd_search)
    return p


_VALUE_FLAGS = {"--grid", "--functional", "--element", "--mu", "--lam"}


def _attach_values(argv: list[str]) -> list[str]:
    """Glue values such as "-2,-1,1,2" to their flag so argparse keeps them."""
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = build_parser().parse_args(_attach_values(argv))
        return args.func(args)
    except UsageError as exc:
        print(f"mdlie: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
