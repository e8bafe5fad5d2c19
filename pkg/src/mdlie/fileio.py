"""JSON algebra files and machine-readable reports.

Indices are 1-based and every scalar is a string ("p", "p/q" or
"a+b*sqrt(d)"), so files round-trip exactly.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from . import __version__
from .algebra import BracketTable
from .md import MdVerdict, RankSpectrum, ReductionResult
from .poly import default_names
from .scalars import format_scalar, format_vector, parse_scalar

ALGEBRA_FORMAT = "mdlie-algebra/1"
REPORT_FORMAT = "mdlie-report/1"


class FormatError(ValueError):
    """Malformed algebra file; the message names the offending position."""


def table_to_dict(t: BracketTable, metadata: dict | None = None) -> dict:
    brackets = []
    for (i, j), vec in t.consts.items():
        coeffs = {str(l): format_scalar(c) for l, c in enumerate(vec, start=1) if c}
        brackets.append({"i": i, "j": j, "coeffs": coeffs})
    out = {"format": ALGEBRA_FORMAT, "name": t.name or "", "dim": t.dim, "brackets": brackets}
    if metadata:
        out["metadata"] = metadata
    return out


def table_from_dict(d) -> BracketTable:
    if not isinstance(d, dict):
        raise FormatError("top level must be an object")
    fmt = d.get("format", ALGEBRA_FORMAT)
    if fmt != ALGEBRA_FORMAT:
        raise FormatError(f"format: unsupported {fmt!r}")
    dim = d.get("dim")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise FormatError("dim: must be a positive integer")
    raw = d.get("brackets", [])
    if not isinstance(raw, list):
        raise FormatError("brackets: must be a list")
    brackets: dict[tuple[int, int], dict[int, Fraction]] = {}
    for k, b in enumerate(raw):
        where = f"brackets[{k}]"
        if not isinstance(b, dict):
            raise FormatError(f"{where}: must be an object")
        i, j = b.get("i"), b.get("j")
        if not all(isinstance(x, int) and not isinstance(x, bool) for x in (i, j)):
            raise FormatError(f"{where}: i and j must be integers")
        if not 1 <= i < j <= dim:
            raise FormatError(f"{where}: need 1 <= i < j <= {dim}, got i={i}, j={j}")
        if (i, j) in brackets:
            raise FormatError(f"{where}: duplicate bracket ({i},{j})")
        coeffs = b.get("coeffs", {})
        if not isinstance(coeffs, dict):
            raise FormatError(f"{where}.coeffs: must be an object")
        vec = {}
        for key, text in coeffs.items():
            try:
                l = int(key)
            except ValueError:
                raise FormatError(f"{where}.coeffs: key {key!r} is not an index") from None
            if not 1 <= l <= dim:
                raise FormatError(f"{where}.coeffs: index {l} outside 1..{dim}")
            if not isinstance(text, str):
                raise FormatError(f"{where}.coeffs[{key}]: scalars must be strings")
            try:
                c = parse_scalar(text)
            except ValueError as exc:
                raise FormatError(f"{where}.coeffs[{key}]: {exc}") from None
            if not isinstance(c, Fraction):
                raise FormatError(f"{where}.coeffs[{key}]: structure constants must be rational")
            vec[l] = c
        brackets[(i, j)] = vec
    name = d.get("name") or None
    return BracketTable(dim, brackets, name)


def dumps_table(t: BracketTable, metadata: dict | None = None) -> str:
    return json.dumps(table_to_dict(t, metadata), indent=2, sort_keys=True) + "\n"


def loads_table(text: str) -> BracketTable:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return table_from_dict(d)


def load_table(path) -> BracketTable:
    return loads_table(Path(path).read_text())


def save_table(t: BracketTable, path, metadata: dict | None = None) -> None:
    Path(path).write_text(dumps_table(t, metadata))


# -- reports -------------------------------------------------------------------------


def matrix_strings(m) -> list[list[str]]:
    return [[format_scalar(x) for x in row] for row in m.rows]


def reduction_to_dict(res: ReductionResult, names) -> dict:
    return {
        "proved": res.proved,
        "rounds": [
            [
                {
                    "pfaffian": step.reduced.to_string(names),
                    "definiteness": step.definiteness.value,
                    "forms": [f.to_string(names) for f in step.forms],
                }
                for step in rnd
            ]
            for rnd in res.rounds
        ],
        "vanished": [f.to_string(names) for f in res.vanished],
        "residuals": [p.to_string(names) for p in res.residuals],
    }


def spectrum_to_dict(s: RankSpectrum) -> dict:
    return {
        "observed": {str(r): format_vector(f) for r, f in s.observed.items()},
        "counts": {str(r): c for r, c in s.counts.items()},
        "sample_count": s.sample_count,
        "bound": s.bound,
        "extra_samples": s.extra_samples,
        "seed": s.seed,
    }


def verdict_to_dict(v: MdVerdict, n: int) -> dict:
    names = default_names(n)
    out = {
        "verdict": v.kind.value,
        "generic_rank": v.generic_rank,
        "pfaffians": {
            str(size): [
                {"subset": list(sub), "poly": p.to_string(names)} for sub, p in rows
            ]
            for size, rows in v.pfaffians.items()
        },
        "necessary": {
            "solvable": v.necessary.solvable,
            "second_derived_abelian": v.necessary.second_derived_abelian,
            "t211_shape": v.necessary.t211_shape,
            "derived_dims": list(v.necessary.derived_dims),
        },
        "witnesses": [{"functional": format_vector(f), "rank": r} for f, r in v.witnesses],
        "reason": v.reason,
        "parameters": {"bound": v.bound, "samples": v.samples, "seed": v.seed},
    }
    if v.certificate is not None:
        c = v.certificate
        out["certificate"] = {
            "kind": c.kind,
            "reason": c.reason,
            "derived_basis": [format_vector(b) for b in c.derived_basis],
            "reductions": [
                {"level": level, **reduction_to_dict(res, names)} for level, res in c.reductions
            ],
        }
    if v.stalled is not None:
        out["stalled"] = reduction_to_dict(v.stalled, names)
    if v.spectrum is not None:
        out["spectrum"] = spectrum_to_dict(v.spectrum)
    return out


def make_report(command: str, inputs: dict, results) -> dict:
    return {
        "format": REPORT_FORMAT,
        "tool_version": __version__,
        "command": command,
        "inputs": inputs,
        "results": results,
    }


def dumps_report(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
