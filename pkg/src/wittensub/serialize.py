"""Deterministic report serialization.

JSON output uses sorted keys and fixed %.12e float formatting so two
runs with the same seed produce byte-identical reports; CSV columns are
pinned for regression diffing.
"""

from __future__ import annotations

from fractions import Fraction

SCHEMA_VERSION = 1

CSV_COLUMNS = ("lambda", "mu_min", "n_used", "converged", "residual")


def _fmt_float(x: float) -> str:
    return f"{x:.12e}"


def dumps(obj, indent: int = 0) -> str:
    """Stable JSON text: sorted keys, %.12e floats, exact Fraction strings."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, Fraction):
        return _string(str(obj))
    if isinstance(obj, str):
        return _string(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = ",\n".join(
            f"{inner}{_string(str(k))}: {dumps(v, indent + 1)}"
            for k, v in sorted(obj.items())
        )
        return "{\n" + items + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = ",\n".join(
            f"{inner}{dumps(v, indent + 1)}" for v in obj
        )
        return "[\n" + items + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _string(s: str) -> str:
    out = s.replace("\\", "\\\\").replace('"', '\\"')
    out = out.replace("\n", "\\n").replace("\t", "\\t")
    return f'"{out}"'


def sweep_csv_rows(records) -> list:
    """CSV lines (no trailing newline) for a list of SweepRecord."""
    lines = [",".join(CSV_COLUMNS)]
    for r in records:
        lines.append(
            ",".join(
                (
                    _fmt_float(r.lam),
                    _fmt_float(r.mu_min),
                    str(r.n_used),
                    "true" if r.converged else "false",
                    _fmt_float(r.residual),
                )
            )
        )
    return lines


def verdict_dict(verdict) -> dict:
    """JSON-ready view of an H1Verdict."""
    branches = []
    for br in verdict.certificate:
        branches.append(
            {
                "omega": [str(br.omega[0]), str(br.omega[1])],
                "slope_bound": float(br.slope_bound),
                "samples": [
                    {
                        "y": str(y),
                        "root_lo": str(iv.lo),
                        "root_hi": str(iv.hi),
                        "multiplicity": iv.multiplicity,
                    }
                    for y, iv in br.samples
                ],
            }
        )
    return {
        "status": verdict.status,
        "branches": branches,
        "witness": verdict.witness,
        "notes": verdict.notes,
        "degenerate": [str(y) for y in verdict.degenerate],
        "n_samples": verdict.n_samples,
    }


def fit_dict(fit) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "slope": fit.slope,
        "intercept": fit.intercept,
        "r_squared": fit.r_squared,
        "points_used": fit.points_used,
    }
