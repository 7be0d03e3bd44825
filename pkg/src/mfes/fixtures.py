"""Golden cost fixtures: frozen reference evaluations anchoring regression tests.

Each row records one deterministic evaluation — a (scenario, gain vector,
fidelity, seed) tuple and its cost breakdown. The shipped file is only ever
rewritten by the explicit ``fixtures regenerate`` CLI command; tests compare
fresh evaluations against it, so an accidental change to the plant, the cost
model, or the seeding scheme shows up as a fixture mismatch.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

import numpy as np

from .benchmarks import bench1d
from .testbed import SCENARIOS, evaluate_real, evaluate_sim
from .validation import REAL, SIM

__all__ = [
    "GOLDEN_SEEDS",
    "GOLDEN_HEADER",
    "golden_rows",
    "format_rows",
    "write_golden_costs",
    "read_golden_costs",
    "shipped_golden_path",
]

GOLDEN_SEEDS = (0, 1, 2)

GOLDEN_HEADER = "scenario,label,fidelity,seed,x,stability,penalty,total,fell"


def _g15(v: float) -> str:
    return f"{float(v):.15g}"


def _row(scenario: str, label: str, fidelity: str, seed: int, x, cb) -> dict:
    return {
        "scenario": scenario,
        "label": label,
        "fidelity": fidelity,
        "seed": seed,
        "x": np.asarray(x, dtype=float),
        "stability": cb.stability,
        "penalty": cb.penalty,
        "total": cb.total,
        "fell": cb.fell,
    }


def golden_rows() -> list[dict]:
    """Recompute every fixture row from scratch (deterministic)."""
    rows = []
    for name in ("ankle2d", "arm_ankle4d"):
        sc = SCENARIOS[name]()
        anchors = (
            ("reference", np.asarray(sc.reference_gains, dtype=float)),
            ("zero", np.zeros(sc.dim)),
        )
        for label, x in anchors:
            for seed in GOLDEN_SEEDS:
                rows.append(_row(name, label, "sim", seed, x, evaluate_sim(x, sc, seed)))
                rows.append(_row(name, label, "real", seed, x, evaluate_real(x, sc, seed)))
    bench = bench1d()
    center = np.array([0.5])
    for seed in GOLDEN_SEEDS:
        rows.append(_row("bench1d", "center", "sim", seed, center, bench.evaluate(center, SIM, seed)))
        rows.append(_row("bench1d", "center", "real", seed, center, bench.evaluate(center, REAL, seed)))
    return rows


def format_rows(rows) -> str:
    """Render fixture rows as the on-disk CSV text (15 significant digits)."""
    lines = [GOLDEN_HEADER]
    for r in rows:
        lines.append(
            ",".join(
                [
                    r["scenario"],
                    r["label"],
                    r["fidelity"],
                    str(r["seed"]),
                    ";".join(_g15(v) for v in r["x"]),
                    _g15(r["stability"]),
                    _g15(r["penalty"]),
                    _g15(r["total"]),
                    str(int(r["fell"])),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def shipped_golden_path() -> Path:
    """Location of the golden cost file bundled with the package."""
    return Path(str(resources.files("mfes").joinpath("data", "golden_costs.csv")))


def write_golden_costs(path=None) -> Path:
    """Recompute the fixtures and write them to ``path`` (default: shipped file)."""
    target = Path(path) if path is not None else shipped_golden_path()
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(format_rows(golden_rows()))
    return target


def read_golden_costs(path=None) -> list[dict]:
    """Parse the golden cost file back into fixture rows."""
    target = Path(path) if path is not None else shipped_golden_path()
    lines = target.read_text().strip().split("\n")
    if not lines or lines[0] != GOLDEN_HEADER:
        raise ValueError(f"{target} is not a golden cost file (bad header)")
    rows = []
    for line in lines[1:]:
        scenario, label, fidelity, seed, x, stab, pen, total, fell = line.split(",")
        rows.append(
            {
                "scenario": scenario,
                "label": label,
                "fidelity": fidelity,
                "seed": int(seed),
                "x": np.array([float(v) for v in x.split(";")]),
                "stability": float(stab),
                "penalty": float(pen),
                "total": float(total),
                "fell": bool(int(fell)),
            }
        )
    return rows
