"""Trial reports and full-precision witness serialization.

Witness matrices are stored as hex floats so a replay reconstructs the exact
bits that produced the reported gap.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np


def hexfloat(x: float) -> str:
    return float(x).hex()


def from_hexfloat(s: str) -> float:
    return float.fromhex(s)


def complex_matrix_to_hex(M) -> list:
    M = np.asarray(M, dtype=np.complex128)
    return [[[hexfloat(v.real), hexfloat(v.imag)] for v in row] for row in M]


def complex_matrix_from_hex(rows) -> np.ndarray:
    return np.array([[complex(from_hexfloat(re), from_hexfloat(im))
                      for re, im in row] for row in rows], dtype=np.complex128)


@dataclass(eq=False)
class TrialReport:
    """Outcome of one randomized property suite.

    mode 'no-violations' passes when violations == 0; mode 'witness' (the
    counterexample searches) passes when at least one witness was found.
    """

    suite: str
    trials: int
    violations: int
    min_gap: float
    worst_witness: Optional[dict]
    runtime_ms: float
    seed: int
    mode: str = "no-violations"
    tol: float = 1e-9
    gaps: Optional[np.ndarray] = field(default=None, repr=False)
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        if self.mode == "witness":
            return self.violations > 0
        return self.violations == 0

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "trials": self.trials,
            "violations": self.violations,
            "min_gap": self.min_gap,
            "worst_witness": self.worst_witness,
            "runtime_ms": self.runtime_ms,
            "seed": self.seed,
            "mode": self.mode,
            "tol": self.tol,
            "passed": self.passed,
            **({"extra": self.extra} if self.extra else {}),
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    def gaps_csv(self) -> str:
        if self.gaps is None:
            raise ValueError("per-trial gaps were not retained")
        lines = ["trial,gap,seed"]
        lines += [f"{i},{float(g)!r},{self.seed}" for i, g in enumerate(self.gaps)]
        return "\n".join(lines) + "\n"
