"""Input validation helpers and shared domain types.

Conventions used across the package:

* a *parameter vector* ``x`` is a 1-D float array living inside a box
  :class:`Bounds`;
* an *augmented input* is ``a = (delta, x)`` where ``delta`` is the fidelity
  flag (0 = simulation, 1 = real system), stored as a row ``[delta, x_1, ...,
  x_d]``;
* design matrices are 2-D float arrays whose first column holds the flags.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.utils import check_array

SIM = 0
REAL = 1

_FIDELITY_VALUES = (float(SIM), float(REAL))


@dataclass(frozen=True)
class Bounds:
    """Axis-aligned box constraint for parameter vectors."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.asarray(self.lower, dtype=float).ravel()
        upper = np.asarray(self.upper, dtype=float).ravel()
        if lower.shape != upper.shape:
            raise ValueError("lower and upper must have the same length")
        if lower.size == 0:
            raise ValueError("bounds need at least one dimension")
        if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
            raise ValueError("bounds must be finite")
        if not np.all(lower < upper):
            raise ValueError("each lower bound must lie strictly below its upper bound")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @property
    def dim(self) -> int:
        return int(self.lower.size)

    @property
    def range(self) -> np.ndarray:
        return self.upper - self.lower

    @property
    def center(self) -> np.ndarray:
        return 0.5 * (self.lower + self.upper)

    def contains(self, x, atol: float = 1e-9) -> bool:
        x = np.asarray(x, dtype=float)
        if x.shape != self.lower.shape:
            return False
        return bool(np.all(x >= self.lower - atol) and np.all(x <= self.upper + atol))

    def clip(self, x) -> np.ndarray:
        return np.clip(np.asarray(x, dtype=float), self.lower, self.upper)


def check_param_vector(x, bounds: Bounds | None = None, name: str = "x") -> np.ndarray:
    """Validate a single parameter vector, optionally against bounds."""
    x = np.asarray(x, dtype=float).ravel()
    if x.size == 0:
        raise ValueError(f"{name} must be non-empty")
    if not np.all(np.isfinite(x)):
        raise ValueError(f"{name} must be finite, got {x!r}")
    if bounds is not None:
        if x.size != bounds.dim:
            raise ValueError(
                f"{name} has dimension {x.size}, bounds expect {bounds.dim}"
            )
        if not bounds.contains(x):
            raise ValueError(f"{name}={x!r} lies outside bounds")
    return x


def check_fidelity(fidelity) -> int:
    """Coerce a fidelity flag to the integer 0 (sim) or 1 (real)."""
    f = float(fidelity)
    if f not in _FIDELITY_VALUES:
        raise ValueError(f"fidelity flag must be 0 or 1, got {fidelity!r}")
    return int(f)


def check_augmented(X, n_dims: int | None = None, allow_empty: bool = False) -> np.ndarray:
    """Validate an augmented design matrix (first column = fidelity flag)."""
    X = check_array(
        X,
        dtype=float,
        ensure_2d=True,
        ensure_min_samples=0 if allow_empty else 1,
        ensure_min_features=2,
    )
    flags = X[:, 0]
    if not np.all(np.isin(flags, _FIDELITY_VALUES)):
        raise ValueError("fidelity column must contain only 0 or 1")
    if n_dims is not None and X.shape[1] != n_dims + 1:
        raise ValueError(
            f"augmented inputs have {X.shape[1] - 1} parameter dimensions, expected {n_dims}"
        )
    return X


def augment(x, fidelity) -> np.ndarray:
    """Prepend a fidelity flag column to one or more parameter vectors.

    ``x`` may be a single vector (returns shape ``(1, 1+d)``) or a matrix of
    row vectors (returns shape ``(n, 1+d)``).
    """
    f = check_fidelity(fidelity)
    x = np.asarray(x, dtype=float)
    x = np.atleast_2d(x)
    col = np.full((x.shape[0], 1), float(f))
    return np.hstack([col, x])
