from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np


@dataclass(frozen=True, eq=False)
class MetricTensor:
    """Symmetric positive-definite matrix with provenance.

    ``stderr`` is the per-entry standard error and is present exactly when
    ``provenance == "montecarlo"``.
    """

    matrix: np.ndarray
    provenance: str = "exact"
    stderr: Optional[np.ndarray] = None
    samples: Optional[int] = None
    seed: Optional[int] = None

    def __post_init__(self):
        g = np.array(self.matrix, dtype=float)
        g = 0.5 * (g + g.T)
        g.flags.writeable = False
        object.__setattr__(self, "matrix", g)
        if (self.stderr is not None) != (self.provenance == "montecarlo"):
            raise ValueError("stderr must be given exactly for Monte-Carlo tensors")
        if self.stderr is not None:
            se = np.array(self.stderr, dtype=float)
            se.flags.writeable = False
            object.__setattr__(self, "stderr", se)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    @property
    def condition_number(self) -> float:
        w = self.eigenvalues
        return float(w[-1] / w[0])

    def norm(self, xi) -> np.ndarray:
        """sqrt(g(xi, xi)), vectorized over leading axes."""
        xi = np.asarray(xi, float)
        return np.sqrt(np.einsum("...i,ij,...j->...", xi, self.matrix, xi))

    def to_json(self) -> dict:
        out = {"matrix": self.matrix.tolist(), "provenance": self.provenance}
        if self.stderr is not None:
            out.update(stderr=self.stderr.tolist(), samples=self.samples, seed=self.seed)
        return out
