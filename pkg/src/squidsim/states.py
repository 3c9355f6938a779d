"""State space of the four-level SQUID + two-mode radiation system.

The dynamics populates exactly four global basis states,

    state 1: |1>_a |0>_b |0par 0perp>
    state 2: |0>_a |0>_b |0par 1perp>
    state 3: |0>_a |0>_b |2par 0perp>
    state 4: |0>_a |2>_b |0par 0perp>

which factor into four two-level subsystems: the incident-photon occupancy
(A), the generated-pair occupancy (B), the parallel mode (P) and the
transverse mode (T).  Every pairwise reduced density matrix of the pure
global state is then an honest two-qubit state, which is what the
entanglement and coherence measures operate on.
"""

from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from .errors import NormalizationError, NumericalValidityError

NORM_TOL = 1e-9

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-10
PSD_TOL = 1e-10


class Factor(IntEnum):
    """Two-level factors of the global basis.

    A: photon-a occupancy {0, 1}
    B: photon-b pair occupancy {0 photons, 2 photons}
    P: parallel mode {0par, 2par}
    T: transverse mode {0perp, 1perp}
    """

    A = 0
    B = 1
    P = 2
    T = 3


# Bit labels (A, B, P, T) of the four populated basis states, in order.
BASIS_LABELS = (
    (1, 0, 0, 0),  # |1>_a |0>_b |0par 0perp>
    (0, 0, 0, 1),  # |0>_a |0>_b |0par 1perp>
    (0, 0, 1, 0),  # |0>_a |0>_b |2par 0perp>
    (0, 1, 0, 0),  # |0>_a |2>_b |0par 0perp>
)


@dataclass(frozen=True)
class Amplitudes:
    """The four complex probability amplitudes c1..c4 of the global state."""

    c1: complex
    c2: complex
    c3: complex
    c4: complex

    @classmethod
    def from_array(cls, values):
        values = np.asarray(values, dtype=complex)
        if values.shape != (4,):
            raise ValueError(f"expected 4 amplitudes, got shape {values.shape}")
        return cls(*(complex(v) for v in values))

    def as_array(self):
        return np.array([self.c1, self.c2, self.c3, self.c4], dtype=complex)

    def norm(self):
        """Sum of squared amplitude magnitudes (1 for a physical state)."""
        return float(sum(abs(c) ** 2 for c in (self.c1, self.c2, self.c3, self.c4)))

    def require_normalized(self, tol=NORM_TOL):
        n = self.norm()
        if abs(n - 1.0) > tol:
            raise NormalizationError(
                f"state norm {n!r} deviates from 1 by more than {tol}"
            )


def norm(c) -> float:
    """Squared norm of an amplitude vector (Amplitudes or length-4 array)."""
    if isinstance(c, Amplitudes):
        return c.norm()
    arr = np.asarray(c, dtype=complex)
    return float(np.sum(np.abs(arr) ** 2))


@dataclass(frozen=True)
class PairDensityMatrix:
    """4x4 reduced density matrix over two retained two-level factors.

    Rows and columns follow the product basis {|00>, |01>, |10>, |11>} of
    the retained pair, with the first retained factor most significant.
    """

    matrix: np.ndarray
    factors: tuple

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (4, 4):
            raise ValueError(f"expected a 4x4 matrix, got {m.shape}")
        object.__setattr__(self, "matrix", m)

    def validate(self):
        """Check hermiticity, unit trace and positive semidefiniteness."""
        m = self.matrix
        herm = np.max(np.abs(m - m.conj().T))
        if herm > HERMITICITY_TOL:
            raise NumericalValidityError(f"not Hermitian: max deviation {herm:g}")
        tr = abs(np.trace(m) - 1.0)
        if tr > TRACE_TOL:
            raise NumericalValidityError(f"trace deviates from 1 by {tr:g}")
        lo = float(np.min(np.linalg.eigvalsh(0.5 * (m + m.conj().T))))
        if lo < -PSD_TOL:
            raise NumericalValidityError(f"negative eigenvalue {lo:g}")
        return self

    def purity(self) -> float:
        return float(np.trace(self.matrix @ self.matrix).real)

    def to_json(self):
        """Nested arrays of [re, im] pairs, ordering as documented above."""
        return {
            "factors": [f.name for f in self.factors],
            "matrix": [
                [[float(z.real), float(z.imag)] for z in row] for row in self.matrix
            ],
        }


def partial_trace(c, keep, tol=NORM_TOL) -> PairDensityMatrix:
    """Reduced density matrix of |psi><psi| over two retained factors.

    Works in closed form on the four populated basis states: diagonal
    entries collect |c_k|^2 grouped by the retained labels, and a
    coherence c_k c_l* appears wherever two basis states carry identical
    labels on both traced-out factors.
    """
    keep = tuple(Factor(f) for f in keep)
    if len(keep) != 2 or keep[0] == keep[1]:
        raise ValueError("keep must name two distinct factors")
    if isinstance(c, Amplitudes):
        c.require_normalized(tol)
        amps = c.as_array()
    else:
        amps = np.asarray(c, dtype=complex)
        n = float(np.sum(np.abs(amps) ** 2))
        if abs(n - 1.0) > tol:
            raise NormalizationError(
                f"state norm {n!r} deviates from 1 by more than {tol}"
            )
    traced = tuple(f for f in Factor if f not in keep)
    rho = np.zeros((4, 4), dtype=complex)
    for k in range(4):
        ik = 2 * BASIS_LABELS[k][keep[0]] + BASIS_LABELS[k][keep[1]]
        for l in range(4):
            if all(BASIS_LABELS[k][f] == BASIS_LABELS[l][f] for f in traced):
                il = 2 * BASIS_LABELS[l][keep[0]] + BASIS_LABELS[l][keep[1]]
                rho[ik, il] += amps[k] * np.conj(amps[l])
    return PairDensityMatrix(rho, keep)
