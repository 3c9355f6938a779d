"""Two-qubit entanglement and coherence measures.

Concurrence follows Wootters' spin-flip construction: the eigenvalues of
R = rho (sy x sy) rho* (sy x sy) give C = max(0, sqrt(l1) - sqrt(l2) -
sqrt(l3) - sqrt(l4)).  Entanglement of formation is the binary entropy of
(1 + sqrt(1 - C^2))/2, and the l1 coherence is the plain sum of
off-diagonal magnitudes in the canonical product basis.
"""

import numpy as np
from scipy.linalg import sqrtm

from .errors import NumericalValidityError
from .states import Amplitudes, PairDensityMatrix

# Eigenvalues of R far below the dominant one are numerical noise of the
# exactly-zero eigenvalues and are clamped before taking square roots;
# the threshold is relative so that genuinely tiny concurrences survive.
EIGENVALUE_CLAMP_REL = 1e-9
EIGENVALUE_FATAL = -1e-8

# sigma_y (x) sigma_y, the two-qubit spin flip.
SPIN_FLIP = np.array(
    [
        [0, 0, 0, -1],
        [0, 0, 1, 0],
        [0, 1, 0, 0],
        [-1, 0, 0, 0],
    ],
    dtype=complex,
)


def populations(c):
    """Occupation probabilities (|c1|^2, |c2|^2, |c3|^2, |c4|^2)."""
    arr = c.as_array() if isinstance(c, Amplitudes) else np.asarray(c, dtype=complex)
    return tuple(float(p) for p in np.abs(arr) ** 2)


def _spin_flip_eigenvalues(rho):
    r = rho @ SPIN_FLIP @ rho.conj() @ SPIN_FLIP
    lam = np.linalg.eigvals(r).real
    if np.min(lam) < EIGENVALUE_FATAL:
        raise NumericalValidityError(
            f"spin-flip matrix has eigenvalue {np.min(lam):g}; "
            "the density matrix is corrupted"
        )
    lam[lam < EIGENVALUE_CLAMP_REL * max(lam.max(), 0.0)] = 0.0
    return np.sort(lam)[::-1]


def concurrence(rho: PairDensityMatrix) -> float:
    """Wootters concurrence via a general eigensolve of R."""
    lam = _spin_flip_eigenvalues(rho.matrix)
    roots = np.sqrt(lam)
    return float(min(1.0, max(0.0, roots[0] - roots[1] - roots[2] - roots[3])))


def concurrence_hermitian(rho: PairDensityMatrix) -> float:
    """Concurrence via the Hermitian form sqrt(rho) R' sqrt(rho).

    Independent numerical route used to cross-check `concurrence`; the
    eigenvalues of sqrt(rho) (sy x sy) rho* (sy x sy) sqrt(rho) coincide
    with those of R.
    """
    m = rho.matrix
    root = sqrtm(0.5 * (m + m.conj().T))
    herm = root @ SPIN_FLIP @ m.conj() @ SPIN_FLIP @ root
    lam = np.linalg.eigvalsh(0.5 * (herm + herm.conj().T))
    lam = lam.copy()
    if np.min(lam) < EIGENVALUE_FATAL:
        raise NumericalValidityError(f"negative eigenvalue {np.min(lam):g}")
    lam[lam < EIGENVALUE_CLAMP_REL * max(lam.max(), 0.0)] = 0.0
    lam = np.clip(lam, 0.0, None)
    roots = np.sqrt(np.sort(lam)[::-1])
    return float(min(1.0, max(0.0, roots[0] - roots[1] - roots[2] - roots[3])))


def eof_from_concurrence(C: float) -> float:
    """Entanglement of formation as a function of concurrence.

    Uses the convention 0*log2(0) = 0, so the endpoints C=0 and C=1 map
    exactly to 0 and 1.
    """
    if C < -1e-12 or C > 1.0 + 1e-12:
        raise ValueError(f"concurrence {C!r} outside [0, 1]")
    C = min(1.0, max(0.0, C))
    x = np.sqrt(max(0.0, 1.0 - C * C))
    total = 0.0
    for p in ((1.0 + x) / 2.0, (1.0 - x) / 2.0):
        if p > 0.0:
            total -= p * np.log2(p)
    return float(total)


def entanglement_of_formation(rho: PairDensityMatrix) -> float:
    return eof_from_concurrence(concurrence(rho))


def l1_coherence(rho: PairDensityMatrix) -> float:
    """Sum of off-diagonal magnitudes in the canonical product basis."""
    m = rho.matrix
    return float(np.sum(np.abs(m)) - np.sum(np.abs(np.diag(m))))
