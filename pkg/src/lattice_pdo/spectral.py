"""Hermitian eigendecomposition and the diagonal eigenvalue approximation.

An almost-diagonal kernel splits as K = D + R with D the theta-average of
the symbol on the diagonal and R the off-diagonal residue.  Sorted
eigenvalues of K and of D differ by at most the spectral norm of R
(Hermitian perturbation), which is the rigorous backbone here; the
first-order per-point statement is checked empirically through a fitted
residual decay exponent.  Eigenvalue-to-lattice-point matching is by
sorted order: nearest-diagonal matching is ill-posed once neighboring
Gershgorin discs overlap, while sorted matching carries the perturbation
bound.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .kernel import KernelMatrix, hermitian_check, split_diagonal
from .symbols import SymbolOrder

HERMITIAN_TOL = 1e-9
POWER_ITER_TOL = 1e-10
POWER_ITER_MAX = 10000


def _as_matrix(K):
    if isinstance(K, KernelMatrix):
        return K.entries, {"radius": K.box.radius, "dim": K.spec.dim, "hbar": K.spec.hbar}
    a = np.asarray(K, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return a, None


def _check_hermitian(mat):
    asym = float(np.max(np.abs(mat - mat.conj().T))) if mat.size else 0.0
    if asym > HERMITIAN_TOL:
        raise ValueError(f"matrix is not Hermitian (max asymmetry {asym:.3e})")


@dataclass
class SpectralResult:
    """Sorted spectrum with truncation metadata.

    Eigenvalues ascend; eigenvector column j pairs with eigenvalue j, with
    the phase fixed so each column's largest-magnitude component is real
    positive.  residual_norm is max_j |K v_j - lambda_j v_j|_inf (None when
    vectors were not requested).
    """

    eigenvalues: np.ndarray
    eigenvectors: Optional[np.ndarray]
    truncation: Optional[dict]
    residual_norm: Optional[float]


def eigendecompose_hermitian(K, want_vectors: bool = False) -> SpectralResult:
    """Full spectrum of a Hermitian kernel matrix (or plain square array)."""
    mat, trunc = _as_matrix(K)
    _check_hermitian(mat)
    if want_vectors:
        vals, vecs = np.linalg.eigh(mat)
        for j in range(vecs.shape[1]):
            col = vecs[:, j]
            i = int(np.argmax(np.abs(col)))
            phase = col[i] / abs(col[i])
            vecs[:, j] = col / phase
        resid = float(np.max(np.abs(mat @ vecs - vecs * vals))) if mat.size else 0.0
        return SpectralResult(vals, vecs, trunc, resid)
    vals = np.linalg.eigvalsh(mat)
    return SpectralResult(vals, None, trunc, None)


def residue_norm(K) -> float:
    """Spectral norm of the off-diagonal part.

    Hermitian residues go through their own eigendecomposition; otherwise
    the largest singular value is found by power iteration on R^H R.
    """
    mat, _ = _as_matrix(K)
    res = np.array(mat)
    np.fill_diagonal(res, 0.0)
    if res.size == 0:
        return 0.0
    asym = float(np.max(np.abs(res - res.conj().T)))
    if asym <= HERMITIAN_TOL:
        return float(np.max(np.abs(np.linalg.eigvalsh(res))))
    # deterministic start vector, slightly tilted to avoid orthogonal starts
    x = 1.0 + 0.001 * np.arange(res.shape[0])
    x = x / np.linalg.norm(x)
    est = 0.0
    for _ in range(POWER_ITER_MAX):
        y = res.conj().T @ (res @ x)
        ny = np.linalg.norm(y)
        if ny == 0.0:
            return 0.0
        new_est = float(np.sqrt(np.real(np.vdot(x, y))))
        x = y / ny
        if abs(new_est - est) <= POWER_ITER_TOL * max(1.0, new_est):
            return new_est
        est = new_est
    return est


@dataclass
class DiagApproxReport:
    """Per-point comparison of diagonal values against true eigenvalues.

    Arrays are aligned with the ascending eigenvalue order: record j holds
    the lattice point whose diagonal value is the j-th smallest, that
    diagonal value, the j-th eigenvalue, and their difference.  The decay
    exponent is fitted on log |residual| against log(1 + |k|) over the half
    of points with largest |k| (the statement being asymptotic), skipping
    exact zeros.  Points within the outermost 15 percent of the box radius
    are excluded from the fit: their residuals measure the Dirichlet
    truncation edge, not the operator, and flatten the slope by an order of
    magnitude at desk scale.  low_overlap flags eigenvectors whose overlap
    with the matched basis vector drops below 1/2, where first-order
    reasoning degrades.
    """

    points: np.ndarray
    diag_values: np.ndarray
    eigenvalues: np.ndarray
    residuals: np.ndarray
    fit_exponent: Optional[float]
    residue_spectral_norm: float
    applicable: bool
    low_overlap: np.ndarray
    max_abs_residual: float


def diagonal_approximation(K: KernelMatrix, order: SymbolOrder) -> DiagApproxReport:
    """Compare eigenvalues of K with its diagonal, matched in sorted order.

    The order hypothesis mu < -(n+2) delta gates the verdict only; residuals
    are computed either way (applicable=False withholds the claim).
    """
    ok, asym = hermitian_check(K, HERMITIAN_TOL)
    if not ok:
        raise ValueError(f"diagonal approximation requires a Hermitian kernel "
                         f"(max asymmetry {asym:.3e})")
    n = K.spec.dim
    applicable = order.mu < -(n + 2) * order.delta

    split = split_diagonal(K)
    diag = np.real(split.diagonal)
    pts = K.points()
    perm = np.argsort(diag, kind="stable")

    dec = eigendecompose_hermitian(K, want_vectors=True)
    lam = dec.eigenvalues
    residuals = lam - diag[perm]

    overlaps = np.abs(dec.eigenvectors[perm, np.arange(K.size)])
    low_overlap = overlaps < 0.5

    rnorm = residue_norm(K)

    matched_pts = pts[perm]
    norms = np.linalg.norm(matched_pts, axis=1)
    sup = np.max(np.abs(matched_pts), axis=1) / K.spec.hbar
    outer_start = np.sort(norms)[K.size - K.size // 2] if K.size >= 2 else np.inf
    in_window = ((norms >= outer_start)
                 & (sup <= 0.85 * K.box.radius)
                 & (np.abs(residuals) > 0))
    fit = None
    if np.sum(in_window) >= 2:
        x = np.log(1.0 + norms[in_window])
        y = np.log(np.abs(residuals[in_window]))
        fit = float(np.polyfit(x, y, 1)[0])

    return DiagApproxReport(matched_pts, diag[perm], lam, residuals, fit, rnorm,
                            applicable, low_overlap, float(np.max(np.abs(residuals))))


@dataclass
class SandwichReport:
    """Per-eigenpair chain lower <= ||D phi - lambda phi|| <= upper.

    lower is the distance from the eigenvalue to the nearest diagonal value,
    upper the smaller of the farthest diagonal distance and the residue
    norm; the middle term equals ||R phi|| for an exact eigenpair.
    """

    eigenvalues: np.ndarray
    lower: np.ndarray
    middle: np.ndarray
    upper: np.ndarray

    def chain_holds(self, slack: float = 1e-8) -> bool:
        return bool(np.all(self.lower <= self.middle + slack)
                    and np.all(self.middle <= self.upper + slack))


def sandwich_check(K: KernelMatrix) -> SandwichReport:
    """Evaluate the diagonal-distance sandwich for every eigenpair of K."""
    ok, asym = hermitian_check(K, HERMITIAN_TOL)
    if not ok:
        raise ValueError(f"sandwich check requires a Hermitian kernel "
                         f"(max asymmetry {asym:.3e})")
    dec = eigendecompose_hermitian(K, want_vectors=True)
    if dec.eigenvectors is None:
        raise ValueError("eigenvectors are required for the sandwich check")
    diag = np.real(np.diag(K.entries))
    rnorm = residue_norm(K)

    lam = dec.eigenvalues
    dist = np.abs(lam[:, None] - diag[None, :])
    lower = np.min(dist, axis=1)
    upper = np.minimum(np.max(dist, axis=1), rnorm)
    dv = diag[:, None] * dec.eigenvectors - dec.eigenvectors * lam[None, :]
    middle = np.linalg.norm(dv, axis=0)

    rep = SandwichReport(lam, lower, middle, upper)
    if not rep.chain_holds():
        raise ValueError("sandwich chain violated; kernel is not an exact Hermitian eigensystem")
    return rep
