"""Truncated operator matrices of lattice pseudo-differential operators.

The matrix entry at (row k, column m) is the Fourier coefficient of
sigma(k, .) at the difference m - k, so applying the matrix to a basis
vector e_i puts coefficient values down column i.  For the forward
difference operator this reproduces the textbook column: +1 at k = i - hbar
and -1 at k = i.

Storage is dense; desk-scale boxes keep full Hermitian eigensolves cheap
and banded structure is treated as an optimization, not a contract.
Truncation is plain restriction to the box (no boundary corrections).
"""

import struct
from dataclasses import dataclass, field

import numpy as np

from .lattice import (BoxTruncation, LatticeSpec, enumerate_box,
                      enumerate_box_integers)
from .symbols import Symbol
from .fourier import DEFAULT_SAMPLES, spectrum_of_row
from ._util import parallel_map


@dataclass
class KernelMatrix:
    """Dense truncated matrix of an operator over a box of lattice points."""

    spec: LatticeSpec
    box: BoxTruncation
    entries: np.ndarray
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=complex)
        size = self.box.size(self.spec.dim)
        if e.shape != (size, size):
            raise ValueError(f"entries must be {size}x{size} for this box, got {e.shape}")
        if not np.all(np.isfinite(e.view(float))):
            raise ValueError("kernel entries must be finite")
        e.setflags(write=False)
        self.entries = e

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def points(self) -> np.ndarray:
        return enumerate_box(self.spec, self.box)


@dataclass
class DiagonalSplit:
    """Split K = diag + residue with the residue's diagonal identically zero."""

    diagonal: np.ndarray
    residue: KernelMatrix


def assemble(sym: Symbol, spec: LatticeSpec, box: BoxTruncation,
             n_samples: int = DEFAULT_SAMPLES, threads: int = 1) -> KernelMatrix:
    """Truncated matrix A(k, m) = coefficient of sigma(k, .) at frequency m - k."""
    if spec.dim != sym.spec.dim or abs(spec.hbar - sym.spec.hbar) > 1e-12:
        raise ValueError("lattice spec does not match the symbol's lattice")
    zs = enumerate_box_integers(spec, box)
    pts = spec.hbar * zs.astype(float)
    size = len(pts)

    if sym.closed_form_coeffs is not None and sym.coeff_support_radius is not None:
        # banded fill: coefficients vanish beyond the declared support
        r = box.radius
        side = 2 * r + 1
        strides = np.array([side ** (spec.dim - 1 - j) for j in range(spec.dim)])
        offs = enumerate_box_integers(spec, BoxTruncation(sym.coeff_support_radius))

        def row(i):
            out = np.zeros(size, dtype=complex)
            zk = zs[i]
            for off in offs:
                zm = zk + off
                if np.any(np.abs(zm) > r):
                    continue
                col = int(np.dot(zm + r, strides))
                out[col] = sym.closed_form_coeffs(pts[i], spec.hbar * off.astype(float))
            return out
    elif sym.closed_form_coeffs is not None:
        def row(i):
            diffs = pts - pts[i]
            return np.array([sym.closed_form_coeffs(pts[i], d) for d in diffs], dtype=complex)
    else:
        def row(i):
            spec_row = spectrum_of_row(sym, pts[i], n_samples)
            diffs = (zs - zs[i]) % n_samples
            return spec_row[tuple(diffs.T)]

    entries = np.array(parallel_map(row, list(range(size)), threads), dtype=complex)
    return KernelMatrix(spec, box, entries,
                        provenance={"symbol": sym.name,
                                    "method": "closed-form" if sym.closed_form_coeffs else
                                              f"quadrature(n={n_samples})",
                                    "radius": box.radius})


def apply(K: KernelMatrix, a) -> np.ndarray:
    """Matrix-vector product in box enumeration order."""
    v = np.asarray(a, dtype=complex)
    if v.shape != (K.size,):
        raise ValueError(f"sequence length {v.shape} does not match box size {K.size}")
    return K.entries @ v


def split_diagonal(K: KernelMatrix) -> DiagonalSplit:
    """Exact entrywise split into the diagonal and the zero-diagonal residue."""
    d = np.diag(K.entries).copy()
    res = np.array(K.entries)
    np.fill_diagonal(res, 0.0)
    residue = KernelMatrix(K.spec, K.box, res,
                           provenance=dict(K.provenance, part="off-diagonal"))
    return DiagonalSplit(d, residue)


def hermitian_check(K: KernelMatrix, tol: float = 1e-9):
    """(is_hermitian, max |A(k,m) - conj(A(m,k))|)."""
    asym = float(np.max(np.abs(K.entries - K.entries.conj().T))) if K.size else 0.0
    return asym <= tol, asym


def hermitize(K: KernelMatrix) -> KernelMatrix:
    """(K + K^H) / 2, the Hermitian part."""
    sym = 0.5 * (K.entries + K.entries.conj().T)
    return KernelMatrix(K.spec, K.box, sym,
                        provenance=dict(K.provenance, hermitized=True))


# ---------------------------------------------------------------------------
# export formats
# ---------------------------------------------------------------------------

def write_csv(K: KernelMatrix, path) -> None:
    """Nonzero entries as CSV rows (row, col, re, im)."""
    import csv

    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["row", "col", "re", "im"])
        rows, cols = np.nonzero(K.entries)
        for i, j in zip(rows, cols):
            v = K.entries[i, j]
            w.writerow([int(i), int(j), repr(float(v.real)), repr(float(v.imag))])


_BIN_HEADER = struct.Struct("<qdq")  # dim, hbar, radius


def write_binary(K: KernelMatrix, path) -> None:
    """Compact binary: header (n int64, hbar float64, R int64), then row-major complex128."""
    with open(path, "wb") as fh:
        fh.write(_BIN_HEADER.pack(K.spec.dim, K.spec.hbar, K.box.radius))
        fh.write(np.ascontiguousarray(K.entries, dtype="<c16").tobytes())


def read_binary(path) -> KernelMatrix:
    """Read a matrix written by write_binary."""
    with open(path, "rb") as fh:
        dim, hbar, radius = _BIN_HEADER.unpack(fh.read(_BIN_HEADER.size))
        spec = LatticeSpec(hbar, int(dim))
        box = BoxTruncation(int(radius))
        size = box.size(spec.dim)
        data = np.frombuffer(fh.read(), dtype="<c16").reshape(size, size)
    return KernelMatrix(spec, box, data.astype(complex), provenance={"source": str(path)})
