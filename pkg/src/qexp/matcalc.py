"""Hermitian matrix functional calculus on dense complex matrices.

Operators are plain numpy arrays; every public function validates the
inputs it needs instead of relying on wrapper classes.  Eigendecomposition
is the single primitive: powers, logarithms, exponentials and support
projections act on the eigenvalues with an explicit support cutoff, so
rank-deficient states are handled by one consistent convention (the
pseudo-power: eigenvalues at or below the cutoff map to zero for every
exponent, including negative ones).
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

HERMITICITY_TOL = 1e-12
RECONSTRUCTION_TOL = 1e-10
DENSITY_EIG_FLOOR = -1e-10
DENSITY_TRACE_TOL = 1e-10
SUPPORT_RTOL = 1e-12
DEFAULT_MAX_DIM = 64


class NonHermitian(ValueError):
    """Matrix is not Hermitian within tolerance."""


class NegativeSpectrum(ValueError):
    """Matrix expected PSD has an eigenvalue below the negative tolerance."""


class InvalidOrder(ValueError):
    """Order parameter (norm p, divergence alpha, ...) outside its range."""


class DimensionMismatch(ValueError):
    """Operands act on incompatible spaces or exceed the dimension bound."""


class InvalidRank(ValueError):
    """Requested rank outside [1, dim]."""


def max_dim() -> int:
    """Configured dimension bound; override with the QEXP_MAX_DIM env var."""
    return int(os.environ.get("QEXP_MAX_DIM", DEFAULT_MAX_DIM))


def as_matrix(a) -> np.ndarray:
    """Coerce to a square complex matrix (no validation beyond shape)."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] > max_dim():
        raise DimensionMismatch(
            f"dimension {m.shape[0]} exceeds the configured bound {max_dim()}"
        )
    return m


def check_hermitian(a, tol: float = HERMITICITY_TOL) -> np.ndarray:
    """Validate Hermiticity (max absolute entry difference) and return the
    exactly Hermitian part (a + a^dagger)/2."""
    m = as_matrix(a)
    dev = np.abs(m - m.conj().T).max() if m.size else 0.0
    if dev > tol:
        raise NonHermitian(f"max |a - a^dagger| = {dev:g} exceeds {tol:g}")
    return 0.5 * (m + m.conj().T)


def check_density(a, eig_floor: float = DENSITY_EIG_FLOOR,
                  trace_tol: float = DENSITY_TRACE_TOL) -> np.ndarray:
    """Validate a density operator: Hermitian, eigenvalues >= eig_floor,
    trace within trace_tol of 1 (imaginary part below hermiticity tol)."""
    m = check_hermitian(a)
    tr = np.trace(m)
    if abs(tr.real - 1.0) > trace_tol or abs(tr.imag) > HERMITICITY_TOL:
        raise NegativeSpectrum(f"trace {tr} is not 1 within {trace_tol:g}")
    w = np.linalg.eigvalsh(m)
    if w[0] < eig_floor:
        raise NegativeSpectrum(f"eigenvalue {w[0]:g} below floor {eig_floor:g}")
    return m


@dataclass
class SpectralDecomposition:
    """Eigensystem of a Hermitian matrix: ascending eigenvalues and the
    unitary whose columns are the matching eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        u = self.eigenvectors
        return (u * self.eigenvalues) @ u.conj().T


def eig(h) -> SpectralDecomposition:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending."""
    m = check_hermitian(h)
    w, v = np.linalg.eigh(m)
    return SpectralDecomposition(w, v)


def _eigh(a) -> tuple[np.ndarray, np.ndarray]:
    """Internal eigendecomposition; symmetrizes silently (hot path)."""
    m = np.asarray(a, dtype=np.complex128)
    return np.linalg.eigh(0.5 * (m + m.conj().T))


def _support_cutoff(w: np.ndarray, cutoff: float | None) -> float:
    if cutoff is not None:
        return cutoff
    lam_max = float(w[-1]) if w.size else 0.0
    return SUPPORT_RTOL * max(lam_max, 0.0)


def _psd_eigs(a, cutoff: float | None) -> tuple[np.ndarray, np.ndarray, float]:
    w, v = _eigh(check_hermitian(a))
    cut = _support_cutoff(w, cutoff)
    if w.size and w[0] < -max(cut, SUPPORT_RTOL):
        raise NegativeSpectrum(f"eigenvalue {w[0]:g} below -{max(cut, SUPPORT_RTOL):g}")
    return w, v, cut


def mpow(a, p: float, cutoff: float | None = None) -> np.ndarray:
    """Matrix power on the support: eigenvalues <= cutoff map to 0 for every
    exponent p (pseudo-power), the rest to lambda**p."""
    w, v, cut = _psd_eigs(a, cutoff)
    on = w > cut
    wp = np.zeros_like(w)
    wp[on] = w[on] ** p
    out = (v * wp) @ v.conj().T
    return 0.5 * (out + out.conj().T)


def mlog(a, cutoff: float | None = None) -> np.ndarray:
    """Support-restricted matrix logarithm: eigenvalues <= cutoff contribute 0."""
    w, v, cut = _psd_eigs(a, cutoff)
    on = w > cut
    wl = np.zeros_like(w)
    wl[on] = np.log(w[on])
    out = (v * wl) @ v.conj().T
    return 0.5 * (out + out.conj().T)


def mexp(h) -> np.ndarray:
    """Matrix exponential of a Hermitian matrix."""
    w, v = _eigh(check_hermitian(h))
    out = (v * np.exp(w)) @ v.conj().T
    return 0.5 * (out + out.conj().T)


def support_proj(a, cutoff: float | None = None) -> np.ndarray:
    """Orthogonal projection onto the span of eigenvectors with lambda > cutoff."""
    w, v, cut = _psd_eigs(a, cutoff)
    on = (w > cut).astype(np.float64)
    out = (v * on) @ v.conj().T
    return 0.5 * (out + out.conj().T)


def absolutely_continuous(rho, sigma, cutoff: float | None = None) -> bool:
    """True iff supp(rho) is contained in supp(sigma), decided by
    ||(1 - P_sigma) rho (1 - P_sigma)||_inf <= cutoff."""
    r = check_hermitian(rho)
    comp = np.eye(r.shape[0]) - support_proj(sigma)
    off = comp @ r @ comp
    val = float(np.abs(np.linalg.eigvalsh(0.5 * (off + off.conj().T))).max())
    w = np.linalg.eigvalsh(r)
    cut = cutoff if cutoff is not None else SUPPORT_RTOL * max(float(w[-1]), 0.0)
    return val <= max(cut, SUPPORT_RTOL)


def supports_orthogonal(rho, sigma, cutoff: float = SUPPORT_RTOL) -> bool:
    """True iff the supports of rho and sigma are orthogonal
    (Tr[P_rho P_sigma] <= cutoff)."""
    overlap = float(np.trace(support_proj(rho) @ support_proj(sigma)).real)
    return overlap <= cutoff


def schatten_norm(a, p: float) -> float:
    """Schatten p-norm of a Hermitian matrix, p >= 1 or infinity."""
    m = check_hermitian(a)
    w = np.abs(np.linalg.eigvalsh(m))
    if np.isinf(p):
        return float(w.max()) if w.size else 0.0
    if p < 1:
        raise InvalidOrder(f"Schatten order p = {p} must be >= 1 or inf")
    top = float(w.max()) if w.size else 0.0
    if top == 0.0:
        return 0.0
    return top * float(np.sum((w / top) ** p)) ** (1.0 / p)


def trace_distance(a, b) -> float:
    """Trace distance (1/2)||a - b||_1."""
    return 0.5 * schatten_norm(np.asarray(a) - np.asarray(b), 1.0)


def tensor(a, b) -> np.ndarray:
    """Kronecker product; the result must stay within the dimension bound."""
    ma, mb = np.asarray(a, dtype=np.complex128), np.asarray(b, dtype=np.complex128)
    out_dim = ma.shape[0] * mb.shape[0]
    if out_dim > max_dim():
        raise DimensionMismatch(
            f"product dimension {out_dim} exceeds the configured bound {max_dim()}"
        )
    return np.kron(ma, mb)


@dataclass
class PinchingMap:
    """Conditional expectation: either zero out entries across index blocks,
    or average over an A-factor, (1_A/d_A) otimes Tr_A."""

    blocks: tuple[tuple[int, ...], ...] | None = None
    factors: tuple[int, int] | None = None

    def __post_init__(self):
        if (self.blocks is None) == (self.factors is None):
            raise DimensionMismatch("specify exactly one of blocks or factors")
        if self.blocks is not None:
            flat = sorted(i for blk in self.blocks for i in blk)
            if flat != list(range(len(flat))):
                raise DimensionMismatch("blocks must partition {0..dim-1} exactly")
            self.blocks = tuple(tuple(int(i) for i in blk) for blk in self.blocks)
        else:
            d_a, d_b = self.factors
            if d_a < 1 or d_b < 1:
                raise DimensionMismatch("factor dimensions must be positive")
            self.factors = (int(d_a), int(d_b))

    @property
    def dim(self) -> int:
        if self.blocks is not None:
            return sum(len(blk) for blk in self.blocks)
        return self.factors[0] * self.factors[1]


def pinch(e: PinchingMap, a) -> np.ndarray:
    """Apply a pinching map; trace-preserving within rounding."""
    m = as_matrix(a)
    if m.shape[0] != e.dim:
        raise DimensionMismatch(f"pinching on dim {e.dim}, operand dim {m.shape[0]}")
    if e.blocks is not None:
        label = np.empty(e.dim, dtype=np.intp)
        for k, blk in enumerate(e.blocks):
            for i in blk:
                label[i] = k
        mask = label[:, None] == label[None, :]
        return np.where(mask, m, 0.0)
    d_a, d_b = e.factors
    tr_a = np.einsum("aiaj->ij", m.reshape(d_a, d_b, d_a, d_b))
    return np.kron(np.eye(d_a) / d_a, tr_a)


def random_density(dim: int, rank: int, seed: int) -> np.ndarray:
    """Seeded random density operator with the exact requested rank
    (eigenbasis from a Haar-ish unitary, eigenvalues from a Dirichlet draw)."""
    if dim < 1 or dim > max_dim():
        raise DimensionMismatch(f"dim {dim} outside [1, {max_dim()}]")
    if not 1 <= rank <= dim:
        raise InvalidRank(f"rank {rank} outside [1, {dim}]")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    q = q * (np.diagonal(r) / np.abs(np.diagonal(r)))
    lam = rng.dirichlet(np.full(rank, 2.0))
    cols = q[:, :rank]
    out = (cols * lam) @ cols.conj().T
    return 0.5 * (out + out.conj().T)


def random_prior(k: int, seed: int) -> np.ndarray:
    """Seeded random probability vector over k symbols."""
    if k < 1:
        raise InvalidRank(f"need at least one symbol, got k = {k}")
    rng = np.random.default_rng(seed)
    return rng.dirichlet(np.ones(k))


def matrix_to_json(a) -> dict:
    """Encode a matrix as {"dim": d, "re": [[...]], "im": [[...]]}."""
    m = as_matrix(a)
    return {
        "dim": int(m.shape[0]),
        "re": m.real.tolist(),
        "im": m.imag.tolist(),
    }


def matrix_from_json(obj: dict) -> np.ndarray:
    """Decode the matrix JSON form; validates shape against "dim"."""
    try:
        d = int(obj["dim"])
        re = np.asarray(obj["re"], dtype=np.float64)
        im = np.asarray(obj["im"], dtype=np.float64)
    except (KeyError, TypeError, ValueError) as exc:
        raise DimensionMismatch(f"malformed matrix object: {exc}") from exc
    if re.shape != (d, d) or im.shape != (d, d):
        raise DimensionMismatch(
            f"matrix entries have shape {re.shape}/{im.shape}, expected ({d}, {d})"
        )
    return as_matrix(re + 1j * im)
