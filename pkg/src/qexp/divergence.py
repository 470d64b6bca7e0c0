"""Order-alpha quantum Renyi divergences in three flavours, plus the
relative entropy, endpoint limits, relative-entropy variances, conditional
divergence over a channel, and classical-quantum joint states.

Values are natural-log based ("nats").  Finite results are ordinary floats;
the infinite value is math.inf.  Every trace appearing inside a logarithm is
evaluated through a log-sum-exp over eigenvalue pairs so that extreme orders
(used by the endpoint limit estimates) do not underflow.
"""

from __future__ import annotations

import enum
import math

import numpy as np
from scipy.special import logsumexp

from .matcalc import (
    SUPPORT_RTOL,
    DimensionMismatch,
    InvalidOrder,
    NegativeSpectrum,
    _eigh,
    absolutely_continuous,
    check_hermitian,
    mlog,
    mpow,
    schatten_norm,
    support_proj,
    supports_orthogonal,
)


class ZeroOperator(ValueError):
    """First argument has (numerically) zero trace."""


class SupportViolation(ValueError):
    """Operation requires supp(rho) contained in supp(sigma)."""


class DivergenceKind(enum.Enum):
    """The three quantum generalizations of the classical Renyi divergence."""

    PETZ = "petz"
    SANDWICHED = "sandwiched"
    LOG_EUCLIDEAN = "log-euclidean"


INF = math.inf

# Two-point probe orders for the endpoint limit estimates.
_ALPHA_LOW = (1e-3, 5e-4)
_ALPHA_HIGH = (1e3, 2e3)

# Below this order the sandwiched power of sigma is extreme enough that
# double precision underflows; switch to high-precision arithmetic.
_MP_ALPHA = 0.02


def uses_limit_estimate(kind: DivergenceKind, alpha: float) -> bool:
    """True when divergence(kind, ..., alpha) is a two-point numeric limit
    rather than a closed form (endpoints without a standard expression)."""
    if alpha == 0.0:
        return kind is not DivergenceKind.PETZ
    if math.isinf(alpha):
        return kind is not DivergenceKind.SANDWICHED
    return False


def _check_alpha(alpha: float) -> float:
    a = float(alpha)
    if math.isnan(a) or a < 0.0:
        raise InvalidOrder(f"divergence order alpha = {alpha} must lie in [0, inf]")
    return a


def _psd_spectrum(a) -> tuple[np.ndarray, np.ndarray, float]:
    """Eigensystem of a PSD matrix with its relative support cutoff."""
    w, v = _eigh(check_hermitian(a))
    cut = SUPPORT_RTOL * max(float(w[-1]), 0.0)
    if w[0] < -max(cut, SUPPORT_RTOL):
        raise NegativeSpectrum(f"eigenvalue {w[0]:g} below tolerance")
    return w, v, cut


def _log_trace_petz(rho, sigma, alpha: float) -> float:
    """log Tr[rho^alpha sigma^(1-alpha)] on the supports; -inf if empty."""
    wr, vr, cr = _psd_spectrum(rho)
    ws, vs, cs = _psd_spectrum(sigma)
    overlap = np.abs(vr.conj().T @ vs) ** 2
    keep_r = wr > cr
    keep_s = ws > cs
    if not keep_r.any() or not keep_s.any():
        return -INF
    lr = np.log(wr[keep_r])
    ls = np.log(ws[keep_s])
    expo = alpha * lr[:, None] + (1.0 - alpha) * ls[None, :]
    wts = overlap[np.ix_(keep_r, keep_s)]
    if not (wts > 0).any():
        return -INF
    return float(logsumexp(expo, b=wts))


def _log_trace_sandwiched(rho, sigma, alpha: float) -> float:
    """log Tr[(sigma^((1-a)/2a) rho sigma^((1-a)/2a))^alpha].

    The sandwiched product spans a dynamic range of roughly
    cond(sigma)^|1/alpha - 1|, and the subsequent alpha-power re-inflates
    small eigenvalues, so no fixed support cutoff on the product is safe.
    Instead the rank of the product is decided from the (well-scaled)
    supports of rho and sigma, exactly that many eigenvalues are kept, and
    the whole computation moves to high-precision arithmetic once the
    genuine spectrum would dip below double-precision noise."""
    rho = check_hermitian(rho)
    p = (1.0 - alpha) / (2.0 * alpha)
    ws, _, cs = _psd_spectrum(sigma)
    pos_s = ws[ws > max(cs, 0.0)]
    if pos_s.size == 0:
        return -INF
    proj = support_proj(sigma)
    core = proj @ rho @ proj
    wc = np.linalg.eigvalsh(0.5 * (core + core.conj().T))
    cut_c = SUPPORT_RTOL * max(float(wc[-1]), 0.0)
    rank = int(np.sum(wc > cut_c))
    if rank == 0:
        return -INF
    pos_c = wc[wc > cut_c]
    span = (2.0 * abs(p) * math.log10(float(pos_s[-1] / pos_s[0]))
            + math.log10(float(pos_c[-1] / pos_c[0])))
    if span > 12.0:
        return _log_trace_sandwiched_mp(rho, sigma, alpha, rank, span)
    s_half = mpow(sigma, p)
    m = s_half @ rho @ s_half
    w = np.linalg.eigvalsh(0.5 * (m + m.conj().T))
    w = w[::-1][:rank]
    w = w[w > 0.0]
    if w.size == 0:
        return -INF
    return float(logsumexp(alpha * np.log(w)))


def _log_trace_sandwiched_mp(rho, sigma, alpha: float, rank: int,
                             span: float) -> float:
    """High-precision evaluation of the sandwiched trace term, keeping the
    `rank` leading eigenvalues of the product (the rest are genuine zeros)."""
    from mpmath import mp

    p = (1.0 - alpha) / (2.0 * alpha)
    digits = min(80 + int(1.2 * span), 40_000)
    with mp.workdps(digits):
        sig = mp.matrix(np.asarray(sigma, dtype=complex).tolist())
        e_s, q_s = mp.eighe(sig)
        top = max(e_s[i] for i in range(sig.rows))
        if top <= 0:
            return -INF
        cut = top * mp.mpf(SUPPORT_RTOL)
        powed = mp.diag([e_s[i] ** mp.mpf(p) if e_s[i] > cut else mp.mpf(0)
                         for i in range(sig.rows)])
        s_half = q_s * powed * q_s.transpose_conj()
        m = s_half * mp.matrix(np.asarray(rho, dtype=complex).tolist()) * s_half
        e_m = mp.eighe((m + m.transpose_conj()) / 2, eigvals_only=True)
        kept = sorted((e_m[i] for i in range(m.rows)), reverse=True)[:rank]
        kept = [e for e in kept if e > 0]
        if not kept:
            return -INF
        total = mp.fsum(e ** mp.mpf(alpha) for e in kept)
        return float(mp.log(total))


def _support_intersection(rho, sigma) -> np.ndarray:
    """Orthonormal basis (columns) of supp(rho) intersect supp(sigma)."""
    p = support_proj(rho) + support_proj(sigma)
    w, v = np.linalg.eigh(0.5 * (p + p.conj().T))
    return v[:, w > 2.0 - 1e-8]


def _log_trace_logeuclid(rho, sigma, alpha: float) -> float:
    """log Tr[exp(alpha log rho + (1-alpha) log sigma)] with the sum of
    support-restricted logs compressed to the intersection of supports."""
    h = alpha * mlog(rho) + (1.0 - alpha) * mlog(sigma)
    basis = _support_intersection(rho, sigma)
    if basis.shape[1] == 0:
        return -INF
    h_r = basis.conj().T @ h @ basis
    w = np.linalg.eigvalsh(0.5 * (h_r + h_r.conj().T))
    return float(logsumexp(w))


_LOG_TRACE = {
    DivergenceKind.PETZ: _log_trace_petz,
    DivergenceKind.SANDWICHED: _log_trace_sandwiched,
    DivergenceKind.LOG_EUCLIDEAN: _log_trace_logeuclid,
}


def _trace_of(rho) -> float:
    tr = float(np.trace(np.asarray(rho)).real)
    if tr <= 1e-12:
        raise ZeroOperator(f"trace {tr:g} is numerically zero")
    return tr


def umegaki(rho, sigma) -> float:
    """Relative entropy Tr[rho (log rho - log sigma)] / Tr[rho]; +inf when
    supp(rho) is not contained in supp(sigma)."""
    rho = check_hermitian(rho)
    tr = _trace_of(rho)
    if not absolutely_continuous(rho, sigma):
        return INF
    x = mlog(rho / tr) - mlog(sigma)
    val = float(np.einsum("ij,ji->", rho / tr, x).real)
    if math.isnan(val):
        raise FloatingPointError("relative entropy evaluated to NaN")
    return val


def divergence(kind: DivergenceKind, rho, sigma, alpha: float) -> float:
    """Order-alpha Renyi divergence of the given kind, normalized by Tr[rho].

    Closed forms are used at alpha = 1 (relative entropy), alpha = 0 for the
    Petz kind and alpha = inf for the sandwiched kind; the remaining
    endpoints are two-point numeric limits (see uses_limit_estimate)."""
    kind = DivergenceKind(kind)
    alpha = _check_alpha(alpha)
    rho = check_hermitian(rho)
    sigma = check_hermitian(sigma)
    if rho.shape != sigma.shape:
        raise DimensionMismatch(f"shapes {rho.shape} vs {sigma.shape}")
    tr = _trace_of(rho)
    if supports_orthogonal(rho, sigma):
        return INF
    if alpha == 1.0:
        return umegaki(rho, sigma)
    if alpha > 1.0 and not absolutely_continuous(rho, sigma):
        return INF
    if alpha == 0.0:
        if kind is DivergenceKind.PETZ:
            t = float(np.einsum("ij,ji->", support_proj(rho), sigma).real)
            if t <= 0.0:
                return INF
            return math.log(tr) - math.log(t)
        lo, hi = _ALPHA_LOW
        return 2.0 * divergence(kind, rho, sigma, hi) - divergence(kind, rho, sigma, lo)
    if math.isinf(alpha):
        if kind is DivergenceKind.SANDWICHED:
            s_inv = mpow(sigma, -0.5)
            top = schatten_norm(s_inv @ rho @ s_inv, math.inf)
            if top <= 0.0:
                return INF
            return math.log(top) - math.log(tr)
        lo, hi = _ALPHA_HIGH
        return 2.0 * divergence(kind, rho, sigma, hi) - divergence(kind, rho, sigma, lo)
    log_t = _LOG_TRACE[kind](rho, sigma, alpha)
    if log_t == -INF:
        # Vanishing overlap: +inf below order one (above, support was checked).
        return INF if alpha < 1.0 else -INF
    val = (log_t - math.log(tr)) / (alpha - 1.0)
    if math.isnan(val):
        raise FloatingPointError("divergence evaluated to NaN")
    return val


def _log_mean(lam: np.ndarray, cut: float) -> np.ndarray:
    """Matrix of logarithmic means L(lam_i, lam_j); rows/columns at or below
    the support cutoff get weight zero."""
    a = lam[:, None]
    b = lam[None, :]
    dead = (a <= cut) | (b <= cut)
    close = np.abs(a - b) <= 1e-12 * (a + b)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = (a - b) / (np.log(np.where(dead | close, 1.0, a))
                           - np.log(np.where(dead | close, 1.0, b)))
    out = np.where(close, 0.5 * (a + b), ratio)
    return np.where(dead, 0.0, out)


def variance(kind: DivergenceKind, rho, sigma) -> float:
    """Relative-entropy variance of the given kind.  The Petz and sandwiched
    kinds share Tr[rho (log rho - log sigma)^2] - D^2; the log-Euclidean kind
    weights the same difference by logarithmic means of rho's spectrum."""
    kind = DivergenceKind(kind)
    rho = check_hermitian(rho)
    tr = _trace_of(rho)
    rho = rho / tr
    if not absolutely_continuous(rho, sigma):
        raise SupportViolation("variance requires supp(rho) within supp(sigma)")
    d = umegaki(rho, sigma)
    x = mlog(rho) - mlog(sigma)
    if kind in (DivergenceKind.PETZ, DivergenceKind.SANDWICHED):
        val = float(np.einsum("ij,jk,ki->", rho, x, x).real) - d * d
    else:
        lam, u, cut = _psd_spectrum(rho)
        xt = u.conj().T @ x @ u
        weights = _log_mean(lam, cut)
        val = float(np.sum(weights * np.abs(xt) ** 2)) - d * d
    if math.isnan(val):
        raise FloatingPointError("variance evaluated to NaN")
    return val


def conditional_divergence(kind: DivergenceKind, channel, sigma, prior,
                           alpha: float) -> float:
    """Prior-weighted divergence sum_x P(x) D(W_x || sigma); +inf as soon as
    one positive-weight term is infinite."""
    weights = np.asarray(prior, dtype=float).ravel()
    outputs = list(channel.outputs)
    if weights.size != len(outputs):
        raise DimensionMismatch(
            f"prior has {weights.size} weights for {len(outputs)} outputs"
        )
    total = 0.0
    for w, out in zip(weights, outputs):
        if w <= 0.0:
            continue
        term = divergence(kind, out, sigma, alpha)
        if math.isinf(term):
            return INF
        total += w * term
    return total


def joint_state(prior, channel) -> np.ndarray:
    """Block-diagonal classical-quantum state sum_x P(x) |x><x| tensor W_x."""
    weights = np.asarray(prior, dtype=float).ravel()
    outputs = list(channel.outputs)
    if weights.size != len(outputs):
        raise DimensionMismatch(
            f"prior has {weights.size} weights for {len(outputs)} outputs"
        )
    d = int(channel.dim)
    k = len(outputs)
    out = np.zeros((k * d, k * d), dtype=np.complex128)
    for x, (w, mat) in enumerate(zip(weights, outputs)):
        m = np.asarray(mat, dtype=np.complex128)
        if m.shape != (d, d):
            raise DimensionMismatch(f"output {x} has shape {m.shape}, expected ({d}, {d})")
        out[x * d:(x + 1) * d, x * d:(x + 1) * d] = w * m
    return out


def product_state(prior, sigma) -> np.ndarray:
    """Product reference diag(P) tensor sigma on the joint space."""
    weights = np.asarray(prior, dtype=float).ravel()
    return np.kron(np.diag(weights), np.asarray(sigma, dtype=np.complex128))
