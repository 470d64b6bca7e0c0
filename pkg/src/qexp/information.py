"""Renyi and Augustin information measures of classical-quantum channels.

A channel here is a finite family of density operators indexed by input
symbols.  The first-type information minimizes the divergence between the
joint input-output state and a product reference; the second-type (Augustin)
information minimizes the prior-weighted divergence of the outputs.  For the
Petz kind both admit closed forms or a fixed-point iteration; the other kinds
fall back to a derivative-free minimizer over the state simplex.
"""

from __future__ import annotations

import dataclasses
import functools
import math

import numpy as np
from scipy.optimize import minimize
from scipy.special import logsumexp

from .divergence import (
    _ALPHA_HIGH,
    _ALPHA_LOW,
    INF,
    DivergenceKind,
    ZeroOperator,
    conditional_divergence,
    divergence,
    umegaki,
)
from .matcalc import (
    SUPPORT_RTOL,
    DimensionMismatch,
    InvalidOrder,
    _eigh,
    check_density,
    matrix_from_json,
    matrix_to_json,
    mlog,
    mpow,
    random_density,
    support_proj,
    trace_distance,
)

PRIOR_TOL = 1e-12

# Decimal dynamic range beyond which weighted matrix powers leave double
# precision and the evaluation moves to high-precision arithmetic.
_SPAN_DIGITS = 12.0


class InvalidPrior(ValueError):
    """Prior weights are negative or do not sum to one."""


class NonConvergence(RuntimeError):
    """Iteration or optimizer failed to reach the requested tolerance."""


def check_prior(weights, size: int | None = None) -> np.ndarray:
    """Validate a probability vector and return it as a float array."""
    w = np.asarray(weights, dtype=float).ravel()
    if w.size < 1:
        raise InvalidPrior("prior needs at least one weight")
    if size is not None and w.size != size:
        raise DimensionMismatch(f"prior has {w.size} weights, expected {size}")
    if (w < 0.0).any():
        raise InvalidPrior(f"negative weight {w.min():g}")
    if abs(w.sum() - 1.0) > PRIOR_TOL:
        raise InvalidPrior(f"weights sum to {w.sum():.17g}, not 1")
    return w


@dataclasses.dataclass(frozen=True, eq=False)
class CqChannel:
    """Classical-quantum channel: one output density operator per symbol."""

    dim: int
    outputs: tuple
    labels: tuple

    def __post_init__(self):
        if len(self.outputs) < 1:
            raise DimensionMismatch("channel needs at least one output")
        if len(self.labels) != len(self.outputs):
            raise DimensionMismatch(
                f"{len(self.labels)} labels for {len(self.outputs)} outputs"
            )
        checked = []
        for x, out in enumerate(self.outputs):
            mat = check_density(out)
            if mat.shape != (self.dim, self.dim):
                raise DimensionMismatch(
                    f"output {x} has shape {mat.shape}, expected ({self.dim}, {self.dim})"
                )
            checked.append(mat)
        object.__setattr__(self, "outputs", tuple(checked))
        object.__setattr__(self, "labels", tuple(str(l) for l in self.labels))

    @classmethod
    def from_outputs(cls, outputs, labels=None) -> "CqChannel":
        outputs = [np.asarray(o) for o in outputs]
        if not outputs:
            raise DimensionMismatch("channel needs at least one output")
        if labels is None:
            labels = [f"x{i}" for i in range(len(outputs))]
        return cls(dim=outputs[0].shape[0], outputs=tuple(outputs),
                   labels=tuple(labels))

    @property
    def size(self) -> int:
        return len(self.outputs)


def random_channel(dim: int, k: int, seed: int,
                   rank: int | None = None) -> CqChannel:
    """Seeded channel with k independent random outputs of the given rank."""
    seeds = np.random.SeedSequence(seed).generate_state(k)
    outs = [random_density(dim, rank or dim, int(s)) for s in seeds]
    return CqChannel.from_outputs(outs)


@dataclasses.dataclass
class MeanResult:
    """Optimizing state together with the value it certifies."""

    mean: np.ndarray
    value: float
    iterations: int
    residual: float


@dataclasses.dataclass(frozen=True)
class OptimizerOptions:
    """Shared knobs for the fixed-point iteration and the state minimizer.

    tolerance is a trace-distance criterion for fixed points;
    objective_tolerance bounds the value spread of the final simplex for the
    derivative-free minimizer.  When initial is given it replaces the default
    starting point of the search; otherwise prescan toggles the coarse qubit
    grid sweep that picks the starting point.
    """

    tolerance: float = 1e-9
    objective_tolerance: float = 1e-10
    max_iterations: int = 10_000
    damping: float = 0.0
    seed: int | None = None
    initial: np.ndarray | None = None
    prescan: bool = True

    def __post_init__(self):
        if not self.tolerance > 0.0:
            raise ValueError(f"tolerance {self.tolerance} must be positive")
        if not self.objective_tolerance > 0.0:
            raise ValueError("objective_tolerance must be positive")
        if not 0.0 <= self.damping < 1.0:
            raise ValueError(f"damping {self.damping} outside [0, 1)")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")


def _check_info_order(alpha: float) -> float:
    a = float(alpha)
    if math.isnan(a) or a < 0.0:
        raise InvalidOrder(f"order alpha = {alpha} must lie in [0, inf]")
    return a


def avg_state(prior, channel: CqChannel) -> np.ndarray:
    """Prior-averaged output state sum_x P(x) W_x."""
    w = check_prior(prior, channel.size)
    out = np.zeros((channel.dim, channel.dim), dtype=np.complex128)
    for p, mat in zip(w, channel.outputs):
        if p > 0.0:
            out += p * mat
    return out


def holevo_info(prior, channel: CqChannel) -> float:
    """Average relative entropy of the outputs to their prior average."""
    w = check_prior(prior, channel.size)
    avg = avg_state(w, channel)
    return sum(p * umegaki(out, avg)
               for p, out in zip(w, channel.outputs) if p > 0.0)


def compound_divergence(kind: DivergenceKind, prior, channel: CqChannel,
                        sigma, alpha: float) -> float:
    """Divergence between the channel's joint state and prior (x) sigma,
    evaluated blockwise as a log-average of the per-symbol divergences."""
    kind = DivergenceKind(kind)
    w = check_prior(prior, channel.size)
    alpha = _check_info_order(alpha)
    live = [(p, out) for p, out in zip(w, channel.outputs) if p > 0.0]
    if alpha == 1.0:
        return conditional_divergence(kind, channel, sigma, w, 1.0)
    if alpha == 0.0:
        if kind is DivergenceKind.PETZ:
            t = sum(p * float(np.einsum("ij,ji->", support_proj(out), sigma).real)
                    for p, out in live)
            return -math.log(t) if t > 0.0 else INF
        lo, hi = _ALPHA_LOW
        return (2.0 * compound_divergence(kind, w, channel, sigma, hi)
                - compound_divergence(kind, w, channel, sigma, lo))
    if math.isinf(alpha):
        if kind is DivergenceKind.SANDWICHED:
            return max(divergence(kind, out, sigma, alpha) for _, out in live)
        lo, hi = _ALPHA_HIGH
        return (2.0 * compound_divergence(kind, w, channel, sigma, hi)
                - compound_divergence(kind, w, channel, sigma, lo))
    args = []
    for p, out in live:
        d = divergence(kind, out, sigma, alpha)
        if math.isinf(d):
            if alpha > 1.0:
                return INF
            continue
        args.append(math.log(p) + (alpha - 1.0) * d)
    if not args:
        return INF
    return float(logsumexp(np.asarray(args))) / (alpha - 1.0)


# ---------------------------------------------------------------------------
# Fast objective evaluation for the state minimizer


def _lse(a: np.ndarray, axis: int = -1) -> np.ndarray:
    """Low-overhead log-sum-exp along one axis; tolerates +-inf entries."""
    m = np.max(a, axis=axis, keepdims=True)
    m = np.where(np.isfinite(m), m, 0.0)
    with np.errstate(divide="ignore", over="ignore"):
        return np.squeeze(m, axis) + np.log(np.sum(np.exp(a - m), axis=axis))


class _BlockObjective:
    """Blockwise divergence objective with shared spectral precomputation.

    The per-symbol output spectra are decomposed once at construction, so
    each evaluation costs one small eigensystem plus a handful of stacked
    matrix products.  Aggregation follows the requested mode: "compound"
    takes the log-average matching the joint-versus-product divergence,
    "conditional" the prior-weighted average, and "entropy" the tilted
    log-average used by the conditional-entropy reference.

    Evaluations accept either a density matrix or, through from_spectral,
    the log-eigenvalues and eigenvectors of one; the exponential
    parameterization of the minimizer passes its own eigensystem and skips
    a decomposition.  Everything runs in log space, and a symbol whose
    tilted spectrum collapses below double precision is recomputed through
    the robust per-pair routine.
    """

    def __init__(self, kind: DivergenceKind, prior, channel: CqChannel,
                 alpha: float, mode: str = "compound"):
        if mode not in ("compound", "conditional", "entropy"):
            raise ValueError(f"unknown aggregation mode {mode!r}")
        self.kind = DivergenceKind(kind)
        self.alpha = _check_info_order(alpha)
        if self.alpha == 0.0 or self.alpha == 1.0:
            raise InvalidOrder("fast objective needs alpha in (0, 1) or (1, inf]")
        if math.isinf(self.alpha) and self.kind is not DivergenceKind.SANDWICHED:
            raise InvalidOrder("only the sandwiched kind is evaluated at alpha = inf")
        self.mode = mode
        w = check_prior(prior, channel.size)
        self._p = w[w > 0.0]
        self._logp = np.log(self._p)
        self._outputs = [out for p, out in zip(w, channel.outputs) if p > 0.0]
        spectra = []
        for out in self._outputs:
            lam, u = _eigh(out)
            keep = lam > SUPPORT_RTOL * max(float(lam[-1]), 0.0)
            if not keep.any():
                raise ZeroOperator("channel output with zero spectrum")
            spectra.append((lam[keep], u[:, keep]))
        # Uniform output rank lets every per-symbol product and eigensystem
        # run as one stacked call, which dominates the evaluation cost.
        ranks = {lam.size for lam, _ in spectra}
        self._rank = ranks.pop() if len(ranks) == 1 else None
        if self._rank is not None:
            self._lam = np.stack([lam for lam, _ in spectra])
            self._cols = np.stack([u for _, u in spectra])
        else:
            self._lam = [lam for lam, _ in spectra]
            self._cols = [u for _, u in spectra]
        self._loglam = [np.log(lam) for lam in self._lam]
        if self._rank is not None:
            self._loglam = np.stack(self._loglam)
            self._sqrtlam = np.sqrt(self._lam)

    def __call__(self, sigma) -> float:
        sig = np.asarray(sigma, dtype=np.complex128)
        lam, v = np.linalg.eigh(0.5 * (sig + sig.conj().T))
        return self.from_spectral(np.log(np.maximum(lam, 1e-300)), v)

    def from_spectral(self, log_s: np.ndarray, v: np.ndarray) -> float:
        """Objective value for the state with the given log-spectrum."""
        a = self.alpha
        if self.kind is DivergenceKind.PETZ:
            t = self._terms_petz(log_s, v)
        elif self.kind is DivergenceKind.SANDWICHED:
            t = self._terms_sandwiched(log_s, v)
        else:
            t = self._terms_log_euclidean(log_s, v)
        if math.isinf(a):
            if self.mode == "conditional":
                return float(np.dot(self._p, t))
            if self.mode == "entropy":
                return float(np.max(self._logp + t))
            return float(np.max(t))
        if self.mode == "conditional":
            return float(np.dot(self._p, t)) / (a - 1.0)
        weights = self._logp if self.mode == "compound" else a * self._logp
        return float(_lse(weights + t)) / (a - 1.0)

    def _terms_petz(self, log_s, v):
        """Per-symbol log Tr[W^a sigma^(1-a)], fully in log space."""
        a = self.alpha
        ref = (1.0 - a) * log_s
        if self._rank is not None:
            overlap = np.abs(np.matmul(self._cols.conj().transpose(0, 2, 1),
                                       v[None, :, :])) ** 2
            with np.errstate(divide="ignore"):
                log_q = _lse(ref[None, None, :] + np.log(overlap), axis=2)
            return _lse(a * self._loglam + log_q, axis=1)
        t = np.empty(len(self._outputs))
        for i, (loglam, u) in enumerate(zip(self._loglam, self._cols)):
            overlap = np.abs(u.conj().T @ v) ** 2
            with np.errstate(divide="ignore"):
                log_q = _lse(ref[None, :] + np.log(overlap), axis=1)
            t[i] = _lse(a * loglam + log_q)
        return t

    def _terms_sandwiched(self, log_s, v):
        """Per-symbol log Tr[(sigma^p W sigma^p)^a] with p = (1-a)/2a,
        or the top log-eigenvalue of sigma^(-1/2) W sigma^(-1/2) at a = inf."""
        a = self.alpha
        p_exp = -0.5 if math.isinf(a) else (1.0 - a) / (2.0 * a)
        tilt = p_exp * log_s
        shift = float(tilt.max())
        scale = np.exp(tilt - shift)
        if self._rank is not None:
            g = np.matmul(v.conj().T[None, :, :], self._cols)
            core = scale[None, :, None] * g * self._sqrtlam[:, None, :]
            gram = np.matmul(core.conj().transpose(0, 2, 1), core)
            m = np.linalg.eigvalsh(gram)
            peak = m[:, -1]
            with np.errstate(divide="ignore"):
                logm = np.log(np.maximum(m, 0.0))
            if math.isinf(a):
                t = 2.0 * shift + logm[:, -1]
            else:
                t = 2.0 * a * shift + _lse(a * logm, axis=1)
            bad = peak <= 0.0
            if a < 1.0:
                # Only below order one can the tilt re-inflate directions the
                # double-precision Gram spectrum resolved poorly; above it
                # their share of the trace is O(eps) and the fast value stands.
                bad = bad | ((m.shape[1] > 1) & (m[:, 0] <= 1e-9 * peak))
            if bad.any():
                for i in np.flatnonzero(bad):
                    t[i] = self._robust_term(log_s, v, int(i))
            return t
        t = np.empty(len(self._outputs))
        for i, (lam, u) in enumerate(zip(self._lam, self._cols)):
            core = scale[:, None] * (v.conj().T @ u) * np.sqrt(lam)[None, :]
            gram = core.conj().T @ core
            m = np.linalg.eigvalsh(gram)
            peak = float(m[-1])
            if peak <= 0.0 or (a < 1.0 and m.size > 1
                               and float(m[0]) <= 1e-9 * peak):
                t[i] = self._robust_term(log_s, v, i)
            elif math.isinf(a):
                t[i] = 2.0 * shift + math.log(peak)
            else:
                t[i] = 2.0 * a * shift + float(_lse(a * np.log(m)))
        return t

    def _terms_log_euclidean(self, log_s, v):
        """Per-symbol log Tr exp(a mlog W + (1-a) mlog sigma), compressed to
        the output support (the iterates here are full rank)."""
        a = self.alpha
        lsig = (v * log_s[None, :]) @ v.conj().T
        if self._rank is not None:
            inner = np.matmul(self._cols.conj().transpose(0, 2, 1),
                              np.matmul(lsig[None, :, :], self._cols))
            h = (1.0 - a) * 0.5 * (inner + inner.conj().transpose(0, 2, 1))
            idx = np.arange(self._rank)
            h[:, idx, idx] += a * self._loglam
            return _lse(np.linalg.eigvalsh(h), axis=1)
        t = np.empty(len(self._outputs))
        for i, (loglam, u) in enumerate(zip(self._loglam, self._cols)):
            inner = u.conj().T @ lsig @ u
            h = (1.0 - a) * 0.5 * (inner + inner.conj().T)
            h[np.diag_indices_from(h)] += a * loglam
            t[i] = float(_lse(np.linalg.eigvalsh(h)))
        return t

    def _robust_term(self, log_s, v, i):
        """Recompute one symbol's term via the validating divergence."""
        sig = (v * np.exp(log_s)[None, :]) @ v.conj().T
        d = divergence(self.kind, self._outputs[i],
                       0.5 * (sig + sig.conj().T), self.alpha)
        return d if math.isinf(self.alpha) else (self.alpha - 1.0) * d


# ---------------------------------------------------------------------------
# Petz closed forms


def _petz_alpha_root(coefs, outputs, alpha: float) -> tuple[float, np.ndarray]:
    """log Tr[S^(1/alpha)] and S^(1/alpha)/Tr[S^(1/alpha)] for the weighted
    power sum S = sum_x c_x W_x^alpha.

    All spectra are handled in log space with a global shift; once the
    decimal span of the weighted eigenvalue powers exceeds double precision
    the assembly moves to high-precision arithmetic.  The rank of S is fixed
    structurally (the span of the output supports), so genuine zeros are
    never confused with tiny eigenvalues that the 1/alpha root re-inflates.
    """
    systems = []
    top = -INF
    bot = INF
    proj_sum = None
    for c, out in zip(coefs, outputs):
        if c <= 0.0:
            continue
        lam, u = _eigh(out)
        cut = SUPPORT_RTOL * max(float(lam[-1]), 0.0)
        keep = lam > cut
        if not keep.any():
            raise ZeroOperator("channel output with zero spectrum")
        logs = math.log(c) + alpha * np.log(lam[keep])
        top = max(top, float(logs.max()))
        bot = min(bot, float(logs.min()))
        systems.append((c, lam, u, cut))
        p = (u[:, keep] @ u[:, keep].conj().T).real
        proj_sum = p if proj_sum is None else proj_sum + p
    if not systems:
        raise ZeroOperator("no symbol carries positive weight")
    d = systems[0][1].size
    rank = int(np.sum(np.linalg.eigvalsh(proj_sum) > 1e-9 * d))
    span = (top - bot) / math.log(10.0)
    if span > _SPAN_DIGITS:
        return _petz_alpha_root_mp(coefs, outputs, alpha, rank, span)
    s = np.zeros((d, d), dtype=np.complex128)
    for c, lam, u, cut in systems:
        scale = np.where(
            lam > cut,
            np.exp(math.log(c) + alpha * np.log(np.maximum(lam, 1e-300)) - top),
            0.0,
        )
        s += (u * scale) @ u.conj().T
    mu, v = _eigh(0.5 * (s + s.conj().T))
    order = np.argsort(mu)[::-1][:rank]
    order = order[mu[order] > 0.0]
    if order.size == 0:
        raise ZeroOperator("weighted power sum vanished")
    if mu[order].min() <= 1e-14 * mu[order].max():
        # The structural rank promises more dynamic range than double
        # precision resolved; redo the assembly with enough digits.
        return _petz_alpha_root_mp(coefs, outputs, alpha, rank, span + 25.0)
    log_mu = np.log(mu[order]) + top
    log_tr = float(logsumexp(log_mu / alpha))
    scaled = np.exp(log_mu / alpha - log_tr)
    root = (v[:, order] * scaled) @ v[:, order].conj().T
    return log_tr, 0.5 * (root + root.conj().T)


def _petz_alpha_root_mp(coefs, outputs, alpha: float, rank: int,
                        span: float) -> tuple[float, np.ndarray]:
    """High-precision assembly of the weighted power sum and its alpha root;
    keeps the `rank` leading eigenvalues (the rest are structural zeros)."""
    from mpmath import mp

    d = outputs[0].shape[0]
    digits = min(80 + int(1.2 * span), 40_000)
    with mp.workdps(digits):
        s = mp.zeros(d, d)
        for c, out in zip(coefs, outputs):
            if c <= 0.0:
                continue
            a = mp.matrix(np.asarray(out, dtype=complex).tolist())
            e, q = mp.eighe(a)
            peak = max(e[i] for i in range(d))
            cut = peak * mp.mpf(SUPPORT_RTOL)
            powed = mp.diag([e[i] ** mp.mpf(alpha) if e[i] > cut else mp.mpf(0)
                             for i in range(d)])
            s += mp.mpf(c) * (q * powed * q.transpose_conj())
        e, q = mp.eighe((s + s.transpose_conj()) / 2)
        order = sorted(range(d), key=lambda i: e[i], reverse=True)[:rank]
        order = [i for i in order if e[i] > 0]
        if not order:
            raise ZeroOperator("weighted power sum vanished")
        inv = 1 / mp.mpf(alpha)
        roots = {i: e[i] ** inv for i in order}
        tr = mp.fsum(roots.values())
        log_tr = float(mp.log(tr))
        w = mp.diag([roots[i] / tr if i in roots else mp.mpf(0)
                     for i in range(d)])
        m = q * w * q.transpose_conj()
        root = np.array([[complex(m[i, j]) for j in range(d)] for i in range(d)])
    return log_tr, 0.5 * (root + root.conj().T)


def renyi_mean_petz(prior, channel: CqChannel, alpha: float) -> MeanResult:
    """Closed-form Petz mean (sum_x P(x) W_x^alpha)^(1/alpha), normalized,
    with the first-type information (alpha/(alpha-1)) log of its trace."""
    alpha = _check_info_order(alpha)
    if alpha == 0.0 or alpha == 1.0 or math.isinf(alpha):
        raise InvalidOrder(f"closed-form mean needs alpha in (0, inf) - {{1}}, "
                           f"got {alpha}")
    w = check_prior(prior, channel.size)
    log_tr, mean = _petz_alpha_root(w, channel.outputs, alpha)
    value = alpha / (alpha - 1.0) * log_tr
    return MeanResult(mean=mean, value=value, iterations=0, residual=0.0)


def sibson_decomposition_residual(prior, channel: CqChannel, alpha: float,
                                  tau) -> float:
    """Defect of the identity splitting the divergence to an arbitrary
    reference into the information plus the divergence of the mean."""
    alpha = _check_info_order(alpha)
    if alpha == 0.0 or alpha == 1.0 or math.isinf(alpha):
        raise InvalidOrder(f"decomposition needs alpha in (0, inf) - {{1}}, "
                           f"got {alpha}")
    w = check_prior(prior, channel.size)
    res = renyi_mean_petz(w, channel, alpha)
    lhs = compound_divergence(DivergenceKind.PETZ, w, channel, tau, alpha)
    rhs = res.value + divergence(DivergenceKind.PETZ, res.mean, tau, alpha)
    return abs(lhs - rhs)


# ---------------------------------------------------------------------------
# Generic minimization over density operators


@functools.lru_cache(maxsize=16)
def _herm_basis(dim: int) -> np.ndarray:
    """Traceless Hermitian basis (generalized Gell-Mann), Tr[G_a G_b] = 2."""
    mats = []
    for i in range(dim):
        for j in range(i + 1, dim):
            sym = np.zeros((dim, dim), dtype=np.complex128)
            sym[i, j] = sym[j, i] = 1.0
            mats.append(sym)
            asym = np.zeros((dim, dim), dtype=np.complex128)
            asym[i, j] = -1.0j
            asym[j, i] = 1.0j
            mats.append(asym)
    for l in range(1, dim):
        diag = np.zeros(dim)
        diag[:l] = 1.0
        diag[l] = -l
        mats.append(np.diag(diag * math.sqrt(2.0 / (l * (l + 1)))).astype(np.complex128))
    return np.stack(mats)


def _state_from_coords(theta: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """exp(H(theta)) / Tr exp(H(theta)), evaluated with a spectral shift."""
    h = np.tensordot(theta, basis, axes=1)
    w, v = np.linalg.eigh(h)
    w = w - w.max()
    ew = np.exp(w)
    state = (v * ew) @ v.conj().T / ew.sum()
    return 0.5 * (state + state.conj().T)


def _coords_from_state(sigma, basis: np.ndarray) -> np.ndarray:
    """Coordinates whose exponential parameterization reproduces sigma
    (after a slight pull toward the maximally mixed state for rank safety)."""
    d = basis.shape[1]
    reg = 0.5 * (np.asarray(sigma, dtype=np.complex128)
                 + np.asarray(sigma, dtype=np.complex128).conj().T)
    reg = (1.0 - 1e-9) * reg / max(float(np.trace(reg).real), 1e-300) \
        + 1e-9 * np.eye(d) / d
    h = mlog(reg)
    return np.einsum("aij,ji->a", basis, h).real / 2.0


def _sphere_directions(n: int) -> np.ndarray:
    """n roughly equidistributed unit vectors (spherical Fibonacci)."""
    i = np.arange(n) + 0.5
    phi = math.pi * (1.0 + math.sqrt(5.0)) * i
    z = 1.0 - 2.0 * i / n
    r = np.sqrt(np.maximum(1.0 - z * z, 0.0))
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)


_BLOCH_RADII = (0.15, 0.4, 0.65, 0.85, 0.97)


def _bloch_prescan(objective, basis: np.ndarray) -> np.ndarray:
    """Coarse sweep of the qubit state space; returns coordinates of the
    best grid point (the maximally mixed center wins ties)."""
    candidates = [np.eye(2, dtype=np.complex128) / 2]
    for radius in _BLOCH_RADII:
        for v in radius * _sphere_directions(128):
            state = 0.5 * (np.eye(2, dtype=np.complex128)
                           + v[0] * basis[0] + v[1] * basis[1] + v[2] * basis[2])
            candidates.append(state)
    values = [float(objective(state)) for state in candidates]
    best = int(np.argmin(values))
    if best == 0:
        return np.zeros(3)
    return _coords_from_state(candidates[best], basis)


def _coordinate_objective(objective, basis: np.ndarray):
    """Wrap a state objective as a function of exponential coordinates.

    Objectives exposing from_spectral receive the iterate's eigensystem
    directly; anything else gets the assembled density matrix.
    """
    spectral = getattr(objective, "from_spectral", None)
    flat = basis.reshape(basis.shape[0], -1)
    dim = basis.shape[1]

    def f(theta):
        h = (theta @ flat).reshape(dim, dim)
        w, v = np.linalg.eigh(h)
        log_s = w - _lse(w)
        if spectral is not None:
            return float(spectral(log_s, v))
        state = (v * np.exp(log_s)[None, :]) @ v.conj().T
        return float(objective(0.5 * (state + state.conj().T)))

    return f


def minimize_over_states(objective, dim: int,
                         opts: OptimizerOptions | None = None) -> MeanResult:
    """Minimize a scalar function of a density operator.

    States are parameterized as exp(H)/Tr exp(H) over traceless Hermitian H,
    which keeps every iterate strictly positive definite.  The search is an
    adaptive Nelder-Mead from the maximally mixed state (preceded for qubits
    by a coarse grid sweep), optionally warm-started from opts.initial with
    a tight initial simplex.  Objectives exposing from_spectral are fed the
    iterate's eigensystem directly instead of an assembled matrix.  The
    reported residual is the value spread of the final simplex.
    """
    opts = opts or OptimizerOptions()
    basis = _herm_basis(dim)
    f = _coordinate_objective(objective, basis)
    options = {
        "adaptive": True,
        "xatol": 1e-7,
        "fatol": opts.objective_tolerance,
        "maxiter": opts.max_iterations,
        "maxfev": 4 * opts.max_iterations,
    }
    if opts.initial is not None:
        x0 = _coords_from_state(opts.initial, basis)
        options["initial_simplex"] = np.vstack([x0, x0 + 0.05 * np.eye(x0.size)])
    elif dim == 2 and opts.prescan:
        x0 = _bloch_prescan(objective, basis)
    else:
        x0 = np.zeros(dim * dim - 1)
    res = minimize(f, x0, method="Nelder-Mead", options=options)
    spread = float(np.max(np.abs(res.final_simplex[1] - res.final_simplex[1][0])))
    if not res.success:
        raise NonConvergence(
            f"state minimizer stalled at value {res.fun:.6g} "
            f"after {res.nfev} evaluations"
        )
    return MeanResult(
        mean=_state_from_coords(res.x, basis),
        value=float(res.fun),
        iterations=int(res.nfev),
        residual=spread,
    )


def _warm_minimize(objective, dim: int,
                   coords: np.ndarray | None = None) -> tuple[float, np.ndarray]:
    """Quasi-Newton descent for sweeping many related minimizations.

    Returns (value, coordinates); feed the coordinates back in as the next
    sweep point's start.  Falls back to the derivative-free search whenever
    the quasi-Newton step fails to return a finite value.
    """
    basis = _herm_basis(dim)
    f = _coordinate_objective(objective, basis)
    x0 = np.zeros(dim * dim - 1) if coords is None else coords
    res = minimize(f, x0, method="BFGS", options={"maxiter": 2_000})
    value = float(res.fun)
    # Precision-loss stops right at the optimum are fine; a stall with a
    # still-large gradient is not, and neither is a non-finite value.
    if math.isfinite(value) and float(np.max(np.abs(res.jac))) < 1e-4:
        return value, np.asarray(res.x, dtype=float)
    fallback = minimize_over_states(objective, dim)
    coords = _coords_from_state(fallback.mean, basis)
    return fallback.value, coords


def renyi_info(kind: DivergenceKind, prior, channel: CqChannel, alpha: float,
               opts: OptimizerOptions | None = None) -> MeanResult:
    """First-type information: smallest divergence between the joint state
    and prior (x) sigma over reference states sigma."""
    kind = DivergenceKind(kind)
    alpha = _check_info_order(alpha)
    opts = opts or OptimizerOptions()
    w = check_prior(prior, channel.size)
    if alpha == 1.0:
        return MeanResult(mean=avg_state(w, channel),
                          value=holevo_info(w, channel),
                          iterations=0, residual=0.0)
    if kind is DivergenceKind.PETZ:
        if alpha == 0.0:
            # The order-0 objective is -log Tr[A sigma] for the averaged
            # support projector A, so the infimum is -log of A's top
            # eigenvalue, attained on its leading eigenspace.
            a = sum(p * support_proj(out)
                    for p, out in zip(w, channel.outputs) if p > 0.0)
            lam, v = _eigh(a)
            peak = float(lam[-1])
            cols = v[:, lam > peak * (1.0 - 1e-9)]
            mean = cols @ cols.conj().T / cols.shape[1]
            return MeanResult(mean=mean, value=-math.log(peak),
                              iterations=0, residual=0.0)
        if math.isinf(alpha):
            lo, hi = _ALPHA_HIGH
            r_lo = renyi_mean_petz(w, channel, lo)
            r_hi = renyi_mean_petz(w, channel, hi)
            return MeanResult(mean=r_hi.mean,
                              value=2.0 * r_hi.value - r_lo.value,
                              iterations=0, residual=0.0)
        return renyi_mean_petz(w, channel, alpha)
    if alpha == 0.0 or (math.isinf(alpha) and kind is not DivergenceKind.SANDWICHED):
        lo, hi = _ALPHA_LOW if alpha == 0.0 else _ALPHA_HIGH
        r_lo = renyi_info(kind, w, channel, lo, opts)
        warm = dataclasses.replace(opts, initial=r_lo.mean)
        r_hi = renyi_info(kind, w, channel, hi, warm)
        return MeanResult(mean=r_hi.mean, value=2.0 * r_hi.value - r_lo.value,
                          iterations=r_lo.iterations + r_hi.iterations,
                          residual=max(r_lo.residual, r_hi.residual))
    objective = _BlockObjective(kind, w, channel, alpha, mode="compound")
    res = minimize_over_states(objective, channel.dim, opts)
    return dataclasses.replace(
        res, value=compound_divergence(kind, w, channel, res.mean, alpha))


# ---------------------------------------------------------------------------
# Second-type (Augustin) information


def _augustin_map(weights, outputs, sigma, alpha: float) -> np.ndarray:
    """One step of the Augustin fixed-point map: the prior average of the
    normalized tilted outputs sigma^p W^alpha sigma^p with p = (1-alpha)/2."""
    p = (1.0 - alpha) / 2.0
    s_half = mpow(sigma, p)
    acc = np.zeros_like(np.asarray(sigma, dtype=np.complex128))
    for c, out in zip(weights, outputs):
        if c <= 0.0:
            continue
        m = s_half @ mpow(out, alpha) @ s_half
        t = float(np.trace(m).real)
        if t <= 1e-300:
            raise ZeroOperator(
                "tilted output lost all weight; iterate support collapsed"
            )
        acc += (c / t) * m
    return 0.5 * (acc + acc.conj().T)


_OSCILLATION_WINDOW = 20


def augustin_mean_petz(prior, channel: CqChannel, alpha: float,
                       opts: OptimizerOptions | None = None) -> MeanResult:
    """Petz Augustin mean by damped fixed-point iteration from the prior
    average (or opts.initial), escalating the damping when the residual
    stalls."""
    alpha = _check_info_order(alpha)
    if alpha == 0.0 or alpha == 1.0 or math.isinf(alpha):
        raise InvalidOrder(f"fixed point needs alpha in (0, inf) - {{1}}, "
                           f"got {alpha}")
    opts = opts or OptimizerOptions()
    w = check_prior(prior, channel.size)
    if opts.initial is not None:
        start = np.asarray(opts.initial, dtype=np.complex128)
    else:
        start = avg_state(w, channel)
    schedule = [opts.damping] + [g for g in (0.5, 0.9) if g > opts.damping]
    total = 0
    last = INF
    for damping in schedule:
        sigma = start
        history = []
        for _ in range(opts.max_iterations):
            mapped = _augustin_map(w, channel.outputs, sigma, alpha)
            resid = trace_distance(mapped, sigma)
            total += 1
            if resid <= opts.tolerance:
                value = conditional_divergence(DivergenceKind.PETZ, channel,
                                               mapped, w, alpha)
                if math.isfinite(value):
                    return MeanResult(mean=mapped, value=value,
                                      iterations=total, residual=resid)
                # The support-restricted map also fixes states living on a
                # subspace; landing on one means the iteration collapsed,
                # so try again with heavier damping.
                break
            history.append(resid)
            if len(history) > _OSCILLATION_WINDOW \
                    and resid >= history[-_OSCILLATION_WINDOW - 1]:
                break
            if alpha > 1.0:
                lam = np.linalg.eigvalsh(mapped)
                if float(lam[0]) <= 1e-14 * float(lam[-1]):
                    # Effectively singular iterate: the orbit is headed for
                    # a collapsed fixed point, not the interior mean.
                    break
            sigma = (1.0 - damping) * mapped + damping * sigma
        last = min(last, history[-1] if history else INF)
    raise NonConvergence(
        f"fixed point stalled with residual {last:.3g} "
        f"(tolerance {opts.tolerance:g})"
    )


def augustin_info(kind: DivergenceKind, prior, channel: CqChannel,
                  alpha: float,
                  opts: OptimizerOptions | None = None) -> MeanResult:
    """Second-type information: smallest prior-weighted divergence of the
    outputs to a common reference state."""
    kind = DivergenceKind(kind)
    alpha = _check_info_order(alpha)
    if alpha == 0.0:
        raise InvalidOrder("second-type information needs alpha > 0")
    opts = opts or OptimizerOptions()
    w = check_prior(prior, channel.size)
    if alpha == 1.0:
        return MeanResult(mean=avg_state(w, channel),
                          value=holevo_info(w, channel),
                          iterations=0, residual=0.0)

    def minimized(a: float, local: OptimizerOptions) -> MeanResult:
        objective = _BlockObjective(kind, w, channel, a, mode="conditional")
        res = minimize_over_states(objective, channel.dim, local)
        return dataclasses.replace(
            res, value=conditional_divergence(kind, channel, res.mean, w, a))

    if math.isinf(alpha):
        if kind is DivergenceKind.SANDWICHED:
            return minimized(alpha, opts)
        lo, hi = _ALPHA_HIGH
        r_lo = minimized(lo, opts)
        r_hi = minimized(hi, dataclasses.replace(opts, initial=r_lo.mean))
        return MeanResult(mean=r_hi.mean, value=2.0 * r_hi.value - r_lo.value,
                          iterations=r_lo.iterations + r_hi.iterations,
                          residual=max(r_lo.residual, r_hi.residual))
    if kind is DivergenceKind.PETZ:
        try:
            return augustin_mean_petz(w, channel, alpha, opts)
        except NonConvergence:
            return minimized(alpha, opts)
    return minimized(alpha, opts)


# ---------------------------------------------------------------------------
# Serialization


def channel_to_json(channel: CqChannel) -> dict:
    return {
        "dim": int(channel.dim),
        "labels": list(channel.labels),
        "outputs": [matrix_to_json(out) for out in channel.outputs],
    }


def channel_from_json(obj: dict) -> CqChannel:
    try:
        dim = int(obj["dim"])
        labels = list(obj["labels"])
        outputs = [matrix_from_json(o) for o in obj["outputs"]]
    except (KeyError, TypeError) as exc:
        raise DimensionMismatch(f"malformed channel object: {exc}") from exc
    return CqChannel(dim=dim, outputs=tuple(outputs), labels=tuple(labels))


def prior_to_json(weights) -> dict:
    return {"weights": [float(x) for x in np.asarray(weights).ravel()]}


def prior_from_json(obj: dict) -> np.ndarray:
    try:
        weights = obj["weights"]
    except (KeyError, TypeError) as exc:
        raise InvalidPrior(f"malformed prior object: {exc}") from exc
    return check_prior(weights)
