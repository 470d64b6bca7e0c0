"""Error-exponent machinery for classical-quantum channels and sources.

Auxiliary curves are the scaled informations s * I_{1/(1+s)}; exponent
functions are their Fenchel-Legendre transforms in the rate.  Channel
exponents subtract s*R and sources add it.  Everywhere the pointwise
maximum of the Petz and sandwiched auxiliaries is taken, which by the
ordering of the two divergences reduces to the sandwiched branch for
s < 0 and the Petz branch for s > 0.
"""

import dataclasses
import math
import warnings

import numpy as np
from scipy.optimize import minimize
from scipy.special import logsumexp

from .divergence import (
    INF,
    DivergenceKind,
    divergence,
    joint_state,
    product_state,
    variance,
)
from .information import (
    CqChannel,
    OptimizerOptions,
    _BlockObjective,
    _check_info_order,
    _petz_alpha_root,
    _warm_minimize,
    augustin_info,
    avg_state,
    check_prior,
    holevo_info,
    minimize_over_states,
    renyi_info,
)
from .matcalc import InvalidOrder

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_S_FLOOR = -1.0 + 1e-4
# Orders past this are evaluated through the order-infinity information.
_ALPHA_TAIL = 2000.0
# Inside this band around s = 0 the auxiliaries are evaluated to first
# order, s * I_1; the 1/(alpha - 1) scaling of the order-(1/(1+s))
# objectives amplifies rounding noise beyond what the optimizers tolerate,
# while the linearization error is O(s^2) and below every tolerance here.
_S_TAYLOR = 1e-5


class InvalidSParam(ValueError):
    """Auxiliary-curve parameter outside (-1, inf)."""


class InvalidRate(ValueError):
    """Negative or non-finite rate."""


class NonConcaveWarning(UserWarning):
    """A sampled exponent objective violated concavity beyond slack."""


def check_s_param(s, allow_infinite: bool = False) -> float:
    """Validate an auxiliary-curve parameter; returns it as a float."""
    v = float(s)
    if math.isnan(v) or v <= -1.0:
        raise InvalidSParam(f"parameter s = {s} must lie in (-1, inf)")
    if math.isinf(v) and not allow_infinite:
        raise InvalidSParam("infinite s is a boundary marker, not a "
                            "point the curves are evaluated at")
    return v


def check_rate(rate) -> float:
    """Validate a rate in nats per use; returns it as a float."""
    v = float(rate)
    if not (math.isfinite(v) and v >= 0.0):
        raise InvalidRate(f"rate {rate} must be finite and nonnegative")
    return v


@dataclasses.dataclass(frozen=True)
class ExponentResult:
    """Value of an exponent optimization together with where it was attained.

    argmax_s is the optimizing curve parameter (math.inf marks divergence
    at the upper boundary, None a result with no s-search); argmax_prior
    is filled by the prior optimizations.
    """

    value: float
    argmax_s: float | None = None
    unbounded: bool = False
    argmax_prior: np.ndarray | None = None

    def __post_init__(self):
        if self.unbounded and not (math.isinf(self.value) and self.value > 0):
            raise ValueError("an unbounded result must carry value +inf")


@dataclasses.dataclass(frozen=True, eq=False)
class CqSource:
    """Classical source with quantum side information: a prior over symbols
    and the symbol-indexed side-information states."""

    prior: np.ndarray
    side_info: CqChannel

    def __post_init__(self):
        object.__setattr__(
            self, "prior", check_prior(self.prior, self.side_info.size))

    @property
    def size(self) -> int:
        return self.prior.size


@dataclasses.dataclass(frozen=True)
class ExponentOptions:
    """Knobs for the s-searches and prior optimizations.

    The golden-section search stops once the bracket is narrower than
    s_tolerance; grid_step is the dense fallback used when a sampled
    objective fails the concavity audit; slope_threshold decides when an
    objective still ascending at s_max is reported as unbounded.
    """

    s_max: float = 40.0
    s_tolerance: float = 1e-8
    grid_step: float = 1e-3
    slope_threshold: float = 1e-6
    concavity_slack: float = 1e-6
    restarts: int = 8
    prior_tolerance: float = 1e-8
    seed: int = 7
    inner: OptimizerOptions = dataclasses.field(
        default_factory=OptimizerOptions)

    def __post_init__(self):
        if not self.s_max > -1.0:
            raise ValueError(f"s_max {self.s_max} must exceed -1")
        for name in ("s_tolerance", "grid_step", "slope_threshold",
                     "concavity_slack", "prior_tolerance"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be positive")
        if self.restarts < 0:
            raise ValueError("restarts must be nonnegative")


# ---------------------------------------------------------------------------
# Auxiliary functions


def e0(i: int, kind: DivergenceKind, s, prior, channel: CqChannel,
       opts: ExponentOptions | None = None) -> float:
    """Channel auxiliary function s * I_{1/(1+s)} of the chosen information
    type (1 compound, 2 conditional); exactly zero at s = 0."""
    if i not in (1, 2):
        raise ValueError(f"information type i = {i} must be 1 or 2")
    kind = DivergenceKind(kind)
    s = check_s_param(s)
    if s == 0.0:
        return 0.0
    if abs(s) < _S_TAYLOR:
        return s * holevo_info(prior, channel)
    opts = opts or ExponentOptions()
    alpha = 1.0 / (1.0 + s)
    info = renyi_info if i == 1 else augustin_info
    return s * info(kind, prior, channel, alpha, opts.inner).value


def e0_gallager_holevo(s, prior, channel: CqChannel) -> float:
    """Closed-form first-type Petz auxiliary
    -log Tr[(sum_x P(x) W_x^(1/(1+s)))^(1+s)]."""
    s = check_s_param(s)
    w = check_prior(prior, channel.size)
    if s == 0.0:
        return 0.0
    log_tr, _ = _petz_alpha_root(w, channel.outputs, 1.0 / (1.0 + s))
    return -log_tr


def _shannon(weights) -> float:
    w = np.asarray(weights, dtype=float)
    live = w[w > 0.0]
    return float(-np.sum(live * np.log(live)))


def _vn_entropy(state) -> float:
    lam = np.linalg.eigvalsh(np.asarray(state, dtype=np.complex128))
    live = lam[lam > 1e-15]
    return float(-np.sum(live * np.log(live)))


def _entropy_divergence(kind: DivergenceKind, weights, channel: CqChannel,
                        sigma, alpha: float) -> float:
    """Divergence of the classically-extended joint state to 1 (x) sigma,
    assembled blockwise from the per-symbol divergences."""
    live = [(p, out) for p, out in zip(weights, channel.outputs) if p > 0.0]
    if math.isinf(alpha):
        return max(math.log(p) + divergence(kind, out, sigma, alpha)
                   for p, out in live)
    args = []
    for p, out in live:
        d = divergence(kind, out, sigma, alpha)
        if math.isinf(d):
            if alpha > 1.0:
                return INF
            continue
        args.append(alpha * math.log(p) + (alpha - 1.0) * d)
    if not args:
        return INF
    return float(logsumexp(np.asarray(args))) / (alpha - 1.0)


def conditional_renyi_entropy(kind: DivergenceKind, source: CqSource,
                              alpha: float,
                              opts: ExponentOptions | None = None) -> float:
    """Conditional entropy of the source symbol given the side information,
    -inf_sigma D_alpha(rho_XB || 1 (x) sigma)."""
    kind = DivergenceKind(kind)
    alpha = _check_info_order(alpha)
    if alpha == 0.0:
        raise InvalidOrder("conditional entropy needs an order in (0, inf]")
    if math.isinf(alpha) and kind is not DivergenceKind.SANDWICHED:
        raise InvalidOrder("only the sandwiched conditional entropy has an "
                           "order-infinity evaluation")
    opts = opts or ExponentOptions()
    p = source.prior
    side = source.side_info
    if math.isfinite(alpha) and abs(alpha - 1.0) < 1e-6:
        # Within rounding distance of order one the 1/(alpha - 1) scaling
        # drowns the objective in noise; the entropy is continuous there.
        joint = _shannon(p) + float(sum(
            pi * _vn_entropy(out)
            for pi, out in zip(p, side.outputs) if pi > 0.0))
        return joint - _vn_entropy(avg_state(p, side))
    if kind is DivergenceKind.PETZ:
        coefs = np.where(p > 0.0, np.power(p, alpha, where=p > 0.0), 0.0)
        log_tr, _ = _petz_alpha_root(coefs, side.outputs, alpha)
        return -alpha / (alpha - 1.0) * log_tr
    objective = _BlockObjective(kind, p, side, alpha, mode="entropy")
    res = minimize_over_states(objective, side.dim, opts.inner)
    return -_entropy_divergence(kind, p, side, res.mean, alpha)


def e0_source_iid(kind: DivergenceKind, s, source: CqSource,
                  opts: ExponentOptions | None = None) -> float:
    """Source auxiliary -s * H_{1/(1+s)}(X|B); exactly zero at s = 0."""
    s = check_s_param(s)
    if s == 0.0:
        return 0.0
    return -s * conditional_renyi_entropy(kind, source, 1.0 / (1.0 + s), opts)


def e0_source_type(kind: DivergenceKind, s, source: CqSource,
                   opts: ExponentOptions | None = None) -> float:
    """Type-dependent source auxiliary: the conditional channel auxiliary of
    the side information minus s * H(prior); exactly zero at s = 0."""
    s = check_s_param(s)
    if s == 0.0:
        return 0.0
    aux = e0(2, kind, s, source.prior, source.side_info, opts)
    return aux - s * _shannon(source.prior)


# ---------------------------------------------------------------------------
# Warm-started auxiliary curves (pointwise maximum over kinds)


class _ChannelAuxCurve:
    """Second-type channel auxiliary max(Petz, sandwiched) as a function of
    s, evaluating only the dominant branch (sandwiched for s < 0, Petz for
    s > 0) and warm-starting successive optimizations."""

    def __init__(self, prior, channel: CqChannel, opts: ExponentOptions):
        self._w = check_prior(prior, channel.size)
        self._channel = channel
        self._inner = opts.inner
        self._mean = opts.inner.initial
        self._coords = None
        self._tail = None
        self._slope = None

    def __call__(self, s) -> float:
        s = float(s)
        if s == 0.0:
            return 0.0
        if abs(s) < _S_TAYLOR:
            if self._slope is None:
                self._slope = holevo_info(self._w, self._channel)
            return s * self._slope
        alpha = 1.0 / (1.0 + s)
        if s > 0.0:
            inner = dataclasses.replace(self._inner, initial=self._mean)
            res = augustin_info(DivergenceKind.PETZ, self._w, self._channel,
                                alpha, inner)
            self._mean = res.mean
            return s * res.value
        if alpha > _ALPHA_TAIL:
            return s * self._order_infinity()
        objective = _BlockObjective(DivergenceKind.SANDWICHED, self._w,
                                    self._channel, alpha, mode="conditional")
        value, self._coords = _warm_minimize(objective, self._channel.dim,
                                             self._coords)
        return s * value

    def _order_infinity(self) -> float:
        if self._tail is None:
            self._tail = augustin_info(
                DivergenceKind.SANDWICHED, self._w, self._channel, INF,
                self._inner).value
        return self._tail


class _SourceAuxCurve:
    """Source auxiliary max(Petz, sandwiched) over s, for i.i.d. sources or
    (with fixed_type) the type-dependent variant."""

    def __init__(self, source: CqSource, opts: ExponentOptions,
                 fixed_type=None):
        self._source = source
        self._opts = opts
        self._coords = None
        self._tail = None
        self._slope = None
        if fixed_type is not None:
            typed = CqSource(prior=fixed_type, side_info=source.side_info)
            self._typed = typed
            self._channel_curve = _ChannelAuxCurve(
                typed.prior, typed.side_info, opts)
            self._type_entropy = _shannon(typed.prior)
        else:
            self._typed = None

    def __call__(self, s) -> float:
        s = float(s)
        if s == 0.0:
            return 0.0
        if self._typed is not None:
            return self._channel_curve(s) - s * self._type_entropy
        if abs(s) < _S_TAYLOR:
            if self._slope is None:
                self._slope = conditional_renyi_entropy(
                    DivergenceKind.PETZ, self._source, 1.0, self._opts)
            return -s * self._slope
        alpha = 1.0 / (1.0 + s)
        if s > 0.0:
            return -s * conditional_renyi_entropy(
                DivergenceKind.PETZ, self._source, alpha, self._opts)
        if alpha > _ALPHA_TAIL:
            return -s * self._order_infinity()
        side = self._source.side_info
        objective = _BlockObjective(DivergenceKind.SANDWICHED,
                                    self._source.prior, side, alpha,
                                    mode="entropy")
        value, self._coords = _warm_minimize(objective, side.dim,
                                             self._coords)
        # H = -min over sigma, so the auxiliary -s*H is s times the minimum.
        return s * value

    def _order_infinity(self) -> float:
        if self._tail is None:
            self._tail = conditional_renyi_entropy(
                DivergenceKind.SANDWICHED, self._source, INF, self._opts)
        return self._tail


# ---------------------------------------------------------------------------
# Fenchel-Legendre transform


def _scan_grid(lo: float, hi: float) -> list[float]:
    base = [-0.999, -0.99, -0.97, -0.94, -0.9, -0.84, -0.76, -0.66, -0.55,
            -0.45, -0.35, -0.26, -0.18, -0.12, -0.07, -0.04, -0.02, -0.01,
            0.0, 0.01, 0.02, 0.04, 0.07, 0.12, 0.2, 0.32, 0.5, 0.75, 1.0,
            1.4, 2.0, 2.8, 4.0, 5.5, 7.5, 10.0, 13.0, 17.0, 22.0, 28.0,
            35.0]
    pts = sorted({float(s) for s in base if lo < s < hi} | {lo, hi})
    if len(pts) < 9:
        pts = sorted(set(np.linspace(lo, hi, 17).tolist()) | set(pts))
    return pts


def fenchel_legendre(curve, rate, sign: float = -1.0,
                     opts: ExponentOptions | None = None,
                     s_min: float | None = None) -> ExponentResult:
    """Concave conjugate sup_s { curve(s) + sign * s * rate } over
    s in [max(-1 + 1e-4, s_min), s_max].

    A coarse scan brackets the maximum and audits concavity of the sampled
    objective (emitting NonConcaveWarning and densifying the bracket at
    grid_step on a violation); golden-section then refines the bracket to
    s_tolerance.  If the objective still ascends at s_max faster than
    slope_threshold the supremum is reported as unbounded.
    """
    rate = check_rate(rate)
    opts = opts or ExponentOptions()
    sgn = float(sign)
    if sgn not in (-1.0, 1.0):
        raise ValueError("sign selects -s*rate or +s*rate; pass -1.0 or 1.0")
    lo = _S_FLOOR if s_min is None else max(_S_FLOOR, float(s_min))
    hi = float(opts.s_max)
    if not hi > lo:
        raise ValueError(f"s_max {hi} must exceed the lower endpoint {lo}")

    memo: dict[float, float] = {}

    def g(s: float) -> float:
        key = float(s)
        if key not in memo:
            memo[key] = float(curve(key)) + sgn * key * rate
        return memo[key]

    grid = _scan_grid(lo, hi)
    vals = [g(s) for s in grid]
    concave = True
    for i in range(len(grid) - 2):
        left = (vals[i + 1] - vals[i]) / (grid[i + 1] - grid[i])
        right = (vals[i + 2] - vals[i + 1]) / (grid[i + 2] - grid[i + 1])
        if right - left > opts.concavity_slack:
            concave = False
    if not concave:
        warnings.warn("sampled exponent objective is not concave; "
                      "falling back to a dense scan of the best bracket",
                      NonConcaveWarning, stacklevel=2)
    k = int(np.argmax(vals))
    if k == len(grid) - 1:
        slope = (vals[-1] - vals[-2]) / (grid[-1] - grid[-2])
        if slope > opts.slope_threshold:
            return ExponentResult(value=INF, argmax_s=INF, unbounded=True)
    if not concave:
        a = grid[max(k - 1, 0)]
        b = grid[min(k + 1, len(grid) - 1)]
        for s in np.arange(a, b + opts.grid_step, opts.grid_step):
            g(min(max(float(s), lo), hi))
        pts = sorted(memo)
        k = int(np.argmax([memo[s] for s in pts]))
        grid = pts
    a = grid[max(k - 1, 0)]
    b = grid[min(k + 1, len(grid) - 1)]
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    while (b - a) > opts.s_tolerance:
        if g(c) >= g(d):
            b, d = d, c
            c = b - _INV_PHI * (b - a)
        else:
            a, c = c, d
            d = a + _INV_PHI * (b - a)
    best = max(memo, key=memo.get)
    return ExponentResult(value=memo[best], argmax_s=best, unbounded=False)


# ---------------------------------------------------------------------------
# Capacities and prior optimization


_CAPACITY_RANGES = {
    DivergenceKind.PETZ: (0.0, 2.0),
    DivergenceKind.SANDWICHED: (0.5, INF),
    DivergenceKind.LOG_EUCLIDEAN: (0.0, INF),
}


class _UnboundedObjective(Exception):
    """Raised inside a prior search when a fixed-prior exponent diverges."""

    def __init__(self, prior: np.ndarray):
        super().__init__("exponent objective is unbounded")
        self.prior = prior


def _simplex_point(theta: np.ndarray) -> np.ndarray:
    z = np.concatenate([theta, [0.0]])
    z -= z.max()
    e = np.exp(z)
    return e / e.sum()


def _simplex_coords(weights) -> np.ndarray:
    q = np.log(np.maximum(np.asarray(weights, dtype=float), 1e-12))
    return (q - q[-1])[:-1]


def _maximize_over_priors(f, k: int, opts: ExponentOptions,
                          start=None) -> tuple[float, np.ndarray]:
    """Nelder-Mead ascent of a prior functional over the k-simplex in
    softmax coordinates, from the uniform prior (or `start`) plus seeded
    Dirichlet restarts.  Returns (value, prior)."""
    if k == 1:
        point = np.ones(1)
        return float(f(point)), point
    starts = [np.zeros(k - 1) if start is None else _simplex_coords(start)]
    rng = np.random.default_rng(opts.seed)
    for _ in range(opts.restarts):
        starts.append(_simplex_coords(rng.dirichlet(np.ones(k))))
    best_val, best_prior = -INF, _simplex_point(starts[0])
    for x0 in starts:
        res = minimize(lambda th: -f(_simplex_point(th)), x0,
                       method="Nelder-Mead",
                       options={"adaptive": True, "xatol": 1e-6,
                                "fatol": opts.prior_tolerance,
                                "maxiter": 2000, "maxfev": 8000})
        if -float(res.fun) > best_val:
            best_val = -float(res.fun)
            best_prior = _simplex_point(np.asarray(res.x, dtype=float))
    return best_val, best_prior


def _info_evaluator(kind: DivergenceKind, i: int, channel: CqChannel,
                    alpha: float, opts: ExponentOptions):
    """Fast prior -> information evaluator for the simplex ascent: closed
    forms where available, otherwise warm-started optimization."""
    if alpha == 1.0:
        return lambda p: holevo_info(p, channel)
    if i == 1 and kind is DivergenceKind.PETZ:
        return lambda p: renyi_info(kind, p, channel, alpha, opts.inner).value
    if i == 2 and kind is DivergenceKind.PETZ and math.isfinite(alpha):
        cache = {"mean": opts.inner.initial}

        def fixed_point(p):
            inner = dataclasses.replace(opts.inner, initial=cache["mean"])
            res = augustin_info(kind, p, channel, alpha, inner)
            cache["mean"] = res.mean
            return res.value

        return fixed_point
    if math.isfinite(alpha) and alpha not in (0.0, 1.0):
        mode = "compound" if i == 1 else "conditional"
        cache = {"coords": None}

        def descend(p):
            objective = _BlockObjective(kind, check_prior(p, channel.size),
                                        channel, alpha, mode=mode)
            value, cache["coords"] = _warm_minimize(objective, channel.dim,
                                                    cache["coords"])
            return value

        return descend
    info = renyi_info if i == 1 else augustin_info
    cache = {"mean": opts.inner.initial}

    def endpoint(p):
        inner = dataclasses.replace(opts.inner, initial=cache["mean"])
        res = info(kind, p, channel, alpha, inner)
        cache["mean"] = res.mean
        return res.value

    return endpoint


def capacity(kind: DivergenceKind, i: int, channel: CqChannel, alpha: float,
             opts: ExponentOptions | None = None) -> ExponentResult:
    """Largest information of the channel over priors, within the order
    range where both information types share the same supremum."""
    kind = DivergenceKind(kind)
    if i not in (1, 2):
        raise ValueError(f"information type i = {i} must be 1 or 2")
    alpha = _check_info_order(alpha)
    lo, hi = _CAPACITY_RANGES[kind]
    if not lo <= alpha <= hi:
        raise InvalidOrder(
            f"capacity of this kind is defined for orders in [{lo}, {hi}], "
            f"got {alpha}")
    opts = opts or ExponentOptions()
    evaluator = _info_evaluator(kind, i, channel, alpha, opts)
    value, prior = _maximize_over_priors(evaluator, channel.size, opts)
    if alpha == 1.0:
        final = holevo_info(prior, channel)
    else:
        info = renyi_info if i == 1 else augustin_info
        final = info(kind, prior, channel, alpha, opts.inner).value
    return ExponentResult(value=max(float(final), float(value)),
                          argmax_s=None, unbounded=False, argmax_prior=prior)


# ---------------------------------------------------------------------------
# Channel and source exponents


def channel_exponent_fixed_prior(rate, prior, channel: CqChannel,
                                 opts: ExponentOptions | None = None
                                 ) -> ExponentResult:
    """sup_s { max(Petz, sandwiched) second-type auxiliary - s*rate }."""
    rate = check_rate(rate)
    opts = opts or ExponentOptions()
    curve = _ChannelAuxCurve(prior, channel, opts)
    return fenchel_legendre(curve, rate, sign=-1.0, opts=opts)


def channel_exponent(rate, channel: CqChannel,
                     opts: ExponentOptions | None = None) -> ExponentResult:
    """Channel-coding exponent at the given rate: the fixed-prior exponent
    maximized over priors below capacity and minimized above it."""
    rate = check_rate(rate)
    opts = opts or ExponentOptions()
    holevo_cap = capacity(DivergenceKind.PETZ, 1, channel, 1.0, opts)

    if rate <= holevo_cap.value:
        def objective(p):
            res = channel_exponent_fixed_prior(rate, p, channel, opts)
            if res.unbounded:
                raise _UnboundedObjective(np.asarray(p, dtype=float))
            return res.value

        try:
            _, prior = _maximize_over_priors(objective, channel.size, opts)
        except _UnboundedObjective as stop:
            return ExponentResult(value=INF, argmax_s=INF, unbounded=True,
                                  argmax_prior=stop.prior)
    else:
        _, prior = _maximize_over_priors(
            lambda p: -channel_exponent_fixed_prior(
                rate, p, channel, opts).value,
            channel.size, opts)
    final = channel_exponent_fixed_prior(rate, prior, channel, opts)
    return dataclasses.replace(final, argmax_prior=prior)


def source_exponent(rate, source: CqSource,
                    opts: ExponentOptions | None = None,
                    fixed_type=None) -> ExponentResult:
    """sup_s { max(Petz, sandwiched) source auxiliary + s*rate }, for the
    i.i.d. source or (with fixed_type) the type-dependent variant."""
    rate = check_rate(rate)
    opts = opts or ExponentOptions()
    curve = _SourceAuxCurve(source, opts, fixed_type=fixed_type)
    return fenchel_legendre(curve, rate, sign=1.0, opts=opts)


# ---------------------------------------------------------------------------
# Variance quantities entering the curvature of the auxiliary curves


def joint_information_variance(kind: DivergenceKind, prior,
                               channel: CqChannel) -> float:
    """Variance of the joint state against prior (x) average, the negated
    second derivative of the first-type auxiliary at s = 0."""
    w = check_prior(prior, channel.size)
    rho = joint_state(w, channel)
    tau = product_state(w, avg_state(w, channel))
    return variance(kind, rho, tau)


def information_variance(kind: DivergenceKind, prior,
                         channel: CqChannel) -> float:
    """Prior-weighted variance of the outputs against the average output,
    the negated second derivative of the second-type auxiliary at s = 0."""
    w = check_prior(prior, channel.size)
    avg = avg_state(w, channel)
    return float(sum(p * variance(kind, out, avg)
                     for p, out in zip(w, channel.outputs) if p > 0.0))


def conditional_entropy_variance(kind: DivergenceKind,
                                 source: CqSource) -> float:
    """Variance of the source joint state against 1 (x) side-info average,
    the negated second derivative of the i.i.d. source auxiliary at s = 0."""
    rho = joint_state(source.prior, source.side_info)
    d = source.side_info.dim
    k = source.size
    tau = np.kron(np.eye(k), avg_state(source.prior, source.side_info))
    return variance(kind, rho, tau)
