"""Randomized numerical certification of the library's structural laws.

Every suite draws seeded instances, measures how far a law is from holding
(zero up to the suite tolerance means the law held), and returns a
CheckReport.  The laws covered: the divergence order/argument laws, the
classical (diagonal) reduction against an independent scalar implementation,
convexity and concavity of the auxiliary functions in the prior and in the
parameter s, uniform equicontinuity bounds for both information types,
interpolation inequalities for pinched and product norms, a minimax
exchange for the strong-converse channel exponent, entropic and
Fenchel-type dualities between source and channel exponents, and the
first- and second-derivative identities of the auxiliary curves at s = 0.
"""

import dataclasses
import itertools
import math

import numpy as np
from scipy.optimize import minimize, minimize_scalar
from scipy.special import logsumexp

from .divergence import (
    INF,
    DivergenceKind,
    divergence,
    uses_limit_estimate,
)
from .information import (
    CqChannel,
    OptimizerOptions,
    _BlockObjective,
    _warm_minimize,
    augustin_info,
    check_prior,
    holevo_info,
    random_channel,
    renyi_info,
)
from .exponents import (
    CqSource,
    ExponentOptions,
    _ChannelAuxCurve,
    _S_TAYLOR,
    _SourceAuxCurve,
    _info_evaluator,
    _maximize_over_priors,
    _scan_grid,
    _simplex_coords,
    _simplex_point,
    capacity,
    channel_exponent_fixed_prior,
    conditional_renyi_entropy,
    e0,
    e0_gallager_holevo,
    information_variance,
    joint_information_variance,
    source_exponent,
)
from .matcalc import (
    PinchingMap,
    mpow,
    pinch,
    random_density,
    schatten_norm,
    tensor,
)

_WITNESS_CAP = 20

# Order ranges on which each divergence kind obeys the argument laws:
# antitonicity in the reference operator, joint convexity in the reference,
# and (for capacities) equality of the two information-type suprema.
_ANTITONE_RANGES = {
    DivergenceKind.PETZ: (0.0, 1.0),
    DivergenceKind.SANDWICHED: (0.5, INF),
    DivergenceKind.LOG_EUCLIDEAN: (0.0, INF),
}
_CONVEXITY_RANGES = {
    DivergenceKind.PETZ: (0.0, 2.0),
    DivergenceKind.SANDWICHED: (0.5, INF),
    DivergenceKind.LOG_EUCLIDEAN: (0.0, INF),
}
# Admissible order sets of the first-type information, per kind.
_ADMISSIBLE = {
    DivergenceKind.PETZ: (0.0, 1.0),
    DivergenceKind.SANDWICHED: (0.5, INF),
    DivergenceKind.LOG_EUCLIDEAN: (0.0, INF),
}


@dataclasses.dataclass(frozen=True)
class CheckReport:
    """Outcome of one property suite.

    max_violation is the largest measured law violation over all instances
    (0 when every inequality held with margin); the suite passes exactly
    when it does not exceed the tolerance.  witnesses carries descriptions
    of the worst offenders, skipped the number of sub-checks not applicable
    to their sampled configuration.
    """

    suite: str
    instances: int
    max_violation: float
    tolerance: float
    passed: bool
    witnesses: tuple = ()
    skipped: int = 0

    def __post_init__(self):
        if self.instances < 0 or self.skipped < 0:
            raise ValueError("instance and skip counts must be nonnegative")
        ok = bool(self.max_violation <= self.tolerance)
        if bool(self.passed) != ok:
            raise ValueError(
                "passed must equal (max_violation <= tolerance)")


class _Tally:
    """Violation accumulator shared by all suites."""

    def __init__(self, suite: str, tolerance: float,
                 record_threshold: float | None = None):
        self.suite = suite
        self.tolerance = float(tolerance)
        self._record = (self.tolerance if record_threshold is None
                        else float(record_threshold))
        self.worst = 0.0
        self.witnesses: list[dict] = []
        self.skipped = 0
        self.instances = 0

    def add(self, violation: float, **context) -> None:
        v = float(violation)
        if math.isnan(v):
            v = INF
        self.worst = max(self.worst, v)
        if v > self._record and len(self.witnesses) < _WITNESS_CAP:
            note = {k: (float(x) if isinstance(x, (int, float, np.floating))
                        else str(x)) for k, x in context.items()}
            note["violation"] = v
            self.witnesses.append(note)

    def report(self) -> CheckReport:
        return CheckReport(
            suite=self.suite,
            instances=self.instances,
            max_violation=self.worst,
            tolerance=self.tolerance,
            passed=self.worst <= self.tolerance,
            witnesses=tuple(self.witnesses),
            skipped=self.skipped,
        )


def _child_seeds(seed: int, n: int) -> list[int]:
    return [int(s) for s in np.random.SeedSequence(seed).generate_state(n)]


# ---------------------------------------------------------------------------
# Equicontinuity bounds in the prior


@dataclasses.dataclass(frozen=True)
class EquicontinuityBound:
    """Uniform bound on an information change under a change of prior.

    delta is half the l1 distance between the priors, eta the order cap,
    capacity_eta the order-eta capacity of the channel; bound dominates the
    information difference for every order up to eta.
    """

    delta: float
    eta: float
    capacity_eta: float
    bound: float

    def __post_init__(self):
        if not 0.0 <= self.delta <= 1.0:
            raise ValueError(f"delta {self.delta} outside [0, 1]")
        if math.isnan(self.eta) or self.eta < 0.0:
            raise ValueError(f"order cap eta {self.eta} must be >= 0")
        if not (math.isfinite(self.capacity_eta)
                and self.capacity_eta >= 0.0):
            raise ValueError("capacity_eta must be finite and nonnegative")
        if not self.bound >= 0.0:
            raise ValueError(f"bound {self.bound} must be nonnegative")
        if self.delta == 0.0 and self.bound != 0.0:
            raise ValueError("coinciding priors must give a zero bound")


def _mixing_entropy(delta: float) -> float:
    """Entropy of a {delta, 1 - delta} mixture in nats."""
    if delta <= 0.0 or delta >= 1.0:
        return 0.0
    return float(-delta * math.log(delta)
                 - (1.0 - delta) * math.log1p(-delta))


def _tail_term(delta: float, alpha: float, gamma: float) -> float:
    """(1/(1-alpha)) log[(1-delta) + delta e^((1-alpha) gamma)], the
    contribution of the swapped-in prior mass; delta * gamma at alpha 1."""
    if delta <= 0.0:
        return 0.0
    if alpha == 1.0:
        return delta * gamma
    a = math.log1p(-delta) if delta < 1.0 else -INF
    b = math.log(delta) + (1.0 - alpha) * gamma
    return float(logsumexp([a, b])) / (1.0 - alpha)


def _head_term(delta: float, alpha: float, gamma: float) -> float:
    """Order-alpha mixing penalty of splitting off delta prior mass."""
    if delta <= 0.0:
        return 0.0
    if alpha == 0.0:
        keep = -math.log1p(-delta) if delta < 1.0 else INF
        swap = gamma - math.log(delta)
        return min(keep, swap)
    if alpha == 1.0:
        return delta * gamma + _mixing_entropy(delta)
    inv = 1.0 / alpha
    a = inv * math.log1p(-delta) if delta < 1.0 else -INF
    b = inv * math.log(delta) + (alpha - 1.0) / alpha * gamma
    return alpha / (alpha - 1.0) * float(logsumexp([a, b]))


def renyi_prior_bound(delta, eta, capacity_eta) -> EquicontinuityBound:
    """Uniform bound on the first-type information change between two
    priors at l1 half-distance delta, over all orders in [0, eta]."""
    delta = float(delta)
    eta = float(eta)
    c = float(capacity_eta)
    if delta == 0.0:
        value = 0.0
    else:
        value = (_head_term(delta, eta, c) + _tail_term(delta, 0.0, c))
    return EquicontinuityBound(delta=delta, eta=eta, capacity_eta=c,
                               bound=max(value, 0.0))


def augustin_prior_bound(delta, eta, capacity_eta) -> EquicontinuityBound:
    """Uniform bound on the second-type information change between two
    priors at l1 half-distance delta, over all orders in (0, eta]."""
    delta = float(delta)
    c = float(capacity_eta)
    value = 0.0 if delta == 0.0 else _mixing_entropy(delta) + delta * c
    return EquicontinuityBound(delta=delta, eta=float(eta), capacity_eta=c,
                               bound=max(value, 0.0))


# ---------------------------------------------------------------------------
# Scalar classical reference implementations (probability vectors and
# row-stochastic matrices only; no shared code with the matrix paths)


def _classical_divergence(p, q, alpha: float) -> float:
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    live = p > 0.0
    if not np.any(q[live] > 0.0):
        return INF
    if alpha == 1.0:
        if np.any(q[live] <= 0.0):
            return INF
        return float(np.sum(p[live] * np.log(p[live] / q[live])))
    if alpha == 0.0:
        return -math.log(float(q[live].sum()))
    if math.isinf(alpha):
        if np.any(q[live] <= 0.0):
            return INF
        return float(np.log(np.max(p[live] / q[live])))
    if alpha > 1.0 and np.any(q[live] <= 0.0):
        return INF
    mask = live & (q > 0.0)
    logs = alpha * np.log(p[mask]) + (1.0 - alpha) * np.log(q[mask])
    return float(logsumexp(logs)) / (alpha - 1.0)


def _classical_mutual(prior, rows) -> float:
    prior = np.asarray(prior, dtype=float)
    rows = np.asarray(rows, dtype=float)
    marg = prior @ rows
    return float(sum(prior[x] * _classical_divergence(rows[x], marg, 1.0)
                     for x in range(len(prior)) if prior[x] > 0.0))


def _classical_sibson(prior, rows, alpha: float) -> float:
    """First-type information of a classical channel, closed form."""
    prior = np.asarray(prior, dtype=float)
    rows = np.asarray(rows, dtype=float)
    if alpha == 1.0:
        return _classical_mutual(prior, rows)
    live = prior > 0.0
    with np.errstate(divide="ignore"):
        logs = np.log(prior[live])[:, None] + alpha * np.log(rows[live])
    inner = logsumexp(logs, axis=0) / alpha
    return alpha / (alpha - 1.0) * float(logsumexp(inner))


def _classical_augustin(prior, rows, alpha: float, tol: float = 1e-13,
                        max_iter: int = 200_000) -> float:
    """Second-type information of a classical channel via the fixed-point
    map, escalating the damping for orders above one."""
    prior = np.asarray(prior, dtype=float)
    rows = np.asarray(rows, dtype=float)
    if alpha == 1.0:
        return _classical_mutual(prior, rows)
    live = prior > 0.0
    prior = prior[live] / prior[live].sum()
    rows = rows[live]
    rows = rows[:, rows.sum(axis=0) > 0.0]

    def value(q):
        return float(sum(prior[x] * _classical_divergence(rows[x], q, alpha)
                         for x in range(len(prior))))

    with np.errstate(divide="ignore"):
        log_rows = np.where(rows > 0.0, np.log(np.maximum(rows, 1e-300)),
                            -INF)
    for damping in (0.0, 0.5, 0.9):
        q = prior @ rows
        trail = []
        step = INF
        for _ in range(max_iter):
            tilts = (alpha * log_rows
                     + (1.0 - alpha)
                     * np.log(np.maximum(q, 1e-300))[None, :])
            norms = logsumexp(tilts, axis=1, keepdims=True)
            nxt = prior @ np.exp(tilts - norms)
            nxt = (1.0 - damping) * nxt + damping * q
            nxt /= nxt.sum()
            step = 0.5 * float(np.abs(nxt - q).sum())
            q = nxt
            if step <= tol:
                break
            trail.append(step)
            if len(trail) > 50 and step >= trail[-51]:
                break
            if alpha > 1.0 and q.min() <= 1e-14 * q.max():
                break
        if step <= tol and (alpha < 1.0 or q.min() > 1e-14 * q.max()):
            return value(q)
    raise RuntimeError("classical fixed point did not converge")


def _classical_e0(i: int, s: float, prior, rows) -> float:
    if s == 0.0:
        return 0.0
    alpha = 1.0 / (1.0 + s)
    info = _classical_sibson if i == 1 else _classical_augustin
    return s * info(prior, rows, alpha)


def _classical_exponent(rate: float, prior, rows,
                        s_max: float = 40.0) -> float:
    """Classical fixed-prior channel exponent; the objective is concave
    in s, so a single bounded search suffices."""
    def g(s):
        return _classical_e0(2, s, prior, rows) - s * rate

    res = minimize_scalar(lambda s: -g(s), bounds=(-1.0 + 1e-4, s_max),
                          method="bounded", options={"xatol": 1e-10})
    best = -float(res.fun)
    return best if abs(best) >= 1e-12 else max(best, 0.0)


# ---------------------------------------------------------------------------
# Suite: divergence order and argument laws


def _range_has(bounds: tuple[float, float], alpha: float) -> bool:
    lo, hi = bounds
    return lo <= alpha <= hi


def check_divergence_laws(dims=(2, 3, 4), trials: int = 200,
                          seed: int = 0) -> CheckReport:
    """Order-monotonicity, the trace-ratio floor, antitonicity and convexity
    in the reference argument, and the pointwise ordering of the three
    divergence kinds, on random full-rank instances."""
    tally = _Tally("divergence_laws", 1e-9)
    kinds = tuple(DivergenceKind)
    for t, child in enumerate(_child_seeds(seed, trials)):
        rng = np.random.default_rng(child)
        dim = int(dims[t % len(dims)])
        tally.instances += 1

        def draw():
            return random_density(dim, dim, int(rng.integers(2 ** 31 - 1)))

        rho, sig = draw(), draw()

        # (a) the divergence grows with the order, for every kind.
        a1, a2 = np.sort(rng.uniform(0.02, 3.5, size=2))
        for kind in kinds:
            gap = (divergence(kind, rho, sig, a1)
                   - divergence(kind, rho, sig, a2))
            tally.add(gap, law="order-monotone", kind=kind.value,
                      dim=dim, alpha=a1, alpha2=a2)

        # (b) floor log tr(rho) - log tr(sig) for subnormalized arguments,
        # and nonnegativity on states.
        c_r, c_s = rng.uniform(0.5, 2.0, size=2)
        alpha = float(rng.uniform(0.05, 3.5))
        floor = math.log(c_r) - math.log(c_s)
        for kind in kinds:
            d_sub = divergence(kind, c_r * rho, c_s * sig, alpha)
            tally.add(floor - d_sub, law="trace-floor", kind=kind.value,
                      dim=dim, alpha=alpha)
            d_states = divergence(kind, rho, sig, alpha)
            tally.add(-d_states, law="nonnegative", kind=kind.value,
                      dim=dim, alpha=alpha)

        # (c) a larger reference operator gives a smaller divergence.
        bump = rng.uniform(0.1, 1.0) * draw()
        alpha = float(rng.uniform(0.02, 3.5))
        for kind in kinds:
            if not _range_has(_ANTITONE_RANGES[kind], alpha):
                tally.skipped += 1
                continue
            gap = (divergence(kind, rho, sig + bump, alpha)
                   - divergence(kind, rho, sig, alpha))
            tally.add(gap, law="antitone", kind=kind.value, dim=dim,
                      alpha=alpha)

        # (d) convexity in the reference state.
        sig2 = draw()
        lam = float(rng.uniform(0.1, 0.9))
        mix = lam * sig + (1.0 - lam) * sig2
        alpha = float(rng.uniform(0.02, 3.5))
        for kind in kinds:
            if not _range_has(_CONVEXITY_RANGES[kind], alpha):
                tally.skipped += 1
                continue
            gap = (divergence(kind, rho, mix, alpha)
                   - lam * divergence(kind, rho, sig, alpha)
                   - (1.0 - lam) * divergence(kind, rho, sig2, alpha))
            tally.add(gap, law="reference-convex", kind=kind.value,
                      dim=dim, alpha=alpha)

        # (f) pointwise ordering of the kinds, flipping at order one.
        for alpha, order in ((float(rng.uniform(0.02, 0.98)), "below-one"),
                             (float(rng.uniform(1.02, 3.5)), "above-one")):
            d_p = divergence(DivergenceKind.PETZ, rho, sig, alpha)
            d_s = divergence(DivergenceKind.SANDWICHED, rho, sig, alpha)
            d_l = divergence(DivergenceKind.LOG_EUCLIDEAN, rho, sig, alpha)
            if alpha < 1.0:
                first, second = d_s - d_p, d_p - d_l
            else:
                first, second = d_l - d_s, d_s - d_p
            tally.add(first, law="kind-order", kind=order, dim=dim,
                      alpha=alpha)
            tally.add(second, law="kind-order", kind=order, dim=dim,
                      alpha=alpha)
    return tally.report()


# ---------------------------------------------------------------------------
# Suite: classical (diagonal) reduction


def check_classical_reduction(trials: int = 100, seed: int = 0
                              ) -> CheckReport:
    """On diagonal instances every matrix quantity must match an
    independent scalar implementation: the three divergences, both
    information types, the auxiliary functions, and the fixed-prior
    channel exponent."""
    tally = _Tally("classical_reduction", 1e-8)
    kinds = tuple(DivergenceKind)
    inner = OptimizerOptions()
    eopts = ExponentOptions()
    for t, child in enumerate(_child_seeds(seed, trials)):
        rng = np.random.default_rng(child)
        k = 2 + t % 2
        d = 2 + (t // 2) % 2
        rows = rng.dirichlet(np.ones(d), size=k)
        prior = rng.dirichlet(np.ones(k))
        channel = CqChannel.from_outputs(
            [np.diag(r).astype(np.complex128) for r in rows])
        tally.instances += 1

        p_vec = rng.dirichlet(np.ones(d))
        q_vec = rng.dirichlet(np.ones(d))
        rho = np.diag(p_vec).astype(np.complex128)
        sig = np.diag(q_vec).astype(np.complex128)
        for alpha in (float(rng.uniform(0.05, 0.95)), 1.0,
                      float(rng.uniform(1.05, 2.8))):
            ref = _classical_divergence(p_vec, q_vec, alpha)
            for kind in kinds:
                got = divergence(kind, rho, sig, alpha)
                tally.add(abs(got - ref), part="divergence",
                          kind=kind.value, alpha=alpha)

        # Orders below one are drawn inside each kind's admissible range;
        # outside it (sandwiched below 1/2) the state objective loses its
        # convex structure and local minima break the comparison.
        for kind in kinds:
            lo, _ = _ADMISSIBLE[kind]
            for alpha in (float(rng.uniform(max(lo, 0.15) + 0.05, 0.95)),
                          float(rng.uniform(1.1, 2.2))):
                ref1 = _classical_sibson(prior, rows, alpha)
                ref2 = _classical_augustin(prior, rows, alpha)
                got1 = renyi_info(kind, prior, channel, alpha, inner).value
                tally.add(abs(got1 - ref1), part="first-type",
                          kind=kind.value, alpha=alpha)
                got2 = augustin_info(kind, prior, channel, alpha,
                                     inner).value
                tally.add(abs(got2 - ref2), part="second-type",
                          kind=kind.value, alpha=alpha)

        kind = kinds[t % len(kinds)]
        s_hi = 0.9 if kind is DivergenceKind.SANDWICHED else 1.8
        for i in (1, 2):
            for s in (float(rng.uniform(-0.65, -0.15)),
                      float(rng.uniform(0.25, s_hi))):
                got = e0(i, kind, s, prior, channel, eopts)
                ref = _classical_e0(i, s, prior, rows)
                tally.add(abs(got - ref), part="auxiliary",
                          kind=kind.value, i=i, s=s)

        rate = float(rng.uniform(0.35, 1.1)) * _classical_mutual(prior, rows)
        got = channel_exponent_fixed_prior(rate, prior, channel, eopts).value
        ref = _classical_exponent(rate, prior, rows)
        tally.add(abs(got - ref), part="exponent", rate=rate)
    return tally.report()


# ---------------------------------------------------------------------------
# Suite: prior-shape of the auxiliary functions


def check_prior_shape(channel: CqChannel,
                      s_values=(-0.5, -0.1, 0.3, 1.0),
                      trials: int = 50, seed: int = 0) -> CheckReport:
    """Midpoint convexity of the auxiliary functions in the prior for
    s < 0, and midpoint concavity (quasi-concavity for the first type at
    orders below one) for s >= 0."""
    tally = _Tally("prior_shape", 1e-8)
    kinds = tuple(DivergenceKind)
    k = channel.size
    for t, child in enumerate(_child_seeds(seed, trials)):
        rng = np.random.default_rng(child)
        p1 = rng.dirichlet(np.ones(k))
        p2 = rng.dirichlet(np.ones(k))
        mid = 0.5 * (p1 + p2)
        kind = kinds[int(rng.integers(len(kinds)))]
        i = int(rng.integers(1, 3))
        tally.instances += 1
        for s in s_values:
            v1 = e0(i, kind, s, p1, channel)
            v2 = e0(i, kind, s, p2, channel)
            vm = e0(i, kind, s, mid, channel)
            if s < 0.0:
                gap = vm - 0.5 * (v1 + v2)
                law = "convex"
            elif i == 2:
                gap = 0.5 * (v1 + v2) - vm
                law = "concave"
            else:
                gap = min(v1, v2) - vm
                law = "quasi-concave"
            tally.add(gap, law=law, kind=kind.value, i=i, s=s)
    return tally.report()


# ---------------------------------------------------------------------------
# Suite: concavity of the auxiliary functions in s


_CONCAVITY_BANDS = (
    tuple(np.round(np.arange(-0.9, -0.02 + 1e-9, 0.02), 10)),
    tuple(np.round(np.arange(0.02, 3.0 + 1e-9, 0.02), 10)),
)


def _aux_sweep(kind: DivergenceKind, i: int, prior, channel: CqChannel,
               band, opts: ExponentOptions) -> np.ndarray:
    """Auxiliary-curve values along an s band, warm-starting the inner
    optimizations from one grid point to the next."""
    vals = np.empty(len(band))
    if kind is DivergenceKind.PETZ and i == 1:
        for j, s in enumerate(band):
            vals[j] = e0_gallager_holevo(s, prior, channel)
        return vals
    if kind is DivergenceKind.PETZ and i == 2:
        mean = opts.inner.initial
        for j, s in enumerate(band):
            if abs(s) < _S_TAYLOR:
                vals[j] = s * holevo_info(prior, channel)
                continue
            inner = dataclasses.replace(opts.inner, initial=mean)
            res = augustin_info(kind, prior, channel, 1.0 / (1.0 + s), inner)
            mean = res.mean
            vals[j] = s * res.value
        return vals
    mode = "compound" if i == 1 else "conditional"
    coords = None
    for j, s in enumerate(band):
        if abs(s) < _S_TAYLOR:
            vals[j] = s * holevo_info(prior, channel)
            continue
        objective = _BlockObjective(kind, prior, channel, 1.0 / (1.0 + s),
                                    mode=mode)
        value, coords = _warm_minimize(objective, channel.dim, coords)
        vals[j] = s * value
    return vals


def check_concavity_in_s(channel: CqChannel, prior=None,
                         kinds=tuple(DivergenceKind),
                         i_set=(1, 2), grid=None,
                         seed: int = 0) -> CheckReport:
    """Concavity of s times the order-1/(1+s) informations in s, audited
    through second differences along grid bands on either side of zero."""
    tally = _Tally("concavity_in_s", 1e-7)
    if prior is None:
        rng = np.random.default_rng(seed)
        prior = rng.dirichlet(np.ones(channel.size))
    prior = check_prior(prior, channel.size)
    if grid is None:
        bands = _CONCAVITY_BANDS
    elif isinstance(grid, (tuple, list)) and len(grid) > 0 \
            and isinstance(grid[0], (tuple, list, np.ndarray)):
        bands = tuple(tuple(float(s) for s in band) for band in grid)
    else:
        bands = (tuple(float(s) for s in grid),)
    opts = ExponentOptions()
    for kind in kinds:
        kind = DivergenceKind(kind)
        for i in i_set:
            tally.instances += 1
            for band in bands:
                if len(band) < 3:
                    continue
                vals = _aux_sweep(kind, i, prior, channel, band, opts)
                for j in range(1, len(band) - 1):
                    h_l = band[j] - band[j - 1]
                    h_r = band[j + 1] - band[j]
                    slope_l = (vals[j] - vals[j - 1]) / h_l
                    slope_r = (vals[j + 1] - vals[j]) / h_r
                    bend = (slope_r - slope_l) * min(h_l, h_r)
                    scaled = bend / (1.0 + abs(vals[j]))
                    tally.add(scaled, kind=kind.value, i=i, s=band[j])
    return tally.report()


# ---------------------------------------------------------------------------
# Suites: equicontinuity of both informations in the prior


def _order_capacity(kind: DivergenceKind, channel: CqChannel, eta: float,
                    opts: ExponentOptions, cache: dict) -> float:
    """Largest first-type information of the given kind at order eta."""
    key = "holevo" if eta == 1.0 else kind
    if key not in cache:
        evaluator = _info_evaluator(kind, 1, channel, eta, opts)
        value, _ = _maximize_over_priors(evaluator, channel.size, opts)
        cache[key] = float(value)
    return cache[key]


def _perturbed_prior(rng: np.random.Generator, p1: np.ndarray
                     ) -> np.ndarray:
    """Second prior: either an independent draw or a small perturbation."""
    k = p1.size
    if rng.uniform() < 0.5:
        return rng.dirichlet(np.ones(k))
    eps = 10.0 ** rng.uniform(-4.0, -0.3)
    return (1.0 - eps) * p1 + eps * rng.dirichlet(np.ones(k))


def _sample_order(rng: np.random.Generator, kind: DivergenceKind,
                  lo: float, hi: float, include_lo: bool) -> float:
    """Order draw from [lo, hi] favoring the endpoints, avoiding orders
    whose divergence is only a numeric limit estimate."""
    u = rng.uniform()
    if u < 0.15 and include_lo and not uses_limit_estimate(kind, lo):
        return lo
    if u > 0.85 and not uses_limit_estimate(kind, hi):
        return hi
    span = hi - lo
    pad = min(1e-3, 0.25 * span) if span > 0.0 else 0.0
    return float(rng.uniform(lo + (0.0 if include_lo else pad), hi))


def check_equicontinuity_renyi(channel: CqChannel, eta: float = 1.0,
                               trials: int = 100,
                               seed: int = 0) -> CheckReport:
    """The first-type information change between two priors never exceeds
    the uniform bound built from the order-eta capacity, for any order in
    [0, eta] admissible for the sampled kind.  With eta = 0 the bound is
    evaluated as displayed but violations are recorded, not failed."""
    eta = float(eta)
    if math.isnan(eta) or eta < 0.0:
        raise ValueError(f"order cap eta = {eta} must be nonnegative")
    tolerance = INF if eta == 0.0 else 1e-7
    tally = _Tally("equicontinuity_renyi", tolerance,
                   record_threshold=1e-7)
    opts = ExponentOptions()
    ranges = {}
    for kind, (lo, hi) in _ADMISSIBLE.items():
        r_lo, r_hi = max(lo, 0.0), min(hi, eta)
        if r_lo <= r_hi:
            ranges[kind] = (r_lo, r_hi)
    if not ranges:
        raise ValueError(f"no admissible orders at or below eta = {eta}")
    kinds = tuple(ranges)
    caps: dict = {}
    for t, child in enumerate(_child_seeds(seed, trials)):
        rng = np.random.default_rng(child)
        kind = kinds[int(rng.integers(len(kinds)))]
        lo, hi = ranges[kind]
        alpha = _sample_order(rng, kind, lo, hi, include_lo=True)
        p1 = rng.dirichlet(np.ones(channel.size))
        p2 = _perturbed_prior(rng, p1)
        delta = 0.5 * float(np.abs(p1 - p2).sum())
        cap = _order_capacity(kind, channel, eta, opts, caps)
        bound = renyi_prior_bound(delta, eta, cap).bound
        i1 = renyi_info(kind, p1, channel, alpha, opts.inner).value
        i2 = renyi_info(kind, p2, channel, alpha, opts.inner).value
        tally.instances += 1
        tally.add(abs(i1 - i2) - bound, kind=kind.value, alpha=alpha,
                  delta=delta, bound=bound)
    return tally.report()


def check_equicontinuity_augustin(channel: CqChannel, eta: float = 1.0,
                                  trials: int = 100,
                                  seed: int = 0) -> CheckReport:
    """The second-type information change between two priors never exceeds
    the mixing-entropy bound built from the order-eta capacity, for any
    admissible order in (0, eta]."""
    eta = float(eta)
    if math.isnan(eta) or eta <= 0.0:
        raise ValueError(f"order cap eta = {eta} must be positive")
    tally = _Tally("equicontinuity_augustin", 1e-7)
    opts = ExponentOptions()
    ranges = {}
    for kind, (lo, hi) in _ADMISSIBLE.items():
        r_lo, r_hi = max(lo, 0.0), min(hi, eta)
        if r_lo < r_hi or (r_lo == r_hi and r_lo > 0.0):
            ranges[kind] = (r_lo, r_hi)
    if not ranges:
        raise ValueError(f"no admissible orders at or below eta = {eta}")
    kinds = tuple(ranges)
    caps: dict = {}
    for t, child in enumerate(_child_seeds(seed, trials)):
        rng = np.random.default_rng(child)
        kind = kinds[int(rng.integers(len(kinds)))]
        lo, hi = ranges[kind]
        alpha = _sample_order(rng, kind, lo, hi, include_lo=lo > 0.0)
        p1 = rng.dirichlet(np.ones(channel.size))
        p2 = _perturbed_prior(rng, p1)
        delta = 0.5 * float(np.abs(p1 - p2).sum())
        cap = _order_capacity(kind, channel, eta, opts, caps)
        bound = augustin_prior_bound(delta, eta, cap).bound
        i1 = augustin_info(kind, p1, channel, alpha, opts.inner).value
        i2 = augustin_info(kind, p2, channel, alpha, opts.inner).value
        tally.instances += 1
        tally.add(abs(i1 - i2) - bound, kind=kind.value, alpha=alpha,
                  delta=delta, bound=bound)
    return tally.report()


# ---------------------------------------------------------------------------
# Suites: interpolation inequalities


def _pinched_norm(e: PinchingMap, x: np.ndarray, p: float) -> float:
    """Tr[(E(x^p))^(1/p)] for a conditional expectation E."""
    lam = np.linalg.eigvalsh(pinch(e, mpow(x, p)))
    return float(np.sum(np.maximum(lam, 0.0) ** (1.0 / p)))


def check_interpolation_petz(dim_a: int = 2, dim_b: int = 3,
                             trials: int = 100,
                             seed: int = 0) -> CheckReport:
    """Multiplicative interpolation of the pinched trace-power norms
    between two exponents, for a block conditional expectation and a
    partial-trace (factor) conditional expectation."""
    tally = _Tally("interpolation_petz", 1e-9)
    maps = (
        ("block", PinchingMap(blocks=(tuple(range(dim_a)),
                                      tuple(range(dim_a, dim_a + dim_b))))),
        ("factor", PinchingMap(factors=(dim_a, dim_b))),
    )
    for t, child in enumerate(_child_seeds(seed, trials)):
        rng = np.random.default_rng(child)
        p0, p1 = rng.uniform(1.01, 6.0, size=2)
        theta = float(rng.uniform(0.05, 0.95))
        p_mid = 1.0 / ((1.0 - theta) / p0 + theta / p1)
        scale = math.exp(rng.uniform(-1.0, 1.0))
        tally.instances += 1
        for label, emap in maps:
            x = scale * random_density(emap.dim, emap.dim,
                                       int(rng.integers(2 ** 31 - 1)))
            n_mid = _pinched_norm(emap, x, p_mid)
            n_0 = _pinched_norm(emap, x, float(p0))
            n_1 = _pinched_norm(emap, x, float(p1))
            gap = (math.log(n_mid) - (1.0 - theta) * math.log(n_0)
                   - theta * math.log(n_1))
            tally.add(gap, form=label, p0=p0, p1=p1, theta=theta)
    return tally.report()


def _ball_state(w: np.ndarray) -> np.ndarray:
    """Map an unconstrained 3-vector into a strictly interior qubit state."""
    r = float(np.linalg.norm(w))
    v = w * (0.999 * math.tanh(r) / r) if r > 0.0 else np.zeros(3)
    return 0.5 * np.array([[1.0 + v[2], v[0] - 1j * v[1]],
                           [v[0] + 1j * v[1], 1.0 - v[2]]])


def _ball_coords(v: np.ndarray) -> np.ndarray:
    r = float(np.linalg.norm(v))
    if r <= 0.0:
        return np.zeros(3)
    return v * (math.atanh(min(r / 0.999, 1.0 - 1e-12)) / r)


_BALL_DIRECTIONS = None


def _ball_grid() -> list[np.ndarray]:
    global _BALL_DIRECTIONS
    if _BALL_DIRECTIONS is None:
        n = 48
        idx = np.arange(n) + 0.5
        phi = math.pi * (1.0 + math.sqrt(5.0)) * idx
        z = 1.0 - 2.0 * idx / n
        r = np.sqrt(np.maximum(1.0 - z * z, 0.0))
        dirs = np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)
        _BALL_DIRECTIONS = [radius * d for radius in (0.2, 0.5, 0.75, 0.92)
                            for d in dirs]
    return _BALL_DIRECTIONS


def _qubit_state_min(f) -> float:
    """Minimize a function of a qubit state: coarse interior grid sweep
    followed by a Nelder-Mead polish in unconstrained coordinates."""
    best_v = np.zeros(3)
    best = f(0.5 * np.eye(2, dtype=np.complex128))
    for v in _ball_grid():
        s = 0.5 * np.array([[1.0 + v[2], v[0] - 1j * v[1]],
                            [v[0] + 1j * v[1], 1.0 - v[2]]])
        val = f(s)
        if val < best:
            best, best_v = val, v
    res = minimize(lambda w: f(_ball_state(w)), _ball_coords(best_v),
                   method="Nelder-Mead",
                   options={"xatol": 1e-6, "fatol": 1e-11, "maxiter": 600})
    return min(best, float(res.fun))


def _product_reference(sigma: np.ndarray, power: float,
                       n: int) -> np.ndarray:
    base = mpow(sigma, power)
    out = base
    for _ in range(n - 1):
        out = tensor(out, base)
    return out


def _product_log_sandwiched(rho: np.ndarray, p: float, n: int) -> float:
    """log inf over states sigma of the Schatten-p norm of
    sigma_n^e rho sigma_n^e with e = (1 - p)/(2p) and sigma_n the n-fold
    product of sigma."""
    expo = (1.0 - p) / (2.0 * p)

    def f(sigma):
        s_e = _product_reference(sigma, expo, n)
        m = s_e @ rho @ s_e
        return math.log(schatten_norm(0.5 * (m + m.conj().T), p))

    return _qubit_state_min(f)


def _product_log_petz(rho: np.ndarray, p: float, n: int) -> float:
    """log inf over states sigma of Tr[rho^p sigma_n^(1-p)]^(1/p)."""
    rho_p = mpow(rho, p)

    def f(sigma):
        ref = _product_reference(sigma, 1.0 - p, n)
        val = float(np.trace(rho_p @ ref).real)
        return math.log(max(val, 1e-300)) / p

    return _qubit_state_min(f)


def check_interpolation_product(dim: int = 2, n: int = 2, trials: int = 30,
                                seed: int = 0,
                                kind: str | None = None) -> CheckReport:
    """Midpoint convexity in 1/p of the product-reference norm infima
    (log of the smallest sandwiched/trace-power value over n-fold product
    references), for exponents p between 1.2 and 4."""
    if dim != 2:
        raise ValueError("the product-norm infimum sweep covers dim = 2")
    if n < 1 or 2 ** n > 16:
        raise ValueError(f"product length n = {n} outside range")
    if kind not in (None, "sandwiched_form", "petz_form"):
        raise ValueError(f"unknown product form {kind!r}")
    forms = []
    if kind in (None, "sandwiched_form"):
        forms.append(("sandwiched_form", _product_log_sandwiched))
    if kind in (None, "petz_form"):
        forms.append(("petz_form", _product_log_petz))
    tally = _Tally("interpolation_product", 1e-6)
    for t, child in enumerate(_child_seeds(seed, trials)):
        rng = np.random.default_rng(child)
        full = dim ** n
        rho = random_density(full, full, int(rng.integers(2 ** 31 - 1)))
        p0, p1 = rng.uniform(1.2, 4.0, size=2)
        u0, u1 = 1.0 / p0, 1.0 / p1
        p_mid = 2.0 / (u0 + u1)
        tally.instances += 1
        for label, log_value in forms:
            f0 = log_value(rho, float(p0), n)
            f1 = log_value(rho, float(p1), n)
            fm = log_value(rho, float(p_mid), n)
            tally.add(fm - 0.5 * (f0 + f1), form=label, p0=p0, p1=p1)
    return tally.report()


# ---------------------------------------------------------------------------
# Suite: minimax exchange for the strong-converse channel exponent


def _simplex_grid(k: int, step: float) -> list[np.ndarray]:
    n = max(int(round(1.0 / step)), 1)
    pts = []
    for cuts in itertools.combinations(range(n + k - 1), k - 1):
        prev = -1
        parts = []
        for c in cuts + (n + k - 1,):
            parts.append(c - prev - 1)
            prev = c
        pts.append(np.asarray(parts, dtype=float) / n)
    return pts


class _NegOrderAux:
    """Warm evaluator of the sandwiched auxiliary minus s * rate on the
    strong-converse side s < 0, for either information type."""

    def __init__(self, i: int, channel: CqChannel, rate: float,
                 opts: ExponentOptions):
        self._mode = "compound" if i == 1 else "conditional"
        self._channel = channel
        self._rate = rate
        self._coords: dict = {}

    def __call__(self, prior, s: float) -> float:
        alpha = 1.0 / (1.0 + s)
        key = round(math.log(alpha), 1)
        objective = _BlockObjective(DivergenceKind.SANDWICHED, prior,
                                    self._channel, alpha, mode=self._mode)
        value, coords = _warm_minimize(objective, self._channel.dim,
                                       self._coords.get(key))
        self._coords[key] = coords
        return s * value - s * self._rate


def _refine_binary(f, center: float, span: float, xatol: float = 1e-6
                   ) -> float:
    lo = max(0.0, center - span)
    hi = min(1.0, center + span)
    res = minimize_scalar(lambda q: f(np.array([q, 1.0 - q])),
                          bounds=(lo, hi), method="bounded",
                          options={"xatol": xatol, "maxiter": 60})
    return float(res.fun)


def _refine_simplex(f, start: np.ndarray, maxiter: int = 150) -> float:
    x0 = _simplex_coords(start)
    res = minimize(lambda th: f(_simplex_point(th)), x0,
                   method="Nelder-Mead",
                   options={"adaptive": True, "xatol": 1e-5, "fatol": 1e-10,
                            "maxiter": maxiter, "maxfev": 4 * maxiter})
    return float(res.fun)


_MINIMAX_S_RANGE = (-0.998, -1e-3)


def check_minimax(channel: CqChannel, rate_factor: float = 1.3,
                  opts: ExponentOptions | None = None) -> CheckReport:
    """Above capacity, swapping the prior optimization and the parameter
    optimization of the sandwiched strong-converse objective changes
    nothing, for either information type: all four values agree."""
    opts = opts or ExponentOptions()
    if not rate_factor > 1.0:
        raise ValueError("the exchange is certified above capacity; "
                         "rate_factor must exceed 1")
    tally = _Tally("minimax", 1e-3)
    cap = capacity(DivergenceKind.PETZ, 1, channel, 1.0, opts)
    rate = float(rate_factor) * cap.value
    k = channel.size
    step = {2: 0.01, 3: 0.1}.get(k, 0.15)
    grid = _simplex_grid(k, step)
    s_lo, s_hi = _MINIMAX_S_RANGE
    quantities = {}
    for i in (1, 2):
        ev = _NegOrderAux(i, channel, rate, opts)

        def sup_s(p):
            res = minimize_scalar(lambda s: -ev(p, s), bounds=(s_lo, s_hi),
                                  method="bounded",
                                  options={"xatol": 1e-4, "maxiter": 60})
            return -float(res.fun)

        vals = [sup_s(p) for p in grid]
        j = int(np.argmin(vals))
        if k == 2:
            refined = _refine_binary(sup_s, float(grid[j][0]), step)
        else:
            refined = _refine_simplex(sup_s, grid[j])
        quantities[f"prior-then-s-{i}"] = min(vals[j], refined)

        def inf_p(s, refine=False):
            inner = [ev(p, s) for p in grid]
            m = int(np.argmin(inner))
            best = inner[m]
            if refine:
                if k == 2:
                    best = min(best, _refine_binary(
                        lambda p: ev(p, s), float(grid[m][0]), step))
                else:
                    best = min(best, _refine_simplex(
                        lambda p: ev(p, s), grid[m]))
            return best

        res = minimize_scalar(lambda s: -inf_p(s), bounds=(s_lo, s_hi),
                              method="bounded",
                              options={"xatol": 1e-4, "maxiter": 30})
        s_star = float(res.x)
        quantities[f"s-then-prior-{i}"] = inf_p(s_star, refine=True)
    tally.instances = 1
    spread = max(quantities.values()) - min(quantities.values())
    tally.add(spread, rate=rate, **quantities)
    return tally.report()


# ---------------------------------------------------------------------------
# Suites: entropic and Fenchel dualities between source and channel sides


class _TypedAuxFamily:
    """Warm evaluator of the conditional channel auxiliary s * I_{1/(1+s)}
    across many nearby priors, caching inner optima per s bucket."""

    def __init__(self, channel: CqChannel, opts: ExponentOptions):
        self._channel = channel
        self._opts = opts
        self._coords: dict = {}
        self._means: dict = {}

    def __call__(self, prior, s: float) -> float:
        if s == 0.0:
            return 0.0
        if abs(s) < _S_TAYLOR:
            return s * holevo_info(prior, self._channel)
        alpha = 1.0 / (1.0 + s)
        key = round(math.log1p(s), 1)
        if s > 0.0:
            inner = dataclasses.replace(self._opts.inner,
                                        initial=self._means.get(key))
            res = augustin_info(DivergenceKind.PETZ, prior, self._channel,
                                alpha, inner)
            self._means[key] = res.mean
            return s * res.value
        if alpha > 2000.0:
            inner = dataclasses.replace(self._opts.inner,
                                        initial=self._means.get("inf"))
            res = augustin_info(DivergenceKind.SANDWICHED, prior,
                                self._channel, INF, inner)
            self._means["inf"] = res.mean
            return s * res.value
        objective = _BlockObjective(DivergenceKind.SANDWICHED, prior,
                                    self._channel, alpha, mode="conditional")
        value, coords = _warm_minimize(objective, self._channel.dim,
                                       self._coords.get(key))
        self._coords[key] = coords
        return s * value


class _TrackedSup:
    """Supremum of a concave objective over an s interval, reusing the
    previous argmax as the next problem's starting bracket."""

    def __init__(self, lo: float, hi: float, slope_threshold: float):
        self._lo = lo
        self._hi = hi
        self._thr = slope_threshold
        self._center: float | None = None

    def maximize(self, g) -> float:
        lo, hi = self._lo, self._hi
        memo: dict[float, float] = {}

        def f(s: float) -> float:
            s = min(max(float(s), lo), hi)
            if s not in memo:
                memo[s] = g(s)
            return memo[s]

        if self._center is None:
            pts = _scan_grid(lo, hi)
        else:
            c = min(max(self._center, lo), hi)
            w = 0.1 * (1.0 + abs(c))
            pts = sorted({min(max(c + m * w, lo), hi)
                          for m in (-2.0, -1.0, 0.0, 1.0, 2.0)})
        for s in pts:
            f(s)
        # Expand the bracket while the best point sits on its edge.
        for _ in range(80):
            keys = sorted(memo)
            vals = [memo[s] for s in keys]
            j = int(np.argmax(vals))
            if j == 0 and keys[0] > lo + 1e-12:
                width = max(keys[1] - keys[0], 1e-3)
                f(max(keys[0] - 2.0 * width, lo))
            elif j == len(keys) - 1 and keys[-1] < hi - 1e-12:
                width = max(keys[-1] - keys[-2], 1e-3)
                f(min(keys[-1] + 2.0 * width, hi))
            else:
                break
        keys = sorted(memo)
        vals = [memo[s] for s in keys]
        j = int(np.argmax(vals))
        if j == len(keys) - 1 and keys[-1] >= hi - 1e-12 and len(keys) > 1:
            slope = (vals[-1] - vals[-2]) / (keys[-1] - keys[-2])
            if slope > self._thr:
                self._center = keys[-1]
                return INF
        a = keys[max(j - 1, 0)]
        b = keys[min(j + 1, len(keys) - 1)]
        for _ in range(30):
            if b - a <= 5e-3 * (1.0 + abs(a)):
                break
            c1 = a + 0.382 * (b - a)
            c2 = b - 0.382 * (b - a)
            if f(c1) >= f(c2):
                b = c2
            else:
                a = c1
        best = max(memo, key=memo.get)
        self._center = best
        return memo[best]


def _default_duality_rates(source: CqSource,
                           opts: ExponentOptions) -> tuple[float, ...]:
    """Rates straddling the conditional entropy, kept strictly below the
    order-0+ entropy so both exponent sides stay finite."""
    h1 = conditional_renyi_entropy(DivergenceKind.PETZ, source, 1.0, opts)
    h0 = conditional_renyi_entropy(DivergenceKind.PETZ, source, 0.01, opts)
    span = max(h0 - h1, 0.0)
    rates = [h1 + t * span for t in (-0.3, 0.35, 0.7)]
    return tuple(max(r, 0.0) for r in rates)


def check_entropic_duality(source: CqSource, rates=None,
                           opts: ExponentOptions | None = None
                           ) -> CheckReport:
    """The i.i.d. source exponent equals the smallest type exponent plus
    the divergence of the type from the source prior.  Also records (never
    fails on) the feasibility gap of using the source prior itself."""
    opts = opts or ExponentOptions()
    tally = _Tally("entropic_duality", 2e-3)
    if rates is None:
        rates = _default_duality_rates(source, opts)
    k = source.size
    prior = source.prior
    step = 0.01 if k == 2 else 0.05
    grid = _simplex_grid(k, step)
    family = _TypedAuxFamily(source.side_info, opts)
    for rate in rates:
        rate = float(rate)
        lhs_res = source_exponent(rate, source, opts)
        if lhs_res.unbounded:
            tally.skipped += 1
            continue
        lhs = lhs_res.value
        tracked = _TrackedSup(-1.0 + 1e-4, opts.s_max,
                              opts.slope_threshold)

        def typed_exponent(q) -> float:
            q = np.asarray(q, dtype=float)
            h_q = float(-np.sum(q[q > 0.0] * np.log(q[q > 0.0])))
            return tracked.maximize(
                lambda s: family(q, s) + s * (rate - h_q))

        def objective(q) -> float:
            div = _classical_divergence(q, prior, 1.0)
            if math.isinf(div):
                return INF
            value = typed_exponent(q)
            return value + div if math.isfinite(value) else INF

        vals = [objective(q) for q in grid]
        m = int(np.argmin(vals))
        rhs = vals[m]
        if k == 2:
            rhs = min(rhs, _refine_binary(objective, float(grid[m][0]),
                                          step, xatol=1e-5))
        else:
            rhs = min(rhs, _refine_simplex(objective, grid[m]))
        at_prior = source_exponent(rate, source, opts,
                                   fixed_type=prior).value
        feasibility = lhs - at_prior
        tally.instances += 1
        tally.add(abs(lhs - rhs), rate=rate, iid=lhs, best_type=rhs)
        if feasibility > 1e-8 and len(tally.witnesses) < _WITNESS_CAP:
            tally.witnesses.append({
                "note": "feasibility-gap", "rate": rate,
                "violation": float(feasibility)})
    return tally.report()


def _dense_s_grid(s_max: float) -> np.ndarray:
    """Geometric s grid over (-1, s_max], refined toward -1 and 0."""
    neg = -1.0 + np.geomspace(1e-4, 1.0, 320)[:-1]
    pos = np.geomspace(1e-3, max(s_max, 1e-2), 360)
    return np.unique(np.concatenate([neg, [0.0], pos]))


def _grid_conjugate(vals: np.ndarray, s_grid: np.ndarray,
                    rates: np.ndarray, sign: float,
                    slope_threshold: float) -> np.ndarray:
    """sup_s { vals + sign * s * rate } on a fixed s grid, per rate; an
    ascent at the right grid edge marks the supremum as unbounded."""
    m = vals[None, :] + sign * rates[:, None] * s_grid[None, :]
    idx = np.argmax(m, axis=1)
    out = m[np.arange(rates.size), idx]
    tail = ((vals[-1] - vals[-2]) / (s_grid[-1] - s_grid[-2])
            + sign * rates)
    out[(idx == s_grid.size - 1) & (tail > slope_threshold)] = INF
    return out


def check_fenchel_duality(source: CqSource, channel: CqChannel,
                          opts: ExponentOptions | None = None
                          ) -> CheckReport:
    """The smallest combined rate budget of the type source exponent and
    the fixed-prior channel exponent over all rates equals the supremum
    over s < 0 of the summed auxiliary curves."""
    opts = opts or ExponentOptions()
    tally = _Tally("fenchel_duality", 2e-3)
    rng = np.random.default_rng(opts.seed)
    prior = rng.dirichlet(np.ones(channel.size))
    src_curve = _SourceAuxCurve(source, opts, fixed_type=source.prior)
    chan_curve = _ChannelAuxCurve(prior, channel, opts)
    s_grid = _dense_s_grid(opts.s_max)
    src_vals = np.array([src_curve(s) for s in s_grid])
    chan_vals = np.array([chan_curve(s) for s in s_grid])
    cap = capacity(DivergenceKind.PETZ, 1, channel, 1.0, opts)
    h_cond = conditional_renyi_entropy(DivergenceKind.PETZ, source, 1.0,
                                       opts)

    # The combined budget is minimized between the channel information and
    # the source conditional entropy; pad the window past both.
    top = 1.05 * max(2.0 * cap.value, h_cond, 1e-3) + 0.01
    rates = np.arange(0.0, top + 1e-12, 1e-3)
    source_side = _grid_conjugate(src_vals, s_grid, rates, 1.0,
                                  opts.slope_threshold)
    channel_side = _grid_conjugate(chan_vals, s_grid, rates, -1.0,
                                   opts.slope_threshold)
    combined = source_side + channel_side
    m = int(np.argmin(combined))
    lhs = float(combined[m])

    neg = s_grid < 0.0
    rhs = float(np.max(src_vals[neg] + chan_vals[neg]))
    tally.instances = 1
    if not math.isfinite(lhs):
        tally.add(INF, note="no finite combined rate budget")
    else:
        tally.add(abs(lhs - rhs), rate_argmin=float(rates[m]),
                  combined=lhs, dual=rhs)
    return tally.report()


# ---------------------------------------------------------------------------
# Suite: derivative identities of the auxiliary curves at s = 0


def check_derivative_identities(trials: int = 20, seed: int = 0,
                                step: float = 1e-3) -> CheckReport:
    """The auxiliary curves have slope equal to the order-1 information at
    s = 0 and curvature equal to minus the matching variance, for every
    kind and both information types.  Curvature violations are scaled so a
    single tolerance governs both identities (slope 1e-3, curvature 5e-3)."""
    tally = _Tally("derivative_identities", 1e-3)
    h = float(step)
    for t, child in enumerate(_child_seeds(seed, trials)):
        rng = np.random.default_rng(child)
        dim = 2 + t % 2
        k = 2 + (t // 2) % 2
        channel = random_channel(dim, k, int(rng.integers(2 ** 31 - 1)))
        prior = rng.dirichlet(np.ones(k))
        slope_ref = holevo_info(prior, channel)
        tally.instances += 1
        for kind in DivergenceKind:
            curV = {1: joint_information_variance(kind, prior, channel),
                    2: information_variance(kind, prior, channel)}
            for i in (1, 2):
                up = e0(i, kind, h, prior, channel)
                down = e0(i, kind, -h, prior, channel)
                slope = (up - down) / (2.0 * h)
                curvature = (up + down) / (h * h)
                tally.add(abs(slope - slope_ref), identity="slope",
                          kind=kind.value, i=i)
                tally.add(abs(curvature + curV[i]) * (1e-3 / 5e-3),
                          identity="curvature", kind=kind.value, i=i)
    return tally.report()


# ---------------------------------------------------------------------------
# Full run


@dataclasses.dataclass(frozen=True)
class CheckConfig:
    """Instance counts and sizes for a full property run.  The defaults
    keep a complete deterministic run within a few minutes."""

    seed: int = 2024
    law_trials: int = 200
    law_dims: tuple = (2, 3, 4)
    channel_sizes: tuple = ((2, 2), (2, 3), (3, 2), (3, 3))
    classical_trials: int = 40
    prior_shape_trials: int = 30
    prior_shape_channels: int = 2
    concavity_channels: int = 2
    equicontinuity_trials: int = 60
    equicontinuity_channels: int = 2
    equicontinuity_eta: float = 1.0
    interpolation_trials: int = 100
    product_trials: int = 20
    minimax_channels: int = 1
    minimax_rate_factor: float = 1.3
    duality_instances: int = 2
    derivative_trials: int = 8
    suites: tuple | None = None

    def __post_init__(self):
        counts = (self.law_trials, self.classical_trials,
                  self.prior_shape_trials, self.prior_shape_channels,
                  self.concavity_channels, self.equicontinuity_trials,
                  self.equicontinuity_channels, self.interpolation_trials,
                  self.product_trials, self.minimax_channels,
                  self.duality_instances, self.derivative_trials)
        if any(c < 1 for c in counts):
            raise ValueError("all instance counts must be positive")


ALL_SUITES = (
    "divergence_laws",
    "classical_reduction",
    "prior_shape",
    "concavity_in_s",
    "equicontinuity_renyi",
    "equicontinuity_augustin",
    "interpolation_petz",
    "interpolation_product",
    "minimax",
    "entropic_duality",
    "fenchel_duality",
    "derivative_identities",
)


def _merge_reports(reports: list[CheckReport]) -> CheckReport:
    first = reports[0]
    witnesses: list = []
    for r in reports:
        witnesses.extend(r.witnesses[:max(_WITNESS_CAP - len(witnesses),
                                          0)])
    worst = max(r.max_violation for r in reports)
    return CheckReport(
        suite=first.suite,
        instances=sum(r.instances for r in reports),
        max_violation=worst,
        tolerance=first.tolerance,
        passed=worst <= first.tolerance,
        witnesses=tuple(witnesses),
        skipped=sum(r.skipped for r in reports),
    )


def _run_channels(n: int, seed: int, sizes=((2, 2), (2, 3), (3, 2), (3, 3))
                  ) -> list[CqChannel]:
    out = []
    for j, child in enumerate(_child_seeds(seed, n)):
        dim, k = sizes[j % len(sizes)]
        out.append(random_channel(dim, k, child))
    return out


def _run_sources(n: int, seed: int) -> list[CqSource]:
    out = []
    for j, child in enumerate(_child_seeds(seed, n)):
        rng = np.random.default_rng(child)
        side = random_channel(2, 2, int(rng.integers(2 ** 31 - 1)))
        out.append(CqSource(prior=rng.dirichlet(np.ones(2)),
                            side_info=side))
    return out


def run_all(config: CheckConfig | None = None,
            seed: int | None = None) -> tuple[CheckReport, ...]:
    """Run every property suite with deterministic seeding and return one
    report per suite, in a fixed order."""
    config = config or CheckConfig()
    root = config.seed if seed is None else int(seed)
    seeds = {name: s for name, s in zip(ALL_SUITES,
                                        _child_seeds(root, len(ALL_SUITES)))}
    selected = ALL_SUITES if config.suites is None else tuple(config.suites)
    unknown = [name for name in selected if name not in ALL_SUITES]
    if unknown:
        raise ValueError(f"unknown suites: {', '.join(unknown)}")
    reports = []
    for name in ALL_SUITES:
        if name not in selected:
            continue
        s = seeds[name]
        if name == "divergence_laws":
            reports.append(check_divergence_laws(
                dims=config.law_dims, trials=config.law_trials, seed=s))
        elif name == "classical_reduction":
            reports.append(check_classical_reduction(
                trials=config.classical_trials, seed=s))
        elif name == "prior_shape":
            channels = _run_channels(config.prior_shape_channels, s,
                                     sizes=config.channel_sizes)
            per = max(config.prior_shape_trials
                      // config.prior_shape_channels, 1)
            reports.append(_merge_reports([
                check_prior_shape(ch, trials=per, seed=s + j)
                for j, ch in enumerate(channels)]))
        elif name == "concavity_in_s":
            channels = _run_channels(config.concavity_channels, s,
                                     sizes=config.channel_sizes)
            reports.append(_merge_reports([
                check_concavity_in_s(ch, seed=s + j)
                for j, ch in enumerate(channels)]))
        elif name == "equicontinuity_renyi":
            channels = _run_channels(config.equicontinuity_channels, s,
                                     sizes=config.channel_sizes)
            per = max(config.equicontinuity_trials
                      // config.equicontinuity_channels, 1)
            reports.append(_merge_reports([
                check_equicontinuity_renyi(
                    ch, eta=config.equicontinuity_eta, trials=per,
                    seed=s + j)
                for j, ch in enumerate(channels)]))
        elif name == "equicontinuity_augustin":
            channels = _run_channels(config.equicontinuity_channels, s + 1,
                                     sizes=config.channel_sizes)
            per = max(config.equicontinuity_trials
                      // config.equicontinuity_channels, 1)
            reports.append(_merge_reports([
                check_equicontinuity_augustin(
                    ch, eta=config.equicontinuity_eta, trials=per,
                    seed=s + j)
                for j, ch in enumerate(channels)]))
        elif name == "interpolation_petz":
            reports.append(check_interpolation_petz(
                trials=config.interpolation_trials, seed=s))
        elif name == "interpolation_product":
            reports.append(check_interpolation_product(
                trials=config.product_trials, seed=s))
        elif name == "minimax":
            channels = _run_channels(config.minimax_channels, s,
                                     sizes=((2, 2), (2, 3)))
            reports.append(_merge_reports([
                check_minimax(ch, rate_factor=config.minimax_rate_factor)
                for ch in channels]))
        elif name == "entropic_duality":
            sources = _run_sources(config.duality_instances, s)
            reports.append(_merge_reports([
                check_entropic_duality(src) for src in sources]))
        elif name == "fenchel_duality":
            sources = _run_sources(config.duality_instances, s + 1)
            channels = _run_channels(config.duality_instances, s + 2,
                                     sizes=((2, 2),))
            reports.append(_merge_reports([
                check_fenchel_duality(src, ch)
                for src, ch in zip(sources, channels)]))
        elif name == "derivative_identities":
            reports.append(check_derivative_identities(
                trials=config.derivative_trials, seed=s))
    return tuple(reports)
