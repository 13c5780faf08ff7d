"""Alternating joint design of RIS phases and transceiver scalings.

Per iteration, for each sensor: the ball-constraint multiplier is computed
at the current iterate, the RIS phases are co-phased to the channel
estimate, and the effective scalar t_hat is updated either by the
cube-root stationarity formula ("paper" mode) or by the exact 1-D
minimizer of the per-sensor worst-case objective ("exact" mode). m and
t_k are then recovered so the sum power constraint holds with equality.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import AllZeroScalers, InvalidNoise, NoUncertainty
from .model import Design, inner
from .worst_case import lambda_worst, worst_case_term

MODES = ("paper", "exact")
INIT_RULES = ("random_phase", "cophase")


@dataclass
class SolverOptions:
    mode: str = "exact"
    delta_stop: float = 1e-9
    max_iters: int = 200
    safeguard: bool = True
    starts: int = 1
    include_nonrobust_start: bool = False
    # recompute the multiplier after the phase update instead of before
    lambda_after_phase: bool = False
    init_rule: str = "random_phase"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.delta_stop <= 0:
            raise ValueError("delta_stop must be > 0")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.starts < 1:
            raise ValueError("starts must be >= 1")
        if self.init_rule not in INIT_RULES:
            raise ValueError(f"init_rule must be one of {INIT_RULES}")


@dataclass
class IterTrace:
    """Per-iteration records of one alternating run."""

    objective: list = field(default_factory=list)
    change: list = field(default_factory=list)
    lambdas: list = field(default_factory=list)
    a: list = field(default_factory=list)
    hit_max_iters: bool = False

    @property
    def n_iters(self):
        return len(self.objective)


def update_phases(h_hat):
    """Co-phasing RIS vector: v_i = exp(j*arg(h_hat_i)) (zero entries get
    phase 0), which makes inner(h_hat, v) = sum_i |h_hat_i| real and maximal
    among unit-modulus vectors."""
    h_hat = np.asarray(h_hat)
    v = np.ones_like(h_hat, dtype=complex)
    nz = h_hat != 0
    v[nz] = h_hat[nz] / np.abs(h_hat[nz])
    return v


def t_mag_paper(Q, lam, N, P, noise_var):
    """Cube-root stationary point of the per-sensor objective with constant
    numerator Q: |t_hat|^2 = lam * (1 + cbrt(2 N P Q / (lam noise_var))) / N."""
    if noise_var == 0:
        raise InvalidNoise("stationarity equation has no finite root")
    return lam * (1.0 + np.cbrt(2.0 * N * P * Q / (lam * noise_var))) / N


def t_exact(a, eps_rootN, noise_var, P):
    """Exact minimizer over tau >= 0 of
    (|tau*a - 1| + eps_rootN*tau)^2 + (noise_var/P)*tau^2.

    With b = a - eps_rootN and c = noise_var/P: tau = 0 when b <= 0
    (uncertainty dominates), otherwise min(b/(b^2 + c), 1/a)."""
    b = a - eps_rootN
    if b <= 0:
        return 0.0
    c = noise_var / P
    interior = b / (b * b + c)
    return float(min(interior, 1.0 / a)) if a > 0 else float(interior)


def recover_m_t(t_hat_set, P):
    """Recover (m, t) from the effective scalars: m = sqrt(sum|t_hat|^2 / P),
    t_k = t_hat_k / m, so the sum power constraint is met with equality."""
    t_hat_set = np.asarray(t_hat_set)
    ssq = float(np.sum(np.abs(t_hat_set) ** 2))
    if ssq == 0:
        raise AllZeroScalers("all effective scalars are zero")
    m = float(np.sqrt(ssq / P))
    return m, t_hat_set / m


def _per_sensor_objective(t_hat, h_hat, v, eps, noise_over_P):
    """Worst-case term plus this sensor's share of the noise penalty, in
    t_hat space (m eliminated via the active power constraint)."""
    return worst_case_term(t_hat, h_hat, v, eps) + noise_over_P * abs(t_hat) ** 2


def _objective_t_hat_space(t_hat_set, h_hat_set, v_set, eps_set, noise_over_P):
    return sum(
        _per_sensor_objective(t_hat_set[k], h_hat_set[k], v_set[k], eps_set[k], noise_over_P)
        for k in range(len(t_hat_set))
    )


def nonrobust_design(config, h_hat_set):
    """Baseline ignoring CSI uncertainty: co-phased RIS vectors and the
    classical sum-power MMSE scaling t_hat_k = a_k / (a_k^2 + sigma^2/P)."""
    h_hat_set = np.asarray(h_hat_set)
    K = h_hat_set.shape[0]
    c = config.noise_var / config.P
    v = np.empty_like(h_hat_set)
    t_hat = np.empty(K)
    for k in range(K):
        v[k] = update_phases(h_hat_set[k])
        a = float(np.sum(np.abs(h_hat_set[k])))
        t_hat[k] = a / (a * a + c) if a > 0 else 0.0
    m, t = recover_m_t(t_hat, config.P)
    return Design(m=m, t=t, v=v)


def _init_state(config, h_hat_set, options, rng):
    K, N = config.K, config.N
    if options.init_rule == "cophase":
        v = np.stack([update_phases(h_hat_set[k]) for k in range(K)])
    else:
        phases = rng.uniform(0.0, 2.0 * np.pi, (K, N))
        v = np.exp(1j * phases)
    # m^(1) = 1, per-sensor power P/K
    t_hat = np.full(K, np.sqrt(config.P / K), dtype=complex)
    return v, t_hat


def run_algorithm1(config, h_hat_set, eps_set, options, rng, init=None):
    """Alternating loop for the worst-case joint design.

    Returns the final Design and its IterTrace. When eps_k = 0 the robust
    step is bypassed (multiplier treated as +inf). With the safeguard on,
    any per-sensor block update that would increase the objective is
    reverted, making the objective trace non-increasing.
    """
    h_hat_set = np.asarray(h_hat_set)
    eps_set = np.asarray(eps_set, dtype=float)
    if np.all(h_hat_set == 0):
        raise AllZeroScalers("every channel estimate is zero")
    K, N = config.K, config.N
    noise_over_P = config.noise_var / config.P

    if init is not None:
        v, t_hat = init
        v = np.array(v, dtype=complex)
        t_hat = np.array(t_hat, dtype=complex)
    else:
        v, t_hat = _init_state(config, h_hat_set, options, rng)

    trace = IterTrace()
    m_prev, t_prev = _recover_or_zero(t_hat, config.P)
    rootN = np.sqrt(N)

    for it in range(options.max_iters):
        for k in range(K):
            h_k = h_hat_set[k]
            eps_k = eps_set[k]
            lam = _multiplier(t_hat[k], h_k, v[k], eps_k)
            v_new = update_phases(h_k)
            a = float(np.sum(np.abs(h_k)))
            if options.lambda_after_phase:
                lam = _multiplier(t_hat[k], h_k, v_new, eps_k)
            if eps_k == 0 or not np.isfinite(lam):
                # no uncertainty: classical MMSE scaling in t_hat space
                t_new = a / (a * a + noise_over_P) if a > 0 else 0.0
            elif options.mode == "exact":
                t_new = t_exact(a, eps_k * rootN, config.noise_var, config.P)
            else:
                # constant numerator: residual at the fresh phases and the
                # previous effective scalar
                Q = abs(t_hat[k] * a - 1.0) ** 2
                t_sq = t_mag_paper(Q, lam, N, config.P, config.noise_var)
                t_new = np.sqrt(t_sq)
            _record_k(trace, k, lam, a)
            if options.safeguard:
                before = _per_sensor_objective(t_hat[k], h_k, v[k], eps_k, noise_over_P)
                after = _per_sensor_objective(t_new, h_k, v_new, eps_k, noise_over_P)
                if after > before:
                    continue
            v[k] = v_new
            t_hat[k] = t_new

        m, t = _recover_or_zero(t_hat, config.P)
        obj = _objective_t_hat_space(t_hat, h_hat_set, v, eps_set, noise_over_P)
        trace.objective.append(obj)
        if it == 0:
            change = np.inf
        else:
            change = float(
                np.sum(np.abs(v - v_prev) ** 2)
                + np.sum(np.abs(t - t_prev) ** 2)
                + abs(m - m_prev) ** 2
            )
        trace.change.append(change)
        v_prev = v.copy()
        t_prev, m_prev = t.copy(), m
        if change <= options.delta_stop:
            break
    else:
        trace.hit_max_iters = True

    m, t = _recover_or_zero(t_hat, config.P)
    return Design(m=m, t=t, v=v.copy()), trace


def _multiplier(t_hat, h_hat, v, eps):
    if eps == 0 or abs(t_hat) == 0:
        return np.inf
    try:
        return lambda_worst(t_hat, h_hat, v, eps)
    except NoUncertainty:
        return np.inf


def _record_k(trace, k, lam, a):
    if k == 0:
        trace.lambdas.append([])
        trace.a.append([])
    trace.lambdas[-1].append(float(lam))
    trace.a[-1].append(float(a))


def _recover_or_zero(t_hat, P):
    """recover_m_t, except the all-zero degenerate case (uncertainty so
    large that silence is optimal for every sensor) yields the m = 0 design
    rather than an error mid-run."""
    if np.all(np.abs(t_hat) == 0):
        return 0.0, np.zeros_like(t_hat)
    return recover_m_t(t_hat, P)


def multi_start(config, h_hat_set, eps_set, options, rng):
    """Best-of-S restart wrapper around run_algorithm1.

    Runs options.starts random initializations (independent child streams)
    and, when include_nonrobust_start is set, an additional run warm-started
    at the non-robust design plus the non-robust design itself as a
    candidate. Returns the candidate with the smallest worst-case objective
    (first index wins ties)."""
    from .worst_case import worst_case_objective

    h_hat_set = np.asarray(h_hat_set)
    eps_set = np.asarray(eps_set, dtype=float)
    candidates = []
    streams = rng.spawn(options.starts)
    for child in streams:
        design, _ = run_algorithm1(config, h_hat_set, eps_set, options, child)
        candidates.append(design)
    if options.include_nonrobust_start:
        warm = nonrobust_design(config, h_hat_set)
        candidates.append(warm)
        init = (warm.v, warm.t_hat)
        design, _ = run_algorithm1(
            config, h_hat_set, eps_set, options, rng, init=init
        )
        candidates.append(design)
    objs = [
        worst_case_objective(d, h_hat_set, eps_set, config.noise_var)
        for d in candidates
    ]
    return candidates[int(np.argmin(objs))]
