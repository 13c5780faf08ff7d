"""Monte Carlo sweep harness: NMSE of the robust and non-robust schemes
versus SNR, RIS size N, or sensor count K, with fully reproducible
per-trial seeding."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

import numpy as np

from .model import SystemConfig, synthesize_instance
from .optimizer import (
    SolverOptions,
    multi_start,
    nonrobust_design,
    run_algorithm1,
)
from .worst_case import mse_at_error, worst_case_objective

SWEEP_KINDS = ("snr", "n", "k")
SCHEMES = ("robust_paper", "robust_exact", "nonrobust", "multistart")

_KIND_CODE = {kind: i for i, kind in enumerate(SWEEP_KINDS)}
_SCHEME_CODE = {s: i for i, s in enumerate(SCHEMES)}
# sentinel in the seed path where the scheme code would go, so channel
# streams are shared by every scheme on the same trial
_CHANNEL_STREAM = len(SCHEMES)


@dataclass
class SweepSpec:
    kind: str
    values: list
    trials: int
    schemes: list
    base: SystemConfig
    master_seed: int
    s_values: list | None = None
    solver: SolverOptions = field(default_factory=SolverOptions)

    def __post_init__(self):
        if self.kind not in SWEEP_KINDS:
            raise ValueError(f"kind must be one of {SWEEP_KINDS}")
        if not self.values or list(self.values) != sorted(set(self.values)):
            raise ValueError("values must be non-empty and strictly increasing")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        for s in self.schemes:
            if s not in SCHEMES:
                raise ValueError(f"unknown scheme {s!r}")
        if self.s_values is not None and not self.s_values:
            raise ValueError("s_values must be non-empty when given")


@dataclass
class AggregateRecord:
    kind: str
    value: float
    scheme: str
    nmse_mean: float
    nmse_std: float
    trials: int
    mean_iters: float


def snr_to_noise_var(snr_db, P):
    """Noise variance from SNR = 10 log10(P / sigma^2)."""
    if P <= 0:
        raise ValueError("P must be > 0")
    return P * 10.0 ** (-snr_db / 10.0)


def nmse(mse, K):
    """MSE normalized by the variance K of the target sum signal."""
    if K < 1:
        raise ValueError("K must be >= 1")
    return mse / K


def design_for_scheme(config, scheme, options, h_hat_set, eps_set, rng):
    """Run the designer a scheme refers to; returns (Design, iterations)."""
    if scheme == "nonrobust":
        return nonrobust_design(config, h_hat_set), 0
    if scheme in ("robust_paper", "robust_exact"):
        mode = "paper" if scheme == "robust_paper" else "exact"
        opts = dataclasses.replace(options, mode=mode)
        design, trace = run_algorithm1(config, h_hat_set, eps_set, opts, rng)
        return design, trace.n_iters
    if scheme == "multistart":
        opts = dataclasses.replace(options, include_nonrobust_start=True)
        return multi_start(config, h_hat_set, eps_set, opts, rng), 0
    raise ValueError(f"unknown scheme {scheme!r}")


def run_trial(config, scheme, options, trial_seed, channel_seed=None):
    """One Monte Carlo trial: synthesize channels, design, evaluate NMSE.

    channel_seed (default: trial_seed) controls the channel draw separately
    from the solver stream, so different schemes can be compared on
    identical channels while keeping distinct solver randomness.
    """
    nm, _ = run_trial_full(config, scheme, options, trial_seed, channel_seed)
    return nm


def run_trial_full(config, scheme, options, trial_seed, channel_seed=None):
    if channel_seed is None:
        channel_seed = trial_seed
    rng_ch = np.random.default_rng(np.random.SeedSequence(channel_seed))
    rng_solver = np.random.default_rng(np.random.SeedSequence(trial_seed))
    inst, deltas = synthesize_instance(config, rng_ch)
    design, iters = design_for_scheme(
        config, scheme, options, inst.h_hat, inst.eps, rng_solver
    )
    if config.eval_mode == "worst":
        mse = worst_case_objective(design, inst.h_hat, inst.eps, config.noise_var)
    else:
        mse = mse_at_error(
            design, inst.h_hat, deltas, config.noise_var, eps_set=inst.eps
        )
    return nmse(mse, config.K), iters


def _config_at(base, kind, value, s):
    fields = dict(
        K=base.K,
        N=base.N,
        P=base.P,
        noise_var=base.noise_var,
        channel_var=base.channel_var,
        s=s,
        eval_mode=base.eval_mode,
        error_sampling=base.error_sampling,
    )
    if kind == "snr":
        fields["noise_var"] = snr_to_noise_var(value, base.P)
    elif kind == "n":
        fields["N"] = int(value)
    elif kind == "k":
        fields["K"] = int(value)
    return SystemConfig(**fields)


def scheme_label(scheme, s, multiple_s):
    return f"{scheme}|s={s:g}" if multiple_s else scheme


def trial_seed_pair(master_seed, kind, value_index, s_index, scheme, trial):
    """Solver and channel seed tuples for one sweep cell trial. The channel
    seed omits the scheme so schemes compete on identical channel draws."""
    kind_code = _KIND_CODE[kind]
    scode = _SCHEME_CODE[scheme]
    tseed = (master_seed, kind_code, value_index, s_index, scode, trial)
    cseed = (master_seed, kind_code, value_index, s_index, _CHANNEL_STREAM, trial)
    return tseed, cseed


def run_sweep(spec):
    """Run every (value, s, scheme) cell of the sweep; returns records
    ordered by (value, scheme label). Trial seeds are derived by index so
    execution order and parallelism cannot change the results."""
    s_values = spec.s_values if spec.s_values is not None else [spec.base.s]
    multiple_s = len(s_values) > 1
    records = []
    for vi, value in enumerate(spec.values):
        row = []
        for si, s in enumerate(s_values):
            config = _config_at(spec.base, spec.kind, value, s)
            for scheme in spec.schemes:
                nmses = np.empty(spec.trials)
                iters = np.empty(spec.trials)
                for trial in range(spec.trials):
                    tseed, cseed = trial_seed_pair(
                        spec.master_seed, spec.kind, vi, si, scheme, trial
                    )
                    nmses[trial], iters[trial] = run_trial_full(
                        config, scheme, spec.solver, tseed, cseed
                    )
                row.append(
                    AggregateRecord(
                        kind=spec.kind,
                        value=value,
                        scheme=scheme_label(scheme, s, multiple_s),
                        nmse_mean=float(np.mean(nmses)),
                        nmse_std=float(np.std(nmses)),
                        trials=spec.trials,
                        mean_iters=float(np.mean(iters)),
                    )
                )
        row.sort(key=lambda rec: rec.scheme)
        records.extend(row)
    return records
