"""Time-varying feedback encoder, interval decoder, and session runner.

Encoding: user m maps its message point theta_m in (0,1) to a Gaussian point
X_1 = F_X^{-1}(theta_m) with X ~ N(0, P1), then refines after every feedback
observation:

    X_{n+1} = (X_n - b_n * alpha_n * Y_n) / beta_n,

transmitting alpha_n * X_n at step n, where alpha_n is the rotating Hadamard
column.  The affine maps w_n(s) = beta_n s + b_n alpha_n Y_n invert the
refinement, so X_1 = w_1 o ... o w_{n-1} (X_n) exactly; the decoder takes the
fixed window (-t, t) around the final state, maps it back through the same
composition to the X_1 domain, and through F_X to an interval of (0,1).

The window half-width is sized as t = 2^{(n/2)(log2(1/(beta+eps)) - R)},
which grows without bound while staying o(2^{n(log2(1/(beta+eps)) - R)}); eps
is placed so that log2(1/(beta+eps)) is the midpoint of R and log2(1/beta),
splitting the exponent budget between window outage and decoding error.

Numerical note: after n steps the decoded interval has width ~ 2 t prod(beta)
around an O(1) midpoint, far below f64 spacing at realistic horizons, so
endpoints cannot carry the interval.  Intervals are therefore represented by
(midpoint, half-width) with the half-width formed as the exact product
t * prod(beta); membership tests use the equivalent well-conditioned event
X_n in (-t, t), which is the error event the analysis works with anyway.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtr, ndtri

from .channel import ChannelParams, NoiseSource, transmit
from .covariance import TransientSchedule, transient_schedule
from .errors import DomainError, RateInfeasible, ZeroContraction
from .hadamard import HadamardMatrix, build_hadamard

_LN2 = float(np.log(2.0))


@dataclass(frozen=True)
class CodeSchedule:
    """Per-step code parameters (b_n, beta_n, P_n) plus the initial power P1.

    P_n is the analytic per-user input power implied by the covariance
    recursion; the encoder itself only consumes P1, b_n, beta_n and the
    Hadamard modulation.
    """

    P1: float
    b: np.ndarray
    beta: np.ndarray
    P: np.ndarray
    H: HadamardMatrix

    def __post_init__(self):
        for name in ("b", "beta", "P"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        if not (self.b.size == self.beta.size == self.P.size):
            raise ValueError("b, beta, P must have equal length")
        if self.P1 <= 0 or np.any(self.P <= 0):
            raise ValueError("powers must be positive")
        if np.any(self.beta <= 0):
            raise ZeroContraction("all beta_n must be positive")

    @property
    def M(self) -> int:
        return self.H.order

    def __len__(self) -> int:
        return self.b.size

    def tail_beta(self, horizon: int) -> float:
        """Contraction bound for the rate formula: max beta_n over n >= M.

        Schedules here are eventually constant, so the tail maximum over the
        horizon stands in for the limit superior.
        """
        start = min(self.M - 1, horizon - 1)
        return float(self.beta[start:horizon].max())

    def validate(self, params: ChannelParams, horizon: int) -> None:
        if horizon > len(self):
            raise ValueError("schedule shorter than requested horizon")
        if self.tail_beta(horizon) >= 1.0:
            raise ValueError("tail beta must stay below 1 for positive rate")
        avg = float(self.P[:horizon].mean())
        if avg > params.P * (1.0 + 1e-9):
            raise ValueError(f"average scheduled power {avg} exceeds budget {params.P}")


def constant_schedule(
    b: float, beta: float, P: float, horizon: int, h: HadamardMatrix
) -> CodeSchedule:
    return CodeSchedule(
        P1=P,
        b=np.full(horizon, b),
        beta=np.full(horizon, beta),
        P=np.full(horizon, P),
        H=h,
    )


def schedule_no_interference(P: float, horizon: int, M: int = 1) -> CodeSchedule:
    """Separate point-to-point channels: b = P/(P+1), beta = 1/sqrt(P+1)."""
    return constant_schedule(
        P / (P + 1.0), 1.0 / np.sqrt(P + 1.0), P, horizon, build_hadamard(M)
    )


def schedule_from_solution(params: ChannelParams, sol, horizon: int) -> CodeSchedule:
    """Transient steps into the steady state of a RateSolution, then constant."""
    h = build_hadamard(params.M)
    trans: TransientSchedule = transient_schedule(
        (sol.b, sol.beta, sol.lambdas, params.P),
        sol.diagnostics["A"],
        sol.diagnostics["C"],
        params,
    )
    k = len(trans)
    if horizon < k:
        raise ValueError("horizon shorter than the transient")
    b = np.concatenate([trans.b, np.full(horizon - k, trans.steady_b)])
    beta = np.concatenate([trans.beta, np.full(horizon - k, trans.steady_beta)])
    p = np.concatenate([trans.P, np.full(horizon - k, trans.steady_P)])
    p1 = float(p[0]) if k else float(trans.steady_P)
    return CodeSchedule(P1=p1, b=b, beta=beta, P=p, H=h)


@dataclass(frozen=True)
class DecodedInterval:
    """Decoded message interval for theta, with its X_1-domain pre-image.

    pre_mid and pre_halfwidth carry the interval faithfully at any horizon;
    lo and hi are the mapped (0,1) endpoints, which collapse to equal floats
    once the width falls below f64 resolution (deep horizons).
    """

    lo: float
    hi: float
    pre_mid: float
    pre_halfwidth: float
    sigma: float
    n: int
    rate: float

    def __post_init__(self):
        if not self.pre_halfwidth > 0.0:
            raise ValueError("decoded interval must have positive width")
        if self.lo > self.hi:
            raise ValueError("endpoints out of order")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, theta: float) -> bool:
        """Membership test in the exactly-represented pre-image domain."""
        x1 = self.sigma * float(ndtri(theta))
        return abs(x1 - self.pre_mid) < self.pre_halfwidth


@dataclass
class SessionResult:
    """Per-user Monte Carlo statistics for one simulated configuration."""

    trials: int
    error_rate: np.ndarray
    rate_bits: np.ndarray
    avg_power: np.ndarray
    retransmissions: np.ndarray
    outages: np.ndarray
    diagnostics: dict = field(default_factory=dict)

    @classmethod
    def empty(cls, m: int) -> "SessionResult":
        z = np.zeros(m)
        return cls(0, z.copy(), z.copy(), z.copy(), z.astype(int), z.astype(int))


def encode_init(theta: np.ndarray, P1: float) -> np.ndarray:
    """Map message points in (0,1) to X_1 = F_X^{-1}(theta), X ~ N(0, P1)."""
    theta = np.asarray(theta, dtype=float)
    if np.any(theta <= 0.0) or np.any(theta >= 1.0):
        raise DomainError("message points must lie strictly inside (0, 1)")
    return np.sqrt(P1) * ndtri(theta)


def encode_step(x_n, y_n, b_n: float, beta_n: float, alpha_n) -> np.ndarray:
    """X_{n+1} = (X_n - b_n * alpha_n * Y_n) / beta_n (pre-modulation state)."""
    if beta_n == 0.0:
        raise ZeroContraction("beta_n must be nonzero")
    return (
        np.asarray(x_n, float) - b_n * np.asarray(alpha_n, float) * np.asarray(y_n, float)
    ) / beta_n


def ifs_map(s, beta_n: float, b_n: float, alpha: float, y: float):
    """Affine decoder map w_n(s) = beta_n * s + b_n * alpha * y."""
    return beta_n * s + b_n * alpha * y


def rate_window(
    schedule: CodeSchedule, horizon: int, rate: float, eps: float | None = None
):
    """Window half-width t and slack eps for a horizon-n decode.

    When eps is not given it is placed by the midpoint rule
    log2(1/(beta+eps)) = (R + log2(1/beta)) / 2.  Raises RateInfeasible when
    R >= log2(1/(beta+eps)).
    """
    beta = schedule.tail_beta(horizon)
    cap = float(np.log2(1.0 / beta))
    if eps is None:
        if rate >= cap:
            raise RateInfeasible(f"rate {rate} >= log2(1/beta) = {cap}")
        eps = 2.0 ** (-(rate + cap) / 2.0) - beta
    cap_eps = float(np.log2(1.0 / (beta + eps)))
    if rate >= cap_eps:
        raise RateInfeasible(f"rate {rate} >= log2(1/(beta+eps)) = {cap_eps}")
    t = 2.0 ** ((horizon / 2.0) * (cap_eps - rate))
    return t, eps


def _log2_gauss_interval(mid, halfwidth, sigma: float):
    """log2 of the Gaussian mass on (mid - hw, mid + hw), stable for tiny hw.

    Below 1e-8 sigma the mass is width * density(mid) to full precision; the
    direct CDF difference would cancel entirely in doubles there.
    """
    mid = np.asarray(mid, float)
    z = mid / sigma
    hw = np.asarray(halfwidth, float)
    ln_narrow = (
        np.log(np.maximum(2.0 * hw, np.finfo(float).tiny) / sigma)
        - 0.5 * z * z
        - 0.5 * np.log(2.0 * np.pi)
    )
    diff = ndtr((mid + hw) / sigma) - ndtr((mid - hw) / sigma)
    with np.errstate(divide="ignore"):
        ln_wide = np.log(np.maximum(diff, np.finfo(float).tiny))
    return np.where(hw < 1e-8 * sigma, ln_narrow, ln_wide) / _LN2


def _modulation_signs(h: HadamardMatrix, horizon: int) -> np.ndarray:
    """(horizon, M) array of modulation columns for steps 1..horizon."""
    m = h.order
    cols = [(i % m) for i in range(horizon)]
    return h.entries[:, cols].T.astype(float)


def decode(
    m: int,
    y_history: np.ndarray,
    schedule: CodeSchedule,
    rate: float,
    eps: float | None = None,
) -> DecodedInterval:
    """Decode user m after n = len(y_history) steps.

    The composition w_1 o ... o w_{n-1} consumes the first n-1 observations.
    The window (-t, t) maps back affinely: its midpoint is the composition
    applied to 0 and its half-width is exactly t * prod(beta_1..beta_{n-1}).
    """
    y = np.asarray(y_history, dtype=float)
    if y.ndim == 2:
        y = y[:, m]
    n = y.shape[0]
    if n < 1:
        raise ValueError("need at least one observation")
    t, eps = rate_window(schedule, n, rate, eps)
    alpha = _modulation_signs(schedule.H, n)[:, m]
    mid = 0.0
    hw = t
    for i in range(n - 2, -1, -1):
        mid = ifs_map(mid, schedule.beta[i], schedule.b[i], alpha[i], y[i])
        hw = schedule.beta[i] * hw
    sigma = float(np.sqrt(schedule.P1))
    log2_width = float(_log2_gauss_interval(mid, hw, sigma))
    return DecodedInterval(
        lo=float(ndtr((mid - hw) / sigma)),
        hi=float(ndtr((mid + hw) / sigma)),
        pre_mid=float(mid),
        pre_halfwidth=float(hw),
        sigma=sigma,
        n=n,
        rate=-log2_width / n,
    )


def _draw_trials(schedule: CodeSchedule, horizon: int, trials: int, seed: int, m: int):
    """Per-trial reproducible message points and noise."""
    noise = np.empty((trials, horizon, m))
    theta = np.empty((trials, m))
    for tr in range(trials):
        src = NoiseSource(seed, tr)
        theta[tr] = src.uniforms(m)
        noise[tr] = src.normals(horizon, m)
    return np.clip(theta, 1e-300, 1.0 - 1e-16), noise


def run_session(
    params: ChannelParams,
    schedule: CodeSchedule,
    horizon: int,
    rate_fraction: float,
    trials: int,
    seed: int,
    retransmit: bool = False,
) -> SessionResult:
    """Monte Carlo estimate of error rate, rate, and power at R = r*log2(1/beta).

    Every trial draws fresh message points and noise (per-trial reproducible
    streams), runs the encoder for `horizon` channel uses, decodes through the
    inverse map composition, and scores theta against the decoded interval;
    the membership test is evaluated as the equivalent event X_n in (-t, t).
    With `retransmit`, trials whose empirical rate falls below R are discarded
    from the error/rate statistics and counted, mirroring the retransmission
    protocol; power is spent either way and is averaged over all trials.
    """
    if not 0.0 < rate_fraction < 1.0:
        raise ValueError("rate fraction must lie in (0, 1)")
    m = params.M
    if trials == 0:
        return SessionResult.empty(m)
    schedule.validate(params, horizon)
    beta_tail = schedule.tail_beta(horizon)
    rate = rate_fraction * float(np.log2(1.0 / beta_tail))
    t, eps = rate_window(schedule, horizon, rate)

    alpha = _modulation_signs(schedule.H, horizon)
    theta, noise = _draw_trials(schedule, horizon, trials, seed, m)

    x1 = encode_init(theta, schedule.P1)
    x = x1.copy()
    y = np.empty((trials, horizon, m))
    power_acc = np.zeros(m)
    mean_sigmas = 0.0
    for i in range(horizon):
        y[:, i, :] = transmit(x * alpha[i], params, noise[:, i, :])
        power_acc += (x * x).mean(axis=0)
        sd = np.maximum(x.std(axis=0), np.finfo(float).tiny)
        mean_sigmas = max(mean_sigmas, float(np.max(np.abs(x.mean(axis=0)) / (sd / np.sqrt(trials)))))
        if i < horizon - 1:
            x = encode_step(x, y[:, i, :], schedule.b[i], schedule.beta[i], alpha[i])

    # pre-image window: midpoint by composition, half-width as exact product
    mid = np.zeros((trials, m))
    recon = x.copy()
    for i in range(horizon - 2, -1, -1):
        w = schedule.b[i] * alpha[i] * y[:, i, :]
        mid = schedule.beta[i] * mid + w
        recon = schedule.beta[i] * recon + w
    halfwidth = t * float(np.prod(schedule.beta[: horizon - 1]))

    ifs_err = float(np.max(np.abs(recon - x1) / np.maximum(1.0, np.abs(x1))))

    errors = np.abs(x) >= t  # theta outside the decoded interval
    log2_delta = _log2_gauss_interval(mid, halfwidth, float(np.sqrt(schedule.P1)))
    rates = -log2_delta / horizon
    outage = rates < rate

    counted = ~outage if retransmit else np.ones_like(outage, dtype=bool)
    n_counted = counted.sum(axis=0)
    err_counted = (errors & counted).sum(axis=0)
    p_e = np.where(n_counted > 0, err_counted / np.maximum(n_counted, 1), 0.0)
    mean_rate = np.where(
        n_counted > 0,
        np.where(counted, rates, 0.0).sum(axis=0) / np.maximum(n_counted, 1),
        0.0,
    )
    return SessionResult(
        trials=trials,
        error_rate=p_e.astype(float),
        rate_bits=mean_rate.astype(float),
        avg_power=power_acc / horizon,
        retransmissions=outage.sum(axis=0) if retransmit else np.zeros(m, dtype=int),
        outages=outage.sum(axis=0),
        diagnostics={
            "target_rate": rate,
            "eps": eps,
            "window": t,
            "halfwidth": halfwidth,
            "ifs_max_rel_err": ifs_err,
            "mean_sigmas": mean_sigmas,
            "errors_total": errors.sum(axis=0),
        },
    )


def simulate_states(
    params: ChannelParams, schedule: CodeSchedule, horizon: int, trials: int, seed: int
) -> np.ndarray:
    """(trials, horizon, M) encoder states X_n; for covariance validation."""
    m = params.M
    alpha = _modulation_signs(schedule.H, horizon)
    theta, noise = _draw_trials(schedule, horizon, trials, seed, m)
    x = encode_init(theta, schedule.P1)
    states = np.empty((trials, horizon, m))
    for i in range(horizon):
        states[:, i, :] = x
        if i < horizon - 1:
            y = transmit(x * alpha[i], params, noise[:, i, :])
            x = encode_step(x, y, schedule.b[i], schedule.beta[i], alpha[i])
    return states
