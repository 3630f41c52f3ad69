"""Analytic evolution of the normalized input covariance.

With Hadamard-modulated transmissions the normalized covariance R_n of the M
encoder states keeps every Hadamard column as an eigenvector.  Tracking the
eigenvalue vector in the rotating labelling (entry k attached to Hadamard
column ((n+k-2) mod M) + 1) reduces one step of the matrix recursion

    P' R' = (P/beta^2) * (E R + (b^2/P) I + F lam1 alpha alpha^T)

to the O(M) two-branch update implemented by `recurse`, where

    E = (1 - b(1-a))^2,   F = a b (2(1-a)b + M a b - 2),

and lam1 is the eigenvalue attached to the current modulation column.  The
full-matrix form is kept (`recurse_matrix`) for cross-validation only.

`transient_schedule` builds the first M-1 per-step parameters that steer the
state from the identity covariance into a prescribed steady state exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .channel import ChannelParams
from .errors import InfeasibleTransient, ZeroContraction
from .hadamard import HadamardMatrix, modulation_vector


@dataclass(frozen=True)
class CovarianceState:
    """Common per-user power and covariance eigenvalues in rotation order."""

    P: float
    lambdas: np.ndarray

    def __post_init__(self):
        lam = np.asarray(self.lambdas, dtype=float)
        object.__setattr__(self, "lambdas", lam)
        if self.P <= 0:
            raise ValueError("power must be positive")
        if lam.ndim != 1:
            raise ValueError("lambdas must be a vector")
        # the state mirrors a covariance, so its spectrum stays nonnegative
        if lam.min() < -1e-12 * max(1.0, float(np.abs(lam).max())):
            raise ValueError("eigenvalues must be nonnegative")

    @property
    def M(self) -> int:
        return self.lambdas.size

    def trace_error(self) -> float:
        return abs(float(self.lambdas.sum()) - self.M)


def identity_state(M: int, P1: float) -> CovarianceState:
    """State at step 1: independent inputs, R_1 = I."""
    return CovarianceState(P=P1, lambdas=np.ones(M))


def _ef(b: float, a: float, M: int) -> tuple[float, float]:
    e = (1.0 - b * (1.0 - a)) ** 2
    f = a * b * (2.0 * (1.0 - a) * b + M * a * b - 2.0)
    return e, f


def recurse(
    state: CovarianceState, b_n: float, beta_n: float, params: ChannelParams
) -> CovarianceState:
    """One step of the power/eigenvalue recursion in the rotating labelling."""
    if beta_n == 0.0:
        raise ZeroContraction("beta_n must be nonzero")
    M = params.M
    if state.M != M:
        raise ValueError("state dimension does not match params.M")
    e, f = _ef(b_n, params.a, M)
    lam = state.lambdas
    lam1 = float(lam[0])
    p = state.P
    x = b_n * b_n / p
    p_next = (p / beta_n**2) * (x + e + f * lam1)
    scale = p / (p_next * beta_n**2)
    new = np.empty(M)
    new[: M - 1] = scale * (e * lam[1:] + x)
    new[M - 1] = scale * (e * lam1 + x + M * f * lam1)
    return CovarianceState(P=p_next, lambdas=new)


def recurse_matrix(
    r: np.ndarray,
    p_n: float,
    step: int,
    b_n: float,
    beta_n: float,
    params: ChannelParams,
    h: HadamardMatrix,
) -> tuple[float, np.ndarray]:
    """Full-matrix covariance step; `step` selects the modulation column."""
    if beta_n == 0.0:
        raise ZeroContraction("beta_n must be nonzero")
    M = params.M
    alpha = modulation_vector(h, step).values.astype(float)
    e, f = _ef(b_n, params.a, M)
    lam1 = float(alpha @ r @ alpha) / M
    x = b_n * b_n / p_n
    p_next = (p_n / beta_n**2) * (x + e + f * lam1)
    r_next = (p_n / beta_n**2) * (
        e * r + x * np.eye(M) + f * lam1 * np.outer(alpha, alpha)
    )
    return p_next, r_next / p_next


def eigencheck(
    r: np.ndarray, h: HadamardMatrix, step: int = 1
) -> tuple[float, np.ndarray]:
    """Residual of the Hadamard-eigenvector property and Rayleigh eigenvalues.

    Eigenvalues are reported in rotation order for the given step: entry k is
    the Rayleigh quotient of Hadamard column ((step+k-2) mod M) + 1.
    """
    M = h.order
    r = np.asarray(r, dtype=float)
    residual = 0.0
    lams = np.empty(M)
    for k in range(M):
        col = h.column((step - 1 + k) % M).astype(float)
        lam = float(col @ r @ col) / M
        lams[k] = lam
        residual = max(residual, float(np.max(np.abs(r @ col - lam * col))))
    return residual, lams


@dataclass(frozen=True)
class TransientSchedule:
    """Per-step (b_k, beta_k, P_k) for k = 1..M-1 plus the steady triple.

    Applying the covariance recursion with the per-step parameters from the
    identity state reaches (P, steady lambdas) at step M; afterwards the
    constant steady-state triple keeps it there.
    """

    b: np.ndarray
    beta: np.ndarray
    P: np.ndarray
    steady_b: float
    steady_beta: float
    steady_P: float
    B: np.ndarray = field(default=None)

    def __len__(self) -> int:
        return self.b.size


def _eigen_path(xs, e, f, M, clamp=False):
    """Forward eigenvalue path from the identity state given x_k = b^2/P_k.

    With clamp=True a nonpositive normalizer is floored at a tiny positive
    value so root-finders see a continuous (if meaningless) extension instead
    of a cliff; the converged solution is re-checked without clamping.
    """
    lam = np.ones(M)
    path = [lam]
    for x in xs:
        d = x + e + f * lam[0]
        if d <= 0:
            if not clamp:
                return None, None
            d = 1e-12 * (abs(x) + abs(e) + 1.0)
        new = np.empty(M)
        new[: M - 1] = (e * lam[1:] + x) / d
        new[M - 1] = ((e + M * f) * lam[0] + x) / d
        lam = new
        path.append(lam)
    return lam, path


def _forced_path_warm_start(A, C, beta, e, f, M, x_ss):
    """x_k from the fixed-multiplier (A_k = A, C_k = C) approximate path.

    Along that path the power-consistency constraint pins
    B_k = 1 - A - lam_k^(1) (C - A) / M and x_k = B_k * beta^2; the landing is
    only approximate, which is exactly why the exact solve follows.
    """
    lam = np.ones(M)
    xs = np.empty(M - 1)
    floor = 1e-8 * x_ss
    for k in range(M - 1):
        b_k = 1.0 - A - lam[0] * (C - A) / M
        xs[k] = max(b_k * beta * beta, floor)
        new = np.empty(M)
        new[: M - 1] = A * lam[1:] + b_k
        new[M - 1] = C * lam[0] + b_k
        lam = new
    return xs


def _solve_transient_powers(lambdas, e, f, M, x_ss, A, C, beta):
    """Solve the (M-1)-dimensional landing system for x_k = b^2 / P_k.

    Levenberg-Marquardt on log-x.  The dominant warm start is a geometric
    power ramp P_k ~ P * beta^{2(M-1-k)} (the transient builds the power up
    by roughly 1/beta^2 per step), followed by the fixed-multiplier ansatz
    and jittered restarts.
    """

    def landing(u):
        lam_end, _ = _eigen_path(np.exp(u), e, f, M, clamp=True)
        return (lam_end - lambdas)[: M - 1]

    def try_start(u0):
        res = optimize.least_squares(
            landing, u0, method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15
        )
        lam_end, _ = _eigen_path(np.exp(res.x), e, f, M)
        if lam_end is not None and np.max(np.abs(lam_end - lambdas)) <= 1e-10:
            return res.x
        return None

    ramp = 2.0 * np.log(1.0 / beta) * np.arange(M - 2, -1, -1)
    geometric = np.log(x_ss) + ramp
    starts = [
        geometric,
        np.log(x_ss) + 0.5 * ramp,
        np.log(x_ss) - ramp[::-1],
        np.log(_forced_path_warm_start(A, C, beta, e, f, M, x_ss)),
        np.full(M - 1, np.log(x_ss)),
    ]
    for u0 in starts:
        u = try_start(u0)
        if u is not None:
            return np.exp(u)
    rng = np.random.default_rng(12345)
    for scale in (0.5, 1.0, 2.0, 3.0):
        for _ in range(10):
            u = try_start(geometric + rng.normal(scale=scale, size=M - 1))
            if u is not None:
                return np.exp(u)
    return None


def transient_schedule(
    target, A: float, C: float, params: ChannelParams, tol: float = 1e-11
) -> TransientSchedule:
    """Steer the covariance from identity to the given steady state in M-1 steps.

    `target` is the steady-state tuple (b, beta, lambdas, P).  Feasibility
    preconditions: either A = C != 1 with all target eigenvalues equal
    (constant schedule), or A != 0, A != C with (lam_k - lam_{k+1})/(A - C)
    positive for every k < M.  With b_k = b fixed, the eigenvalue path depends
    only on the per-step powers P_k; those are solved so the forward recursion
    lands exactly on the target, then beta_k follows from the power recursion
    with the endpoint P_M = P.
    """
    b, beta, lambdas, p_target = target
    lambdas = np.asarray(lambdas, dtype=float)
    M = params.M
    if lambdas.size != M:
        raise ValueError("target eigenvalue vector must have length M")
    if M == 1:
        return TransientSchedule(
            b=np.empty(0), beta=np.empty(0), P=np.empty(0),
            steady_b=b, steady_beta=beta, steady_P=p_target, B=np.empty(0),
        )
    e, f = _ef(b, params.a, M)

    same = np.allclose(lambdas, lambdas[0], rtol=0, atol=1e-9)
    if abs(A - C) <= 1e-12 * max(1.0, abs(A)):
        if not (same and abs(A - 1.0) > 1e-12):
            raise InfeasibleTransient(
                "A = C branch requires A != 1 and equal target eigenvalues"
            )
        k = M - 1
        sched = TransientSchedule(
            b=np.full(k, b), beta=np.full(k, beta), P=np.full(k, p_target),
            steady_b=b, steady_beta=beta, steady_P=p_target,
            B=np.full(k, b * b / (p_target * beta**2)),
        )
        _verify_forward(sched, lambdas, p_target, params, tol)
        return sched

    if A == 0.0:
        raise InfeasibleTransient("A = 0 is not supported")
    gaps = (lambdas[:-1] - lambdas[1:]) / (A - C)
    if np.any(gaps <= 0):
        raise InfeasibleTransient(
            "monotonicity condition (lam_k - lam_{k+1})/(A - C) > 0 fails"
        )

    if M == 2:
        # one step: lam_2 = (A_1 + B_1, C_1 + B_1) with C_1/A_1 = C/A pinned
        # by b; A_1 and B_1 then solve the two landing equations exactly.
        a1 = A * (lambdas[0] - lambdas[1]) / (A - C)
        b1 = lambdas[0] - a1
        if a1 <= 0 or b1 <= 0:
            raise InfeasibleTransient("landing coefficients not positive")
        d1 = e / a1
        xs = np.array([b1 * d1])
    else:
        x_ss = b * b / p_target
        xs = _solve_transient_powers(lambdas, e, f, M, x_ss, A, C, beta)
        if xs is None:
            raise InfeasibleTransient("transient shooting did not converge")

    lam_end, path = _eigen_path(xs, e, f, M)
    powers = b * b / xs
    betas = np.empty(M - 1)
    bcoef = np.empty(M - 1)
    for k in range(M - 1):
        d_k = xs[k] + e + f * path[k][0]
        p_next = p_target if k == M - 2 else powers[k + 1]
        beta_sq = powers[k] * d_k / p_next
        if beta_sq <= 0:
            raise InfeasibleTransient("negative squared contraction in transient")
        betas[k] = np.sqrt(beta_sq)
        bcoef[k] = xs[k] / d_k
    if np.any(bcoef <= 0):
        raise InfeasibleTransient("nonpositive B_k coefficient")
    sched = TransientSchedule(
        b=np.full(M - 1, b), beta=betas, P=powers,
        steady_b=b, steady_beta=beta, steady_P=p_target, B=bcoef,
    )
    _verify_forward(sched, lambdas, p_target, params, tol)
    return sched


def _verify_forward(sched, lambdas, p_target, params, tol):
    state = identity_state(params.M, sched.P[0] if len(sched) else p_target)
    for k in range(len(sched)):
        state = recurse(state, sched.b[k], sched.beta[k], params)
    if abs(state.P - p_target) > tol * max(1.0, p_target) or np.max(
        np.abs(state.lambdas - lambdas)
    ) > tol:
        raise InfeasibleTransient(
            f"forward verification failed: P error {abs(state.P - p_target):.2e}, "
            f"lambda error {np.max(np.abs(state.lambdas - lambdas)):.2e}"
        )
