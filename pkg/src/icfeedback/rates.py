"""Closed-form and solver-based achievable symmetric rates.

The steady-state family is parameterized by a triple (b, beta, lambda)
subject to the power balance

    beta^2 = (1 - b(1-a))^2 + a b lam (2(1-a)b + M a b - 2) + b^2/P,

the eigenvalue closure (1 - C A^{M-1}) lam = B (A^{M-1} + ... + A + 1) with

    A = (1 - b(1-a))^2 / beta^2,
    B = b^2 / (P beta^2),
    C = ((1 - b(1-a))^2 + M a b (2(1-a)b + M a b - 2)) / beta^2,

the range condition 0 < lam < M, and a cyclic monotonicity condition.  Any
admissible triple achieves R_sym = (1/2) log2^+ (1/beta^2) bits per channel
use.  Solvers below cover: no interference (closed form), the two-user
optimizer, the equal-gain fixed point, the general quartic pipeline with the
A-sweep, and the generalized-degrees-of-freedom evaluations.

The quartic in beta concentrates all precision hazards: near its optimum the
two relevant roots coalesce, and the chain quartic -> closure residual loses
up to ~1e37 in scale, so roots are located and filtered in multiprecision
(mpmath) and only then rounded to floats.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import mpmath as mp
import numpy as np
from scipy import optimize

from .errors import (
    DegenerateDenominator,
    DegenerateGain,
    NoAdmissibleRoot,
    RootNotBracketed,
    SingularSystem,
    UndefinedAtOne,
)

# Strictness margin for 0 < lam < M.  Strict inequality with a tiny margin:
# anything wider truncates the strong-interference optimum well before the
# genuine feasibility boundary and breaks the high-SNR rate trend.
LAMBDA_MARGIN = 1e-12

# Residual level at which a solution is flagged feasible.
FEASIBLE_TOL = 1e-9

_MP_DPS = 40


@dataclass
class RateSolution:
    """Admissible steady-state triple with its achievable symmetric rate."""

    b: float
    beta: float
    lambdas: np.ndarray
    r_sym: float
    diagnostics: dict = field(default_factory=dict)

    @property
    def lam(self) -> float:
        return float(self.lambdas[0])


@dataclass(frozen=True)
class QuarticCoefficients:
    """Coefficients of the quartic in beta and the intermediate Y terms."""

    Z0: float
    Z1: float
    Z2: float
    Z3: float
    Z4: float
    Y0: float
    Y1: float
    Y2: float

    def as_poly(self) -> np.ndarray:
        return np.array([self.Z4, self.Z3, self.Z2, self.Z1, self.Z0])


def rsym_from_beta(beta: float) -> float:
    """R_sym = (1/2) log2^+ (1 / beta^2) bits per channel use."""
    if beta <= 0:
        return 0.0
    return 0.5 * max(0.0, float(np.log2(1.0 / (beta * beta))))


def theorem2_coeffs(b: float, beta: float, a: float, P: float, M: int):
    e = (1.0 - b * (1.0 - a)) ** 2
    f = a * b * (2.0 * (1.0 - a) * b + M * a * b - 2.0)
    bsq = beta * beta
    return e / bsq, b * b / (P * bsq), (e + M * f) / bsq


def steady_state_lambda(A: float, B: float, C: float, M: int) -> np.ndarray:
    """Eigenvalue vector of the steady state from its closure relations.

    lam_1 = B (A^M - 1) / ((A - 1)(1 - C A^{M-1})), subsequent entries via
    lam_{k+1} = (lam_k - B)/A, and the wrap lam_M -> C lam_1 + B must close.
    """
    if abs(A - 1.0) < 1e-14:
        raise SingularSystem("A = 1 branch is not defined by the closed form")
    denom = 1.0 - C * A ** (M - 1)
    if abs(denom) < 1e-14 * max(1.0, abs(C) * abs(A) ** (M - 1)):
        raise SingularSystem("1 - C A^{M-1} vanishes")
    lam1 = B * (A**M - 1.0) / ((A - 1.0) * denom)
    lams = np.empty(M)
    lams[0] = lam1
    for k in range(M - 1):
        lams[k + 1] = (lams[k] - B) / A
    # wrap consistency is implied by the closed form; keep it as a sanity check
    closure = abs(lams[-1] - (C * lams[0] + B))
    if closure > 1e-8 * max(1.0, abs(lams[0])):
        raise SingularSystem(f"cyclic closure failed by {closure:.2e}")
    return lams


def verify_theorem2(
    b: float, beta: float, lambdas, a: float, P: float, M: int
) -> dict:
    """Residuals and condition flags for a candidate steady-state triple.

    Residuals are evaluated in multiprecision so they reflect the handed-in
    floats rather than evaluation noise; both are relative.
    """
    lambdas = np.atleast_1d(np.asarray(lambdas, dtype=float))
    lam = float(lambdas[0])
    A, B, C = theorem2_coeffs(b, beta, a, P, M)
    with mp.workdps(_MP_DPS):
        bm, betam, lamm, am, Pm = map(mp.mpf, (b, beta, lam, a, P))
        e = (1 - bm * (1 - am)) ** 2
        f = am * bm * (2 * (1 - am) * bm + M * am * bm - 2)
        Am, Bm, Cm = e / betam**2, bm * bm / (Pm * betam**2), (e + M * f) / betam**2
        r94 = abs(betam**2 - (e + f * lamm + bm * bm / Pm)) / betam**2
        s = mp.fsum(Am**i for i in range(M))
        lhs = (1 - Cm * Am ** (M - 1)) * lamm
        rhs = Bm * s
        r97 = abs(lhs - rhs) / max(abs(lamm), abs(Cm * Am ** (M - 1) * lamm), abs(rhs))
        r94, r97 = float(r94), float(r97)

    # single-user case degenerates to lam = 1 = M
    range_ok = LAMBDA_MARGIN < lam < M - LAMBDA_MARGIN or (
        M == 1 and abs(lam - 1.0) <= 1e-9
    )
    if lambdas.size == M:
        branch_general = False
        if A != 0.0 and abs(A - C) > 1e-12 * max(1.0, abs(A)):
            gaps = lambdas[:-1] - lambdas[1:]
            branch_general = bool(np.all(gaps / (A - C) > 0))
        branch_equal = (
            abs(A - C) <= 1e-9 * max(1.0, abs(A))
            and abs(A - 1.0) > 1e-12
            and bool(np.allclose(lambdas, lam, rtol=0, atol=1e-9))
        )
        monotone_ok = branch_general or branch_equal
    else:
        monotone_ok = False
    feasible = r94 <= FEASIBLE_TOL and r97 <= FEASIBLE_TOL and range_ok and monotone_ok
    return {
        "r94": r94,
        "r97": r97,
        "A": A,
        "B": B,
        "C": C,
        "range_ok": range_ok,
        "monotone_ok": monotone_ok,
        "feasible": feasible,
    }


def _solution(b, beta, lambdas, a, P, M, **extra) -> RateSolution:
    diag = verify_theorem2(b, beta, lambdas, a, P, M)
    diag.update(extra)
    return RateSolution(
        b=float(b),
        beta=float(beta),
        lambdas=np.asarray(lambdas, dtype=float),
        r_sym=rsym_from_beta(float(beta)),
        diagnostics=diag,
    )


def rate_no_interference(P: float, M: int = 1) -> RateSolution:
    """a = 0: b = P/(P+1), beta = 1/sqrt(P+1), R_sym = (1/2) log2(P+1)."""
    if P <= 0:
        raise ValueError("P must be positive")
    b = P / (P + 1.0)
    beta = 1.0 / np.sqrt(P + 1.0)
    sol = _solution(b, beta, np.ones(M), 0.0, P, M)
    sol.r_sym = 0.5 * float(np.log2(P + 1.0))  # closed form, exact
    return sol


def _xi(rho: float, b: float, a: float, P: float) -> float:
    den = P + b * b * (1.0 + P + a * a * P + 2.0 * a * P * rho) - 2.0 * b * P * (
        1.0 + a * rho
    )
    return P / den if den > 0 else -np.inf


def _two_user_best_b(rho: float, a: float, P: float):
    """Both roots of the per-rho quadratic in b; keep the one maximizing xi."""
    qa = 2 * a * P + 2 * P * rho + 2 * a * a * P * rho + rho + 2 * a * P * rho * rho
    qb = -2.0 * (2 * P * rho + a * P + a * P * rho * rho)
    qc = 2 * P * rho
    disc = qb * qb - 4 * qa * qc
    if disc < 0 or qa == 0:
        return None
    best = None
    for b in ((-qb + np.sqrt(disc)) / (2 * qa), (-qb - np.sqrt(disc)) / (2 * qa)):
        v = _xi(rho, b, a, P)
        if v > 0 and (best is None or v > best[0]):
            best = (v, b)
    return best


def _golden_max(fun, lo: float, hi: float, iters: int = 60):
    """Golden-section maximization on [lo, hi]; returns (x, fun(x))."""
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    c = hi - invphi * (hi - lo)
    d = lo + invphi * (hi - lo)
    fc, fd = fun(c), fun(d)
    for _ in range(iters):
        if fc > fd:
            hi, d, fd = d, c, fc
            c = hi - invphi * (hi - lo)
            fc = fun(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + invphi * (hi - lo)
            fd = fun(d)
    return (c, fc) if fc > fd else (d, fd)


def rate_two_user(a: float, P: float, grid: int = 2001) -> RateSolution:
    """Two-user optimizer over the correlation rho and both quadratic roots.

    rho is swept over [0, rho0] where the per-rho quadratic in b keeps real
    roots, then the best cell is refined by golden section.
    """
    if a == 0.0:
        raise DegenerateGain("a = 0 routes to rate_no_interference")
    if a < 0 or P <= 0:
        raise ValueError("need a > 0 and P > 0")
    rho0 = np.sqrt(
        (a * a * P * P + P - np.sqrt(P * (2 * a * a * P * P + P))) / (a * a * P * P)
    )
    rhos = np.linspace(0.0, rho0, grid)
    vals = np.full(grid, -np.inf)
    for i, r in enumerate(rhos):
        best = _two_user_best_b(r, a, P)
        if best is not None:
            vals[i] = best[0]
    i = int(np.argmax(vals))

    def f(rho):
        best = _two_user_best_b(rho, a, P)
        return best[0] if best is not None else -np.inf

    x, fx = _golden_max(f, rhos[max(i - 1, 0)], rhos[min(i + 1, grid - 1)])
    if vals[i] >= fx:
        x, fx = rhos[i], vals[i]
    xi_best = fx
    b = _two_user_best_b(x, a, P)[1]
    beta = 1.0 / np.sqrt(xi_best)
    lambdas = np.array([1.0 + x, 1.0 - x])
    return _solution(b, beta, lambdas, a, P, 2, rho=float(x))


def kramer_two_user(a: float, P: float) -> RateSolution:
    """Kramer's two-user code: rho pinned by its quartic, b and beta closed form."""
    if a <= 0 or P <= 0:
        raise ValueError("need a > 0 and P > 0")

    def poly(r):
        return (
            2 * a**3 * P * P * r**4
            + a * a * P * r**3
            - 4 * a * P * (a * a * P + 1) * r**2
            - (2 * a * a * P + P + 2) * r
            + 2 * a * P * (a * a * P + 1)
        )

    if poly(0.0) * poly(1.0) >= 0:
        raise RootNotBracketed("no sign change for rho on (0, 1)")
    rho = optimize.brentq(poly, 0.0, 1.0, xtol=1e-15, rtol=8.9e-16)
    b = P * (1 + a * rho) / (P * (1 + a * a + 2 * a * rho) + 1)
    beta = np.sqrt((a * a * P * (1 - rho * rho) + 1) / (P * (1 + a * a + 2 * a * rho) + 1))
    lambdas = np.array([1.0 + rho, 1.0 - rho])
    return _solution(b, beta, lambdas, a, P, 2, rho=float(rho),
                     rho_poly_residual=abs(float(poly(rho))))


def _kramer_fixed_point_residuals(lam: float, M: int, P: float):
    """Residuals of the two printed forms of the equal-gain fixed point."""
    u = P * M * lam + 1.0
    w = P * lam * (M - lam) + 1.0
    # compact product form
    g189 = (lam + 1.0 / u) * (w / u) ** M - (lam + u) / (u * u)
    # expanded form (the factored rewrite of the same equation)
    g191 = lam - u * u * ((lam + 1.0 / u) * (w / u) ** M - 1.0 / u)
    return float(g189), float(g191)


def kramer_equal_gain(M: int, P: float) -> RateSolution:
    """Equal-gain (a = 1) fixed point: solve for lam in (0, M) by bisection."""
    if M < 1 or P <= 0:
        raise ValueError("need M >= 1 and P > 0")
    if M == 1:
        lam = 1.0
    else:
        def g(lam):
            return _kramer_fixed_point_residuals(lam, M, P)[0]

        xs = np.linspace(1e-6, M - 1e-9, 4001)
        vals = np.array([g(x) for x in xs])
        flips = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
        if flips.size == 0:
            raise RootNotBracketed("no sign change for lam on (0, M)")
        i = int(flips[-1])
        lam = optimize.brentq(g, xs[i], xs[i + 1], xtol=1e-15, rtol=8.9e-16)
    b = P * lam / (M * P * lam + 1.0)
    beta = np.sqrt((P * lam * (M - lam) + 1.0) / (P * M * lam + 1.0))
    A, B, C = theorem2_coeffs(b, beta, 1.0, P, M)
    lambdas = np.empty(M)
    lambdas[0] = lam
    for k in range(M - 1):
        lambdas[k + 1] = (lambdas[k] - B) / A
    g189, g191 = _kramer_fixed_point_residuals(lam, M, P)
    return _solution(
        b, beta, lambdas, 1.0, P, M,
        fixed_point_residual=abs(g189), expanded_residual=abs(g191),
        A_gt_one=A > 1.0, B_pos=B > 0.0,
        decreasing=bool(np.all(np.diff(lambdas) < 0)) if M > 1 else True,
    )


def quartic_coefficients(A: float, a: float, P: float, M: int) -> QuarticCoefficients:
    """Y and Z coefficients of the quartic in beta.

    Ratios involving A^M are normalized by A^{M-1} and built from expm1 of
    k*log(A), which stays accurate both for A near 1 and for very large A.
    """
    if a in (0.0, 1.0):
        raise ValueError("coefficients require a not in {0, 1}")
    lnA = np.log(A)
    e1 = lambda k: np.expm1(k * lnA)
    d_norm = -sum(A ** (j - M + 1) * e1(M - 1 - j) for j in range(M - 1))
    num0 = A ** (1 - M) * e1(M)  # (A^M - 1)/A^{M-1}
    G = a * ((M - 2) * a + 2.0)
    Y0 = -num0 * e1(1) / d_norm
    Y1 = 2.0 * a * M * e1(1) / d_norm
    Y2 = -num0 / (P * d_norm) - G * M * e1(1) / d_norm
    u = 1.0 / (1.0 - a)
    sA = np.sqrt(A)
    Z4 = Y0 + A * Y2 * u * u + G * A * A * u**4 / P
    Z3 = (
        -4.0 * sA**3 * G * u**4 / P
        + 2.0 * a * sA**3 * u**3 / P
        - 2.0 * Y2 * sA * u * u
        - Y1 * sA * u
    )
    Z2 = 6.0 * A * G * u**4 / P - 6.0 * a * A * u**3 / P + Y2 * u * u + Y1 * u
    Z1 = -4.0 * sA * G * u**4 / P + 6.0 * a * sA * u**3 / P
    Z0 = G * u**4 / P - 2.0 * a * u**3 / P
    return QuarticCoefficients(Z0=Z0, Z1=Z1, Z2=Z2, Z3=Z3, Z4=Z4, Y0=Y0, Y1=Y1, Y2=Y2)


def _mp_quartic_t(A, a, P, M):
    """Scaled quartic in t = beta*sqrt(A), coefficients in multiprecision."""
    A, a, P = mp.mpf(A), mp.mpf(a), mp.mpf(P)
    lnA = mp.log(A)
    e1 = lambda k: mp.expm1(k * lnA)
    d_norm = -mp.fsum(A ** (j - M + 1) * e1(M - 1 - j) for j in range(M - 1))
    num0 = A ** (1 - M) * e1(M)
    G = a * ((M - 2) * a + 2)
    Y0 = -num0 * e1(1) / d_norm
    Y1 = 2 * a * M * e1(1) / d_norm
    Y2 = -num0 / (P * d_norm) - G * M * e1(1) / d_norm
    u = 1 / (1 - a)
    sA = mp.sqrt(A)
    Z4 = Y0 + A * Y2 * u**2 + G * A**2 * u**4 / P
    Z3 = -4 * sA**3 * G * u**4 / P + 2 * a * sA**3 * u**3 / P - 2 * Y2 * sA * u**2 - Y1 * sA * u
    Z2 = 6 * A * G * u**4 / P - 6 * a * A * u**3 / P + Y2 * u**2 + Y1 * u
    Z1 = -4 * sA * G * u**4 / P + 6 * a * sA * u**3 / P
    Z0 = G * u**4 / P - 2 * a * u**3 / P
    return [Z4 / A**2, Z3 / sA**3, Z2 / A, Z1 / sA, Z0], sA


def quartic_solutions(A: float, a: float, P: float, M: int) -> list[tuple]:
    """Admissible (beta, b, lambda-vector) triples at one value of A, sorted by beta.

    Real roots of the quartic are located in multiprecision (the two relevant
    roots coalesce near the optimum, which double precision cannot resolve),
    filtered by the beta-window, the sign choice b = (1 - beta*sqrt(A))/(1-a),
    and 0 < lambda < M, then rounded to floats.
    """
    if A <= 1.0:
        raise ValueError("A must exceed 1")
    if a in (0.0, 1.0):
        raise ValueError("a must not be 0 or 1")
    out = []
    with mp.workdps(_MP_DPS):
        w, sA = _mp_quartic_t(A, a, P, M)
        scale = max(abs(c) for c in w)
        if scale == 0 or not mp.isfinite(scale):
            return []
        wn = [c / scale for c in w]
        try:
            roots = mp.polyroots(wn, maxsteps=200, extraprec=80)
        except mp.libmp.NoConvergence:
            return []
        am, Pm = mp.mpf(a), mp.mpf(P)
        cap = M * am / ((M - 2) * am + 2)
        tlo, thi = (cap, mp.mpf(1)) if a < 1 else (mp.mpf(1), cap)
        for z in roots:
            if abs(mp.im(z)) > mp.mpf("1e-25") * max(1, abs(z)):
                continue
            t = mp.re(z)
            if not (tlo < t < thi):
                continue
            beta = t / sA
            b = (1 - t) / (1 - am)
            f = am * b * (2 * (1 - am) * b + M * am * b - 2)
            if f == 0:
                continue
            lam = (beta**2 * (1 - mp.mpf(A)) - b * b / Pm) / f
            if not (LAMBDA_MARGIN < lam < M - LAMBDA_MARGIN):
                continue
            e = (1 - b * (1 - am)) ** 2
            Am, Bm = e / beta**2, b * b / (Pm * beta**2)
            lams = [lam]
            for _ in range(M - 1):
                lams.append((lams[-1] - Bm) / Am)
            out.append((float(beta), float(b), np.array([float(v) for v in lams])))
    out.sort(key=lambda s: s[0])
    return out


def quartic_beta(A: float, a: float, P: float, M: int) -> list[float]:
    """Admissible beta roots at one A, ascending; raises if none exist."""
    sols = quartic_solutions(A, a, P, M)
    if not sols:
        raise NoAdmissibleRoot(f"no admissible root at A={A}")
    return [s[0] for s in sols]


def _best_beta_at(A: float, a: float, P: float, M: int):
    sols = quartic_solutions(A, a, P, M)
    return sols[0] if sols else None


def theorem3_rate(a: float, P: float, M: int, grid: int = 64) -> RateSolution:
    """Minimize the smallest admissible beta^2 over A > 1.

    The sweep uses a log-spaced grid up to 10 * P^max(alpha, 1), golden-section
    refinement around the best cell, and a bisection of the upper feasibility
    edge (the optimum frequently sits where the two coalescing roots vanish).
    a = 0 and a = 1 route to their dedicated solvers.
    """
    if a == 0.0:
        return rate_no_interference(P, M)
    if a == 1.0:
        return kramer_equal_gain(M, P)
    if abs(a - 1.0) < 1e-6:
        warnings.warn("a within 1e-6 of 1: perturbing away from the singular gain")
        a = 1.0 + float(np.sign(a - 1.0)) * 1e-6
    if P == 1.0:
        alpha = 1.0
    else:
        with np.errstate(divide="ignore"):
            alpha = float(np.log(a * a * P) / np.log(P))
    hi = 10.0 * P ** max(alpha, 1.0)
    lgs = np.linspace(np.log10(1.0 + 1e-4), np.log10(hi), grid)
    betas = np.full(grid, np.inf)
    for i, lg in enumerate(lgs):
        s = _best_beta_at(10**lg, a, P, M)
        if s is not None:
            betas[i] = s[0]
    if not np.isfinite(betas).any():
        raise NoAdmissibleRoot("no admissible root over the whole A grid")
    ib = int(np.argmin(betas))
    best = (betas[ib], 10 ** lgs[ib])

    def neg_beta(lg):
        s = _best_beta_at(10**lg, a, P, M)
        return -s[0] if s is not None else -np.inf

    x, fx = _golden_max(neg_beta, lgs[max(ib - 1, 0)], lgs[min(ib + 1, grid - 1)], iters=40)
    if np.isfinite(fx) and -fx < best[0]:
        best = (-fx, 10**x)

    feas_idx = np.nonzero(np.isfinite(betas))[0]
    iend = int(feas_idx[-1])
    if iend + 1 < grid:
        lo, hi2 = lgs[iend], lgs[iend + 1]
        for _ in range(50):
            mid = 0.5 * (lo + hi2)
            s = _best_beta_at(10**mid, a, P, M)
            if s is not None:
                lo = mid
                if s[0] < best[0]:
                    best = (s[0], 10**mid)
            else:
                hi2 = mid

    beta, A_opt = best
    sol = _best_beta_at(A_opt, a, P, M)
    return _solution(sol[1], sol[0], sol[2], a, P, M, A_opt=float(A_opt))


def gdof_closed_form(alpha: float) -> float:
    """d(alpha) = alpha/2 above 1 and 1 - alpha/2 below; undefined at 1."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    if alpha == 1.0:
        raise UndefinedAtOne("generalized degrees of freedom undefined at alpha = 1")
    return alpha / 2.0 if alpha > 1.0 else 1.0 - alpha / 2.0


def gdof_numeric(alpha: float, M: int, snr_ladder) -> list[tuple[float, float]]:
    """Normalized rate d_hat(P) = R_sym / ((1/2) log2 P) along an SNR ladder."""
    if alpha == 1.0:
        raise UndefinedAtOne("generalized degrees of freedom undefined at alpha = 1")
    out = []
    for P in snr_ladder:
        if P <= 1.0:
            raise ValueError("ladder entries must exceed 1")
        a = P ** ((alpha - 1.0) / 2.0)
        sol = theorem3_rate(a, P, M)
        out.append((float(P), sol.r_sym / (0.5 * float(np.log2(P)))))
    return out


def gdof_params(alpha: float, P: float, M: int):
    """Asymptotic parameter choices behind the two GDoF regimes.

    alpha > 1: v = alpha/2, gamma = M/(M-1), beta = P^{-alpha/4} gamma;
    alpha < 1: v = alpha/2, gamma = M, beta = P^{alpha/4 - 1/2} gamma.
    Returns (v, gamma, A, beta, b).
    """
    if alpha == 1.0:
        raise UndefinedAtOne("parameterization undefined at alpha = 1")
    a = P ** ((alpha - 1.0) / 2.0)
    v = alpha / 2.0
    A = P**v
    if alpha > 1.0:
        gamma = M / (M - 1.0)
        beta = P ** (-alpha / 4.0) * gamma
    else:
        gamma = float(M)
        beta = P ** (alpha / 4.0 - 0.5) * gamma
    b = (1.0 - beta * np.sqrt(A)) / (1.0 - a)
    return v, gamma, A, beta, b


def minimize_g_lambda(lam: float, a: float, P: float, M: int):
    """Unconstrained minimizer of g_lam(b) and its minimum value.

    b* = (a lam + (1-a)) / ((1-a)^2 + 1/P + (2a(1-a) + M a^2) lam); no
    feasibility claim is attached to the result.
    """
    den = (1.0 - a) ** 2 + 1.0 / P + (2.0 * a * (1.0 - a) + M * a * a) * lam
    if abs(den) < 1e-300:
        raise DegenerateDenominator("minimizer denominator vanishes")
    b_star = (a * lam + (1.0 - a)) / den
    g = (
        (1.0 - b_star * (1.0 - a)) ** 2
        + a * b_star * lam * (2.0 * (1.0 - a) * b_star + M * a * b_star - 2.0)
        + b_star * b_star / P
    )
    return float(b_star), float(g)
