"""Solver for the weakly degenerate radial Cauchy problem.

The problem |t|_p^g (D^a u)(|t|_p) = f(|t|_p, u(|t|_p)), u(0) = u0, with
0 <= g < min(1, a), is solved through its integral form

    u = u0 + I^a [ |.|^(-g) f(., u(.)) ],

in three stages:

1. *Local solve* (:func:`picard_solve`).  On levels k <= N, with N chosen
   so that the contraction factor q_N = C F p^(N (a - g)) is at most 1/2,
   the integral map is iterated from the constant u0.  Successive
   differences obey the a-priori bound C^(k+1) M F^k p^(N (k+1)(a - g)),
   which is checked on every sweep and doubles as a stopping rule.

2. *Continuation* (:func:`extend_step`).  Each level above N satisfies a
   scalar fixed-point equation x = u0 + v0 + p^(a l) ftilde(p^(l+1), x),
   where v0 (:func:`extension_constant`) integrates the already-known
   part.  The step is accepted only when its contraction factor
   kappa_l = p^(a l) Lip(ftilde(p^(l+1), .)) is below 1, and the measured
   step ratios are checked against kappa_l.

3. *Residual verification* (:func:`residual`).  The differential form is
   checked directly: p^(g n) (D^a u)(p^n) - f(p^n, u(p^n)), with an
   attached uncertainty that accounts for the unknown part of u beyond
   the computed window and for floating-point cancellation.

Truncation policy: the integrals extend to level -infinity, but the
iteration only stores a window [K_min, N].  K_min is lowered until the
certified bound on every neglected sub-window contribution (from
|ftilde| <= M p^(-g k) and the kernel's geometric decay) is below
tol / 10 in total; the accumulated bound is reported as
``truncation_budget`` rather than silently dropped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

from .errors import (
    BudgetError,
    ContractionError,
    DegenerationError,
    DivergenceError,
    DomainError,
    IndeterminateResidualError,
    InfeasibleRadiusError,
    MetadataError,
    NonConvergenceError,
)
from .haar import Prime, p_pow
from .radial import RadialFunction, TailModel
from .fracint import _interior_prefactor, bound_constants
from .vladimirov import DalphaCoefficients, _centered_left, _centered_right


@dataclass(frozen=True)
class Nonlinearity:
    """Right-hand side f with its certified metadata.

    eval(k, x) returns f(p^k, x).  The metadata is declared by the caller
    and trusted; ``spot_check`` samples roughly a thousand grid points and
    rejects declarations that the samples violate by more than 1e-9.

    bound_M     : global bound |f| <= M (must be positive).
    lipschitz_F : global Lipschitz constant in the state variable.
    per_level_F : optional k -> F_k with |f(p^k, x) - f(p^k, y)| <= F_k |x - y|.
    decay       : optional (A, beta) with |f(p^l, x)| <= A p^(-beta l) for l >= 1.
    """

    eval: Callable[[int, float], float]
    bound_M: float
    lipschitz_F: float
    per_level_F: Optional[Callable[[int], float]] = None
    decay: Optional[tuple] = None
    name: str = "custom"

    def __post_init__(self):
        if not self.bound_M > 0:
            raise DomainError(f"bound_M must be positive, got {self.bound_M}")
        if self.lipschitz_F < 0:
            raise DomainError(f"lipschitz_F must be >= 0, got {self.lipschitz_F}")
        if self.decay is not None:
            a, beta = self.decay
            if not a > 0:
                raise DomainError(f"decay amplitude must be positive, got {a}")
            object.__setattr__(self, "decay", (float(a), float(beta)))

    def level_lipschitz(self, k: int) -> float:
        return self.per_level_F(k) if self.per_level_F is not None else self.lipschitz_F

    def spot_check(self, p: int, tol: float = 1e-9, levels=range(-12, 13),
                   xs=None) -> None:
        """Sample eval on a grid and reject blatantly violated metadata."""
        p = Prime(p)
        if xs is None:
            xs = [-8.0 + 16.0 * i / 40.0 for i in range(41)]
        slack = tol * max(1.0, self.bound_M)
        for k in levels:
            f_prev = None
            fk = self.level_lipschitz(k)
            for x in xs:
                val = self.eval(k, x)
                if not math.isfinite(val):
                    raise MetadataError(f"f(p^{k}, {x}) is not finite")
                if abs(val) > self.bound_M + slack:
                    raise MetadataError(
                        f"declared bound_M = {self.bound_M} violated: "
                        f"|f(p^{k}, {x})| = {abs(val)}"
                    )
                if f_prev is not None:
                    dx = xs[1] - xs[0]
                    if abs(val - f_prev) > (min(self.lipschitz_F, fk) + tol) * dx + tol:
                        raise MetadataError(
                            f"declared Lipschitz bound violated near (p^{k}, {x}): "
                            f"|df| = {abs(val - f_prev)} over dx = {dx}"
                        )
                f_prev = val
            if self.decay is not None and k >= 1:
                a, beta = self.decay
                envelope = a * p_pow(p, -beta * k) + slack
                for x in xs[::8]:
                    if abs(self.eval(k, x)) > envelope:
                        raise MetadataError(
                            f"declared decay (A={a}, beta={beta}) violated at level {k}"
                        )


@dataclass(frozen=True)
class ProblemSpec:
    """The full Cauchy problem (p, alpha, gamma, u0, f)."""

    p: int
    alpha: float
    gamma: float
    u0: float
    rhs: Nonlinearity

    def __post_init__(self):
        object.__setattr__(self, "p", Prime(self.p))
        if self.alpha <= 0:
            raise DomainError(f"alpha must be positive, got {self.alpha}")
        if self.gamma < 0 or self.gamma >= min(1.0, self.alpha):
            raise DegenerationError(
                "weak degeneration requires 0 <= gamma < min(1, alpha) = "
                f"{min(1.0, self.alpha)}, got gamma = {self.gamma}"
            )
        if not math.isfinite(self.u0):
            raise DomainError("u0 must be finite")
        self.rhs.spot_check(self.p)


@dataclass(frozen=True)
class ScaledRhs:
    """ftilde(p^k, x) = p^(-gamma k) f(p^k, x) with its derived bounds."""

    p: int
    gamma: float
    rhs: Nonlinearity

    def __call__(self, k: int, x: float) -> float:
        return p_pow(self.p, -self.gamma * k) * self.rhs.eval(k, x)

    def bound_at(self, k: int) -> float:
        return self.rhs.bound_M * p_pow(self.p, -self.gamma * k)

    def lipschitz_at(self, k: int) -> float:
        return self.rhs.level_lipschitz(k) * p_pow(self.p, -self.gamma * k)


def make_ftilde(problem: ProblemSpec) -> ScaledRhs:
    """The degeneration-absorbed right-hand side |t|^(-gamma) f."""
    return ScaledRhs(p=problem.p, gamma=problem.gamma, rhs=problem.rhs)


@dataclass(frozen=True)
class ExtensionDiagnostic:
    v0: float
    kappa: float
    iterations: int


@dataclass(frozen=True)
class SolveReport:
    """Solution plus the per-stage diagnostics of a solve."""

    solution: RadialFunction
    local_radius_N: int
    picard_iterations: int
    picard_diffs: tuple
    apriori_bounds: tuple
    extension_diagnostics: dict = field(default_factory=dict)
    truncation_budget: float = 0.0
    k_min: int = 0
    q_contraction: float = 0.0
    c_uniform: float = 0.0
    apriori_enforced: bool = True

    def to_dict(self) -> dict:
        u = self.solution
        return {
            "p": int(u.p),
            "local_radius_N": self.local_radius_N,
            "k_min": self.k_min,
            "k_max": u.k_max,
            "picard_iterations": self.picard_iterations,
            "picard_diffs": list(self.picard_diffs),
            "apriori_bounds": list(self.apriori_bounds),
            "q_contraction": self.q_contraction,
            "c_uniform": self.c_uniform,
            "truncation_budget": self.truncation_budget,
            "apriori_enforced": self.apriori_enforced,
            "extension_diagnostics": {
                str(level): {"v0": d.v0, "kappa": d.kappa, "iterations": d.iterations}
                for level, d in sorted(self.extension_diagnostics.items())
            },
            "solution": {
                "value_at_zero": u.value_at_zero,
                "left_tail": u.left_tail.to_token(),
                "right_tail": u.right_tail.to_token(),
                "levels": {str(u.k_min + i): v for i, v in enumerate(u.values)},
            },
        }


def _radius_from_constants(c_uniform: float, lipschitz: float, p: int,
                           alpha_minus_gamma: float,
                           n_floor: int = -60, n_cap: int = 8) -> int:
    """Largest N with c_uniform * lipschitz * p^(N (alpha - gamma)) <= 1/2."""
    if lipschitz == 0.0:
        return n_cap
    def q(n):
        return c_uniform * lipschitz * p_pow(p, n * alpha_minus_gamma)
    t = math.log(0.5 / (c_uniform * lipschitz)) / (alpha_minus_gamma * math.log(p))
    n = math.floor(t + 1e-9)
    while q(n) > 0.5 * (1.0 + 1e-12):
        n -= 1
    n = min(n, n_cap)
    if n < n_floor:
        raise InfeasibleRadiusError(
            f"no level N in [{n_floor}, {n_cap}] satisfies "
            f"c_uniform * F * p^(N (alpha - gamma)) <= 1/2 "
            f"(c_uniform = {c_uniform}, F = {lipschitz})"
        )
    return n


def choose_local_radius(problem: ProblemSpec, n_floor: int = -60, n_cap: int = 8) -> int:
    """Local ball exponent N with contraction factor q_N <= 1/2."""
    c = bound_constants(problem.p, problem.alpha, problem.gamma).c_uniform
    return _radius_from_constants(c, problem.rhs.lipschitz_F, problem.p,
                                  problem.alpha - problem.gamma, n_floor, n_cap)


def _interior_truncation_bound(problem: ProblemSpec, k_cut: int, n: int) -> float:
    """Certified bound on the neglected sub-window part of (I^a ftilde)(p^n).

    Bounds the integral over levels k <= k_cut - 1 using
    |ftilde(p^k, .)| <= M p^(-gamma k) and the triangle inequality on the
    kernel; every piece is a convergent geometric series because
    gamma < min(1, alpha).
    """
    p, alpha, gamma = problem.p, problem.alpha, problem.gamma
    m = problem.rhs.bound_M
    j = k_cut - 1
    frac = 1.0 - 1.0 / p
    x1 = p_pow(p, 1.0 - gamma)
    g1 = p_pow(x1, j) * x1 / (x1 - 1.0)  # sum_{k<=j} p^((1-gamma) k)
    if alpha == 1.0:
        r = x1 / (x1 - 1.0)
        gk = p_pow(x1, j) * (j * r - r / (x1 - 1.0))  # sum k p^((1-gamma) k)
        return ((p - 1.0) ** 2 / (p * p)) * m * (n * g1 - gk)
    xa = p_pow(p, alpha - gamma)
    ga = p_pow(xa, j) * xa / (xa - 1.0)
    pref = abs(_interior_prefactor(p, alpha))
    return pref * frac * m * (p_pow(p, (alpha - 1.0) * n) * g1 + ga)


def _choose_window_floor(problem: ProblemSpec, n_top: int, tol: float) -> tuple:
    """Lower window edge K_min with total certified truncation <= tol / 10."""
    k_min = min(n_top, 0) - 8
    while True:
        budget = sum(_interior_truncation_bound(problem, k_min, n)
                     for n in range(k_min, n_top + 1))
        if budget <= tol / 10.0:
            return k_min, budget
        if k_min <= n_top - 400:
            raise BudgetError(
                f"cannot certify the sub-window truncation below tol/10 = {tol / 10.0} "
                f"within 400 levels (reached K_min = {k_min}, bound {budget})"
            )
        k_min -= 4


def _ialpha_window(problem: ProblemSpec, phi: list, k_min: int, n_top: int) -> list:
    """(I^a phi)(p^n) for every window level, interior sums truncated at k_min.

    phi[i] is the integrand at level k_min + i.  Running prefix sums keep
    the whole sweep O(window) with a fixed ascending summation order.
    """
    p, alpha = problem.p, problem.alpha
    frac = 1.0 - 1.0 / p
    out = []
    s1 = 0.0
    if alpha == 1.0:
        sk = 0.0
        coef = (p - 1.0) ** 2 / (p * p)
        for i, n in enumerate(range(k_min, n_top + 1)):
            val = p_pow(p, n - 1.0) * phi[i] - coef * (n * s1 - sk)
            out.append(val)
            w = p_pow(p, n)
            s1 += w * phi[i]
            sk += n * w * phi[i]
        return out
    pref = _interior_prefactor(p, alpha)
    sa = 0.0
    for i, n in enumerate(range(k_min, n_top + 1)):
        val = p_pow(p, alpha * (n - 1.0)) * phi[i] \
            + pref * frac * (p_pow(p, (alpha - 1.0) * n) * s1 - sa)
        out.append(val)
        s1 += p_pow(p, n) * phi[i]
        sa += p_pow(p, alpha * n) * phi[i]
    return out


def picard_solve(problem: ProblemSpec, N: int, tol: float = 1e-10,
                 max_iter: int = 100, start_value: Optional[float] = None,
                 reserve_top: Optional[int] = None) -> SolveReport:
    """Iterate u_k = u0 + I^a ftilde(., u_{k-1}) on levels K_min..N.

    Stops when the sup-level difference falls below tol or the a-priori
    bound for the next difference does; with q_N <= 1/2 either way leaves
    a remaining error of at most the last difference.  ``start_value``
    replaces the constant initial iterate (default u0); the a-priori
    difference bounds are only enforced for the canonical start.

    ``reserve_top`` sizes the truncation budget for a later continuation
    up to that level: the kernel factor p^((l+1)(alpha-1)) grows with the
    level for alpha > 1, so the window floor must be chosen for the
    highest level that will ever integrate over it.
    """
    p, alpha, gamma, u0 = problem.p, problem.alpha, problem.gamma, problem.u0
    m_bound = problem.rhs.bound_M
    f_lip = problem.rhs.lipschitz_F
    c_uni = bound_constants(p, alpha, gamma).c_uniform
    q = c_uni * f_lip * p_pow(p, N * (alpha - gamma))
    if q >= 1.0:
        raise DomainError(
            f"local contraction factor q_N = {q} >= 1 at N = {N}; "
            "choose a more negative local radius"
        )
    k_min, budget = _choose_window_floor(problem, max(N, reserve_top or N), tol)
    ft = make_ftilde(problem)
    enforce = start_value is None
    start = u0 if start_value is None else float(start_value)
    levels = list(range(k_min, N + 1))
    cur = [start] * len(levels)

    def apriori(j: int) -> float:
        # bound for |u_{j+1} - u_j|, valid on the whole ball |t| <= p^N
        return (c_uni ** (j + 1)) * m_bound * (f_lip ** j) \
            * p_pow(p, N * (j + 1) * (alpha - gamma))

    diffs = []
    for it in range(max_iter):
        phi = [ft(k, cur[i]) for i, k in enumerate(levels)]
        integ = _ialpha_window(problem, phi, k_min, N)
        new = [u0 + v for v in integ]
        diff = max(abs(a - b) for a, b in zip(new, cur))
        diffs.append(diff)
        cur = new
        if enforce and diff > apriori(it) + 1e-12:
            raise MetadataError(
                f"iterate difference {diff} exceeds the a-priori bound "
                f"{apriori(it)} at step {it}; declared (M, F) metadata is "
                "inconsistent with the right-hand side"
            )
        if diff <= tol or apriori(it + 1) <= tol:
            break
    else:
        raise NonConvergenceError(
            f"iteration did not reach tol = {tol} in {max_iter} steps "
            f"(last difference {diffs[-1]})", diffs=diffs)

    solution = RadialFunction(
        p, k_min, N, tuple(cur),
        left_tail=TailModel.constant(u0), right_tail=TailModel.zero(),
        value_at_zero=u0,
    )
    bounds = tuple(apriori(j) for j in range(len(diffs)))
    return SolveReport(
        solution=solution, local_radius_N=N, picard_iterations=len(diffs),
        picard_diffs=tuple(diffs), apriori_bounds=bounds,
        extension_diagnostics={}, truncation_budget=budget / (1.0 - q),
        k_min=k_min, q_contraction=q, c_uniform=c_uni, apriori_enforced=enforce,
    )


def _extension_constant(u: RadialFunction, problem: ProblemSpec, ell: int) -> tuple:
    """Known-part constant v0 for the level-(ell+1) equation, plus the
    certified bound on its neglected sub-window remainder."""
    p, alpha = problem.p, problem.alpha
    ft = make_ftilde(problem)
    frac = 1.0 - 1.0 / p
    phi = [ft(k, u.value_at(k)) for k in range(u.k_min, ell + 1)]
    if alpha == 1.0:
        total = sum((ell + 1 - k) * p_pow(p, k) * phi[k - u.k_min]
                    for k in range(u.k_min, ell + 1))
        v0 = -((p - 1.0) ** 2 / (p * p)) * total
    else:
        pref = _interior_prefactor(p, alpha)
        top = p_pow(p, (ell + 1.0) * (alpha - 1.0))
        total = sum(p_pow(p, k) * (top - p_pow(p, k * (alpha - 1.0))) * phi[k - u.k_min]
                    for k in range(u.k_min, ell + 1))
        v0 = pref * frac * total
    rem = _interior_truncation_bound(problem, u.k_min, ell + 1)
    return v0, rem


def extension_constant(u: RadialFunction, problem: ProblemSpec, ell: int,
                       budget: float = 1e-11) -> float:
    """v0 for extending the solution from level ell to ell + 1.

    Integrates the kernel against ftilde(., u(.)) over levels <= ell;
    the part below u's window is not computed but bounded, and a bound
    above ``budget`` is an error advising a lower window edge.
    """
    if ell < u.k_min:
        raise DomainError(f"extension level {ell} is below the window floor {u.k_min}")
    v0, rem = _extension_constant(u, problem, ell)
    if rem > budget:
        raise BudgetError(
            f"neglected sub-window remainder bound {rem} exceeds the budget "
            f"{budget}; rebuild the solution with a lower K_min"
        )
    return v0


def extend_step(u: RadialFunction, problem: ProblemSpec, ell: int,
                tol: float = 1e-12, max_iter: int = 1000,
                v0: Optional[float] = None) -> tuple:
    """Solve the scalar fixed-point equation for u(p^(ell+1)).

    Returns (value, kappa, iterations).  Requires the contraction factor
    kappa = p^(a ell) * Lip(ftilde(p^(ell+1), .)) to be below 1; measured
    step ratios above kappa + 1e-12 indicate wrong declared metadata.
    """
    p, alpha, u0 = problem.p, problem.alpha, problem.u0
    ft = make_ftilde(problem)
    kappa = p_pow(p, alpha * ell) * ft.lipschitz_at(ell + 1)
    if kappa >= 1.0:
        raise ContractionError(
            f"extension to level {ell + 1} is not a contraction: kappa = {kappa} >= 1 "
            f"(per-level Lipschitz bound {problem.rhs.level_lipschitz(ell + 1)} "
            f"is not below p^(-alpha ell) p^(gamma (ell+1)) = "
            f"{p_pow(p, -alpha * ell + problem.gamma * (ell + 1.0))})"
        )
    if v0 is None:
        v0 = extension_constant(u, problem, ell)
    coef = p_pow(p, alpha * ell)

    def step(x: float) -> float:
        return u0 + v0 + coef * ft(ell + 1, x)

    x = u.value_at(ell)
    if kappa == 0.0:
        return step(x), kappa, 1
    prev_step = None
    for j in range(1, max_iter + 1):
        x_new = step(x)
        d = abs(x_new - x)
        if d <= tol * max(1.0, abs(x_new)):
            return x_new, kappa, j
        if prev_step is not None and prev_step > 0.0:
            ratio = d / prev_step
            if ratio > kappa + 1e-12:
                raise MetadataError(
                    f"measured contraction ratio {ratio} exceeds kappa = {kappa} "
                    f"at level {ell + 1}: declared per-level Lipschitz metadata is wrong"
                )
        prev_step = d
        x = x_new
    raise NonConvergenceError(
        f"fixed point at level {ell + 1} did not converge in {max_iter} steps",
        diffs=[prev_step])


@dataclass(frozen=True)
class GlobalHypothesesReport:
    """Outcome of the global-extension and decay hypotheses.

    per_level_ok     : F_l < p^(-alpha l) on the checked range.
    witness_level    : first level violating it, if any.
    decay_ok         : beta + gamma > alpha, or None when no decay metadata
                       was declared.
    residual_verifiable: both conditions hold, so the solution of the
                       integral equation is certified to satisfy the
                       differential form and residual checks make sense.
    """

    per_level_ok: bool
    witness_level: Optional[int]
    decay_ok: Optional[bool]
    residual_verifiable: bool
    detail: str = ""


def check_global_hypotheses(problem: ProblemSpec, levels=range(-10, 31)) -> GlobalHypothesesReport:
    """Check F_l < p^(-alpha l) on a level range and beta + gamma > alpha."""
    p, alpha, gamma = problem.p, problem.alpha, problem.gamma
    witness = None
    for l in levels:
        if not problem.rhs.level_lipschitz(l) < p_pow(p, -alpha * l):
            witness = l
            break
    per_level_ok = witness is None
    decay_ok = None
    detail = ""
    if problem.rhs.decay is not None:
        _, beta = problem.rhs.decay
        decay_ok = beta + gamma > alpha
        if not decay_ok:
            detail = (f"decay exponent too weak: beta + gamma = {beta + gamma} "
                      f"<= alpha = {alpha}")
    else:
        detail = "no decay metadata declared"
    if witness is not None:
        detail = (f"per-level Lipschitz bound fails at level {witness}: "
                  f"F_l = {problem.rhs.level_lipschitz(witness)} >= "
                  f"p^(-alpha l) = {p_pow(p, -alpha * witness)}"
                  + ("; " + detail if detail else ""))
    return GlobalHypothesesReport(
        per_level_ok=per_level_ok, witness_level=witness, decay_ok=decay_ok,
        residual_verifiable=per_level_ok and decay_ok is True, detail=detail,
    )


@dataclass(frozen=True)
class ResidualEstimate:
    value: float
    uncertainty: float


def residual(u: RadialFunction, problem: ProblemSpec, n: int,
             tol: float = 1e-8, buffer: int = 3) -> ResidualEstimate:
    """p^(g n) (D^a u)(p^n) - f(p^n, u(p^n)) with a certified-ish uncertainty.

    u is trusted as declared on and below its window; above k_max its
    unknown continuation is bounded by an envelope fitted from the last
    window values (growth exponent log_p of the last ratio, with the
    decay-driven kernel growth max(alpha - 1, 0) as a fallback), and a
    floating-point noise estimate for the centered series is added.  A
    level closer than ``buffer`` to the window edge, a fitted growth at or
    above alpha, or an uncertainty above tol is refused rather than
    reported.
    """
    p, alpha, gamma = problem.p, problem.alpha, problem.gamma
    if n > u.k_max - buffer:
        raise IndeterminateResidualError(
            f"level {n} is within {buffer} levels of the window edge k_max = {u.k_max}; "
            "extend the solution further"
        )
    coeffs = DalphaCoefficients.create(p, alpha)
    frac = 1.0 - 1.0 / p
    c = u.value_at(n)
    left = _centered_left(u, n - 1, 1.0, c)
    right = _centered_right(u, n + 1, -alpha, c)
    dalpha_val = coeffs.d_alpha * frac * (p_pow(p, -(alpha + 1.0) * n) * left + right)

    # envelope for |u| above the window
    env = max(abs(u.value_at(k)) for k in range(u.k_max - 2, u.k_max + 1))
    rho_candidates = [max(alpha - 1.0, 0.0) + 0.05]
    a_last, b_last = abs(u.value_at(u.k_max)), abs(u.value_at(u.k_max - 1))
    if a_last > 1e-300 and b_last > 1e-300:
        rho_candidates.append(math.log(a_last / b_last) / math.log(p))
    rho_hat = max(rho_candidates)
    if rho_hat >= alpha:
        raise IndeterminateResidualError(
            f"fitted tail growth exponent {rho_hat} is not below alpha = {alpha}; "
            "the discarded right-tail contribution cannot be bounded"
        )
    x = p_pow(p, rho_hat - alpha)
    tail_sum = (env + abs(c)) * p_pow(p, -rho_hat * u.k_max) \
        * p_pow(x, u.k_max + 1) / (1.0 - x)
    tail_bound = abs(coeffs.d_alpha) * frac * tail_sum

    # floating-point cancellation estimate for the centered sums
    u_scale = max(1.0, env, abs(c), u.sup_window())
    noise = 1e-15 * u_scale * abs(coeffs.d_alpha) * frac * (
        p_pow(p, -(alpha + 1.0) * n) * p_pow(p, n) * p / (p - 1.0)
        + p_pow(p, -alpha * (n + 1.0)) / (1.0 - p_pow(p, -alpha))
    )
    uncertainty = p_pow(p, gamma * n) * (tail_bound + noise)
    if uncertainty > tol:
        raise IndeterminateResidualError(
            f"residual uncertainty {uncertainty} at level {n} exceeds tol = {tol}; "
            "extend the solution to higher levels"
        )
    value = p_pow(p, gamma * n) * dalpha_val - problem.rhs.eval(n, c)
    return ResidualEstimate(value=value, uncertainty=uncertainty)


def solve_problem(problem: ProblemSpec, tol: float = 1e-10, max_iter: int = 200,
                  n_override: Optional[int] = None, extend_to: Optional[int] = None,
                  n_floor: int = -60, n_cap: int = 8) -> SolveReport:
    """Full pipeline: choose N, run the local iteration, continue level by level."""
    if n_override is None and extend_to is not None:
        # never pick a local radius beyond the requested window top
        n_cap = min(n_cap, extend_to)
    N = n_override if n_override is not None else choose_local_radius(problem, n_floor, n_cap)
    target = extend_to if extend_to is not None else N + 35
    if target < N:
        raise DomainError(f"extension target {target} is below the local radius {N}")
    report = picard_solve(problem, N, tol=tol, max_iter=max_iter, reserve_top=target + 1)
    u = report.solution
    budget = report.truncation_budget
    diags = {}
    for ell in range(N, target):
        v0, rem = _extension_constant(u, problem, ell)
        if rem > tol / 10.0:
            raise BudgetError(
                f"neglected sub-window remainder bound {rem} at extension level {ell} "
                f"exceeds tol/10; rebuild with a smaller tol or lower K_min"
            )
        value, kappa, iters = extend_step(u, problem, ell, tol=tol / 100.0, v0=v0)
        budget += rem
        diags[ell + 1] = ExtensionDiagnostic(v0=v0, kappa=kappa, iterations=iters)
        u = RadialFunction(
            u.p, u.k_min, u.k_max + 1, u.values + (value,),
            left_tail=u.left_tail, right_tail=u.right_tail,
            value_at_zero=u.value_at_zero,
        )
    return replace(report, solution=u, extension_diagnostics=diags,
                   truncation_budget=budget)


# -- built-in right-hand sides for the CLI -----------------------------------

def catalog_nonlinearity(name: str, p: int, amplitude: float = 0.1,
                         beta: float = 2.0) -> Nonlinearity:
    """Reproducible right-hand sides: zero, const, cos-decay, bounded-sigmoid.

    cos-decay is f(p^l, x) = A p^(-beta max(l, 0)) cos(x) with per-level
    Lipschitz constants A p^(-beta max(l, 0)) and decay pair (A, beta);
    bounded-sigmoid is a level-independent saturating nonlinearity.
    """
    p = Prime(p)
    if name == "zero":
        return Nonlinearity(eval=lambda k, x: 0.0, bound_M=1.0, lipschitz_F=0.0,
                            per_level_F=lambda k: 0.0, decay=(1.0, beta), name="zero")
    if name == "const":
        lam = amplitude
        return Nonlinearity(eval=lambda k, x: lam, bound_M=abs(lam) if lam != 0.0 else 1.0,
                            lipschitz_F=0.0, per_level_F=lambda k: 0.0,
                            decay=None, name="const")
    if name == "cos-decay":
        a = amplitude

        def f(k: int, x: float) -> float:
            return a * p_pow(p, -beta * max(k, 0)) * math.cos(x)

        return Nonlinearity(eval=f, bound_M=a, lipschitz_F=a,
                            per_level_F=lambda k: a * p_pow(p, -beta * max(k, 0)),
                            decay=(a, beta), name="cos-decay")
    if name == "bounded-sigmoid":
        a = amplitude
        return Nonlinearity(eval=lambda k, x: a * math.tanh(x / 2.0) / 2.0,
                            bound_M=a / 2.0, lipschitz_F=a / 4.0,
                            per_level_F=lambda k: a / 4.0, decay=None,
                            name="bounded-sigmoid")
    raise DomainError(f"unknown catalog nonlinearity {name!r}")
