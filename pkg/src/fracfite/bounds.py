"""Explicit constant chain and the Fite-type lower bound.

For Hoelder exponents p > 1 with conjugate q = p/(p-1) and kernel
exponents beta, gamma in (0, 1), the chain reads

    c(p, beta, gamma) = 2^{beta+gamma-1/p} / (1 - gamma p)^{1/p}
    C = 2 [c(p, beta, gamma) + c(v, gamma, beta)]
    D = C L^{1-gamma-1/max(q,w)} + L^{1-beta-gamma} B(1-gamma, 1-beta)
    E = (D / Gamma(alpha)) max(L^{1/q}, L^{1-alpha})

with L the interval length. The bound path specializes to
beta = gamma = 1 - alpha, v = p, w = q with (1-alpha) p < 1/2; only there
is D independent of the window start, which is what makes the final
inequality a statement about L = c - a alone:

    m L^alpha max(L^{1/q}, L^{1-alpha}) / min(L^{1/q}, L^{1-alpha})
        >= Gamma(alpha) / (2^{2(2-alpha)} + B(alpha, alpha))

whenever a nontrivial solution pair vanishes somewhere in the window
(f at one point, its order-alpha derivative at another). Inverting the
monotone left side gives the minimal admissible length; optimizing the
free exponent p tightens it.

audit_estimates re-derives every inequality of the chain numerically on
randomized instances, including the two steps that are only used en route
(the kernel-difference estimates and the window-dependent raw form of D).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AuditFailure
from .specfn import beta_fn, gamma_fn
from .rlops import kernel_integral, kernel_matrix
from .weighted import Order, build_grid

_CLAMP_EPS = 1e-6
_AUDIT_SLACK = 1.0 + 1e-6


# ---------------------------------------------------------------------------
# constant chain
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HolderParams:
    """Conjugate exponent pairs 1/p + 1/q = 1/v + 1/w = 1."""

    p: float
    q: float
    v: float
    w: float


@dataclass(frozen=True)
class ConstantChain:
    small_c_bg: float
    small_c_gb: float
    big_C: float
    big_D: float
    big_E: float
    beta_val: float


def holder_params(order: Order, p: float) -> HolderParams:
    """Exponents of the specialized regime: v = p, w = q, (1-alpha) p < 1/2."""
    if not (p > 1.0):
        raise ValueError(f"p must exceed 1, got {p!r}")
    if order.gamma * p >= 0.5:
        raise ValueError(
            f"inadmissible p: need (1-alpha) p < 1/2, got {order.gamma * p!r}")
    q = p / (p - 1.0)
    return HolderParams(p=p, q=q, v=p, w=q)


def small_c(p: float, beta: float, gamma: float) -> float:
    """c(p, beta, gamma) = 2^{beta+gamma-1/p} / (1 - gamma p)^{1/p}."""
    if not (p > 1.0):
        raise ValueError(f"p must exceed 1, got {p!r}")
    if not (0.0 < beta < 1.0 and 0.0 < gamma < 1.0):
        raise ValueError("beta and gamma must lie in (0, 1)")
    if gamma * p >= 1.0:
        raise ValueError(f"need gamma p < 1, got {gamma * p!r}")
    return 2.0 ** (beta + gamma - 1.0 / p) / (1.0 - gamma * p) ** (1.0 / p)


def big_C(p: float, v: float, beta: float, gamma: float) -> float:
    """C = 2 [c(p, beta, gamma) + c(v, gamma, beta)]."""
    return 2.0 * (small_c(p, beta, gamma) + small_c(v, gamma, beta))


def big_D(order: Order, p: float, length: float) -> float:
    """Window-independent D at beta = gamma = 1 - alpha:
    D = C L^{alpha-1/q} + B(alpha, alpha) L^{2 alpha - 1}."""
    hp = holder_params(order, p)
    ga = order.gamma
    return (big_C(hp.p, hp.v, ga, ga) * length ** (order.alpha - 1.0 / hp.q)
            + beta_fn(order.alpha, order.alpha) * length ** (2.0 * order.alpha - 1.0))


def big_E(order: Order, p: float, length: float) -> float:
    """E = (D / Gamma(alpha)) max(L^{1/q}, L^{1-alpha}); E m < 1 is the
    contraction regime of the solver's Picard iteration."""
    hp = holder_params(order, p)
    mx = max(length ** (1.0 / hp.q), length ** order.gamma)
    return big_D(order, p, length) / gamma_fn(order.alpha) * mx


def constant_chain(order: Order, p: float, length: float) -> ConstantChain:
    hp = holder_params(order, p)
    ga = order.gamma
    cbg = small_c(hp.p, ga, ga)
    cgb = small_c(hp.v, ga, ga)
    return ConstantChain(
        small_c_bg=cbg,
        small_c_gb=cgb,
        big_C=2.0 * (cbg + cgb),
        big_D=big_D(order, p, length),
        big_E=big_E(order, p, length),
        beta_val=beta_fn(order.alpha, order.alpha),
    )


# ---------------------------------------------------------------------------
# the Fite-type inequality
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundReport:
    """Both sides of the length inequality for one instance."""

    alpha: float
    p_used: float
    m: float
    length: float
    lhs: float
    rhs: float
    satisfied: bool
    min_length: float


def fite_rhs(order: Order) -> float:
    """Gamma(alpha) / (2^{2(2-alpha)} + B(alpha, alpha)); free of p and m."""
    al = order.alpha
    return gamma_fn(al) / (2.0 ** (2.0 * (2.0 - al)) + beta_fn(al, al))


def fite_lhs(order: Order, p: float, m: float, length: float) -> float:
    """m L^alpha max(L^{1/q}, L^{1-alpha}) / min(L^{1/q}, L^{1-alpha})."""
    if m < 0.0:
        raise ValueError(f"m must be nonnegative, got {m!r}")
    if not (length > 0.0):
        raise ValueError(f"length must be positive, got {length!r}")
    hp = holder_params(order, p)
    u = length ** (1.0 / hp.q)
    v = length ** order.gamma
    return m * length ** order.alpha * max(u, v) / min(u, v)


def min_length(order: Order, m: float, p: float) -> float:
    """Unique length at which the bound becomes active, by bisection.

    The left side grows like L^{alpha - |1/q - (1-alpha)|} below L = 1 and
    L^{alpha + |...|} above; both exponents are positive on the admissible
    set, so it is strictly increasing and the root is unique.
    """
    if not (m > 0.0):
        raise ValueError(f"m must be positive, got {m!r}")
    holder_params(order, p)  # admissibility check
    rhs = fite_rhs(order)
    lo, hi = 1e-12, 1.0
    while fite_lhs(order, p, m, lo) >= rhs:
        lo *= 1e-12
    while fite_lhs(order, p, m, hi) < rhs:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if fite_lhs(order, p, m, mid) < rhs:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def best_min_length(order: Order, m: float) -> tuple[float, float]:
    """Tightest certificate: maximize min_length over admissible p.

    The objective is unimodal in p (it only depends on |1/q - (1-alpha)|),
    so golden-section search over the clamped open interval
    (1, 1/(2(1-alpha))) finds the optimum; for alpha > 2/3 this is the
    interior point p = 1/alpha, otherwise the upper boundary.
    """
    if not (m > 0.0):
        raise ValueError(f"m must be positive, got {m!r}")
    p_lo = 1.0 + _CLAMP_EPS
    p_hi = (1.0 - _CLAMP_EPS) / (2.0 * order.gamma)
    if p_hi <= p_lo:
        raise ValueError(f"empty admissible p-range for alpha={order.alpha!r}")
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    lo, hi = p_lo, p_hi
    x1 = hi - invphi * (hi - lo)
    x2 = lo + invphi * (hi - lo)
    f1 = min_length(order, m, x1)
    f2 = min_length(order, m, x2)
    while hi - lo > 1e-8:
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + invphi * (hi - lo)
            f2 = min_length(order, m, x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - invphi * (hi - lo)
            f1 = min_length(order, m, x1)
    # compare the interior candidate with the clamped endpoints
    candidates = [(0.5 * (lo + hi), min_length(order, m, 0.5 * (lo + hi))),
                  (p_lo, min_length(order, m, p_lo)),
                  (p_hi, min_length(order, m, p_hi))]
    return max(candidates, key=lambda t: t[1])


def bound_report(order: Order, p: float, m: float, length: float) -> BoundReport:
    """Evaluate the inequality at a fixed exponent; satisfied <=> lhs >= rhs."""
    lhs = fite_lhs(order, p, m, length)
    rhs = fite_rhs(order)
    return BoundReport(alpha=order.alpha, p_used=p, m=m, length=length,
                       lhs=lhs, rhs=rhs, satisfied=lhs >= rhs,
                       min_length=min_length(order, m, p))


# ---------------------------------------------------------------------------
# randomized inequality audit
# ---------------------------------------------------------------------------

AUDITED = ("kernel_product", "kernel_window", "kernel_difference",
           "uniform_continuity", "subadditive_power", "weighted_continuity",
           "chain_D", "chain_E")

_AUDIT_N = 96


@dataclass(frozen=True)
class AuditReport:
    trials: int
    passes: dict[str, int]


def _assert_le(name: str, lhs: float, rhs: float, seed: int) -> None:
    if not (lhs <= rhs * _AUDIT_SLACK):
        raise AuditFailure(name, seed, f"lhs={lhs!r} > rhs={rhs!r}")


def audit_estimates(order: Order, p: float, trials: int, seed: int) -> AuditReport:
    """Numerically audit the inequality chain on randomized instances.

    Each trial draws an interval [a, c], a window start b, two points
    t1 <= t2 in [b, c] on the trial grid, a bounded coefficient A and a
    weighted function f (both random piecewise linear), all with
    beta = gamma = 1 - alpha and the given p. Integrals are evaluated by
    the product-integration machinery. Raises AuditFailure on the first
    violated inequality; otherwise reports per-inequality pass counts.
    """
    hp = holder_params(order, p)
    ga = order.gamma
    beta = ga
    q = hp.q
    passes = {name: 0 for name in AUDITED}
    for trial in range(trials):
        rng = np.random.default_rng(np.random.SeedSequence([seed, trial]))
        trial_seed = seed + trial
        a = rng.uniform(-2.0, 2.0)
        length = rng.uniform(0.3, 3.0)
        c = a + length
        grid = build_grid(a, c, _AUDIT_N, 2.0)
        b = a + rng.uniform(0.02, 0.3) * length
        eligible = np.flatnonzero(grid.nodes >= b)
        i1, i2 = np.sort(rng.choice(eligible, size=2, replace=False))
        t1, t2 = grid.nodes[i1], grid.nodes[i2]

        A_nodes = rng.uniform(-3.0, 3.0, grid.n + 1)
        W_nodes = rng.uniform(-3.0, 3.0, grid.n + 1)
        sup_A = float(np.abs(A_nodes).max())
        norm_f = float(np.abs(W_nodes).max())

        omega = kernel_matrix(grid, beta, ga)
        q1, q2 = omega[i1] @ (A_nodes * W_nodes), omega[i2] @ (A_nodes * W_nodes)

        # (kernel_product) |Q_{beta,A} f|(t) <= (t-a)^{1-beta-gamma} B(...) |A| |f|
        lhs = float(omega[i2] @ np.abs(A_nodes * W_nodes))
        rhs = ((t2 - a) ** (1.0 - beta - ga) * beta_fn(1.0 - ga, 1.0 - beta)
               * sup_A * norm_f)
        _assert_le("kernel_product", lhs, rhs, trial_seed)
        passes["kernel_product"] += 1

        csum = small_c(hp.p, beta, ga) + small_c(hp.v, ga, beta)
        ratio = (t2 - t1) / (t2 - a)
        rhs_kernel = (t2 - a) ** (1.0 - beta - ga) * csum * ratio ** (1.0 / max(q, hp.w))

        # (kernel_window) int_{t1}^{t2} kernel <= split-and-Hoelder bound
        if t1 > a and t2 > t1:
            lhs = kernel_integral(t1, t2, a, t2, beta, ga)
            _assert_le("kernel_window", lhs, rhs_kernel, trial_seed)
        passes["kernel_window"] += 1

        # (kernel_difference) int_a^{t1} kernel-difference <= same bound
        if t2 > t1 > a:
            lhs = (kernel_integral(a, t1, a, t1, beta, ga)
                   - kernel_integral(a, t1, a, t2, beta, ga))
            _assert_le("kernel_difference", lhs, rhs_kernel, trial_seed)
        passes["kernel_difference"] += 1

        # (uniform_continuity) |Qf(t1) - Qf(t2)| <= C (t2-a)^{...} (t2-t1)^{1/q} |A| |f|
        Cconst = 2.0 * csum
        lhs = abs(q1 - q2)
        rhs = (Cconst * (t2 - a) ** (1.0 - beta - ga - 1.0 / q)
               * (t2 - t1) ** (1.0 / q) * sup_A * norm_f)
        _assert_le("uniform_continuity", lhs, rhs, trial_seed)
        passes["uniform_continuity"] += 1

        # (subadditive_power) (x + y)^e <= x^e + y^e for e in (0, 1)
        x, y = rng.uniform(0.0, 5.0, 2)
        e = rng.uniform(0.05, 0.95)
        _assert_le("subadditive_power", (x + y) ** e, x**e + y**e, trial_seed)
        passes["subadditive_power"] += 1

        # (weighted_continuity) raw window-dependent form of D
        expo = 1.0 - beta - ga - 1.0 / q
        d_raw = (Cconst * length ** beta * ((b - a) ** expo + length ** expo)
                 + length ** (1.0 - beta - ga) * beta_fn(1.0 - ga, 1.0 - beta))
        lhs = abs((t1 - a) ** beta * q1 - (t2 - a) ** beta * q2)
        rhs = (d_raw * sup_A * norm_f
               * max((t2 - t1) ** (1.0 / q), (t2 - t1) ** beta))
        _assert_le("weighted_continuity", lhs, rhs, trial_seed)
        passes["weighted_continuity"] += 1

        # (chain_D) D <= [2^{2(2-alpha)} + B(alpha,alpha)] L^alpha / min(...)
        al = order.alpha
        dd = big_D(order, p, length)
        step1 = (2.0 ** (2.0 * (2.0 - al)) * length ** (al - 1.0 / q)
                 + beta_fn(al, al) * length ** (2.0 * al - 1.0))
        _assert_le("chain_D", dd, step1, trial_seed)
        mn = min(length ** (1.0 / q), length ** (1.0 - al))
        step2 = (2.0 ** (2.0 * (2.0 - al)) + beta_fn(al, al)) * length ** al / mn
        _assert_le("chain_D", step1, step2, trial_seed)
        passes["chain_D"] += 1

        # (chain_E) E <= [2^{2(2-alpha)} + B(alpha,alpha)]/Gamma(alpha)
        #               * L^alpha max(...)/min(...)
        ee = big_E(order, p, length)
        mx = max(length ** (1.0 / q), length ** (1.0 - al))
        rhs = ((2.0 ** (2.0 * (2.0 - al)) + beta_fn(al, al)) / gamma_fn(al)
               * length ** al * mx / mn)
        _assert_le("chain_E", ee, rhs, trial_seed)
        passes["chain_E"] += 1
    return AuditReport(trials=trials, passes=passes)
