"""Weighted-space function representation on graded grids.

A function f that is continuous on (a, c] but may blow up like
(t-a)^{-gamma} at the left endpoint is stored through its regularized
part W(t) = (t-a)^gamma f(t), together with the limit value
w_0 = lim_{t->a+} W(t). All norms and estimates downstream are phrased in
terms of W, which stays bounded; f itself is reconstructed on demand.

Grids are polynomially graded toward a, t_j = a + (c-a) (j/n)^r, so that
the (t-a)^{alpha-1} solution singularity is resolved by piecewise-linear
interpolation of W.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np


@dataclass(frozen=True)
class Order:
    """Fractional order alpha in (1/2, 1); the weight exponent is 1 - alpha."""

    alpha: float

    def __post_init__(self):
        if not (0.5 < self.alpha < 1.0):
            raise ValueError(f"alpha must lie in (1/2, 1), got {self.alpha!r}")

    @property
    def gamma(self) -> float:
        return 1.0 - self.alpha


@dataclass(frozen=True, eq=False)
class GradedGrid:
    """Nodes t_j = a + (c-a) (j/n)^r, j = 0..n; r = 1 is the uniform grid."""

    a: float
    c: float
    n: int
    r: float
    nodes: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.nodes.setflags(write=False)

    @property
    def length(self) -> float:
        return self.c - self.a

    @classmethod
    def from_nodes(cls, nodes) -> "GradedGrid":
        """Wrap an explicit strictly increasing node sequence (e.g. read back
        from a solution trace). The grading exponent is inferred from the
        first node, for bookkeeping only: all operations use `nodes`."""
        nodes = np.asarray(nodes, dtype=float)
        if nodes.ndim != 1 or nodes.size < 3:
            raise ValueError("need at least 3 nodes")
        if not np.all(np.diff(nodes) > 0.0):
            raise ValueError("nodes must be strictly increasing")
        a, c, n = float(nodes[0]), float(nodes[-1]), nodes.size - 1
        r = float(np.log((nodes[1] - a) / (c - a)) / np.log(1.0 / n))
        return cls(a=a, c=c, n=n, r=max(1.0, r), nodes=nodes)


def build_grid(a: float, c: float, n: int, r: float) -> GradedGrid:
    """Graded grid on [a, c] with n cells and grading exponent r >= 1."""
    if not (np.isfinite(a) and np.isfinite(c)) or a >= c:
        raise ValueError(f"invalid interval: need a < c, got a={a!r}, c={c!r}")
    if n < 2:
        raise ValueError(f"need n >= 2 cells, got {n!r}")
    if r < 1.0:
        raise ValueError(f"grading exponent must be >= 1, got {r!r}")
    j = np.arange(n + 1, dtype=float)
    nodes = a + (c - a) * (j / n) ** r
    nodes[0], nodes[-1] = a, c
    return GradedGrid(a=float(a), c=float(c), n=int(n), r=float(r), nodes=nodes)


@dataclass(frozen=True, eq=False)
class WeightedFn:
    """Samples of the regularized part W(t_j) = (t_j-a)^gamma f(t_j).

    reg_samples[0] holds the limit value w_0 (= f_a for weight gamma); the
    interpolant of the samples is the piecewise-linear W used everywhere.
    """

    gamma: float
    grid: GradedGrid
    reg_samples: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not (0.0 <= self.gamma < 1.0):
            raise ValueError(f"weight exponent must lie in [0, 1), got {self.gamma!r}")
        if self.reg_samples.shape != self.grid.nodes.shape:
            raise ValueError("one regularized sample per grid node required")
        if not np.all(np.isfinite(self.reg_samples)):
            raise ValueError("regularized samples must be finite")
        self.reg_samples.setflags(write=False)

    @property
    def limit_value(self) -> float:
        return float(self.reg_samples[0])


def from_callable(reg: Callable[[float], float], f_a: float, gamma: float,
                  grid: GradedGrid) -> WeightedFn:
    """Sample the regularized part t -> (t-a)^gamma f(t) at the grid nodes.

    `reg` is only evaluated on (a, c]; the limit value f_a is supplied
    explicitly since the raw f may be singular at a.
    """
    vals = np.empty_like(grid.nodes)
    vals[0] = f_a
    vals[1:] = [reg(t) for t in grid.nodes[1:]]
    if not np.all(np.isfinite(vals)):
        raise ValueError("regularized part evaluated to a non-finite sample")
    return WeightedFn(gamma=float(gamma), grid=grid, reg_samples=vals)


def from_samples(samples, gamma: float, grid: GradedGrid) -> WeightedFn:
    """Wrap precomputed regularized samples (samples[0] = limit value)."""
    return WeightedFn(gamma=float(gamma), grid=grid,
                      reg_samples=np.array(samples, dtype=float))


def eval_reg(w: WeightedFn, t) -> np.ndarray | float:
    """Piecewise-linear interpolant of the regularized samples at t in [a, c]."""
    return np.interp(t, w.grid.nodes, w.reg_samples)


def eval_raw(w: WeightedFn, t: float) -> float:
    """f(t) = W(t) / (t-a)^gamma for t in (a, c].

    t = a is rejected: the raw function is generically infinite there.
    """
    if not (w.grid.a < t <= w.grid.c):
        raise ValueError(f"t={t!r} outside (a, c] = ({w.grid.a}, {w.grid.c}]")
    return float(eval_reg(w, t)) / (t - w.grid.a) ** w.gamma


def norm_window(w: WeightedFn, b: float, c_w: float) -> float:
    """Weighted sup-norm over the window [b, c_w]:
    max_{t in [b, c_w]} (t-a)^gamma |f(t)| = max |W| there.

    W is piecewise linear, so the max is attained at a node or at one of
    the interpolated window endpoints.
    """
    if not (w.grid.a < b <= c_w <= w.grid.c):
        raise ValueError(
            f"window [{b!r}, {c_w!r}] not inside ({w.grid.a}, {w.grid.c}]")
    nodes = w.grid.nodes
    inside = w.reg_samples[(nodes >= b) & (nodes <= c_w)]
    ends = np.interp([b, c_w], nodes, w.reg_samples)
    vals = np.concatenate([ends, inside]) if inside.size else ends
    return float(np.abs(vals).max())


def norm_full(w: WeightedFn) -> float:
    """Weighted sup-norm over (a, c], including the limit value |w_0|."""
    return float(np.abs(w.reg_samples).max())
