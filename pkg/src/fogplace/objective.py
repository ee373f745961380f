"""Search-space encoding and the weighted connectivity/coverage fitness.

A placement is a flat vector ``(x_0, y_0, x_1, y_1, ...)`` holding every fog
node location. The fitness of a placement is

    f = omega * zeta / n + (1 - omega) * phi / m

with ``zeta`` the largest fog component size and ``phi`` the covered edge
count; larger is better.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .network import (
    Point2D,
    Scenario,
    build_topology,
    connectivity_zeta,
    coverage_phi,
)

__all__ = [
    "EvaluationContext",
    "FitnessBreakdown",
    "bounds",
    "encode",
    "decode",
    "fitness",
    "evaluate_population",
]


@dataclass(frozen=True)
class FitnessBreakdown:
    f: float
    zeta: int
    phi: int


@dataclass(frozen=True)
class EvaluationContext:
    """Immutable evaluation setup: scenario template plus weight ``omega``.

    Fog ranges, edge nodes and the region come from ``template``; fog
    locations are whatever the decoded vector says.
    """

    template: Scenario
    omega: float = 0.5
    _ranges: np.ndarray = field(init=False, repr=False, compare=False)
    _upper_link2: np.ndarray = field(init=False, repr=False, compare=False)
    _edge_xy: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not 0.0 <= self.omega <= 1.0:
            raise ValueError(f"omega must lie in [0, 1], got {self.omega}")
        if self.template.n == 0 or self.template.m == 0:
            raise ValueError("evaluation needs at least one fog node and one edge node")
        ranges = np.array([f.range for f in self.template.fog_nodes], dtype=float)
        r = np.minimum(ranges[:, None], ranges[None, :])
        link2 = r * r
        # -1 below and on the diagonal: only pairs i < j can match, never self links
        upper_link2 = np.where(np.triu(np.ones_like(link2, dtype=bool), k=1), link2, -1.0)
        edge_xy = np.array([[e.location.x, e.location.y] for e in self.template.edge_nodes], dtype=float)
        for name, arr in (("_ranges", ranges), ("_upper_link2", upper_link2), ("_edge_xy", edge_xy)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n(self) -> int:
        return self.template.n

    @property
    def m(self) -> int:
        return self.template.m

    @property
    def dim(self) -> int:
        return 2 * self.template.n

    def score(self, zeta, phi):
        """Weighted fitness from raw counts; works on scalars and arrays alike."""
        # ratios first: keeps f <= 1 exactly under rounding
        return self.omega * (zeta / self.n) + (1.0 - self.omega) * (phi / self.m)


def bounds(ctx: EvaluationContext) -> tuple[np.ndarray, np.ndarray]:
    """Lower (all zeros) and upper (``W, H`` repeated) bounds of the search box."""
    lower = np.zeros(ctx.dim)
    upper = np.tile([ctx.template.width, ctx.template.height], ctx.n).astype(float)
    return lower, upper


def encode(s: Scenario) -> np.ndarray:
    """Flatten fog locations into an interleaved placement vector."""
    return np.array([c for f in s.fog_nodes for c in (f.location.x, f.location.y)], dtype=float)


def decode(v, ctx: EvaluationContext) -> Scenario:
    """Return the template scenario with fog ``i`` moved to ``(v[2i], v[2i+1])``."""
    v = np.asarray(v, dtype=float)
    if v.shape != (ctx.dim,):
        raise ValueError(f"placement vector must have shape ({ctx.dim},), got {v.shape}")
    fogs = tuple(
        replace(f, location=Point2D(float(v[2 * i]), float(v[2 * i + 1])))
        for i, f in enumerate(ctx.template.fog_nodes)
    )
    return replace(ctx.template, fog_nodes=fogs)


def fitness(v, ctx: EvaluationContext) -> FitnessBreakdown:
    g = build_topology(decode(v, ctx))
    zeta, phi = connectivity_zeta(g), coverage_phi(g)
    return FitnessBreakdown(f=float(ctx.score(zeta, phi)), zeta=zeta, phi=phi)


def evaluate_population(X, ctx: EvaluationContext) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorised fitness of every row of ``X``.

    Returns ``(f, zeta, phi)`` arrays of length ``len(X)``. Produces the same
    values as :func:`fitness` row by row; fog components of the whole batch are
    labelled in one sparse connected-components pass.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != ctx.dim:
        raise ValueError(f"population must have shape (N, {ctx.dim}), got {X.shape}")
    N, n = X.shape[0], ctx.n
    xs, ys = X[:, 0::2], X[:, 1::2]

    dx = xs[:, :, None] - xs[:, None, :]
    dy = ys[:, :, None] - ys[:, None, :]
    dx *= dx
    dy *= dy
    dx += dy
    b, i, j = np.nonzero(dx <= ctx._upper_link2)
    offset = b * n
    graph = coo_matrix((np.ones(len(b), dtype=np.int8), (offset + i, offset + j)), shape=(N * n, N * n))
    _, labels = connected_components(graph, directed=False)
    sizes = np.bincount(labels)
    zeta = sizes[labels].reshape(N, n).max(axis=1)

    # (N, m, n) layout so the any() reduction runs over contiguous memory
    ex = np.ascontiguousarray(xs)[:, None, :] - ctx._edge_xy[None, :, 0, None]
    ey = np.ascontiguousarray(ys)[:, None, :] - ctx._edge_xy[None, :, 1, None]
    ex *= ex
    ey *= ey
    ex += ey
    covered = (ex <= ctx._ranges * ctx._ranges).any(axis=2)
    phi = covered.sum(axis=1)

    return ctx.score(zeta, phi).astype(float), zeta, phi
