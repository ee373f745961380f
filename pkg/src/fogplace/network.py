"""Geometric model of a fog/edge deployment.

Fog nodes carry a transmission range. An edge node is covered when it lies
inside the range of at least one fog node, and two fog nodes are linked when
their distance is within the smaller of their two ranges. Connectivity is the
size of the largest fog-only connected component; coverage is the number of
covered edge nodes.

All distance tests compare squared distances against squared thresholds, so a
point sitting exactly on the range boundary counts as covered/linked.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

__all__ = [
    "Point2D",
    "FogNode",
    "EdgeNode",
    "Scenario",
    "TopologyGraph",
    "UnionFind",
    "covers",
    "fog_link",
    "build_topology",
    "connectivity_zeta",
    "coverage_phi",
    "scenario_to_dict",
    "scenario_from_dict",
    "save_scenario",
    "load_scenario",
]


@dataclass(frozen=True)
class Point2D:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"coordinates must be finite, got ({self.x}, {self.y})")

    def dist2(self, other: Point2D) -> float:
        dx = self.x - other.x
        dy = self.y - other.y
        return dx * dx + dy * dy


@dataclass(frozen=True)
class FogNode:
    id: int
    location: Point2D
    range: float

    def __post_init__(self):
        if not self.range > 0:
            raise ValueError(f"fog node {self.id}: range must be positive, got {self.range}")


@dataclass(frozen=True)
class EdgeNode:
    id: int
    location: Point2D


@dataclass(frozen=True)
class Scenario:
    """Rectangular region ``[0, width] x [0, height]`` with fog and edge nodes.

    ``capacity`` bounds how many edge nodes a single fog node may be assigned;
    ``None`` means unlimited. Capacity only affects the assignment map, never
    the coverage count.
    """

    width: float
    height: float
    fog_nodes: tuple[FogNode, ...] = ()
    edge_nodes: tuple[EdgeNode, ...] = ()
    capacity: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "fog_nodes", tuple(self.fog_nodes))
        object.__setattr__(self, "edge_nodes", tuple(self.edge_nodes))
        if not (self.width > 0 and self.height > 0):
            raise ValueError(f"region must have positive size, got {self.width}x{self.height}")
        if self.capacity is not None and (int(self.capacity) != self.capacity or self.capacity < 1):
            raise ValueError(f"capacity must be a positive integer or None, got {self.capacity}")
        for kind, nodes in (("fog", self.fog_nodes), ("edge", self.edge_nodes)):
            ids = [node.id for node in nodes]
            if ids != list(range(len(nodes))):
                raise ValueError(f"{kind} ids must be dense and ordered 0..{len(nodes) - 1}")
            for node in nodes:
                if not self.contains(node.location):
                    raise ValueError(
                        f"{kind} node {node.id} at ({node.location.x}, {node.location.y}) "
                        f"lies outside the {self.width}x{self.height} region"
                    )

    @property
    def n(self) -> int:
        return len(self.fog_nodes)

    @property
    def m(self) -> int:
        return len(self.edge_nodes)

    def contains(self, p: Point2D) -> bool:
        return 0.0 <= p.x <= self.width and 0.0 <= p.y <= self.height


@dataclass(frozen=True)
class TopologyGraph:
    """Derived link structure of a scenario.

    ``fog_adjacency[i]`` is the sorted tuple of fog ids linked to fog ``i``.
    ``components`` lists each connected group of fog ids (sorted inside, groups
    ordered by their smallest id). ``assignment`` maps edge id to fog id.
    """

    fog_adjacency: tuple[tuple[int, ...], ...]
    covered: tuple[bool, ...]
    components: tuple[tuple[int, ...], ...]
    assignment: dict[int, int] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.fog_adjacency)

    @property
    def m(self) -> int:
        return len(self.covered)

    def edges(self) -> list[tuple[int, int]]:
        """Undirected fog links as ``(i, j)`` pairs with ``i < j``."""
        return [(i, j) for i, nbrs in enumerate(self.fog_adjacency) for j in nbrs if i < j]


class UnionFind:
    """Disjoint sets over ``0..size-1`` with path halving and union by size."""

    def __init__(self, size: int):
        self.parent = list(range(size))
        self.size = [1] * size

    def find(self, a: int) -> int:
        parent = self.parent
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True

    def groups(self) -> list[list[int]]:
        out: dict[int, list[int]] = {}
        for i in range(len(self.parent)):
            out.setdefault(self.find(i), []).append(i)
        return sorted(out.values(), key=lambda g: g[0])


def covers(f: FogNode, e: EdgeNode) -> bool:
    """True when edge node ``e`` lies within the range of fog node ``f``."""
    return f.location.dist2(e.location) <= f.range * f.range


def fog_link(a: FogNode, b: FogNode) -> bool:
    """True when fog nodes ``a`` and ``b`` are within each other's range."""
    if a.id == b.id:
        raise ValueError(f"self-link is undefined (fog id {a.id})")
    r = min(a.range, b.range)
    return a.location.dist2(b.location) <= r * r


def _assign(scenario: Scenario, covering: list[list[tuple[float, int]]]) -> dict[int, int]:
    # greedy by ascending distance; ties by fog id, then edge id
    pairs = sorted(
        (d2, fid, eid) for eid, options in enumerate(covering) for d2, fid in options
    )
    cap = scenario.capacity
    load = [0] * scenario.n
    assignment: dict[int, int] = {}
    for _, fid, eid in pairs:
        if eid in assignment or (cap is not None and load[fid] >= cap):
            continue
        assignment[eid] = fid
        load[fid] += 1
    return dict(sorted(assignment.items()))


def build_topology(s: Scenario) -> TopologyGraph:
    """Compute links, coverage flags, fog components and the edge assignment."""
    fogs = s.fog_nodes
    n = len(fogs)
    adjacency: list[list[int]] = [[] for _ in range(n)]
    uf = UnionFind(n)
    for i in range(n):
        for j in range(i + 1, n):
            if fog_link(fogs[i], fogs[j]):
                adjacency[i].append(j)
                adjacency[j].append(i)
                uf.union(i, j)

    covering: list[list[tuple[float, int]]] = []
    for e in s.edge_nodes:
        covering.append([(f.location.dist2(e.location), f.id) for f in fogs if covers(f, e)])

    return TopologyGraph(
        fog_adjacency=tuple(tuple(sorted(nbrs)) for nbrs in adjacency),
        covered=tuple(bool(options) for options in covering),
        components=tuple(tuple(g) for g in uf.groups()),
        assignment=_assign(s, covering),
    )


def connectivity_zeta(g: TopologyGraph) -> int:
    """Size of the largest fog component (0 without fog nodes)."""
    return max((len(c) for c in g.components), default=0)


def coverage_phi(g: TopologyGraph) -> int:
    """Number of covered edge nodes."""
    return sum(g.covered)


# -- scenario files ---------------------------------------------------------


def scenario_to_dict(s: Scenario) -> dict[str, Any]:
    return {
        "width": s.width,
        "height": s.height,
        "capacity": s.capacity,
        "fog_nodes": [
            {"id": f.id, "x": f.location.x, "y": f.location.y, "range": f.range} for f in s.fog_nodes
        ],
        "edge_nodes": [{"id": e.id, "x": e.location.x, "y": e.location.y} for e in s.edge_nodes],
    }


def _sorted_by_id(items: Sequence[dict[str, Any]]) -> list[dict[str, Any]]:
    return sorted(items, key=lambda item: int(item["id"]))


def scenario_from_dict(doc: dict[str, Any]) -> Scenario:
    try:
        fogs = [
            FogNode(int(f["id"]), Point2D(float(f["x"]), float(f["y"])), float(f["range"]))
            for f in _sorted_by_id(doc.get("fog_nodes", []))
        ]
        edges = [
            EdgeNode(int(e["id"]), Point2D(float(e["x"]), float(e["y"])))
            for e in _sorted_by_id(doc.get("edge_nodes", []))
        ]
        capacity = doc.get("capacity")
        return Scenario(
            width=float(doc["width"]),
            height=float(doc["height"]),
            fog_nodes=tuple(fogs),
            edge_nodes=tuple(edges),
            capacity=None if capacity is None else int(capacity),
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed scenario document: {exc!r}") from exc


def save_scenario(s: Scenario, path: str | Path) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(scenario_to_dict(s), indent=2) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write scenario file {path}: {exc}") from exc
    return path


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise OSError(f"cannot read scenario file {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: invalid JSON: {exc}") from exc
    return scenario_from_dict(doc)
