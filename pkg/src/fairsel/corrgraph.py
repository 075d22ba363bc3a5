"""Thresholded Pearson-correlation graph over features.

Answers the path-existence, edge-weight, and Euclidean-distance
queries behind the indirect penalty and the bias score.
"""

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

MIN_DISTANCE = 1e-6


def pearson(x, y):
    """Sample Pearson correlation with population moments.

    Returns 0.0 when either column has zero variance.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise ValueError(f"length mismatch: {x.shape} vs {y.shape}")
    if x.ndim != 1 or x.size < 2:
        raise ValueError("need two 1-D columns of length >= 2")
    xc = x - x.mean()
    yc = y - y.mean()
    sx = np.sqrt((xc * xc).mean())
    sy = np.sqrt((yc * yc).mean())
    if sx == 0.0 or sy == 0.0:
        return 0.0
    return float((xc * yc).mean() / (sx * sy))


@dataclass(frozen=True, eq=False)
class CorrelationGraph:
    """Undirected graph with an edge wherever |corr| clears the threshold.

    Distances use the signed correlation by default (anticorrelated
    features sit far apart); signed_distance=False switches to |corr|.
    """

    corr: np.ndarray  # (d, d) symmetric, unit diagonal
    threshold: float
    names: tuple
    signed_distance: bool = True
    _neighbors: tuple = field(init=False, repr=False, compare=False)
    _component: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        corr = np.asarray(self.corr, dtype=np.float64)
        d = corr.shape[0]
        if corr.shape != (d, d):
            raise ValueError("correlation matrix must be square")
        if not 0.0 < self.threshold <= 1.0:
            raise ValueError("threshold must lie in (0, 1]")
        if len(self.names) != d:
            raise ValueError("names length must equal node count")
        corr = corr.copy()
        corr.setflags(write=False)
        object.__setattr__(self, "corr", corr)
        object.__setattr__(self, "names", tuple(self.names))

        neigh = [[] for _ in range(d)]
        for i in range(d):
            for j in range(i + 1, d):
                if abs(corr[i, j]) >= self.threshold:
                    neigh[i].append(j)
                    neigh[j].append(i)
        object.__setattr__(
            self, "_neighbors", tuple(tuple(v) for v in neigh)
        )
        # connected-component labels via BFS sweep
        comp = np.full(d, -1, dtype=np.int64)
        label = 0
        for start in range(d):
            if comp[start] >= 0:
                continue
            comp[start] = label
            queue = deque([start])
            while queue:
                u = queue.popleft()
                for v in neigh[u]:
                    if comp[v] < 0:
                        comp[v] = label
                        queue.append(v)
            label += 1
        comp.setflags(write=False)
        object.__setattr__(self, "_component", comp)

    @property
    def node_count(self):
        return self.corr.shape[0]

    @property
    def edges(self):
        return tuple(
            (i, j)
            for i in range(self.node_count)
            for j in self._neighbors[i]
            if j > i
        )

    def neighbors(self, i):
        return self._neighbors[i]

    def _check_node(self, i):
        if not 0 <= i < self.node_count:
            raise IndexError(f"node {i} out of range [0, {self.node_count})")


def build_graph(dataset, threshold, signed_distance=True):
    """Correlation graph over a standardized dataset's columns."""
    if not 0.0 < threshold <= 1.0:
        raise ValueError("threshold must lie in (0, 1]")
    feats = dataset.features
    n, d = feats.shape
    means = feats.mean(axis=0)
    stds = feats.std(axis=0)
    safe = np.where(stds == 0.0, 1.0, stds)
    z = (feats - means) / safe
    corr = (z.T @ z) / n
    corr[stds == 0.0, :] = 0.0
    corr[:, stds == 0.0] = 0.0
    np.fill_diagonal(corr, 1.0)
    corr = np.clip(corr, -1.0, 1.0)
    return CorrelationGraph(corr, threshold, dataset.names, signed_distance)


def path_exists(g, a, b):
    """Breadth-first reachability between two distinct nodes."""
    g._check_node(a)
    g._check_node(b)
    if a == b:
        raise ValueError("path_exists needs two distinct nodes")
    return bool(g._component[a] == g._component[b])


def euclid_distance(g, i, j):
    """Distance between standardized columns as a function of corr.

    d(i, j) = sqrt(2 * (1 - r)), clamped below at 1e-6 so duplicated
    columns keep scale-terms finite. r is signed unless the graph was
    built with signed_distance=False.
    """
    g._check_node(i)
    g._check_node(j)
    if i == j:
        raise ValueError("euclid_distance needs two distinct nodes")
    r = float(g.corr[i, j])
    if not g.signed_distance:
        r = abs(r)
    gap = 2.0 * (1.0 - r)
    if gap < 0.0:
        gap = 0.0
    return max(math.sqrt(gap), MIN_DISTANCE)


def distance_to_set(g, i, sensitive):
    """Distance from node i to the closest reachable sensitive node.

    Returns None when no sensitive node is reachable. i itself must
    not be sensitive; callers handle sensitive nodes separately.
    """
    if not sensitive:
        raise ValueError("sensitive set must be nonempty")
    if i in sensitive:
        raise ValueError(f"node {i} is in the sensitive set")
    best = None
    for b in sorted(sensitive):
        if path_exists(g, i, b):
            dist = euclid_distance(g, i, b)
            if best is None or dist < best:
                best = dist
    return best


def export_edges(g):
    """Edge rows (name_a, name_b, correlation, distance) for CSV export."""
    rows = []
    for i, j in g.edges:
        rows.append(
            (g.names[i], g.names[j], float(g.corr[i, j]),
             euclid_distance(g, i, j))
        )
    return rows
