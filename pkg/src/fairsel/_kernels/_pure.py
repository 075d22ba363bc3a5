"""Pure-numpy fallback for the tree-fitting kernels.

Mirrors the compiled core op for op: same splitmix64 draws, same node
stack discipline, same IEEE arithmetic per split candidate, so both
backends grow bit-identical trees from the same seed.
"""

import numpy as np

BACKEND = "pure"

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def _mix64(z):
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


class _SplitMix64:
    """Deterministic 64-bit stream; the kernels' only randomness source."""

    __slots__ = ("state",)

    def __init__(self, seed):
        self.state = seed & _MASK64

    def next(self):
        self.state = (self.state + _GAMMA) & _MASK64
        return _mix64(self.state)


def _sample_features(rng, k, m):
    # partial Fisher-Yates, then ascending so the lowest-index tie-break
    # applies within the sampled candidate set
    idx = list(range(k))
    for j in range(m):
        r = rng.next() % (k - j)
        idx[j], idx[j + r] = idx[j + r], idx[j]
    return sorted(idx[:m])


def _best_split_for_feature(values, labels, pos_total):
    """Scan one feature's sorted values for the best boundary.

    Returns (score, threshold) or None when the column is constant.
    The score is sum over children of pos*(n-pos)/n, monotone in the
    weighted Gini impurity.
    """
    n = values.shape[0]
    order = np.argsort(values, kind="stable")
    v = values[order]
    cum_pos = np.cumsum(labels[order], dtype=np.int64)
    boundary = np.nonzero(v[1:] != v[:-1])[0] + 1
    if boundary.size == 0:
        return None
    n_l = boundary
    n_r = n - n_l
    pos_l = cum_pos[boundary - 1]
    pos_r = pos_total - pos_l
    score = pos_l * (n_l - pos_l) / n_l + pos_r * (n_r - pos_r) / n_r
    j = int(np.argmin(score))
    i = int(boundary[j])
    lo = float(v[i - 1])
    hi = float(v[i])
    thr = (lo + hi) * 0.5
    if thr >= hi:
        thr = lo
    return float(score[j]), thr


def fit_tree(X, y, max_depth, min_samples_split, max_features, bootstrap, seed):
    """Grow a CART classification tree, returned as flat node arrays.

    feature[i] == -1 marks a leaf; value[i] is the class-1 fraction of
    the node's samples. left/right index into the same arrays.
    """
    n, k = X.shape
    rng = _SplitMix64(seed)
    if bootstrap:
        samples = np.fromiter(
            (rng.next() % n for _ in range(n)), dtype=np.int64, count=n
        )
    else:
        samples = np.arange(n, dtype=np.int64)

    feature = []
    threshold = []
    left = []
    right = []
    value = []

    def new_node():
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        value.append(0.0)
        return len(feature) - 1

    root = new_node()
    stack = [(root, 0, n, 0)]
    while stack:
        nid, s, e, depth = stack.pop()
        node_idx = samples[s:e]
        n_node = e - s
        pos = int(y[node_idx].sum())
        value[nid] = pos / n_node
        if (
            depth >= max_depth
            or n_node < min_samples_split
            or pos == 0
            or pos == n_node
        ):
            continue
        if max_features < k:
            cand = _sample_features(rng, k, max_features)
        else:
            cand = range(k)
        best_score = np.inf
        best_f = -1
        best_thr = 0.0
        labels_node = y[node_idx]
        for f in cand:
            found = _best_split_for_feature(X[node_idx, f], labels_node, pos)
            if found is not None and found[0] < best_score:
                best_score, best_thr = found
                best_f = f
        if best_f < 0:
            continue
        go_left = X[node_idx, best_f] <= best_thr
        samples[s:e] = np.concatenate((node_idx[go_left], node_idx[~go_left]))
        mid = s + int(go_left.sum())
        feature[nid] = best_f
        threshold[nid] = best_thr
        lid = new_node()
        rid = new_node()
        left[nid] = lid
        right[nid] = rid
        stack.append((rid, mid, e, depth + 1))
        stack.append((lid, s, mid, depth + 1))

    return (
        np.asarray(feature, dtype=np.int32),
        np.asarray(threshold, dtype=np.float64),
        np.asarray(left, dtype=np.int32),
        np.asarray(right, dtype=np.int32),
        np.asarray(value, dtype=np.float64),
    )


def predict_tree(feature, threshold, left, right, value, X):
    """Route rows to leaves; returns each row's leaf class-1 fraction."""
    n = X.shape[0]
    node = np.zeros(n, dtype=np.int32)
    while True:
        f = feature[node]
        active = f >= 0
        if not active.any():
            break
        rows = np.nonzero(active)[0]
        fa = f[rows]
        go_left = X[rows, fa] <= threshold[node[rows]]
        node[rows] = np.where(go_left, left[node[rows]], right[node[rows]])
    return value[node]
