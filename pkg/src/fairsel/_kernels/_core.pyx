# cython: boundscheck=False, wraparound=False, cdivision=True
# cython: language_level=3
"""Compiled tree-fitting kernels.

Must stay op-for-op equivalent to _pure.py: same splitmix64 stream,
same node stack discipline, same per-candidate IEEE arithmetic.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY
from libc.stdlib cimport free, malloc

cnp.import_array()

BACKEND = "compiled"

ctypedef unsigned long long u64


cdef inline u64 _mix64(u64 z) nogil:
    z = (z ^ (z >> 30)) * <u64>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <u64>0x94D049BB133111EB
    return z ^ (z >> 31)


cdef struct Rng:
    u64 state


cdef inline u64 _rng_next(Rng* r) nogil:
    r.state += <u64>0x9E3779B97F4A7C15
    return _mix64(r.state)


cdef void _sort_pairs(double* v, int* l, long lo, long hi) nogil:
    # Hoare quicksort with middle pivot; labels ride along with values.
    cdef long i, j, mid
    cdef double pivot, tv
    cdef int tl
    while lo < hi:
        mid = lo + ((hi - lo) >> 1)
        pivot = v[mid]
        i = lo - 1
        j = hi + 1
        while True:
            i += 1
            while v[i] < pivot:
                i += 1
            j -= 1
            while v[j] > pivot:
                j -= 1
            if i >= j:
                break
            tv = v[i]; v[i] = v[j]; v[j] = tv
            tl = l[i]; l[i] = l[j]; l[j] = tl
        if j - lo < hi - (j + 1):
            _sort_pairs(v, l, lo, j)
            lo = j + 1
        else:
            _sort_pairs(v, l, j + 1, hi)
            hi = j


cdef double _scan_feature(double* v, int* lab, long n_node, long pos_total,
                          double* out_thr) nogil:
    # Best boundary score for one feature, INFINITY if the column is
    # constant within the node. Score: sum over children of
    # pos*(n-pos)/n, monotone in weighted Gini.
    cdef long i, cum = 0
    cdef long n_l, n_r, pos_l, pos_r
    cdef double best = INFINITY
    cdef double score, thr, lo, hi
    _sort_pairs(v, lab, 0, n_node - 1)
    for i in range(1, n_node):
        cum += lab[i - 1]
        if v[i - 1] == v[i]:
            continue
        n_l = i
        n_r = n_node - i
        pos_l = cum
        pos_r = pos_total - pos_l
        score = (<double>(pos_l * (n_l - pos_l)) / <double>n_l
                 + <double>(pos_r * (n_r - pos_r)) / <double>n_r)
        if score < best:
            best = score
            lo = v[i - 1]
            hi = v[i]
            thr = (lo + hi) * 0.5
            if thr >= hi:
                thr = lo
            out_thr[0] = thr
    return best


cdef struct Frame:
    long nid
    long s
    long e
    long depth


def fit_tree(const double[:, ::1] X, const int[::1] y, int max_depth,
             long min_samples_split, int max_features, bint bootstrap,
             u64 seed):
    """Grow a CART classification tree, returned as flat node arrays."""
    cdef long n = X.shape[0]
    cdef int k = <int>X.shape[1]
    cdef long cap = 2 * n + 1

    feature_arr = np.full(cap, -1, dtype=np.int32)
    threshold_arr = np.zeros(cap, dtype=np.float64)
    left_arr = np.full(cap, -1, dtype=np.int32)
    right_arr = np.full(cap, -1, dtype=np.int32)
    value_arr = np.zeros(cap, dtype=np.float64)

    cdef int[::1] feature = feature_arr
    cdef double[::1] threshold = threshold_arr
    cdef int[::1] left = left_arr
    cdef int[::1] right = right_arr
    cdef double[::1] value = value_arr

    cdef long n_nodes
    with nogil:
        n_nodes = _fit(X, y, n, k, max_depth, min_samples_split,
                       max_features, bootstrap, seed,
                       feature, threshold, left, right, value)
    if n_nodes < 0:
        raise MemoryError("tree fit allocation failed")
    return (feature_arr[:n_nodes].copy(), threshold_arr[:n_nodes].copy(),
            left_arr[:n_nodes].copy(), right_arr[:n_nodes].copy(),
            value_arr[:n_nodes].copy())


cdef long _fit(const double[:, ::1] X, const int[::1] y, long n, int k, int max_depth,
               long min_samples_split, int max_features, bint bootstrap,
               u64 seed, int[::1] feature, double[::1] threshold,
               int[::1] left, int[::1] right, double[::1] value) nogil:
    cdef Rng rng
    rng.state = seed
    cdef long* samples = <long*>malloc(n * sizeof(long))
    cdef long* part = <long*>malloc(n * sizeof(long))
    cdef double* buf_v = <double*>malloc(n * sizeof(double))
    cdef int* buf_y = <int*>malloc(n * sizeof(int))
    cdef int* fidx = <int*>malloc(k * sizeof(int))
    cdef Frame* stack = <Frame*>malloc((2 * n + 2) * sizeof(Frame))
    if (samples == NULL or part == NULL or buf_v == NULL or buf_y == NULL
            or fidx == NULL or stack == NULL):
        free(samples); free(part); free(buf_v); free(buf_y)
        free(fidx); free(stack)
        return -1

    cdef long i, j, s, e, nid, n_node, pos, mid, depth
    cdef long n_nodes = 1, top = 0
    cdef int f, fi, m, r, tmp
    cdef double best_score, best_thr, score, thr, xv
    cdef long best_f
    cdef bint sample_feats = max_features < k

    if bootstrap:
        for i in range(n):
            samples[i] = <long>(_rng_next(&rng) % <u64>n)
    else:
        for i in range(n):
            samples[i] = i

    stack[0].nid = 0
    stack[0].s = 0
    stack[0].e = n
    stack[0].depth = 0
    top = 1

    while top > 0:
        top -= 1
        nid = stack[top].nid
        s = stack[top].s
        e = stack[top].e
        depth = stack[top].depth
        n_node = e - s
        pos = 0
        for i in range(s, e):
            pos += y[samples[i]]
        value[nid] = <double>pos / <double>n_node
        if (depth >= max_depth or n_node < min_samples_split
                or pos == 0 or pos == n_node):
            continue

        if sample_feats:
            for fi in range(k):
                fidx[fi] = fi
            m = max_features
            for fi in range(m):
                r = <int>(_rng_next(&rng) % <u64>(k - fi))
                tmp = fidx[fi]; fidx[fi] = fidx[fi + r]; fidx[fi + r] = tmp
            # ascending so lowest-index tie-break holds within the sample
            for fi in range(1, m):
                tmp = fidx[fi]
                j = fi - 1
                while j >= 0 and fidx[j] > tmp:
                    fidx[j + 1] = fidx[j]
                    j -= 1
                fidx[j + 1] = tmp
        else:
            m = k

        best_score = INFINITY
        best_f = -1
        best_thr = 0.0
        for fi in range(m):
            f = fidx[fi] if sample_feats else fi
            for i in range(n_node):
                buf_v[i] = X[samples[s + i], f]
                buf_y[i] = y[samples[s + i]]
            score = _scan_feature(buf_v, buf_y, n_node, pos, &thr)
            if score < best_score:
                best_score = score
                best_thr = thr
                best_f = f
        if best_f < 0:
            continue

        # stable two-pass partition on x <= thr
        j = 0
        for i in range(s, e):
            xv = X[samples[i], best_f]
            if xv <= best_thr:
                part[j] = samples[i]
                j += 1
        mid = s + j
        for i in range(s, e):
            xv = X[samples[i], best_f]
            if xv > best_thr:
                part[j] = samples[i]
                j += 1
        for i in range(s, e):
            samples[i] = part[i - s]

        feature[nid] = <int>best_f
        threshold[nid] = best_thr
        left[nid] = <int>n_nodes
        right[nid] = <int>(n_nodes + 1)
        stack[top].nid = n_nodes + 1
        stack[top].s = mid
        stack[top].e = e
        stack[top].depth = depth + 1
        top += 1
        stack[top].nid = n_nodes
        stack[top].s = s
        stack[top].e = mid
        stack[top].depth = depth + 1
        top += 1
        n_nodes += 2

    free(samples); free(part); free(buf_v); free(buf_y)
    free(fidx); free(stack)
    return n_nodes


def predict_tree(const int[::1] feature, const double[::1] threshold,
                 const int[::1] left, const int[::1] right,
                 const double[::1] value, const double[:, ::1] X):
    """Route rows to leaves; returns each row's leaf class-1 fraction."""
    cdef long n = X.shape[0]
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef long i
    cdef int node
    with nogil:
        for i in range(n):
            node = 0
            while feature[node] >= 0:
                if X[i, feature[node]] <= threshold[node]:
                    node = left[node]
                else:
                    node = right[node]
            out[i] = value[node]
    return out_arr
