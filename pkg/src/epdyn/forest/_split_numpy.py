"""Pure-numpy split-search kernel: the reference semantics.

Given the gathered candidate-feature block of one tree node, find the
(feature, threshold) pair minimizing weighted Gini impurity. Minimizing
    n_L * gini_L + n_R * gini_R
is equivalent to maximizing
    score = (sum_c c_L^2) / n_L + (sum_c c_R^2) / n_R,
and because the class counts are integers the score is one exactly-rounded
division per side plus one addition -- the compiled kernel evaluates the
same expression, so both backends pick bit-identical splits.

Tie policy: strictly greater score wins, so the earliest candidate feature
and the lowest boundary keep priority. Thresholds are midpoints of adjacent
distinct values, clamped down to the lower value if rounding would reach the
upper one.
"""

import numpy as np


def best_split_gathered(values, orders, labels, n_classes, min_leaf):
    """Best split over the gathered node block.

    values: (n, k) float64, column j = candidate feature j over node samples
    orders: (n, k) int64, per-column argsort of `values`
    labels: (n,) int64 class codes
    Returns (feature_index, threshold, score); feature_index is -1 when no
    valid split exists.
    """
    n, k = values.shape
    if n < 2 or k == 0:
        return -1, 0.0, -np.inf
    sorted_vals = np.take_along_axis(values, orders, axis=0)
    sorted_labels = labels[orders]  # (n, k)
    onehot = sorted_labels[:, :, None] == np.arange(n_classes, dtype=np.int64)
    cum = np.cumsum(onehot, axis=0, dtype=np.int64)
    count_left = cum[:-1]  # (n-1, k, K): class counts left of boundary i
    count_right = cum[-1][None, :, :] - count_left
    sq_left = np.einsum("bjc,bjc->bj", count_left, count_left)
    sq_right = np.einsum("bjc,bjc->bj", count_right, count_right)
    n_left = np.arange(1, n, dtype=np.int64)[:, None]
    n_right = n - n_left
    score = sq_left / n_left + sq_right / n_right
    valid = (
        (sorted_vals[:-1] < sorted_vals[1:])
        & (n_left >= min_leaf)
        & (n_right >= min_leaf)
    )
    score = np.where(valid, score, -np.inf)

    best_j, best_thr, best_score = -1, 0.0, -np.inf
    col_best_idx = np.argmax(score, axis=0)  # first maximum per column
    col_best = score[col_best_idx, np.arange(k)]
    for j in range(k):
        if col_best[j] > best_score:
            i = int(col_best_idx[j])
            lo = sorted_vals[i, j]
            hi = sorted_vals[i + 1, j]
            thr = 0.5 * (lo + hi)
            if thr >= hi:  # midpoint rounded up to the upper value
                thr = lo
            best_j, best_thr, best_score = j, float(thr), float(col_best[j])
    return best_j, best_thr, best_score
