"""Slow, loop-based reference implementations used only by the tests.

Nothing here imports the package's kernels: profiles are summed entry by
entry, fits go through explicit design matrices, and residuals are
accumulated in plain Python loops.
"""

import numpy as np


def naive_profile_1d(x):
    x = [float(v) for v in x]
    mean = sum(x) / len(x)
    out, acc = [], 0.0
    for v in x:
        acc += v - mean
        out.append(acc)
    return np.array(out)


def naive_profile_2d(img):
    img = np.asarray(img, dtype=float)
    dev = img - img.mean()
    m, n = img.shape
    out = np.empty((m, n))
    for i in range(m):
        for j in range(n):
            out[i, j] = dev[: i + 1, : j + 1].sum()
    return out


def lstsq_line(t, y):
    design = np.column_stack([np.asarray(t, float), np.ones(len(t))])
    (slope, intercept), *_ = np.linalg.lstsq(design, np.asarray(y, float), rcond=None)
    return slope, intercept


def normal_equation_plane(window):
    """Solve the 3x3 normal equations built entry by entry."""
    s = len(window)
    sums = np.zeros((3, 3))
    rhs = np.zeros(3)
    for i in range(1, s + 1):
        for j in range(1, s + 1):
            row = (i, j, 1.0)
            z = window[i - 1][j - 1]
            for p in range(3):
                rhs[p] += row[p] * z
                for q in range(3):
                    sums[p, q] += row[p] * row[q]
    return np.linalg.solve(sums, rhs)


def _box_residuals_1d(profile, s):
    boxes = []
    for l in range(len(profile) // s):
        seg = profile[l * s:(l + 1) * s]
        t = np.arange(1, s + 1)
        slope, intercept = lstsq_line(t, seg)
        boxes.append([seg[k] - (slope * t[k] + intercept) for k in range(s)])
    return boxes


def _window_residuals_2d(profile, s):
    m, n = profile.shape
    windows = []
    for r in range(m // s):
        for c in range(n // s):
            win = profile[r * s:(r + 1) * s, c * s:(c + 1) * s]
            a, b, k = normal_equation_plane(win)
            res = [[win[i - 1, j - 1] - (a * i + b * j + k) for j in range(1, s + 1)]
                   for i in range(1, s + 1)]
            windows.append(res)
    return windows


def naive_cross_f2_1d(x, y, scales):
    px, py = naive_profile_1d(x), naive_profile_1d(y)
    out = []
    for s in scales:
        rx, ry = _box_residuals_1d(px, s), _box_residuals_1d(py, s)
        acc, count = 0.0, 0
        for bx, by in zip(rx, ry):
            for u, v in zip(bx, by):
                acc += u * v
                count += 1
        out.append(acc / count)
    return np.array(out)


def naive_fluctuation_1d(x, scales):
    return np.sqrt(naive_cross_f2_1d(x, x, scales))


def naive_cross_f2_2d(a, b, scales):
    pa, pb = naive_profile_2d(a), naive_profile_2d(b)
    out = []
    for s in scales:
        wa, wb = _window_residuals_2d(pa, s), _window_residuals_2d(pb, s)
        per_window = []
        for ra, rb in zip(wa, wb):
            acc = 0.0
            for i in range(s):
                for j in range(s):
                    acc += ra[i][j] * rb[i][j]
            per_window.append(acc / (s * s))
        out.append(sum(per_window) / len(per_window))
    return np.array(out)


def naive_fluctuation_2d(img, scales):
    return np.sqrt(naive_cross_f2_2d(img, img, scales))


def geometric_scales(lo, hi, n):
    """Rounded log-uniform points, written without numpy.geomspace."""
    import math

    ratio = (hi / lo) ** (1.0 / (n - 1))
    pts = sorted({int(math.floor(lo * ratio ** k + 0.5)) for k in range(n)})
    return pts
