"""Descriptive and inferential statistics over plain Python sequences.

All functions take and return builtin floats/lists so results can be
compared bit-for-bit with the code snippets emitted by script export.
"""

import math

from ..errors import (
    EmptySample,
    LengthMismatch,
    NonPositive,
    OutOfRange,
    TooFew,
    ZeroTotal,
    ZeroVariance,
)
from .special import normal_sf, student_t_two_sided


def quartile_bounds(xs):
    """Five boundaries (min, q1, median, q3, max) by linear interpolation."""
    if len(xs) < 4:
        raise TooFew("I need at least 4 values to compute quartiles.")
    data = sorted(float(v) for v in xs)
    n = len(data)

    def interpolate(p):
        h = (n - 1) * p
        lo = math.floor(h)
        hi = min(lo + 1, n - 1)
        return data[lo] + (h - lo) * (data[hi] - data[lo])

    return (data[0], interpolate(0.25), interpolate(0.5), interpolate(0.75), data[n - 1])


def mean(xs):
    if len(xs) == 0:
        raise TooFew("I need at least one value to compute a mean.")
    return sum(float(v) for v in xs) / len(xs)


def variance(xs):
    """Sample variance with the n-1 denominator."""
    if len(xs) < 2:
        raise TooFew("I need at least two values to compute a variance.")
    center = mean(xs)
    return sum((float(v) - center) ** 2 for v in xs) / (len(xs) - 1)


def log_transform(xs):
    if any(float(v) <= 0.0 for v in xs):
        raise NonPositive("I can only log-transform strictly positive values.")
    return [math.log(float(v)) for v in xs]


def descriptive(xs, stat):
    if stat == "mean":
        return mean(xs)
    if stat == "variance":
        return variance(xs)
    if stat == "log_transform":
        return log_transform(xs)
    raise ValueError("unknown descriptive statistic: %r" % (stat,))


def pearson(x, y):
    """Correlation r and two-sided p from the t approximation."""
    if len(x) != len(y):
        raise LengthMismatch("The two arrays must have the same length.")
    n = len(x)
    if n < 3:
        raise TooFew("I need at least 3 paired values for a correlation.")
    mx = mean(x)
    my = mean(y)
    sxx = sum((float(v) - mx) ** 2 for v in x)
    syy = sum((float(v) - my) ** 2 for v in y)
    if sxx == 0.0 or syy == 0.0:
        raise ZeroVariance("Correlation needs nonzero variance in both arrays.")
    sxy = sum((float(a) - mx) * (float(b) - my) for a, b in zip(x, y))
    r = sxy / math.sqrt(sxx * syy)
    r = max(-1.0, min(1.0, r))
    if abs(r) == 1.0:
        return (r, 0.0)
    t = r * math.sqrt((n - 2) / (1.0 - r * r))
    return (r, student_t_two_sided(t, n - 2))


def _midranks(values):
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    tie_sizes = []
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        shared = (i + j) / 2.0 + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = shared
        tie_sizes.append(j - i + 1)
        i = j + 1
    return ranks, tie_sizes


def _rank_sum_counts(total, size):
    """counts[s] = ways to choose `size` distinct ranks from 1..total summing to s."""
    top = total * (total + 1) // 2
    table = [[0] * (top + 1) for _ in range(size + 1)]
    table[0][0] = 1
    for rank in range(1, total + 1):
        for k in range(min(rank, size), 0, -1):
            row = table[k]
            prev = table[k - 1]
            for s in range(top, rank - 1, -1):
                if prev[s - rank]:
                    row[s] += prev[s - rank]
    return table[size]


def mann_whitney(x, y):
    """U = min(U_x, U_y) with midranks; exact p for small untied samples."""
    if len(x) == 0 or len(y) == 0:
        raise EmptySample("Both samples must be nonempty.")
    n = len(x)
    m = len(y)
    combined = [float(v) for v in x] + [float(v) for v in y]
    ranks, tie_sizes = _midranks(combined)
    r_x = sum(ranks[:n])
    u_x = r_x - n * (n + 1) / 2.0
    u_y = n * m - u_x
    u = min(u_x, u_y)
    has_ties = any(t > 1 for t in tie_sizes)
    if max(n, m) <= 10 and not has_ties:
        counts = _rank_sum_counts(n + m, n)
        base = n * (n + 1) // 2
        favorable = 0
        total = 0
        for s, ways in enumerate(counts):
            if not ways:
                continue
            u_s = s - base
            total += ways
            if min(u_s, n * m - u_s) <= u:
                favorable += ways
        return (u, favorable / total)
    total_n = n + m
    sigma_sq = (
        n * m / 12.0
        * ((total_n + 1) - sum(t ** 3 - t for t in tie_sizes) / (total_n * (total_n - 1)))
    )
    if sigma_sq <= 0.0:
        return (u, 1.0)
    # Continuity correction: shrink the deviation by half a step.
    z = max(0.0, abs(u - n * m / 2.0) - 0.5) / math.sqrt(sigma_sq)
    return (u, min(1.0, 2.0 * normal_sf(z)))


def welch_parts(x, y):
    """Welch statistic and Satterthwaite degrees of freedom."""
    if len(x) < 2 or len(y) < 2:
        raise TooFew("I need at least two values in each sample for a t-test.")
    vx = variance(x) / len(x)
    vy = variance(y) / len(y)
    if vx == 0.0 and vy == 0.0:
        raise ZeroVariance("At least one sample must have nonzero variance.")
    t = (mean(x) - mean(y)) / math.sqrt(vx + vy)
    dof = (vx + vy) ** 2 / (vx ** 2 / (len(x) - 1) + vy ** 2 / (len(y) - 1))
    return (t, dof)


def welch_t_test(x, y):
    t, dof = welch_parts(x, y)
    if t == 0.0:
        return (0.0, 1.0)
    return (t, student_t_two_sided(t, dof))


def holm_correct(pvals):
    """Step-down adjusted p-values, returned in the input order."""
    ps = [float(p) for p in pvals]
    if any(p < 0.0 or p > 1.0 for p in ps):
        raise OutOfRange("All p-values must lie in [0, 1].")
    m = len(ps)
    order = sorted(range(m), key=lambda i: ps[i])
    adjusted = [0.0] * m
    running = 0.0
    for j, idx in enumerate(order):
        running = max(running, (m - j) * ps[idx])
        adjusted[idx] = min(1.0, running)
    return adjusted


def odds_ratio(a_counts, b_counts):
    """Per-category smoothed odds ratios between two count vectors."""
    if len(a_counts) != len(b_counts):
        raise LengthMismatch("The two count arrays must have the same length.")
    total_a = sum(float(v) for v in a_counts)
    total_b = sum(float(v) for v in b_counts)
    if total_a <= 0.0 or total_b <= 0.0:
        raise ZeroTotal("Both groups need a positive total count.")
    ratios = []
    for a, b in zip(a_counts, b_counts):
        a = float(a)
        b = float(b)
        odds_a = (a + 0.5) / (total_a - a + 0.5)
        odds_b = (b + 0.5) / (total_b - b + 0.5)
        ratios.append(odds_a / odds_b)
    return ratios
