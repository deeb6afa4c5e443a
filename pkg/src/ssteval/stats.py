"""Correlation statistics: Pearson r with two-tailed significance,
Williams/Steiger tests for the difference of two dependent correlations
sharing one variable, and significance clustering over an ordered list of
variants.

The Student-t tail probability is computed from the regularized incomplete
beta function (continued fraction, modified Lentz), keeping the package
free of heavyweight numeric dependencies.
"""

import logging
import math

from .types import CorrelationResult, ValidationError

log = logging.getLogger(__name__)

_TINY = 1e-300
_EPS = 1e-15


def _betacf(a, b, x):
    """Continued fraction for the incomplete beta function."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, 300):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    log.warning("incomplete beta continued fraction did not converge")
    return h


def reg_inc_beta(a, b, x):
    """Regularized incomplete beta I_x(a, b)."""
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_bt = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
        + a * math.log(x) + b * math.log1p(-x)
    )
    bt = math.exp(ln_bt)
    if x < (a + 1.0) / (a + b + 2.0):
        return bt * _betacf(a, b, x) / a
    return 1.0 - bt * _betacf(b, a, 1.0 - x) / b


def t_two_tailed_p(t, df) -> float:
    """P(|T| >= |t|) for Student-t with df degrees of freedom."""
    if df <= 0:
        raise ValidationError(f"degrees of freedom must be positive, got {df}")
    t = float(t)
    if t == 0.0:
        return 1.0
    if math.isinf(t):
        return 0.0
    return reg_inc_beta(df / 2.0, 0.5, df / (df + t * t))


def pearson(x, y, x_label="x", y_label="y") -> CorrelationResult:
    """Sample Pearson correlation with a two-tailed p-value from
    t = r * sqrt((n-2) / (1-r^2)) on n-2 degrees of freedom."""
    n = len(x)
    if len(y) != n:
        raise ValidationError(f"length mismatch: {n} vs {len(y)}")
    if n < 3:
        raise ValidationError(f"need at least 3 points, got {n}")
    mx = math.fsum(x) / n
    my = math.fsum(y) / n
    sxx = math.fsum((xi - mx) ** 2 for xi in x)
    syy = math.fsum((yi - my) ** 2 for yi in y)
    if sxx == 0.0:
        raise ValidationError(f"zero variance in {x_label}")
    if syy == 0.0:
        raise ValidationError(f"zero variance in {y_label}")
    sxy = math.fsum((xi - mx) * (yi - my) for xi, yi in zip(x, y))
    r = sxy / math.sqrt(sxx * syy)
    r = max(-1.0, min(1.0, r))
    if abs(r) == 1.0:
        p = 0.0
    else:
        t = r * math.sqrt((n - 2) / (1.0 - r * r))
        p = t_two_tailed_p(t, n - 2)
    return CorrelationResult(x_label=x_label, y_label=y_label, r=r, n=n, p=p)


def steiger_dependent(r_jk, r_jh, r_kh, n, method="williams"):
    """Significance of the difference between two dependent correlations
    r_jk and r_jh that share the variable j, given the correlation r_kh
    between k and h. Returns (statistic, two-tailed p).

    method="williams": Williams' t with n-3 degrees of freedom (default).
    method="steiger-z": Fisher-z based asymptotic normal variant; the two
    can differ in the third decimal of p.
    """
    for name, r in (("r_jk", r_jk), ("r_jh", r_jh), ("r_kh", r_kh)):
        if not -1.0 <= r <= 1.0:
            raise ValidationError(f"{name}={r} outside [-1, 1]")
    if n < 4:
        raise ValidationError(f"need n >= 4, got {n}")

    diff = r_jk - r_jh
    if method == "williams":
        det = 1.0 - r_jk**2 - r_jh**2 - r_kh**2 + 2.0 * r_jk * r_jh * r_kh
        if det <= 1e-12:
            log.warning(
                "degenerate correlation structure (|R|=%.3g <= 0); p set to 1", det
            )
            return 0.0, 1.0
        if diff == 0.0:
            return 0.0, 1.0
        avg = 0.5 * (r_jk + r_jh)
        denom = 2.0 * det * (n - 1) / (n - 3) + avg * avg * (1.0 - r_kh) ** 3
        t = diff * math.sqrt((n - 1) * (1.0 + r_kh) / denom)
        return t, t_two_tailed_p(t, n - 3)

    if method == "steiger-z":
        if abs(r_jk) == 1.0 or abs(r_jh) == 1.0:
            raise ValidationError("Fisher z undefined for |r| = 1")
        if diff == 0.0:
            return 0.0, 1.0
        avg = 0.5 * (r_jk + r_jh)
        det = 1.0 - 2.0 * avg * avg
        cov = (r_kh * det - 0.5 * avg * avg * (1.0 - 2.0 * avg * avg - r_kh * r_kh))
        cov /= (1.0 - avg * avg) ** 2
        z1 = math.atanh(r_jk)
        z2 = math.atanh(r_jh)
        denom = 2.0 - 2.0 * cov
        if denom <= 1e-12:
            log.warning("degenerate covariance in steiger-z; p set to 1")
            return 0.0, 1.0
        z = (z1 - z2) * math.sqrt((n - 3) / denom)
        return z, math.erfc(abs(z) / math.sqrt(2.0))

    raise ValidationError(f"unknown method {method!r}")


def significance_clusters(p_matrix, threshold):
    """Boundary positions in a correlation-ordered variant list.

    A boundary after index k means every variant at or before k differs
    from every variant after k with p below the threshold. Returns the
    sorted list of such k (0-based; k = 0 puts the first variant alone).
    """
    size = len(p_matrix)
    for row in p_matrix:
        if len(row) != size:
            raise ValidationError("p matrix must be square")
    for i in range(size):
        for j in range(i + 1, size):
            if p_matrix[i][j] != p_matrix[j][i]:
                raise ValidationError(f"p matrix not symmetric at ({i},{j})")
    boundaries = []
    for k in range(size - 1):
        if all(
            p_matrix[a][b] < threshold
            for a in range(k + 1)
            for b in range(k + 1, size)
        ):
            boundaries.append(k)
    return boundaries
