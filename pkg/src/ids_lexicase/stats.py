"""Success-rate significance testing: two-proportion z-test + Holm correction.

The comparison of record is directional ("is strategy A better than
baseline B?"): a comparison in the wrong direction carries no evidence and
is assigned p = 1 before correction. Within one family (all informed
configurations against the random baseline at the same problem and
down-sample rate), p-values are Holm-adjusted and starred at the
0.1 / 0.05 / 0.01 levels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

SIGNIFICANCE_LEVELS = (0.01, 0.05, 0.1)
_STARS = {0.01: "***", 0.05: "**", 0.1: "*"}


def normal_cdf(z: float) -> float:
    """Standard normal CDF via the complementary error function."""
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


def two_proportion_z_test(s_a: int, n_a: int, s_b: int, n_b: int,
                          alternative: str = "greater") -> tuple[float, float]:
    """Pooled two-proportion z statistic and p-value.

    alternative="greater" tests whether group a's proportion exceeds group
    b's; "two-sided" tests for any difference. A degenerate pooled
    proportion (0 or 1) carries no evidence: z=0, p=1.
    """
    if n_a < 1 or n_b < 1:
        raise ValueError("sample sizes must be >= 1")
    if not (0 <= s_a <= n_a and 0 <= s_b <= n_b):
        raise ValueError("success counts must lie in [0, n]")
    if alternative not in ("greater", "two-sided"):
        raise ValueError(f"unknown alternative: {alternative!r}")
    pooled = (s_a + s_b) / (n_a + n_b)
    if pooled in (0.0, 1.0):
        return 0.0, 1.0
    se = math.sqrt(pooled * (1.0 - pooled) * (1.0 / n_a + 1.0 / n_b))
    z = (s_a / n_a - s_b / n_b) / se
    if alternative == "greater":
        p = 1.0 - normal_cdf(z)
    else:
        p = 2.0 * (1.0 - normal_cdf(abs(z)))
    return z, min(p, 1.0)


def bonferroni_holm(p_values: list[float]) -> list[float]:
    """Step-down Holm adjustment; input order preserved.

    Sorted ascending, p_(i) is scaled by (m - i) and a running maximum
    enforces monotonicity; everything caps at 1.
    """
    m = len(p_values)
    if m == 0:
        return []
    for p in p_values:
        if not 0 <= p <= 1:
            raise ValueError(f"p-value out of [0, 1]: {p}")
    order = sorted(range(m), key=lambda i: p_values[i])
    adjusted = [0.0] * m
    running = 0.0
    for rank, i in enumerate(order):
        running = max(running, (m - rank) * p_values[i])
        adjusted[i] = min(1.0, running)
    return adjusted


def significance_level(p_adjusted: float) -> float | None:
    """Finest significance level reached, or None."""
    for level in SIGNIFICANCE_LEVELS:
        if p_adjusted < level:
            return level
    return None


def stars(p_adjusted: float) -> str:
    level = significance_level(p_adjusted)
    return _STARS[level] if level is not None else ""


@dataclass
class ProportionResult:
    """One strategy-vs-baseline comparison after family correction."""

    successes_a: int
    n_a: int
    successes_b: int
    n_b: int
    z: float
    p_raw: float
    p_adjusted: float
    significant_at: float | None

    @property
    def stars(self) -> str:
        return _STARS[self.significant_at] if self.significant_at else ""


def compare_family(entries: list[tuple[int, int]], baseline: tuple[int, int],
                   alternative: str = "two-sided") -> list[ProportionResult]:
    """Test each (successes, n) entry against the baseline, Holm-corrected.

    Comparisons whose observed direction does not favor the entry get p=1
    (the hypothesis of interest is one-directional even when the underlying
    p-value is two-sided, matching how success tables are starred).
    """
    s_b, n_b = baseline
    zs, ps = [], []
    for s_a, n_a in entries:
        z, p = two_proportion_z_test(s_a, n_a, s_b, n_b, alternative=alternative)
        if s_a * n_b <= s_b * n_a:  # direction does not favor a
            p = 1.0
        zs.append(z)
        ps.append(p)
    adjusted = bonferroni_holm(ps)
    return [
        ProportionResult(
            successes_a=s_a, n_a=n_a, successes_b=s_b, n_b=n_b,
            z=z, p_raw=p, p_adjusted=p_adj,
            significant_at=significance_level(p_adj),
        )
        for (s_a, n_a), z, p, p_adj in zip(entries, zs, ps, adjusted)
    ]
