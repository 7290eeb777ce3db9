"""Clustering agreement and multi-technique comparison statistics.

Implements the adjusted Rand index from the contingency table, mean ranks
across datasets, the F-distributed form of the Friedman test
  chi2_F = 12N / (k(k+1)) * [ sum_j R_j^2 - k(k+1)^2 / 4 ]
  F_F    = (N-1) chi2_F / (N(k-1) - chi2_F)      df = (k-1, (N-1)(k-1))
and the Bonferroni-Dunn critical difference CD = q_alpha * sqrt(k(k+1)/6N).

A reference ARI matrix for six established clustering techniques plus this
method on the benchmark suites ships embedded, so the ranking pipeline runs
without reimplementing the competitors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .errors import DegenerateStateError, ParameterError

TECHNIQUES = (
    "k-means",
    "fuzzy c-means",
    "hdbscan+dbcv",
    "chameleon",
    "em",
    "modularity",
    "edgeclaim",
)

ARTIFICIAL_DATASETS = ("banana", "highleyman", "lithuanian", "spirals")

REAL_DATASETS = (
    "breast_cancer",
    "car_evaluation",
    "credit_approval",
    "contraceptive_method",
    "glass",
    "ionosphere",
    "iris",
    "vowel",
    "wine",
    "seeds",
)

# Rows follow TECHNIQUES, columns the dataset tuples; stored transposed below
# so report tables are (datasets, techniques).
_ARTIFICIAL_ROWS = (
    (0.2429, 0.2617, -0.0016, -0.0020),
    (0.2442, 0.3201, -0.0017, -0.0019),
    (0.4714, 0.2085, 0.7024, 0.2507),
    (0.9215, 0.4348, 0.9343, 0.0119),
    (0.3304, 0.7977, -0.0015, -0.0020),
    (0.3510, 0.5033, 0.4259, 1.0000),
    (0.9408, 0.7164, 0.9538, 1.0000),
)

_REAL_ROWS = (
    (0.7302, 0.0294, 0.2389, 0.0215, 0.1610, 0.1776, 0.6540, 0.1736, 0.8582, 0.7049),
    (0.7305, 0.0307, 0.3725, 0.0242, 0.1632, 0.1727, 0.7287, 0.0892, 0.8498, 0.7266),
    (0.2556, 0.1313, 0.0794, 0.0236, 0.2575, 0.7030, 0.5657, 0.0814, 0.3385, 0.4303),
    (0.7192, 0.1496, 0.1653, 0.0253, 0.2918, 0.6767, 0.6844, 0.1949, 0.8249, 0.7436),
    (0.6955, 0.0367, 0.1987, 0.0112, 0.1571, 0.1547, 0.9222, 0.1541, 0.9472, 0.6671),
    (0.4474, 0.1872, 0.1734, 0.0329, 0.2118, 0.0708, 0.9038, 0.2505, 0.8858, 0.8125),
    (0.7930, 0.1880, 0.4890, 0.0433, 0.2377, 0.3057, 0.9222, 0.2259, 0.9488, 0.8377),
)

REFERENCE_ARI_ARTIFICIAL = np.array(_ARTIFICIAL_ROWS).T
REFERENCE_ARI_REAL = np.array(_REAL_ROWS).T

# Critical difference quoted alongside the reference table (k = 7, N = 10,
# alpha = 0.05).  It does not match the standard two-tailed Dunn table
# (about 2.55 for the same parameters); both are reported side by side and
# neither is asserted against the other.
REFERENCE_CRITICAL_DIFFERENCE = 3.33

# Two-tailed Bonferroni-Dunn critical values q_alpha for k techniques
# (k - 1 comparisons against a control).
_DUNN_Q = {
    0.05: {2: 1.960, 3: 2.241, 4: 2.394, 5: 2.498, 6: 2.576, 7: 2.638, 8: 2.690, 9: 2.724, 10: 2.773},
    0.10: {2: 1.645, 3: 1.960, 4: 2.128, 5: 2.241, 6: 2.326, 7: 2.394, 8: 2.450, 9: 2.498, 10: 2.539},
}


def adjusted_rand_index(a, b) -> float:
    """Agreement between two labelings, chance-corrected; 1 means identical
    up to label permutation.  Returns 1.0 when both partitions are trivial
    (the index's denominator vanishes)."""
    a = np.asarray(a).ravel()
    b = np.asarray(b).ravel()
    if a.size != b.size:
        raise ParameterError("labelings must have the same length")
    if a.size < 2:
        raise ParameterError("need at least 2 elements")
    _, ai = np.unique(a, return_inverse=True)
    _, bi = np.unique(b, return_inverse=True)
    na = int(ai.max()) + 1
    nb = int(bi.max()) + 1
    table = np.bincount(ai * nb + bi, minlength=na * nb).reshape(na, nb)

    def comb2(x):
        x = x.astype(np.float64)
        return x * (x - 1.0) / 2.0

    sum_cells = comb2(table).sum()
    sum_a = comb2(table.sum(axis=1)).sum()
    sum_b = comb2(table.sum(axis=0)).sum()
    total = a.size * (a.size - 1) / 2.0
    expected = sum_a * sum_b / total
    max_index = (sum_a + sum_b) / 2.0
    if max_index == expected:
        return 1.0
    return float((sum_cells - expected) / (max_index - expected))


def rank_table(ari_table) -> np.ndarray:
    """Mean rank per technique over a (datasets, techniques) ARI matrix.
    Rank 1 is the best ARI in a row; ties share the mean rank."""
    table = np.asarray(ari_table, dtype=np.float64)
    if table.ndim != 2 or table.shape[0] < 1 or table.shape[1] < 2:
        raise ParameterError("ari_table must be 2-D with at least 2 techniques")
    if not np.isfinite(table).all():
        raise ParameterError("ari_table contains non-finite values")
    ranks = np.vstack([rankdata(-row, method="average") for row in table])
    return ranks.mean(axis=0)


@dataclass(frozen=True)
class FriedmanResult:
    chi2: float
    f_f: float
    df1: int
    df2: int


def friedman(avg_ranks, n_datasets: int) -> FriedmanResult:
    """Friedman test over k techniques ranked on N datasets (F form)."""
    ranks = np.asarray(avg_ranks, dtype=np.float64)
    k = ranks.size
    if k < 2:
        raise ParameterError("need at least 2 techniques")
    if n_datasets < 2:
        raise ParameterError("need at least 2 datasets")
    n = n_datasets
    chi2 = 12.0 * n / (k * (k + 1)) * ((ranks**2).sum() - k * (k + 1) ** 2 / 4.0)
    denom = n * (k - 1) - chi2
    if denom <= 0:
        raise DegenerateStateError(
            "Friedman statistic is degenerate: chi2 reached N(k-1)"
        )
    f_f = (n - 1) * chi2 / denom
    return FriedmanResult(
        chi2=float(chi2), f_f=float(f_f), df1=k - 1, df2=(n - 1) * (k - 1)
    )


def bonferroni_dunn_cd(k: int, n_datasets: int, alpha: float = 0.05) -> float:
    """Critical difference of mean ranks against a control technique."""
    if alpha not in _DUNN_Q:
        raise ParameterError(
            f"alpha must be one of {sorted(_DUNN_Q)}, got {alpha}"
        )
    if k not in _DUNN_Q[alpha]:
        raise ParameterError(
            f"k must be one of {sorted(_DUNN_Q[alpha])}, got {k}"
        )
    if n_datasets < 1:
        raise ParameterError("need at least 1 dataset")
    q = _DUNN_Q[alpha][k]
    return float(q * np.sqrt(k * (k + 1) / (6.0 * n_datasets)))


@dataclass(frozen=True)
class EvalReport:
    """Ranking statistics over a (datasets, techniques) ARI matrix."""

    ari_table: np.ndarray
    techniques: tuple[str, ...]
    datasets: tuple[str, ...]
    avg_ranks: np.ndarray
    chi2: float
    f_f: float
    df1: int
    df2: int
    critical_difference: float
    alpha: float

    def to_dict(self) -> dict:
        return {
            "datasets": list(self.datasets),
            "techniques": list(self.techniques),
            "ari_table": [row.tolist() for row in self.ari_table],
            "avg_ranks": self.avg_ranks.tolist(),
            "chi2": self.chi2,
            "f_f": self.f_f,
            "df": [self.df1, self.df2],
            "cd": self.critical_difference,
            "alpha": self.alpha,
        }


def build_report(
    ari_table,
    techniques: tuple[str, ...] = TECHNIQUES,
    datasets: tuple[str, ...] | None = None,
    alpha: float = 0.05,
) -> EvalReport:
    table = np.asarray(ari_table, dtype=np.float64)
    n, k = table.shape
    if len(techniques) != k:
        raise ParameterError("technique names do not match the table width")
    if datasets is None:
        datasets = tuple(f"dataset_{i}" for i in range(n))
    if len(datasets) != n:
        raise ParameterError("dataset names do not match the table height")
    avg = rank_table(table)
    fr = friedman(avg, n)
    cd = bonferroni_dunn_cd(k, n, alpha)
    return EvalReport(
        ari_table=table,
        techniques=tuple(techniques),
        datasets=tuple(datasets),
        avg_ranks=avg,
        chi2=fr.chi2,
        f_f=fr.f_f,
        df1=fr.df1,
        df2=fr.df2,
        critical_difference=cd,
        alpha=alpha,
    )
