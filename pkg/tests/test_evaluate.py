"""Adjusted Rand index, rank table, Friedman test, critical difference."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sklearn.metrics import adjusted_rand_score

from edgeclaim import (
    DegenerateStateError,
    ParameterError,
    adjusted_rand_index,
    bonferroni_dunn_cd,
    build_report,
    friedman,
    rank_table,
)
from edgeclaim.evaluate import (
    REFERENCE_ARI_ARTIFICIAL,
    REFERENCE_ARI_REAL,
    REFERENCE_CRITICAL_DIFFERENCE,
    TECHNIQUES,
)

from conftest import ari_pair_oracle

PUBLISHED_AVG_RANKS = (4.8, 4.3, 5.4, 3.6, 4.8, 3.5, 1.6)


def label_pairs():
    n = st.shared(st.integers(min_value=2, max_value=12), key="n")
    labels = n.flatmap(
        lambda m: st.lists(
            st.integers(min_value=0, max_value=3), min_size=m, max_size=m
        )
    )
    return st.tuples(labels, labels)


# -------------------------------------------------------------------- ARI


def test_ari_identical_is_one():
    assert adjusted_rand_index([0, 0, 1, 1], [0, 0, 1, 1]) == 1.0


def test_ari_relabeling_is_one():
    assert adjusted_rand_index([0, 0, 1, 1], [1, 1, 0, 0]) == 1.0


def test_ari_crossed_pairs():
    a, b = [0, 0, 1, 1], [0, 1, 0, 1]
    assert adjusted_rand_index(a, b) == pytest.approx(-0.5, abs=1e-12)
    assert ari_pair_oracle(a, b) == -0.5


def test_ari_trivial_partitions():
    assert adjusted_rand_index([0, 0, 0], [1, 1, 1]) == 1.0


def test_ari_errors():
    with pytest.raises(ParameterError):
        adjusted_rand_index([0, 1], [0, 1, 2])
    with pytest.raises(ParameterError):
        adjusted_rand_index([0], [0])


@settings(max_examples=60)
@given(label_pairs())
def test_ari_symmetric_and_matches_oracle(pair):
    a, b = pair
    left = adjusted_rand_index(a, b)
    assert left == pytest.approx(adjusted_rand_index(b, a), abs=1e-12)
    assert left == pytest.approx(ari_pair_oracle(a, b), abs=1e-12)


@settings(max_examples=40)
@given(label_pairs(), st.permutations(list(range(4))))
def test_ari_invariant_under_relabeling(pair, perm):
    a, b = pair
    relabeled = [perm[x] for x in a]
    assert adjusted_rand_index(a, b) == pytest.approx(
        adjusted_rand_index(relabeled, b), abs=1e-12
    )


@pytest.mark.parametrize("seed", [0, 1])
def test_ari_matches_sklearn(seed):
    rng = np.random.default_rng(seed)
    for _ in range(25):
        a = rng.integers(0, 4, size=30)
        b = rng.integers(0, 3, size=30)
        assert adjusted_rand_index(a, b) == pytest.approx(
            adjusted_rand_score(a, b), abs=1e-12
        )


def test_ari_near_zero_for_independent_labelings():
    rng = np.random.default_rng(7)
    vals = [
        adjusted_rand_index(rng.integers(0, 3, 60), rng.integers(0, 3, 60))
        for _ in range(200)
    ]
    assert abs(float(np.mean(vals))) < 0.05


# ------------------------------------------------------------- rank table


def test_rank_table_strictly_decreasing():
    assert rank_table([[0.9, 0.5, 0.1]]).tolist() == [1.0, 2.0, 3.0]


def test_rank_table_tie_at_top():
    assert rank_table([[0.8, 0.8, 0.1]]).tolist() == [1.5, 1.5, 3.0]


def test_rank_table_averages_rows():
    table = [[0.9, 0.1], [0.1, 0.9]]
    assert rank_table(table).tolist() == [1.5, 1.5]


@pytest.mark.parametrize("seed", [0, 3])
def test_rank_table_sums_to_constant(seed):
    rng = np.random.default_rng(seed)
    table = rng.uniform(-1, 1, size=(6, 5))
    ranks = rank_table(table)
    assert ranks.sum() == pytest.approx(5 * 6 / 2, abs=1e-12)


def test_rank_table_errors():
    with pytest.raises(ParameterError):
        rank_table([0.9, 0.5])
    with pytest.raises(ParameterError):
        rank_table([[0.9], [0.5]])
    with pytest.raises(ParameterError):
        rank_table([[0.9, np.nan]])


def test_reference_table_ranks_match_published_column():
    ranks = rank_table(REFERENCE_ARI_REAL)
    assert np.allclose(ranks, PUBLISHED_AVG_RANKS, atol=0.1)
    assert np.allclose(ranks, (4.8, 4.3, 5.4, 3.6, 4.85, 3.5, 1.55), atol=1e-12)
    assert ranks.sum() == pytest.approx(7 * 8 / 2, abs=1e-12)


def test_reference_tables_shape_and_range():
    assert REFERENCE_ARI_REAL.shape == (10, 7)
    assert REFERENCE_ARI_ARTIFICIAL.shape == (4, 7)
    for table in (REFERENCE_ARI_REAL, REFERENCE_ARI_ARTIFICIAL):
        assert (table >= -1.0).all() and (table <= 1.0).all()


# --------------------------------------------------------------- friedman


def test_friedman_identical_ranks_zero():
    res = friedman([4.0] * 7, 10)
    assert res.chi2 == pytest.approx(0.0, abs=1e-12)
    assert res.f_f == pytest.approx(0.0, abs=1e-12)


def test_friedman_reference_ranks():
    res = friedman(rank_table(REFERENCE_ARI_REAL), 10)
    assert res.df1 == 6
    assert res.df2 == 54
    assert res.chi2 == pytest.approx(21.0536, abs=1e-3)
    assert res.f_f == pytest.approx(4.8652, abs=1e-3)
    assert 4.4 <= res.f_f <= 5.0


def test_friedman_monotone_in_chi2():
    mild = friedman([2.4, 2.5, 2.5, 2.6], 10)
    strong = friedman([1.5, 2.5, 2.5, 3.5], 10)
    assert strong.chi2 > mild.chi2
    assert strong.f_f > mild.f_f


def test_friedman_degenerate():
    with pytest.raises(DegenerateStateError):
        friedman([1.0, 2.0], 10)


def test_friedman_errors():
    with pytest.raises(ParameterError):
        friedman([1.0], 10)
    with pytest.raises(ParameterError):
        friedman([1.0, 2.0, 3.0], 1)


# ---------------------------------------------------- critical difference


def test_cd_reference_setting():
    cd = bonferroni_dunn_cd(7, 10, alpha=0.05)
    assert cd == pytest.approx(2.638 * np.sqrt(7 * 8 / 60.0), abs=1e-12)
    assert cd == pytest.approx(2.5486, abs=1e-3)


def test_cd_scales_inverse_sqrt_n():
    assert bonferroni_dunn_cd(7, 40) == pytest.approx(
        bonferroni_dunn_cd(7, 10) / 2.0, abs=1e-12
    )
    prev = np.inf
    for n in (1, 5, 20, 80):
        cd = bonferroni_dunn_cd(7, n)
        assert cd < prev
        prev = cd


def test_cd_errors_list_supported_values():
    with pytest.raises(ParameterError, match="alpha"):
        bonferroni_dunn_cd(7, 10, alpha=0.01)
    with pytest.raises(ParameterError, match="k"):
        bonferroni_dunn_cd(11, 10)
    with pytest.raises(ParameterError):
        bonferroni_dunn_cd(7, 0)


def test_quoted_cd_differs_from_standard_table():
    # The quoted 3.33 is kept for display only; the standard Dunn table
    # yields about 2.55 for the same (k, N, alpha).
    cd = bonferroni_dunn_cd(7, 10, alpha=0.05)
    assert REFERENCE_CRITICAL_DIFFERENCE == 3.33
    assert abs(REFERENCE_CRITICAL_DIFFERENCE - cd) > 0.5


# ----------------------------------------------------------------- report


def test_build_report_reference_suite():
    report = build_report(REFERENCE_ARI_REAL, datasets=None)
    assert report.df1 == 6 and report.df2 == 54
    assert report.critical_difference == pytest.approx(2.5486, abs=1e-3)
    payload = report.to_dict()
    assert set(payload) == {
        "datasets",
        "techniques",
        "ari_table",
        "avg_ranks",
        "chi2",
        "f_f",
        "df",
        "cd",
        "alpha",
    }
    assert payload["df"] == [6, 54]
    assert payload["techniques"] == list(TECHNIQUES)
    assert len(payload["ari_table"]) == 10


def test_build_report_name_validation():
    with pytest.raises(ParameterError):
        build_report(REFERENCE_ARI_REAL, techniques=("a", "b"))
    with pytest.raises(ParameterError):
        build_report(REFERENCE_ARI_REAL, datasets=("only-one",))
