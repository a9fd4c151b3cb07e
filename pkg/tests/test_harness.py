from fractions import Fraction as F

import numpy as np
import pytest

import summakit as sk
from summakit.errors import DegenerateProbeError, IndexOutOfRangeError

import helpers
import oracles


# ---------------------------------------------------------------------------
# probes
# ---------------------------------------------------------------------------


def test_probe_series_shapes():
    diff = sk.probe_series(sk.PROBE_DIFFERENCE, 2, 6)
    np.testing.assert_array_equal(diff.coefficients, [0, 0, 1, -1, 0, 0])
    shift = sk.probe_series(sk.PROBE_SHIFT, 2, 6)
    np.testing.assert_array_equal(shift.coefficients, [0, 0, 0, 1, 0, 0])
    with pytest.raises(IndexOutOfRangeError):
        sk.probe_series(sk.PROBE_DIFFERENCE, 5, 6)


def test_difference_probe_identity_norms():
    # identity hats collapse the probe to two coordinates
    lam = helpers.ones_factors(12)
    for k in (1, 2.0, 3.0):
        for v in (1, 4, 8):
            probe = sk.run_probe(sk.identity_matrix(10), sk.identity_matrix(10), lam, v, sk.PROBE_DIFFERENCE, k)
            assert probe.x_norm == 2.0
            expected = (v ** (float(k) - 1.0) + (v + 1) ** (float(k) - 1.0)) ** (1.0 / float(k))
            np.testing.assert_allclose(probe.y_norm, expected, rtol=1e-13)


def test_shift_probe_identity_x_norm():
    probe = sk.run_probe(
        sk.identity_matrix(10), sk.cesaro_matrix(10), helpers.ones_factors(12), 3, sk.PROBE_SHIFT, 1
    )
    assert probe.x_norm == 1.0


def test_difference_probe_piecewise_structure():
    rng = np.random.default_rng(3)
    A = helpers.random_normal_matrix(rng, 10)
    B = helpers.random_normal_matrix(rng, 10)
    lam = sk.FactorSequence(rng.uniform(-1, 1, 12))
    v = 4
    probe = sk.run_probe(A, B, lam, v, sk.PROBE_DIFFERENCE, 2)
    ah = sk.hat_of(A).entries
    bh = sk.hat_of(B).entries
    assert np.all(probe.delta_x[:v] == 0)
    assert probe.delta_x[v] == ah[v, v]
    for n in range(v + 1, 11):
        np.testing.assert_allclose(probe.delta_x[n], ah[n, v] - ah[n, v + 1], rtol=1e-15)
        np.testing.assert_allclose(
            probe.delta_y[n], bh[n, v] * lam.values[v] - bh[n, v + 1] * lam.values[v + 1], rtol=1e-15
        )


def test_probe_matches_generic_transform_exactly_rational():
    rng = np.random.default_rng(5)
    A = helpers.random_rational_matrix(rng, 8)
    B = helpers.random_rational_matrix(rng, 8)
    lam = sk.FactorSequence(helpers.random_rational_vector(rng, 10))
    for kind in (sk.PROBE_DIFFERENCE, sk.PROBE_SHIFT):
        for v in range(8):
            probe = sk.run_probe(A, B, lam, v, kind, 2)
            series = sk.probe_series(kind, v, 9, exact=True)
            assert list(probe.delta_x) == list(sk.delta_transform_via_hat(A, series))
            factored = sk.SeriesSample(series.coefficients * lam.values[:9])
            assert list(probe.delta_y) == list(sk.delta_transform_via_hat(B, factored))


def test_probe_cesaro_exact_small():
    A = sk.cesaro_matrix(8, exact=True)
    lam = helpers.ones_factors(10, exact=True)
    probe = sk.run_probe(A, A, lam, 1, sk.PROBE_DIFFERENCE, 1)
    series = sk.probe_series(sk.PROBE_DIFFERENCE, 1, 9, exact=True)
    assert list(probe.delta_x) == list(sk.delta_transform_via_hat(A, series))
    # x-norm telescopes: a_vv + sum_{n>v} p_v p_n / (P_n P_{n-1}) at v=1
    assert probe.x_norm == F(1, 2) + (F(1, 2) - F(1, 9))


def test_probe_index_out_of_range():
    with pytest.raises(IndexOutOfRangeError):
        sk.run_probe(sk.identity_matrix(4), sk.identity_matrix(4), helpers.ones_factors(6), 4, sk.PROBE_SHIFT, 1)


def test_inequality20_zero_factors():
    probe = sk.run_probe(
        sk.cesaro_matrix(8), sk.cesaro_matrix(8), sk.FactorSequence(np.zeros(10)), 2, sk.PROBE_DIFFERENCE, 1
    )
    assert sk.inequality20_ratio(probe) == 0.0


def test_inequality20_equal_matrices_k1():
    # k = 1 makes both norms the same absolute sum when A = B, lam = 1
    A = sk.cesaro_matrix(12)
    probe = sk.run_probe(A, A, helpers.ones_factors(14), 3, sk.PROBE_DIFFERENCE, 1)
    np.testing.assert_allclose(sk.inequality20_ratio(probe), 1.0, rtol=1e-13)


def test_inequality20_degenerate():
    probe = sk.ProbeResult(sk.PROBE_SHIFT, 0, np.zeros(3), np.zeros(3), 0.0, 0.0)
    with pytest.raises(DegenerateProbeError):
        sk.inequality20_ratio(probe)


def test_empirical_constant_cesaro_family():
    A = sk.cesaro_matrix(16)
    lam = sk.FactorSequence(1.0 / (np.arange(18) + 1.0))
    M, records = sk.empirical_constant(A, A, lam, 1)
    assert len(records) == 2 * 15
    assert M == max(r for _, _, r in records)
    assert np.isfinite(M) and M > 0
    for _, _, r in records:
        assert r <= M


def test_strict_paper_probe_differs_only_for_k_above_one():
    rng = np.random.default_rng(7)
    A = helpers.random_positive_matrix(rng, 10)
    B = helpers.random_positive_matrix(rng, 10)
    lam = sk.FactorSequence(rng.uniform(0.5, 1.5, 12))
    plain_k1 = sk.run_probe(A, B, lam, 3, sk.PROBE_DIFFERENCE, 1)
    strict_k1 = sk.run_probe(A, B, lam, 3, sk.PROBE_DIFFERENCE, 1, strict_paper=True)
    np.testing.assert_allclose(float(plain_k1.y_norm), float(strict_k1.y_norm), rtol=1e-15)
    plain_k2 = sk.run_probe(A, B, lam, 3, sk.PROBE_DIFFERENCE, 2)
    strict_k2 = sk.run_probe(A, B, lam, 3, sk.PROBE_DIFFERENCE, 2, strict_paper=True)
    assert abs(plain_k2.y_norm - strict_k2.y_norm) > 1e-12  # b_vv != 1 generically


# ---------------------------------------------------------------------------
# decomposition
# ---------------------------------------------------------------------------


def test_decompose_identity_matrices():
    rng = np.random.default_rng(11)
    coeffs = rng.uniform(-1, 1, 9)
    dec = sk.decompose(sk.identity_matrix(8), sk.identity_matrix(8), helpers.ones_factors(9), sk.SeriesSample(coeffs))
    np.testing.assert_allclose(dec.t1, coeffs, atol=1e-15)
    np.testing.assert_array_equal(dec.t2, np.zeros(9))
    assert dec.residual <= 1e-15
    assert not dec.v0_retained  # identity rows sum to one


def test_decompose_cesaro_exact_zero_residual():
    rng = np.random.default_rng(13)
    A = sk.cesaro_matrix(10, exact=True)
    coeffs = helpers.random_rational_vector(rng, 11)
    dec = sk.decompose(A, A, helpers.ones_factors(11, exact=True), sk.SeriesSample(coeffs))
    assert dec.residual == 0
    assert not dec.v0_retained


def test_decompose_random_rational_row_stochastic_exact():
    rng = np.random.default_rng(17)
    for _ in range(5):
        A = helpers.random_rational_row_stochastic(rng, 10)
        B = helpers.random_rational_row_stochastic(rng, 10)
        lam = sk.FactorSequence(helpers.random_rational_vector(rng, 11))
        coeffs = helpers.random_rational_vector(rng, 11)
        dec = sk.decompose(A, B, lam, sk.SeriesSample(coeffs))
        assert dec.residual == 0
        assert not dec.v0_retained


def test_decompose_arbitrary_normal_matrices_exact_and_flagged():
    # the identity holds for any normal pair; non-unit leading bar column
    # only sets the retained-term flag
    rng = np.random.default_rng(19)
    A = helpers.random_rational_matrix(rng, 9)
    B = helpers.random_rational_matrix(rng, 9)
    lam = sk.FactorSequence(helpers.random_rational_vector(rng, 10))
    coeffs = helpers.random_rational_vector(rng, 10)
    dec = sk.decompose(A, B, lam, sk.SeriesSample(coeffs))
    assert dec.residual == 0
    assert dec.v0_retained


def test_decompose_delta_y_is_independent_of_the_split():
    rng = np.random.default_rng(23)
    A = helpers.random_rational_row_stochastic(rng, 8)
    B = helpers.random_rational_row_stochastic(rng, 8)
    lam = sk.FactorSequence(helpers.random_rational_vector(rng, 9))
    coeffs = helpers.random_rational_vector(rng, 9)
    dec = sk.decompose(A, B, lam, sk.SeriesSample(coeffs))
    factored = [coeffs[i] * lam.values[i] for i in range(9)]
    seq = oracles.seq_transform(oracles.to_rows(B), factored)
    assert list(dec.delta_y) == oracles.first_differences(seq)


def test_decompose_float_row_stochastic_tolerance():
    rng = np.random.default_rng(29)
    worst = 0.0
    for _ in range(20):
        A = helpers.random_row_stochastic(rng, 16)
        B = helpers.random_row_stochastic(rng, 16)
        lam = sk.FactorSequence(rng.uniform(-1, 1, 17))
        series = sk.SeriesSample(rng.uniform(-1, 1, 17))
        dec = sk.decompose(A, B, lam, series)
        scale = max(1.0, np.max(np.abs(series.partial_sums)))
        worst = max(worst, float(dec.residual) / scale)
    assert worst <= 1e-10


# ---------------------------------------------------------------------------
# key identity and companion arrays
# ---------------------------------------------------------------------------


def test_key_identity_identity_matrix():
    rng = np.random.default_rng(31)
    B = helpers.random_rational_matrix(rng, 8)
    lam = sk.FactorSequence(helpers.random_rational_vector(rng, 9))
    A = sk.identity_matrix(8, exact=True)
    for n in range(2, 9):
        for v in range(1, n):
            assert sk.key_identity_check(A, B, lam, n, v) == 0


def test_key_identity_riesz_and_random_exact():
    rng = np.random.default_rng(37)
    A = sk.riesz_matrix(helpers.random_rational_weights(rng, 9))
    B = helpers.random_rational_matrix(rng, 8)
    lam = sk.FactorSequence(helpers.random_rational_vector(rng, 9))
    hat_b = sk.hat_of(B)
    inv_a = sk.invert_hat(sk.hat_of(A))
    for n in range(2, 9):
        for v in range(1, n):
            assert sk.key_identity_check(A, B, lam, n, v, hat_b=hat_b, inv_hat_a=inv_a) == 0

    A2 = helpers.random_rational_matrix(rng, 8)
    inv_a2 = sk.invert_hat(sk.hat_of(A2))
    for n in range(2, 9):
        for v in range(1, n):
            assert sk.key_identity_check(A2, B, lam, n, v, hat_b=hat_b, inv_hat_a=inv_a2) == 0


def test_bar_algebra_step():
    # intermediate step of the same display:
    # bar_{v+1,v} - bar_vv = a_{v+1,v+1} + a_{v+1,v} - a_vv
    rng = np.random.default_rng(41)
    m = helpers.random_rational_matrix(rng, 10)
    bar = sk.bar_of(m)
    e = m.entries
    for v in range(10):
        assert bar[v + 1, v] - bar[v, v] == e[v + 1, v + 1] + e[v + 1, v] - e[v, v]


def test_key_identity_index_guard():
    A = sk.cesaro_matrix(6)
    lam = helpers.ones_factors(8)
    with pytest.raises(IndexOutOfRangeError):
        sk.key_identity_check(A, A, lam, 3, 0)
    with pytest.raises(IndexOutOfRangeError):
        sk.key_identity_check(A, A, lam, 3, 3)


def test_build_cnv_identity_unit_factors():
    C = sk.build_cnv(sk.identity_matrix(8), sk.identity_matrix(8), helpers.ones_factors(9), 1)
    assert np.all(np.diagonal(C)[1:] == 1.0)
    assert C[0, 0] == 0.0
    # middle terms collapse: delta contributes -1, gap correction +1
    assert np.max(np.abs(np.tril(C, -1))) == 0.0
    assert sk.l1_lk_bound(C, 1).sup == 1.0


def test_build_cnv_zero_factors():
    C = sk.build_cnv(sk.cesaro_matrix(6), sk.cesaro_matrix(6), sk.FactorSequence(np.zeros(7)), 2)
    assert np.all(C == 0.0)


def test_build_cnv_matches_rational_oracle_k1():
    rng = np.random.default_rng(43)
    A = helpers.random_rational_row_stochastic(rng, 12)
    B = helpers.random_rational_row_stochastic(rng, 12)
    lam = sk.FactorSequence(helpers.random_rational_vector(rng, 13))
    C = sk.build_cnv(A, B, lam, 1)
    bound = sk.l1_lk_bound(C, 1)
    a_rows, b_rows = oracles.to_rows(A), oracles.to_rows(B)
    for v in range(13):
        expected = oracles.cnv_colsum_pow(a_rows, b_rows, list(lam.values), 1, v)
        assert bound.column_sums[v] == expected


def test_build_cnv_cesaro_k2_column_sums():
    A = sk.cesaro_matrix(12)
    lam = sk.FactorSequence(1.0 / (np.arange(13) + 1.0))
    bound = sk.l1_lk_bound(sk.build_cnv(A, A, lam, 2), 2)
    a_rows = oracles.to_rows(sk.cesaro_matrix(12, exact=True))
    lam_exact = [F(1, n + 1) for n in range(13)]
    for v in range(13):
        expected = oracles.cnv_colsum_pow(a_rows, a_rows, lam_exact, 2, v)
        np.testing.assert_allclose(bound.column_sums[v], float(expected), rtol=1e-12, atol=1e-300)


def test_build_dnr_identity_unit_factors():
    D = sk.build_dnr(sk.identity_matrix(3), sk.identity_matrix(3), helpers.ones_factors(4), 1)
    expected = np.zeros((4, 4))
    expected[2, :1] = 1.0
    expected[3, :2] = 1.0
    np.testing.assert_array_equal(D, expected)


def test_build_dnr_boundary_factors_are_unit():
    # lam_n = (a_nn / b_nn) n**(1/k-1) cancels the row value to exactly one
    rng = np.random.default_rng(47)
    A = helpers.random_positive_matrix(rng, 10)
    B = helpers.random_positive_matrix(rng, 10)
    k = 2
    lam_vals = np.ones(11)
    n = np.arange(1, 11, dtype=float)
    lam_vals[1:] = np.asarray(A.diagonal[1:] / B.diagonal[1:]) * n ** (1.0 / k - 1.0)
    D = sk.build_dnr(A, B, sk.FactorSequence(lam_vals), k)
    for row in range(2, 11):
        np.testing.assert_allclose(D[row, : row - 1], np.ones(row - 1), rtol=1e-13)


def test_build_dnr_matches_rational_oracle():
    rng = np.random.default_rng(53)
    A = helpers.random_rational_row_stochastic(rng, 12)
    B = helpers.random_rational_row_stochastic(rng, 12)
    lam = sk.FactorSequence(helpers.random_rational_vector(rng, 13))
    bound = sk.l1_lk_bound(sk.build_dnr(A, B, lam, 1), 1)
    a_rows, b_rows = oracles.to_rows(A), oracles.to_rows(B)
    for r in range(13):
        assert bound.column_sums[r] == oracles.dnr_colsum_pow(a_rows, b_rows, list(lam.values), 1, r)


def test_necessity_wiring_y_norm_and_c10():
    # the y-norm k-th power of a difference probe splits into the diagonal
    # term plus exactly the c10 numerator truncated at the same order
    rng = np.random.default_rng(59)
    N, k = 20, 2
    A = helpers.random_positive_matrix(rng, N)
    B = helpers.random_positive_matrix(rng, N)
    lam = sk.FactorSequence(rng.uniform(0.2, 1.0, N + 2))
    rep = sk.check_c10(A, B, lam, k, sk.TailSpec(N), v_max=N - 1)
    bh = sk.hat_of(B).entries
    for v in range(1, N):
        probe = sk.run_probe(A, B, lam, v, sk.PROBE_DIFFERENCE, k)
        ypow = sk.y_norm_pow(probe.delta_y, k)
        diag_term = float(v) ** (k - 1.0) * abs(bh[v, v] * lam.values[v]) ** k
        numerator = rep.ratios[v] * abs(float(A.diagonal[v])) ** k
        np.testing.assert_allclose(ypow, diag_term + numerator, rtol=1e-12)


def test_t2_bounded_by_c16_and_dnr():
    # with C = sup c16 ratio: sum n^{k-1} |t2_n|^k <= (2C)^k * dnr bound * (sum |dx|)^k
    rng = np.random.default_rng(61)
    for trial in range(5):
        N, k = 14, 2
        A = helpers.random_positive_matrix(rng, N)
        B = helpers.random_positive_matrix(rng, N)
        lam = sk.FactorSequence(rng.uniform(0.3, 1.2, N + 2))
        series = sk.SeriesSample(rng.uniform(-1, 1, N + 1))
        dec = sk.decompose(A, B, lam, series)
        dx = sk.delta_transform_via_hat(A, series)
        C = sk.check_c16(A, B, lam).sup_ratio
        lhs = float(np.sum(np.arange(1, N + 1) ** (k - 1.0) * np.abs(dec.t2[1:]) ** k))
        dnr_bound = sk.l1_lk_bound(sk.build_dnr(A, B, lam, k), k).sup
        rhs = (2.0 * C) ** k * dnr_bound * float(np.sum(np.abs(dx))) ** k
        assert lhs <= rhs
