import itertools
import random

import pytest

from christoffel_dpp.christoffel import (
    DeformationSpec,
    EnsembleSpec,
    big_D_det,
    big_D_det_dx,
    border_rows,
    delta_det,
    deformed_kernel,
    deformed_monic,
    deformed_monic_coeffs,
    deformed_norm,
    deformed_weight,
    det,
    det_laplace,
    ensemble_pair_probability,
    guarded_det,
    ope_kernel,
    sum_form_kernel,
    support_cutoff,
)
from christoffel_dpp.errors import DegenerateDeformationError
from christoffel_dpp.oracle import gram_schmidt_monic
from christoffel_dpp.orthopoly import WeightFamily

CH1 = WeightFamily.charlier(1)
ME = WeightFamily.meixner("1.5", "0.3")
U1 = DeformationSpec(("0.5",))
U2 = DeformationSpec(("0.5", "3.7"))


def test_deformation_spec_validation():
    with pytest.raises(ValueError):
        DeformationSpec(("0.5", "0.5"))
    with pytest.raises(ValueError):
        EnsembleSpec(CH1, 2, DeformationSpec((3,)))
    with pytest.raises(ValueError):
        EnsembleSpec(CH1, 0)
    assert U2.k == 2
    EnsembleSpec(CH1, 2, DeformationSpec((-2,)))


def test_deformed_weight_examples(ctx):
    mp = ctx.mp
    assert deformed_weight(CH1, DeformationSpec(), 4, ctx) == CH1.weight(4, ctx)
    expected = mp.mpf("1.5") ** 2 * mp.exp(-1) / 2
    assert abs(deformed_weight(CH1, U1, 2, ctx) - expected) < ctx.tol_rel
    assert all(deformed_weight(CH1, U2, x, ctx) > 0 for x in range(101))


def test_determinant_small_cases(ctx):
    mp = ctx.mp
    assert det([], ctx) == 1
    p, q, r, s = (mp.mpf(v) for v in ("1.5", "-2", "0.25", "3"))
    assert det([[p, q], [r, s]], ctx) == p * s - q * r


@pytest.mark.parametrize("fam", [CH1, ME])
@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_delta_matches_laplace_for_k2(ctx, fam, n):
    rows = border_rows(fam, U2, n, 4, ctx)
    a, b = delta_det(fam, U2, n, ctx), det_laplace(rows)
    assert abs(a - b) <= 1e-60 * max(1, abs(b))
    assert (a > 0) == (b > 0)


def test_delta_trivial_cases(ctx):
    assert delta_det(CH1, DeformationSpec(), 3, ctx) == 1
    assert abs(big_D_det(CH1, DeformationSpec(), 3, "1.3", ctx) - CH1.eval(3, "1.3", ctx)) < ctx.tol_rel


def test_guarded_det_flags_singular_matrix(ctx):
    with pytest.raises(DegenerateDeformationError):
        guarded_det([[1, 2], [2, 4]], ctx, "test")


@pytest.mark.parametrize("fam", [CH1, ME])
def test_big_D_has_double_zero_at_each_point(ctx, fam):
    for u in U2.points:
        assert abs(big_D_det(fam, U2, 2, u, ctx)) < 1e-60
        assert abs(big_D_det_dx(fam, U2, 2, u, ctx)) < 1e-60
        mp = ctx.mp
        uu = ctx.num(u)
        # a double zero: D(u+h)/h^2 settles to D''(u)/2
        q = [big_D_det(fam, U2, 2, uu + mp.mpf(h), ctx) / mp.mpf(h) ** 2 for h in ("1e-10", "1e-12")]
        assert abs(q[1]) > 1e-6
        assert abs(q[0] / q[1] - 1) < 1e-8


@pytest.mark.parametrize("fam", [CH1, ME])
@pytest.mark.parametrize("d", [DeformationSpec(), U1, U2])
def test_monic_and_norm_against_moment_oracle(ctx, fam, d):
    coeffs, norms = gram_schmidt_monic(EnsembleSpec(fam, 1, d), 6, ctx)
    for n in range(7):
        mine = deformed_monic_coeffs(fam, d, n, ctx)
        assert len(mine) == n + 1
        assert abs(mine[-1] - 1) < 1e-50
        for a, b in zip(mine, coeffs[n]):
            assert abs(a - b) <= 1e-15 * max(1, abs(b))
        assert abs(deformed_norm(fam, d, n, ctx) / norms[n] - 1) < 1e-15


def test_norm_against_truncated_sum(ctx):
    mp = ctx.mp
    spec = EnsembleSpec(ME, 3, U1)
    X = support_cutoff(spec, ctx)
    direct = mp.fsum(deformed_weight(ME, U1, x, ctx) * deformed_monic(ME, U1, 2, x, ctx) ** 2 for x in range(X))
    assert abs(deformed_norm(ME, U1, 2, ctx) / direct - 1) < 1e-15


def test_undeformed_collapse(ctx):
    mp = ctx.mp
    d = DeformationSpec()
    for n in range(5):
        c = ME.leading_coeff(n, ctx)
        assert abs(deformed_monic(ME, d, n, "2.3", ctx) - ME.eval(n, "2.3", ctx) / c) < 1e-60
        assert abs(deformed_norm(ME, d, n, ctx) / (ME.sq_norm(n, ctx) / c ** 2) - 1) < 1e-60
    assert mp.isfinite(deformed_monic(ME, U1, 2, "0.5", ctx))


def test_monic_near_deformation_point_uses_division(ctx):
    mp = ctx.mp
    coeffs = deformed_monic_coeffs(CH1, U1, 3, ctx)
    at = mp.polyval(coeffs[::-1], ctx.num("0.5"))
    assert abs(deformed_monic(CH1, U1, 3, "0.5", ctx) - at) < 1e-60
    near = ctx.num("0.5") + mp.mpf("1e-6")
    assert abs(deformed_monic(CH1, U1, 3, near, ctx) - mp.polyval(coeffs[::-1], near)) < 1e-40


@pytest.mark.parametrize("fam", [CH1, ME])
def test_norms_positive(ctx, fam):
    for d in (DeformationSpec(), U1, U2):
        for n in range(9):
            assert deformed_norm(fam, d, n, ctx) > 0


@pytest.mark.parametrize("fam", [CH1, ME])
def test_ope_kernel_projection_and_trace(ctx, fam):
    mp = ctx.mp
    spec = EnsembleSpec(fam, 3)
    K = ope_kernel(spec, ctx)
    X = support_cutoff(spec, ctx)
    assert abs(mp.fsum(K(t, t) for t in range(X)) - 3) < 1e-40
    for x, y in ((0, 0), (1, 4), (2, 2)):
        sq = mp.fsum(K(x, t) * K(t, y) for t in range(X))
        assert abs(sq - K(x, y)) < 1e-40


def test_ope_kernel_single_point(ctx):
    mp = ctx.mp
    K = ope_kernel(EnsembleSpec(CH1, 1), ctx)
    for x, y in ((0, 0), (1, 3)):
        ref = mp.sqrt(CH1.weight(x, ctx) * CH1.weight(y, ctx)) / CH1.sq_norm(0, ctx)
        assert abs(K(x, y) - ref) < 1e-60


@pytest.mark.parametrize("fam", [CH1, ME])
def test_deformed_kernel_k0_equals_ope_kernel(ctx, fam):
    spec = EnsembleSpec(fam, 3)
    K, O = deformed_kernel(spec, ctx), ope_kernel(spec, ctx)
    for x in range(20):
        for y in range(20):
            assert abs(K(x, y) - O(x, y)) <= ctx.tol_rel * 16


@pytest.mark.parametrize("fam", [CH1, ME])
@pytest.mark.parametrize("d", [U1, U2])
def test_deformed_kernel_matches_sum_form(ctx, fam, d):
    spec = EnsembleSpec(fam, 3, d)
    K, S = deformed_kernel(spec, ctx), sum_form_kernel(spec, ctx)
    for x in range(6):
        for y in range(6):
            assert abs(K(x, y) - S(x, y)) < 1e-60


def test_deformed_kernel_symmetry_and_minors(ctx):
    rng = random.Random(3)
    spec = EnsembleSpec(ME, 4, U2)
    K = deformed_kernel(spec, ctx)
    for _ in range(20):
        x, y = rng.randrange(30), rng.randrange(30)
        assert abs(K(x, y) - K(y, x)) < 1e-60
    for x in range(15):
        assert 0 <= K(x, x) <= 1
    for pts in itertools.combinations(range(6), 2):
        assert -1e-60 <= K.minor(pts) <= 1
    for pts in itertools.combinations(range(5), 3):
        assert -1e-60 <= K.minor(pts) <= 1


def test_deformed_kernel_trace(ctx):
    spec = EnsembleSpec(CH1, 3, U2)
    K = deformed_kernel(spec, ctx)
    X = support_cutoff(spec, ctx)
    assert abs(ctx.mp.fsum(K(x, x) for x in range(X)) - 3) < 1e-10


@pytest.mark.parametrize("d", [DeformationSpec(), U1])
def test_pair_probability_is_a_minor(ctx, d):
    spec = EnsembleSpec(CH1, 2, d)
    K = deformed_kernel(spec, ctx)
    for x1, x2 in ((0, 1), (2, 5)):
        p = ensemble_pair_probability(spec, x1, x2, ctx)
        assert abs(K.minor([x1, x2]) / p - 1) < 1e-12


def test_diagonal_switch_on_real_probes(ctx):
    spec = EnsembleSpec(CH1, 3, U1)
    K = deformed_kernel(spec, ctx)
    mp = ctx.mp
    x = ctx.num("2.25")
    near = K(x, x + mp.mpf("1e-12"))
    assert abs(near - K(x, x)) < 1e-9
    off = K(x, x + mp.mpf("1e-6"))
    assert abs(off - K(x, x)) < 1e-4


def test_kernel_provenance(ctx):
    K = deformed_kernel(EnsembleSpec(ME, 2, U1), ctx)
    assert K.provenance["N"] == 2
    assert K.provenance["u"] == ["0.5"]
    assert K.carrier == "N"
