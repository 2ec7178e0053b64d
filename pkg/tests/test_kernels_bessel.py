import random

import pytest

from christoffel_dpp.errors import DegenerateDeformationError
from christoffel_dpp.kernels import BesselTable, bessel_C, deformed_bessel_kernel, discrete_bessel_kernel


def test_k0_collapses_to_discrete_bessel(ctx):
    tab = BesselTable(1, ctx)
    K0 = discrete_bessel_kernel(1, ctx, tab)
    Kd = deformed_bessel_kernel(1, (), ctx, tab)
    for x in range(-5, 5):
        for y in range(-5, 5):
            assert abs(Kd(x, y) - K0(x, y)) < 1e-12


def test_off_diagonal_formula(ctx):
    mp = ctx.mp
    K = discrete_bessel_kernel("0.5", ctx)
    J = lambda n: mp.besselj(n, 2 * mp.sqrt(mp.mpf("0.5")))  # noqa: E731
    x, y = 2, -1
    ref = mp.sqrt(mp.mpf("0.5")) * (J(x) * J(y + 1) - J(y) * J(x + 1)) / (x - y)
    assert abs(K(x, y) - ref) < 1e-50


@pytest.fixture(scope="module")
def diag_alpha_one(ctx):
    K = discrete_bessel_kernel(1, ctx)
    return {x: K(x, x) for x in range(-25, 26)}


def test_particle_hole_balance(ctx, diag_alpha_one):
    # points {lambda_i - i} above zero are matched one-to-one by holes below
    d = diag_alpha_one
    mp = ctx.mp
    above = mp.fsum(d[x] for x in range(0, 26))
    holes = mp.fsum(1 - d[x] for x in range(-25, 0))
    assert abs(above - holes) < 1e-20


def test_mean_size_equals_alpha(ctx, diag_alpha_one):
    # |lambda| = sum over points x >= 0 of (x + 1/2) plus sum over holes x < 0 of (-x - 1/2)
    d = diag_alpha_one
    mp = ctx.mp
    half = mp.mpf(1) / 2
    size = mp.fsum((x + half) * d[x] for x in range(0, 26)) + mp.fsum((-x - half) * (1 - d[x]) for x in range(-25, 0))
    assert abs(size - 1) < 1e-20


def test_diagonal_is_a_probability(diag_alpha_one):
    assert all(-1e-40 <= v <= 1 + 1e-40 for v in diag_alpha_one.values())
    # deep on the negative side every site is occupied
    assert abs(diag_alpha_one[-25] - 1) < 1e-20


def test_diagonal_matches_real_probe(ctx):
    mp = ctx.mp
    K = discrete_bessel_kernel(1, ctx)
    for x in (-3, 0, 2):
        off = K(x, mp.mpf(x) + mp.mpf("1e-20"))
        assert abs(off - K(x, x)) < 1e-15


def test_deformed_symmetry_and_minors(ctx):
    rng = random.Random(11)
    K = deformed_bessel_kernel(1, ("0.3",), ctx)
    for _ in range(20):
        x, y = rng.randrange(-8, 9), rng.randrange(-8, 9)
        assert abs(K(x, y) - K(y, x)) < 1e-40
    for x in range(-6, 7):
        assert -1e-40 <= K(x, x) <= 1 + 1e-40
    for x in range(-4, 4):
        assert K.minor([x, x + 1]) >= -1e-40


def test_deformed_bessel_validation(ctx):
    with pytest.raises(ValueError):
        deformed_bessel_kernel(1, (2,), ctx)
    with pytest.raises(ValueError):
        deformed_bessel_kernel(1, ("0.3", "0.3"), ctx)


def test_C_is_nonzero_and_empty_is_one(ctx):
    assert bessel_C(1, (), ctx) == 1
    assert abs(bessel_C(1, ("0.3",), ctx)) > 1e-10


def test_degenerate_deformation_is_reported(ctx, monkeypatch):
    import christoffel_dpp.kernels.bessel as kb

    def boom(*_a, **_k):
        raise DegenerateDeformationError("C_k")

    monkeypatch.setattr(kb, "bessel_C", boom)
    with pytest.raises(DegenerateDeformationError):
        kb.deformed_bessel_kernel(1, ("0.3",), ctx)


def test_table_memoizes(ctx):
    tab = BesselTable(1, ctx)
    a = tab.J(3)
    assert tab.J(3) is a
    assert tab.L("0.5") is tab.L("0.5")
