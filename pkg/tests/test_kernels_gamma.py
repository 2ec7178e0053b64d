import pytest

from christoffel_dpp.errors import DegenerateDeformationError
from christoffel_dpp.kernels import (
    W,
    GammaDeformParams,
    Psi,
    Psi_gamma_only,
    ZParams,
    gamma_deformed_kernel,
    gamma_deformed_kernel_printed,
    gamma_kernel,
    h_dx,
    h_fn,
    psi,
    psi_asymptotic_check,
    scaled_deformed_zmeasure,
    unscaled_limit_estimate,
    zmeas_deformed_kernel,
)
from christoffel_dpp.kernels.gamma_limit import f_fn, f_logdx, phi
from christoffel_dpp.kernels.zmeasure import psi_dx
from christoffel_dpp.specfun import get_context

PRIN = ZParams(complex(0.3, 0.4), complex(0.3, -0.4), "0.5")
COMP = ZParams("0.2", "0.6", "0.5")
PAIRS = [(0.5, 1.5), (-0.5, 2.5), (1.5, 1.5)]

# limits of the unscaled deformed kernel K^1 at u = 0.3, read off at xi = 1 - 2^-140 (1200 bits)
UNSCALED_LIMIT = {
    "principal": ["0.002312941281241162997900267", "0.0326126905893665772511343", "0.007118150739846308303079261"],
    "complementary": ["0.000598729689888929824878397", "0.01287188502355313544078601", "0.001856387094538587907578318"],
}


def test_params_validation():
    with pytest.raises(ValueError):
        GammaDeformParams(ZParams(4, "4.5", "0.3"), "0.3")
    with pytest.raises(ValueError):
        GammaDeformParams(COMP, 1.5)


@pytest.mark.parametrize("zp", [PRIN, COMP])
def test_f_swaps_to_reciprocal(ctx, zp):
    for x in ("0.3", "1.5", "-0.2"):
        assert abs(f_fn(x, zp, ctx) * f_fn(x, zp.swapped(), ctx) - 1) < 1e-60
        assert abs(f_logdx(x, zp, ctx) + f_logdx(x, zp.swapped(), ctx)) < 1e-60


@pytest.mark.parametrize("zp", [PRIN, COMP])
def test_h_factorizes(ctx, zp):
    for s in (zp, zp.swapped()):
        lhs = h_fn("0.3", -0.5, s, ctx) * h_fn("1.7", 1.5, s, ctx)
        rhs = h_fn("0.3", 1.5, s, ctx) * h_fn("1.7", -0.5, s, ctx)
        assert abs(lhs - rhs) < 1e-25 * max(1, abs(lhs))
        a = h_fn("0.3", -0.5, s, ctx) * h_dx("0.3", 1.5, s, ctx)
        b = h_fn("0.3", 1.5, s, ctx) * h_dx("0.3", -0.5, s, ctx)
        assert abs(a - b) < 1e-25 * max(1, abs(a))


def test_W_antisymmetric(ctx):
    assert abs(W("0.3", -0.5, -1.5, PRIN, ctx) + W("0.3", -1.5, -0.5, PRIN, ctx)) < 1e-60
    assert abs(W("0.3", 0.5, 0.5, PRIN, ctx)) < 1e-60


@pytest.mark.parametrize("zp", [PRIN, COMP])
@pytest.mark.parametrize("x, y, a, b", [(0.5, 1.7, -1.5, 0.5), ("0.3", "-0.2", -0.5, 2.5)])
def test_Psi_gamma_only_form(ctx, zp, x, y, a, b):
    assert abs(Psi(x, y, a, b, zp, ctx) - Psi_gamma_only(x, y, a, b, zp, ctx)) < 1e-18


def test_psi_asymptotics_principal(ctx):
    r = psi_asymptotic_check(-0.5, "0.3", PRIN, ["0.99", "0.999"], ctx)
    (_, r0, _), (_, r1, _) = r["rows"]
    assert 8 <= r0 / r1 <= 12


def test_psi_asymptotics_complementary(ctx):
    # the correction multiplies (1-xi)^{-|z-z'|/2}, so the residual falls like (1-xi)^{0.8}
    r = psi_asymptotic_check(-0.5, "0.3", COMP, ["0.99", "0.999", "0.9999"], ctx)
    for sp, sq in r["slopes"]:
        assert abs(sp - 0.8) < 0.05
        assert abs(sq - 0.8) < 0.05


def test_phi_residual_is_small(ctx):
    r = psi_asymptotic_check(1.5, "-0.2", PRIN, ["0.999", "0.9999"], ctx)
    for xi, _, q in r["rows"]:
        assert q < 10 * (1 - xi) ** ctx.mp.mpf("0.8")


def test_phi_tends_to_psi_prime(ctx):
    zp = ZParams(PRIN.z, PRIN.zp, "0.999999")
    gap = abs(phi(0.5, "0.3", zp, ctx) - psi_dx(0.5, "0.3", zp, ctx))
    assert gap < 1e-5


@pytest.mark.parametrize("zp", [PRIN, COMP])
def test_antisymmetrized_pair_limit(ctx, zp):
    mp = ctx.mp
    target = Psi("0.5", "1.5", -0.5, 0.5, zp, ctx)
    errs = []
    for xi in ("0.999", "0.99999"):
        z = ZParams(zp.z, zp.zp, xi)
        e = 1 - ctx.num(xi)
        d = psi(-0.5, 0.5, z, ctx) * psi(0.5, 1.5, z, ctx) - psi(-0.5, 1.5, z, ctx) * psi(0.5, 0.5, z, ctx)
        errs.append(abs(d / e - target))
    assert errs[1] < errs[0]
    assert errs[1] < 1e-2 * max(1, abs(target))


@pytest.mark.parametrize("zp", [PRIN, COMP])
def test_undeformed_limit(ctx, zp):
    G = gamma_kernel(zp, ctx)
    errs = []
    for xi in ("0.99", "0.999", "0.9999"):
        K = zmeas_deformed_kernel(ZParams(zp.z, zp.zp, xi), [], ctx)
        errs.append(max(abs(K(x, y) - G(x, y)) for x, y in PAIRS))
    assert errs[0] > errs[1] > errs[2]


@pytest.mark.parametrize("zp", [PRIN, COMP])
def test_gamma_kernel_swap_and_symmetry(ctx, zp):
    G, Gs = gamma_kernel(zp, ctx), gamma_kernel(zp.swapped(), ctx)
    for x, y in PAIRS + [(-2.5, 0.5)]:
        assert abs(G(x, y) - Gs(x, y)) < 1e-12
        assert abs(G(x, y) - G(y, x)) < 1e-40
    assert 0 < G(0.5, 0.5) < 1


@pytest.mark.parametrize("zp", [PRIN, COMP])
def test_cofactor_limit_kernel_vanishes(ctx, zp):
    # h(x, a) splits into a point factor and an index factor, so the border
    # cofactor sums collapse to determinants with a repeated row
    K = gamma_deformed_kernel(GammaDeformParams(zp, "0.3"), ctx)
    for x, y in PAIRS:
        assert abs(K(x, y)) < ctx.mp.ldexp(1, 40 - ctx.mantissa_bits)
    Ks = gamma_deformed_kernel(GammaDeformParams(zp.swapped(), "0.3"), ctx)
    assert abs(K(0.5, 1.5) - Ks(0.5, 1.5)) < 1e-12


@pytest.mark.parametrize("zp", [PRIN, COMP])
def test_scaled_kernel_goes_to_zero_quadratically(ctx, zp):
    mp = ctx.mp
    gp = GammaDeformParams(zp, "0.3")
    vals = [abs(scaled_deformed_zmeasure(gp, xi, ctx)(0.5, 1.5)) for xi in ("0.999", "0.9999")]
    slope = mp.log(vals[0] / vals[1]) / mp.log(10)
    assert abs(slope - 2) < 0.1


def test_printed_formula_disagrees(ctx):
    Kp = gamma_deformed_kernel_printed(GammaDeformParams(PRIN, "0.3"), ctx)
    v = Kp(0.5, 1.5)
    assert abs(ctx.mp.im(v)) > 1e-3


def test_unscaled_limit_needs_precision(ctx):
    with pytest.raises(ValueError):
        unscaled_limit_estimate(GammaDeformParams(PRIN, "0.3"), PAIRS, ctx=ctx)


@pytest.mark.slow
@pytest.mark.parametrize("zp, tol", [(PRIN, 1e-24), (COMP, 1e-17)])
def test_unscaled_limit_values(zp, tol):
    # complementary corrections decay only like (1-xi)^{1-|z-z'|}
    ctx = get_context(1216)
    mp = ctx.mp
    vals, spread = unscaled_limit_estimate(GammaDeformParams(zp, "0.3"), PAIRS, ctx=ctx)
    assert spread < tol
    for v, ref in zip(vals, UNSCALED_LIMIT[zp.series]):
        assert abs(v - mp.mpf(ref)) < tol


def test_degenerate_u_is_reported(ctx, monkeypatch):
    import christoffel_dpp.kernels.gamma_limit as gl

    monkeypatch.setattr(gl, "W", lambda *a, **k: ctx.mp.zero)
    with pytest.raises(DegenerateDeformationError):
        gl.gamma_deformed_kernel(GammaDeformParams(PRIN, "0.3"), ctx)
