from __future__ import annotations

import math

import numpy as np
import pytest

from octolct.analysis import (
    ConcentrationRegion,
    InequalityReport,
    canonical_battery,
    check_concentration,
    check_convolution_theorem,
    check_hausdorff_young,
    check_lieb,
    check_log_uncertainty,
    check_minkowski,
    check_sup_bound,
    conjugate_exponent,
    convolve,
    hausdorff_young_constant,
    inner_product,
    interpolated_constant,
    lieb_E,
    lieb_constant,
    log_constant,
    log_weights,
    lp_norm,
    top_energy_region,
    _origin_cell_log,
)
from octolct.errors import ParameterError, ResourceError, ShapeError
from octolct.io import generate
from octolct.lct1d import Grid1D, LCTParams
from octolct.octonion import conj
from octolct.olct3d import OctonionField3D, RealField3D, triple_constant
from octolct.stolct import Window3D, stolct

from conftest import cube, random_triple, rel_err


def unit(f: RealField3D) -> RealField3D:
    return f * (1.0 / lp_norm(f, 2))


@pytest.fixture
def gauss_pair(rng):
    grids = cube(9, 0.8)
    f = unit(generate("gaussian", grids))
    w = Window3D.from_field(unit(generate("gaussian", grids, {"sigma": 0.8})))
    return f, w, random_triple(rng)


# --- norms, inner products, convolution -----------------------------------


@pytest.mark.parametrize("p", [1, 1.5, 2, 3, math.inf])
def test_indicator_norm_is_one(p):
    s = np.zeros((3, 3, 3))
    s[1, 2, 0] = 1.0
    assert lp_norm(RealField3D(s, cube(3, 1.0)), p) == pytest.approx(1.0)


def test_gaussian_l2_norm_one_axis():
    grids = (Grid1D(401, 0.05), Grid1D(1, 1.0), Grid1D(1, 1.0))
    f = RealField3D(np.exp(-grids[0].coords ** 2 / 2)[:, None, None], grids)
    assert abs(lp_norm(f, 2) - math.pi**0.25) < 1e-4


@pytest.mark.parametrize("p", [1, 2, 4, math.inf])
def test_norm_homogeneity(p, rng):
    f = RealField3D(rng.standard_normal((4, 5, 6)), (Grid1D(4, 0.3), Grid1D(5, 0.3), Grid1D(6, 0.3)))
    assert lp_norm(-2.5 * f, p) == pytest.approx(2.5 * lp_norm(f, p), rel=1e-13)


def test_norm_rejects_small_p(rng):
    with pytest.raises(ParameterError):
        lp_norm(RealField3D(np.ones((2, 2, 2)), cube(2, 1.0)), 0.5)


def test_inner_product_real(rng):
    grids = cube(5, 0.4)
    f = RealField3D(rng.standard_normal((5, 5, 5)), grids)
    assert inner_product(f, f) == pytest.approx(lp_norm(f, 2) ** 2, rel=1e-12)
    a = np.zeros((5, 5, 5)); a[0, 0, 0] = 1
    b = np.zeros((5, 5, 5)); b[1, 0, 0] = 1
    assert inner_product(RealField3D(a, grids), RealField3D(b, grids)) == 0.0


def test_inner_product_octonion_conjugate_symmetry(rng):
    grids = cube(3, 0.5)
    F = OctonionField3D(rng.standard_normal((3, 3, 3, 8)), grids)
    G = OctonionField3D(rng.standard_normal((3, 3, 3, 8)), grids)
    assert inner_product(F, G).isclose(conj(inner_product(G, F)), tol=1e-12)
    assert inner_product(F, F)[0] == pytest.approx(lp_norm(F, 2) ** 2, rel=1e-12)


def test_inner_product_shape_mismatch(rng):
    with pytest.raises(ShapeError):
        inner_product(RealField3D(np.ones((2, 2, 2)), cube(2, 1.0)), RealField3D(np.ones((3, 3, 3)), cube(3, 1.0)))


def brute_convolve(f: RealField3D, g: RealField3D) -> np.ndarray:
    n = f.samples.shape
    c = [k // 2 for k in n]
    out = np.zeros(n)
    for i in np.ndindex(*n):
        acc = 0.0
        for j in np.ndindex(*n):
            k = tuple(i[a] - j[a] + c[a] for a in range(3))
            if all(0 <= k[a] < n[a] for a in range(3)):
                acc += f.samples[j] * g.samples[k]
        out[i] = acc * f.cell_volume
    return out


@pytest.mark.parametrize("shape", [(3, 3, 3), (5, 3, 7)])
def test_convolve_matches_brute_force(shape, rng):
    grids = tuple(Grid1D(n, 0.5) for n in shape)
    f = RealField3D(rng.standard_normal(shape), grids)
    g = RealField3D(rng.standard_normal(shape), grids)
    assert rel_err(convolve(f, g).samples, brute_convolve(f, g)) <= 1e-12


def test_convolve_with_delta(rng):
    grids = cube(5, 0.5)
    f = RealField3D(rng.standard_normal((5, 5, 5)), grids)
    assert rel_err(convolve(f, generate("delta", grids)).samples, f.samples) < 1e-14


def test_box_convolution_is_triangle():
    grids = cube(9, 1.0)
    box = generate("box", grids, {"radius": 1.0})  # three samples per axis
    tri = convolve(box, box).samples
    profile = tri[:, 4, 4] / tri[4, 4, 4]
    # the other two axes sit at their peak, so this is the 1D triangle
    expected = np.array([0, 0, 1, 2, 3, 2, 1, 0, 0]) / 3.0
    assert np.allclose(profile, expected)


def test_convolve_rejects_even_lattice():
    grids = cube(4, 1.0)
    with pytest.raises(ShapeError):
        convolve(RealField3D(np.ones((4, 4, 4)), grids), RealField3D(np.ones((4, 4, 4)), grids))


# --- inequality reports ---------------------------------------------------


def test_report_tolerance():
    assert InequalityReport.build("x", 1.0 + 5e-10, 1.0, 1.0, "").passed
    assert not InequalityReport.build("x", 1.0 + 1e-8, 1.0, 1.0, "").passed
    r = InequalityReport.build("x", 0.5, 1.0, 2.0, "fx")
    assert r.margin == 0.5 and r.to_dict()["fixture"] == "fx"


def test_conjugate_exponents():
    assert conjugate_exponent(1) == math.inf
    assert conjugate_exponent(math.inf) == 1
    assert conjugate_exponent(4 / 3) == pytest.approx(4)


def test_sup_bound_gaussian(gauss_pair):
    r = check_sup_bound(*gauss_pair)
    assert r.passed and 0 < r.lhs <= r.rhs


@pytest.mark.parametrize("p, q", [(1, math.inf), (math.inf, 1), (4 / 3, 4)])
def test_sup_bound_other_exponents(p, q, gauss_pair):
    assert check_sup_bound(*gauss_pair, p=p, q=q).passed


def test_sup_bound_peaked_signal(rng):
    grids = cube(7, 0.7)
    f = generate("delta", grids)
    w = Window3D.from_field(generate("gaussian", grids))
    r = check_sup_bound(f, w, random_triple(rng), 1, math.inf)
    # with p = 1 the delta attains the bound up to the window's peak value
    assert r.passed and r.margin <= 1e-12 * r.rhs + 1e-15


def test_sup_bound_zero_signal(gauss_pair):
    f, w, A = gauss_pair
    r = check_sup_bound(0.0 * f, w, A)
    assert r.lhs == 0.0 and r.passed


def test_sup_bound_conjugacy(gauss_pair):
    with pytest.raises(ParameterError):
        check_sup_bound(*gauss_pair, p=2, q=3)


def test_minkowski(gauss_pair):
    r = check_minkowski(*gauss_pair)
    assert r.passed
    assert r.details["transform_side"] <= r.lhs


def test_concentration_whole_lattice(gauss_pair):
    f, w, A = gauss_pair
    G = stolct(f, w, A)
    region = ConcentrationRegion.from_mask(G, np.ones(G.samples.shape[:-1], dtype=bool))
    assert region.epsilon < 0.05
    r = check_concentration(f, w, A, region=region, G=G)
    assert r.passed and r.rhs == pytest.approx(G.cell_volume * G.samples[..., 0].size)


def test_concentration_top_energy(gauss_pair):
    f, w, A = gauss_pair
    G = stolct(f, w, A)
    region = top_energy_region(G, 0.9)
    e = (np.sum(G.samples**2, axis=-1) * G.cell_volume).ravel()
    inside = np.sort(e[region.cells])
    total = e.sum()
    assert inside.sum() >= 0.9 * total
    assert inside.sum() - inside[0] < 0.9 * total  # no cell can be dropped
    r = check_concentration(f, w, A, region=region, G=G)
    assert r.passed and r.details["sharp_bound"] <= r.rhs


def test_concentration_empty_region(gauss_pair):
    f, w, A = gauss_pair
    G = stolct(f, w, A)
    region = ConcentrationRegion.from_mask(G, np.zeros(G.samples.shape[:-1], dtype=bool))
    assert region.epsilon == 1.0 and region.measure == 0.0
    assert check_concentration(f, w, A, region=region, G=G).passed


def test_concentration_needs_unit_norms(gauss_pair):
    f, w, A = gauss_pair
    with pytest.raises(ParameterError):
        check_concentration(2.0 * f, w, A)


def test_hausdorff_young_constant_values():
    A = (LCTParams(1, 0.5, 0, 1), LCTParams(1, 2.0, 0, 1), LCTParams(1, 1.5, 0, 1))
    assert hausdorff_young_constant(A, math.inf) == pytest.approx(1 / (2 * math.pi))
    assert hausdorff_young_constant(A, 2) == pytest.approx(1 / ((2 * math.pi) ** 1.25 * 1.5**0.25))
    assert interpolated_constant(A, 2) == 1.0
    assert interpolated_constant(A, math.inf) == pytest.approx(triple_constant(A))


def test_hausdorff_young_p1(gauss_pair):
    f, _, A = gauss_pair
    assert check_hausdorff_young(f, A, 1).passed


def test_hausdorff_young_p2_left_side_is_plancherel(gauss_pair):
    f, _, A = gauss_pair
    r = check_hausdorff_young(f, A, 2)
    assert r.lhs == pytest.approx(lp_norm(f, 2), rel=1e-12)
    assert r.details["interpolated_passed"]


@pytest.mark.parametrize("p", [1, 4 / 3, 2])
def test_hausdorff_young_interpolated_constant_holds(p, gauss_pair):
    f, _, A = gauss_pair
    assert check_hausdorff_young(f, A, p).details["interpolated_passed"]


def test_hausdorff_young_zero_and_range(gauss_pair):
    f, _, A = gauss_pair
    assert check_hausdorff_young(0.0 * f, A, 4 / 3).passed
    with pytest.raises(ParameterError):
        check_hausdorff_young(f, A, 2.5)


def test_lieb_constant_at_two():
    assert lieb_E(2, 2) == pytest.approx(2.0, rel=1e-15)
    A = (LCTParams(1, 0.5, 0, 1), LCTParams(1, 2.0, 0, 1), LCTParams(1, 1.5, 0, 1))
    assert lieb_constant(A, 2, 2) == pytest.approx(2 / ((2 * math.pi) ** 2.5 * math.sqrt(1.5)))


def test_lieb_left_side_is_product_of_norms(gauss_pair):
    f, w, A = gauss_pair
    r = check_lieb(f, w, A)
    assert r.lhs == pytest.approx(1.0, rel=2e-2)  # shifts truncated at the lattice edge
    assert r.lhs <= 1.0 + 1e-12
    assert r.details["interpolated_passed"]


def test_lieb_homogeneity(gauss_pair):
    f, w, A = gauss_pair
    r1 = check_lieb(f, w, A)
    r3 = check_lieb(3.0 * f, w, A)
    assert r3.lhs == pytest.approx(3 * r1.lhs, rel=1e-12)
    assert r3.rhs == pytest.approx(3 * r1.rhs, rel=1e-12)
    assert r3.passed == r1.passed


def test_lieb_exponent_flag(gauss_pair):
    with pytest.raises(ParameterError):
        check_lieb(*gauss_pair, p=4)
    r = check_lieb(*gauss_pair, p=4, allow_other_exponents=True)
    assert "q = p/(p-1)" in r.details["interpretation"]
    with pytest.raises(ParameterError):
        check_lieb(*gauss_pair, p=1.5, allow_other_exponents=True)


def test_log_constant_against_series():
    # psi(1/2) = -gamma + sum_k (1/(k+1) - 1/(k+1/2)); the tail after N terms is about -1/(2N)
    N = 1_000_000
    k = np.arange(N, dtype=float)
    psi_half = -np.euler_gamma + np.sum(1 / (k + 1) - 1 / (k + 0.5)) - 1 / (2 * N)
    assert log_constant() == pytest.approx(math.log(2) + psi_half, abs=1e-9)
    assert log_constant() == pytest.approx(-math.log(2) - np.euler_gamma, abs=1e-14)
    assert round(log_constant(), 5) == -1.27036


def test_log_uncertainty_gaussian(gauss_pair):
    r = check_log_uncertainty(*gauss_pair)
    assert r.passed
    assert r.lhs == pytest.approx(log_constant(), rel=1e-9)


def test_log_uncertainty_homogeneity(gauss_pair):
    f, w, A = gauss_pair
    r1 = check_log_uncertainty(f, w, A)
    r2 = check_log_uncertainty(2.0 * f, w, A)
    assert r2.lhs == pytest.approx(4 * r1.lhs, rel=1e-12)
    assert r2.rhs == pytest.approx(4 * r1.rhs, rel=1e-12)
    assert r1.passed == r2.passed


def test_log_weights_origin_modes():
    grids = cube(3, 1.0)
    avg = log_weights(grids)
    skip = log_weights(grids, "skip")
    assert skip[1, 1, 1] == 0.0
    assert np.isfinite(avg[1, 1, 1]) and avg[1, 1, 1] < 0
    assert avg[0, 1, 1] == pytest.approx(0.0)
    assert _origin_cell_log((1.0, 1.0, 1.0)) == pytest.approx(_origin_cell_log((1.0, 1.0, 1.0), 96), abs=2e-3)
    with pytest.raises(ParameterError):
        log_weights(grids, "drop")


# --- convolution identity --------------------------------------------------


@pytest.fixture
def conv_inputs(rng):
    grids = cube(5, 0.6)
    f = generate("random-seeded", grids, {"seed": 1})
    g = generate("random-seeded", grids, {"seed": 2})
    phi = Window3D.from_field(generate("gaussian", grids, {"sigma": 0.8}))
    psi = Window3D.from_field(generate("gaussian", grids))
    return f, g, phi, psi, random_triple(rng)


def test_convolution_left_sides_agree_and_deterministic(conv_inputs):
    r1 = check_convolution_theorem(*conv_inputs)
    r2 = check_convolution_theorem(*conv_inputs)
    assert r1.lhs_agreement <= 1e-12
    assert r1.digest == r2.digest
    assert np.isfinite(r1.discrepancy)
    assert r1.rhs.shape == r1.lhs_definition.shape == (3, 3, 3, 5, 5, 5, 8)


def test_convolution_zero_g(conv_inputs):
    f, g, phi, psi, A = conv_inputs
    r = check_convolution_theorem(f, 0.0 * g, phi, psi, A)
    assert not np.any(r.lhs_definition) and not np.any(r.rhs)


def test_convolution_deltas(rng):
    grids = cube(3, 0.7)
    d = generate("delta", grids)
    dw = Window3D.from_field(d)
    r = check_convolution_theorem(d, d, dw, dw, random_triple(rng))
    assert r.lhs_agreement <= 1e-12 and np.isfinite(r.discrepancy)


def test_convolution_guard_rail(rng):
    grids = cube(11, 0.5)
    f = generate("gaussian", grids)
    w = Window3D.from_field(f)
    with pytest.raises(ResourceError):
        check_convolution_theorem(f, f, w, w, random_triple(rng))


# --- battery ----------------------------------------------------------------


def test_canonical_battery_shape():
    fixtures = canonical_battery(n=7)
    assert len(fixtures) >= 15
    names = [fx.name for fx in fixtures]
    assert names == sorted(names)
    for fx in fixtures:
        assert lp_norm(fx.f, 2) == pytest.approx(1.0)
        assert lp_norm(fx.window, 2) == pytest.approx(1.0)
        for p in fx.A:
            assert 0.5 <= abs(p.b) <= 2.0
            assert abs(p.det - 1) <= 1e-12
