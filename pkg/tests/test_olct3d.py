from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from octolct.errors import DataError, ParameterError, ResourceError, ShapeError
from octolct.io import generate
from octolct.lct1d import Grid1D, LCTParams, kernel_eval
from octolct.octonion import Octonion
from octolct.olct3d import (
    PARITY_TAGS,
    OctonionField3D,
    RealField3D,
    apply_axis,
    imaginary_residual,
    lct3d,
    lct3d_direct,
    olct,
    olct_direct,
    olct_direct_at,
    olct_from_lct3d,
    olct_inverse,
    olct_inverse_direct,
    olct_parity_components,
    olct_separable,
    paired_grids,
    parity_split,
    triple_constant,
)

from conftest import cube, random_triple, rel_err
from test_lct1d import gaussian_lct


def scalar_olct_point(f: RealField3D, A, wgrids, idx) -> Octonion:
    """One output value from plain Octonion arithmetic, multiplied left to right."""
    total = Octonion()
    w = [wgrids[k].coords[idx[k]] for k in range(3)]
    x = [g.coords for g in f.grids]
    for i, x1 in enumerate(x[0]):
        for j, x2 in enumerate(x[1]):
            for k, x3 in enumerate(x[2]):
                term = (f.samples[i, j, k] * kernel_eval(A[0], x1, w[0], 1)) * kernel_eval(A[1], x2, w[1], 2)
                total = total + term * kernel_eval(A[2], x3, w[2], 4)
    return total * f.cell_volume


def random_field(rng, shape, step=0.7):
    return RealField3D(rng.standard_normal(shape), tuple(Grid1D(n, step) for n in shape))


@pytest.mark.parametrize("shape", [(3, 3, 3), (2, 3, 4)])
def test_direct_sum_matches_scalar_arithmetic(shape, rng):
    f = random_field(rng, shape)
    A = random_triple(rng)
    F = olct_direct(f, A)
    for idx in [(0, 0, 0), tuple(n - 1 for n in shape), (1, 1, 1)]:
        expected = scalar_olct_point(f, A, F.wgrids, idx)
        assert np.max(np.abs(F.samples[idx] - expected.coeffs)) < 1e-13


@pytest.mark.parametrize("seed", range(5))
@pytest.mark.parametrize("path", ["fast", "direct"])
def test_separable_matches_direct(seed, path):
    rng = np.random.default_rng(seed)
    f = random_field(rng, (9, 9, 9))
    A = random_triple(rng)
    assert rel_err(olct_separable(f, A, path=path).samples, olct_direct(f, A).samples) <= 1e-10


def test_direct_at_matches_full_direct(rng):
    f = random_field(rng, (5, 6, 7))
    A = random_triple(rng)
    F = olct_direct(f, A)
    idx = np.array([[0, 0, 0], [4, 5, 6], [2, 1, 3]])
    assert rel_err(olct_direct_at(f, A, idx), F.samples[idx[:, 0], idx[:, 1], idx[:, 2]]) < 1e-13


def test_separable_gaussian_closed_form():
    # mild chirps so the sampled spectrum is not aliased
    A = (LCTParams(0.3, 1.2, (0.3 * 0.5 - 1) / 1.2, 0.5), LCTParams(0.0, -0.8, 1.25, 0.0),
         LCTParams(-0.2, 1.6, (-0.2 * 0.4 - 1) / 1.6, 0.4))
    grids = cube(33, 0.4)
    f = generate("gaussian", grids)
    F = olct(f, A)
    wg = F.wgrids
    z = [gaussian_lct(A[k], wg[k].coords) for k in range(3)]
    # planar factors multiplied left to right: z1 (mu1) z2 (mu2) z3 (mu4)
    o1 = np.zeros((33, 8)); o1[:, 0] = z[0].real; o1[:, 1] = z[0].imag
    o2 = np.zeros((33, 8)); o2[:, 0] = z[1].real; o2[:, 2] = z[1].imag
    o3 = np.zeros((33, 8)); o3[:, 0] = z[2].real; o3[:, 4] = z[2].imag
    from octolct.octonion import oct_mul_array
    expected = oct_mul_array(oct_mul_array(o1[:, None, None], o2[None, :, None]), o3[None, None, :])
    assert rel_err(F.samples, expected) < 1e-8


def test_stage_closure(rng):
    f = random_field(rng, (5, 5, 5))
    A = random_triple(rng)
    wg = paired_grids(f.grids, A)
    v = np.zeros((5, 5, 5, 8))
    v[..., 0] = f.samples
    s1 = apply_axis(v, 0, A[0], f.grids[0], wg[0], [0])
    assert not np.any(s1[..., [2, 3, 4, 5, 6, 7]])
    s2 = apply_axis(s1, 1, A[1], f.grids[1], wg[1], [0, 1])
    assert not np.any(s2[..., 4:])
    s3 = apply_axis(s2, 2, A[2], f.grids[2], wg[2], [0, 1, 2, 3])
    assert np.all(np.any(s3 != 0, axis=(0, 1, 2)))


@settings(max_examples=20, deadline=None)
@given(st.floats(-5, 5), st.floats(-5, 5), st.integers(0, 2**31))
def test_linearity(alpha, beta, seed):
    rng = np.random.default_rng(seed)
    f, g = random_field(rng, (5, 4, 3)), random_field(rng, (5, 4, 3))
    A = random_triple(rng)
    lhs = olct(alpha * f + beta * g, A).samples
    rhs = alpha * olct(f, A).samples + beta * olct(g, A).samples
    assert np.max(np.abs(lhs - rhs)) <= 1e-12 * (1 + np.max(np.abs(rhs)))


def test_spectrum_norm_preserved(rng):
    f = random_field(rng, (8, 9, 10))
    F = olct(f, random_triple(rng))
    assert np.sum(F.samples**2) * F.cell_volume == pytest.approx(np.sum(f.samples**2) * f.cell_volume, rel=1e-12)


def test_sup_of_spectrum_bounded_by_l1(rng):
    f = random_field(rng, (7, 7, 7))
    A = random_triple(rng)
    F = olct(f, A)
    assert F.magnitude().max() <= triple_constant(A) * np.abs(f.samples).sum() * f.cell_volume * (1 + 1e-12)


# --- inversion ------------------------------------------------------------


@pytest.mark.parametrize("shape", [(9, 9, 9), (6, 7, 8)])
def test_fast_round_trip(shape, rng):
    f = random_field(rng, shape)
    A = random_triple(rng)
    back, residual = olct_inverse(olct(f, A), A, f.grids, return_residual=True)
    assert rel_err(back.samples, f.samples) <= 1e-12
    assert residual <= 1e-12


def test_quadrature_round_trip_gaussian():
    A = (LCTParams(0.5, 1.2, (0.5 * 0.8 - 1) / 1.2, 0.8), LCTParams(1, -0.6, 0, 1),
         LCTParams(-0.3, 1.7, (-0.3 * 1.1 - 1) / 1.7, 1.1))
    grids = (Grid1D.spanning(33, 8.0),) * 3
    f = generate("gaussian", grids)
    F = olct(f, A, path="direct")
    back = olct_inverse(F, A, grids, path="direct")
    assert rel_err(back.samples, f.samples) <= 1e-2


def test_direct_inverse(rng):
    f = random_field(rng, (5, 5, 5))
    A = random_triple(rng)
    F = olct_direct(f, A)
    back = olct_inverse_direct(F, A, f.grids)
    assert rel_err(back[..., 0], f.samples) < 1e-12
    assert np.max(np.abs(back[..., 1:])) < 1e-12


def test_delta_round_trip():
    grids = cube(7, 0.5)
    d = generate("delta", grids)
    A = (LCTParams(0, 1, -1, 0),) * 3
    back = olct_inverse(olct(d, A), A, grids)
    assert rel_err(back.samples, d.samples) < 1e-12


def test_imaginary_residual_of_zero():
    assert imaginary_residual(np.zeros((2, 8))) == 0.0


# --- parity -----------------------------------------------------------------


def test_parity_split_sums_and_parities(rng):
    f = random_field(rng, (5, 6, 7))
    parts = parity_split(f)
    assert set(parts) == set(PARITY_TAGS)
    assert np.allclose(sum(p.samples for p in parts.values()), f.samples, atol=1e-14)
    for tag, p in parts.items():
        s = p.samples
        for axis, ch in enumerate(tag):
            flipped = np.flip(s, axis=axis)
            assert np.allclose(flipped, s if ch == "e" else -s, atol=1e-14)


def test_even_gaussian_only_eee():
    parts = parity_split(generate("gaussian", cube(7, 0.5)))
    for tag, p in parts.items():
        if tag != "eee":
            assert not np.any(np.abs(p.samples) > 1e-15)


@pytest.mark.parametrize("seed", range(3))
def test_parity_reassembly_matches_direct(seed):
    rng = np.random.default_rng(seed)
    f = random_field(rng, (9, 9, 9))
    A = random_triple(rng)
    octet = olct_parity_components(f, A)
    assert rel_err(octet.reassemble(), olct_direct(f, A).samples) <= 1e-10
    assert octet.L_eoo is octet.components[6] or np.array_equal(octet.L_eoo, octet.components[6])


def test_matched_parity_terms_leave_out_cross_terms(rng):
    f = random_field(rng, (7, 7, 7))
    A = random_triple(rng)
    octet = olct_parity_components(f, A)
    assert octet.leakage() > 0.1
    assert rel_err(octet.reassemble_matched(), olct(f, A).samples) > 0.1


def test_parity_components_of_zero():
    octet = olct_parity_components(RealField3D(np.zeros((3, 3, 3)), cube(3, 1.0)), (LCTParams(1, 1, 0, 1),) * 3)
    assert not np.any(octet.components)


# --- single-unit 3D LCT ---------------------------------------------------


def test_lct3d_matches_direct_and_is_planar(rng):
    f = random_field(rng, (6, 7, 5))
    A = random_triple(rng)
    L = lct3d(f, A)
    assert rel_err(L.samples, lct3d_direct(f, A).samples) < 1e-12
    assert not np.any(L.samples[..., 2:])


@pytest.mark.parametrize("seed", range(5))
def test_four_lct_assembly(seed):
    rng = np.random.default_rng(seed)
    f = random_field(rng, (9, 9, 9))
    A = random_triple(rng)
    direct = olct_direct(f, A).samples
    assert rel_err(olct_from_lct3d(f, A).samples, direct) <= 1e-10


def test_four_lct_assembly_with_plus_mu5_disagrees(rng):
    f = random_field(rng, (5, 5, 5))
    A = random_triple(rng)
    wrong = olct_from_lct3d(f, A, printed_sign=True).samples
    assert rel_err(wrong, olct_direct(f, A).samples) > 0.1


# --- validation -----------------------------------------------------------


def test_field_validation():
    with pytest.raises(DataError):
        RealField3D(np.full((2, 2, 2), np.nan), cube(2, 1.0))
    with pytest.raises(ShapeError):
        RealField3D(np.zeros((2, 2, 3)), cube(2, 1.0))
    with pytest.raises(ShapeError):
        OctonionField3D(np.zeros((2, 2, 2, 7)), cube(2, 1.0))


def test_wrong_parameter_count(rng):
    with pytest.raises(ParameterError):
        olct(random_field(rng, (3, 3, 3)), (LCTParams(1, 1, 0, 1),) * 2)


def test_direct_guard_rail():
    f = RealField3D(np.zeros((21, 21, 21)), cube(21, 0.1))
    with pytest.raises(ResourceError):
        olct_direct(f, (LCTParams(1, 1, 0, 1),) * 3)
