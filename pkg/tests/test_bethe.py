"""Bethe diagonalization tests: roots, eigenpairs, spectra, growth constants.

Residual checks are performed against dense blocks assembled independently
inside verify_sector; here we freeze concrete eigenvalues and identities.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from barreldimer import bethe, errors, transfer


# ---------------------------------------------------------------------------
# Roots and selections
# ---------------------------------------------------------------------------


def test_roots_odd_sector_are_mth_roots_of_unity():
    roots = np.array(bethe.roots_for_sector(3, 1))
    assert np.allclose(sorted(np.angle(roots)), [-2 * np.pi / 3, 0.0, 2 * np.pi / 3])
    assert np.allclose(roots ** 3, 1.0)


def test_roots_even_sector_are_odd_eighth_roots():
    roots = np.array(bethe.roots_for_sector(4, 2))
    assert np.allclose(roots ** 4, -1.0)
    assert len(set(np.round(roots, 12).tolist())) == 4


@pytest.mark.parametrize("m", [3, 4, 5, 6, 7, 8])
def test_root_power_sign_rule(m):
    for p in range(m + 1):
        roots = np.array(bethe.roots_for_sector(m, p))
        assert np.allclose(roots ** m, (-1.0) ** (p + 1))


def test_selections_are_colex_ordered():
    sels = bethe.selections_for_sector(4, 2)
    assert sels == ((0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3))
    assert len(bethe.selections_for_sector(6, 3)) == 20


# ---------------------------------------------------------------------------
# Eigenpairs
# ---------------------------------------------------------------------------


def test_eigenvalue_ground_selection_m3():
    _, lam = bethe.bethe_eigenpair(3, 1, (0,))
    assert lam == pytest.approx(3.0, abs=1e-12)


def test_eigenvalue_nilpotent_selection_m3():
    _, lam = bethe.bethe_eigenpair(3, 1, (1,))
    assert abs(lam) < 1e-12


def test_full_sector_eigenvalue_is_one():
    _, lam = bethe.bethe_eigenpair(3, 3, (0, 1, 2))
    assert lam == pytest.approx(1.0, abs=1e-12)


def test_eigenpair_rejects_bad_selection():
    with pytest.raises(errors.SectorError):
        bethe.bethe_eigenpair(3, 1, (0, 1))
    with pytest.raises(errors.SectorError):
        bethe.bethe_eigenpair(3, 1, (5,))
    with pytest.raises(errors.DegenerateRootsError):
        bethe.bethe_eigenpair(3, 2, (1, 1))


@pytest.mark.parametrize("m", [3, 4, 5, 6])
def test_direct_equals_complementary_eigenvalue(m):
    rng = np.random.default_rng(97)
    for p in range(m + 1):
        sels = bethe.selections_for_sector(m, p)
        take = sels if len(sels) <= 6 else [sels[i] for i in rng.choice(len(sels), 6, replace=False)]
        for sel in take:
            b, c = rng.uniform(0.5, 2.0, size=2)
            direct = bethe.eigenvalue_direct(m, p, sel, b, c)
            comp = bethe.complementary_eigenvalue(m, p, sel, b, c)
            assert direct == pytest.approx(comp, rel=1e-9, abs=1e-9)


# ---------------------------------------------------------------------------
# Full-sector verification
# ---------------------------------------------------------------------------


def test_verify_sector_m3_spectrum():
    spectrum = bethe.verify_sector(3, 1)
    eigs = sorted(round(e.eigenvalue.real, 9) for e in spectrum.entries)
    assert eigs == [0.0, 0.0, 3.0]
    assert spectrum.rank == 3
    assert spectrum.max_residual <= 1e-9


def test_verify_sector_generic_weights_full_rank():
    spectrum = bethe.verify_sector(4, 2, b=1.2, c=0.8)
    assert spectrum.dimension == 6
    assert spectrum.rank == 6
    assert spectrum.max_residual <= 1e-9


def test_verify_sector_spectra_close_under_conjugation():
    spectrum = bethe.verify_sector(5, 1)
    eigs = np.array([e.eigenvalue for e in spectrum.entries])
    conj = np.conj(eigs)
    assert np.allclose(np.sort_complex(eigs), np.sort_complex(conj), atol=1e-9)


def test_verify_sector_rejects_large_m():
    with pytest.raises(errors.TooLargeError):
        bethe.verify_sector(9, 1)


# ---------------------------------------------------------------------------
# Root-of-unity product identity
# ---------------------------------------------------------------------------


def test_identity_concrete_value():
    roots = np.array(bethe.roots_for_sector(5, 1))
    prod = np.prod(2.0 - 3.0 * roots)
    assert prod == pytest.approx(2 ** 5 - 3 ** 5, rel=1e-12)


def test_identity_degenerate_weight():
    assert bethe.roots_identity_check(4, 2, 1.0, 0.0) == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("m", [3, 5, 8, 12, 20])
def test_identity_random_weights(m):
    rng = np.random.default_rng(271828)
    for p in range(m + 1):
        b, c = rng.uniform(0.5, 2.0, size=2)
        assert bethe.roots_identity_check(m, p, b, c) <= 1e-9


# ---------------------------------------------------------------------------
# Sector maxima and the growth constant
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "m,p,value",
    [
        (3, 1, 3.0),
        (3, 3, 1.0),
        (4, 0, 2.0),
        (4, 2, 2.0 + math.sqrt(2.0)),
        (4, 4, 1.0),
        (5, 1, 5.0),
        (6, 2, 4.0 + 2.0 * math.sqrt(3.0)),
    ],
)
def test_lambda_max_closed_values(m, p, value):
    assert bethe.lambda_max_sector(m, p) == pytest.approx(value, rel=1e-12)


def test_p_zero_and_n_zero_tables():
    assert [bethe.p_zero(m) for m in range(3, 10)] == [1, 2, 1, 2, 3, 2, 3]
    assert [bethe.n_zero(m) for m in range(3, 10)] == [2, 2, 4, 4, 4, 6, 6]
    for m in range(3, 65):
        assert bethe.p_zero(m) + bethe.n_zero(m) == m
        assert bethe.p_zero(m) % 2 == m % 2


@pytest.mark.parametrize(
    "m,rho",
    [(3, 3.0), (4, 2.0 + math.sqrt(2.0)), (5, 5.0), (6, 4.0 + 2.0 * math.sqrt(3.0))],
)
def test_growth_constant_closed_values(m, rho):
    assert bethe.growth_constant(m) == pytest.approx(rho, rel=1e-12)


def test_growth_constant_internal_crosscheck_never_trips():
    for m in range(3, 65):
        assert bethe.growth_constant(m) > 1.0


@pytest.mark.parametrize("m", [3, 4, 5, 6, 7, 8])
def test_dominant_sector_is_p_zero(m):
    p0 = bethe.p_zero(m)
    values = {p: bethe.lambda_max_sector(m, p) for p in range(m % 2, m + 1, 2)}
    assert max(values, key=values.get) == p0
    for p, v in values.items():
        if p != p0:
            assert v < values[p0] - 1e-9


def test_growth_constant_agrees_with_empirical_ratio():
    from fractions import Fraction

    rho = bethe.growth_constant(4)
    ratio = Fraction(
        transfer.count_matchings_transfer(4, 31), transfer.count_matchings_transfer(4, 30)
    )
    assert abs(float(ratio) - rho) < 1e-6 * rho


# ---------------------------------------------------------------------------
# Perron vector positivity
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("m", [3, 4, 5, 6, 7, 8])
def test_perron_positivity(m):
    rep = bethe.perron_positivity_check(m)
    assert rep.p0 == bethe.p_zero(m)
    assert rep.min_amplitude > 0
    assert rep.max_imag <= 1e-9
    assert rep.eigenvalue == pytest.approx(bethe.growth_constant(m), rel=1e-9)


def test_perron_amplitudes_m4_are_sine_ratios():
    rep = bethe.perron_positivity_check(4)
    vec, _ = bethe.bethe_eigenpair(4, 2, rep.selection)
    amps = np.array(vec.amplitudes)
    amps = (amps / amps[0]).real
    assert np.allclose(amps, [1.0, math.sqrt(2.0), 1.0, 1.0, math.sqrt(2.0), 1.0])
