import numpy as np
import pytest
from scipy.optimize import brentq

from ruelle_zeta.errors import ConfigError, NonSimpleResonanceError
from ruelle_zeta.geometry import PhasePoint
from ruelle_zeta.orbits import FlowDerivative, PhaseGaussian, orbit_weights
from ruelle_zeta.resonances import (
    Rectangle,
    Resonance,
    default_contour_radius,
    escape_rate,
    laurent_coefficient,
    near_critical_line,
    residue,
    residue_coefficients,
    scan,
    truncation_history,
)
from ruelle_zeta.zeta import build_expansion, zeta_inv


def test_single_real_zero_matches_bisection(low_resonances, expansions):
    real = [r for r in low_resonances if r.lam.imag == 0.0]
    assert real
    oracle = brentq(lambda x: zeta_inv(expansions[0], complex(x)).real, -0.6, -0.2, xtol=1e-14)
    assert max(r.lam.real for r in real) == pytest.approx(oracle, abs=1e-10)
    assert escape_rate(low_resonances) == pytest.approx(0.4103, abs=1e-3)


def test_zero_quality(low_resonances, expansions):
    for res in low_resonances:
        value = zeta_inv(expansions[0], res.lam)
        slope = zeta_inv(expansions[0], res.lam, "dlam")
        assert abs(value) <= 1e-9 * abs(slope)
        assert res.order == 1


def test_far_right_rectangle_is_empty(expansions):
    assert scan(expansions, Rectangle(10.0, 11.0, 0.0, 2.0), 0.5) == []


def test_conjugate_closure(expansions):
    found = scan(expansions[:1], Rectangle(-1.0, 0.5, -3.0, 3.0), 0.25, include_conjugates=False)
    for res in found:
        assert min(abs(other.lam - res.lam.conjugate()) for other in found) <= 1e-10


def test_mirrored_rectangle(expansions, low_resonances):
    mirrored = scan(expansions[:1], Rectangle(-1.0, 0.5, 0.0, 5.0).mirrored(), 0.25, include_conjugates=False)
    for res in low_resonances:
        if res.lam.imag > 0:
            assert min(abs(other.lam - res.lam.conjugate()) for other in mirrored) <= 1e-8


def test_results_sorted(low_resonances):
    keys = [(r.lam.imag, r.lam.real) for r in low_resonances]
    assert keys == sorted(keys)


def test_invalid_scan_arguments(expansions):
    with pytest.raises(ConfigError):
        scan(expansions, Rectangle(1.0, 0.0, 0.0, 1.0))
    with pytest.raises(ConfigError):
        scan(expansions, Rectangle(0.0, 1.0, 0.0, 1.0), cell=0.8)
    with pytest.raises(ConfigError):
        Rectangle.parse("0,1,2")


def test_residue_of_constant_is_band_index(leading, expansions, unit_weights):
    assert residue(expansions, leading, unit_weights) == pytest.approx(1.0, abs=1e-10)
    assert residue(expansions, leading, np.zeros_like(unit_weights)) == 0.0


def test_residue_real_for_real_zero(leading, expansions):
    rng = np.random.default_rng(11)
    weights = rng.normal(size=len(expansions[0].primes))
    assert abs(residue(expansions, leading, weights).imag) <= 1e-10


def test_residue_linearity_and_coefficients(leading, expansions):
    rng = np.random.default_rng(5)
    a, b = rng.normal(size=(2, len(expansions[0].primes)))
    ra, rb = residue(expansions, leading, a), residue(expansions, leading, b)
    assert residue(expansions, leading, 2.0 * a - 3.0 * b) == pytest.approx(2.0 * ra - 3.0 * rb, rel=1e-10, abs=1e-12)
    coefficients = residue_coefficients(expansions, leading)
    assert coefficients.residue(a) == pytest.approx(ra, rel=1e-10, abs=1e-12)


def test_residue_coefficients_reconstruct_unit(leading, expansions, unit_weights):
    coefficients = residue_coefficients(expansions, leading)
    assert coefficients.residue(unit_weights) == pytest.approx(1.0, abs=1e-10)


def test_flow_derivative_residue_vanishes(system6, fundamental_orbits, expansions, leading):
    bump = PhaseGaussian(PhasePoint((0.0, 0.0), (1.0, 0.0)), (0.5, float("inf")))
    weights = orbit_weights(system6, fundamental_orbits, FlowDerivative(bump))
    assert abs(residue(expansions, leading, weights)) <= 1e-8


def test_complex_resonance_residues_are_conjugate(low_resonances, expansions):
    rng = np.random.default_rng(2)
    weights = rng.normal(size=len(expansions[0].primes))
    upper = [r for r in low_resonances if r.lam.imag > 0]
    for res in upper:
        conj = next(r for r in low_resonances if abs(r.lam - res.lam.conjugate()) <= 1e-10)
        assert residue(expansions, conj, weights) == pytest.approx(
            residue(expansions, res, weights).conjugate(), rel=1e-10, abs=1e-12
        )


def test_contour_matches_ratio_formula(leading, expansions, unit_weights):
    contour = laurent_coefficient(expansions, leading.lam, 0, unit_weights)
    assert contour == pytest.approx(residue(expansions, leading, unit_weights), rel=1e-6)
    assert abs(laurent_coefficient(expansions, leading.lam, 1, unit_weights)) <= 1e-8
    assert abs(laurent_coefficient(expansions, leading.lam, 2, unit_weights)) <= 1e-8


def test_contour_argument_checks(leading, expansions, unit_weights):
    with pytest.raises(ValueError):
        laurent_coefficient(expansions, leading.lam, 0, unit_weights, nodes=16)
    with pytest.raises(ValueError):
        laurent_coefficient(expansions, leading.lam, -1, unit_weights)


def test_non_simple_resonance_rejected(leading, expansions, unit_weights):
    double = Resonance(leading.lam, leading.band, order=2)
    with pytest.raises(NonSimpleResonanceError):
        residue(expansions, double, unit_weights)


def test_residue_cache(leading, expansions, unit_weights):
    fresh = Resonance(leading.lam, leading.band)
    value = residue(expansions, fresh, unit_weights, key="Z1")
    assert fresh.residue_cache["Z1"] == value


@pytest.mark.slow
def test_rank_identity_for_every_simple_zero(expansions, unit_weights):
    band_one = expansions[:1]
    found = scan(band_one, Rectangle(-1.2, 0.5, 0.0, 20.5), 0.25)
    window = Rectangle(-1.0, 0.5, 0.0, 20.0)
    checked = 0
    for res in found:
        if res.order != 1 or not window.contains(res.lam):
            continue
        others = [other.lam for other in found]
        radius = default_contour_radius(res.lam, others)
        assert residue(band_one, res, unit_weights) == pytest.approx(1.0, abs=1e-10)
        contour = laurent_coefficient(band_one, res.lam, 0, unit_weights, radius=radius)
        assert contour == pytest.approx(1.0, abs=1e-6)
        checked += 1
    assert checked >= 30


def test_truncation_history_converges(fundamental_orbits, leading):
    history = truncation_history(fundamental_orbits, 1, leading.lam, range(4, 9))
    steps = [abs(b - a) for a, b in zip(history, history[1:])]
    assert all(later < earlier for earlier, later in zip(steps, steps[1:]))
    assert steps[-1] < 1e-6
    assert history[-1] == pytest.approx(leading.lam, abs=1e-10)

def test_near_critical_line(low_resonances):
    close = near_critical_line(low_resonances, 0.0)
    assert [r.lam for r in close] == [max(low_resonances, key=lambda r: r.lam.real).lam]
    assert len(near_critical_line(low_resonances, 10.0)) == len(low_resonances)
    assert near_critical_line([], 1.0) == []


def test_expansion_orders_agree(fundamental_orbits):
    assert len(build_expansion(fundamental_orbits, 1, 8)) > len(build_expansion(fundamental_orbits, 1, 7))
