import math

import numpy as np
import pandas as pd
import pytest

from ruelle_zeta.errors import ConfigError, NonSimpleResonanceError
from ruelle_zeta.orbits import SectionComb, orbit_weights
from ruelle_zeta.resonances import Resonance, laurent_coefficient, residue
from ruelle_zeta.ruelle import (
    DistributionGrid,
    GridSpec,
    distribution_grid,
    in_sigma1,
    localization_metric,
    pgm_pixels,
    sigma1_mask,
    write_grid_csv,
    write_pgm,
)

SMALL = GridSpec(40, 20)


def test_mask_examples(system6):
    # head-on towards disc 1 versus straight out of the system
    assert in_sigma1(system6, -math.pi / 6, 0.0)
    assert not in_sigma1(system6, math.pi, 0.0)
    assert not in_sigma1(system6, -math.pi / 6, 1.0)


def test_mask_fraction(system6):
    mask = sigma1_mask(system6, SMALL)
    assert mask.shape == (20, 40)
    assert 0.0 < mask.mean() < 1.0
    assert not mask[0].any() and not mask[-1].any()


def test_grid_spec_parsing():
    assert GridSpec.parse("400x200") == GridSpec(400, 200)
    with pytest.raises(ConfigError):
        GridSpec.parse("400")
    with pytest.raises(ConfigError):
        GridSpec.parse("1x200")


def test_node_matches_single_residue(system6, fundamental_orbits, expansions, leading):
    grid = distribution_grid(system6, fundamental_orbits, expansions, leading, SMALL, 0.1)
    i, j = 10, 16
    weights = orbit_weights(system6, fundamental_orbits, SectionComb(grid.q[j], grid.p[i], 0.1))
    assert grid.values[i, j] == pytest.approx(residue(expansions, leading, weights), rel=1e-10, abs=1e-12)


def test_node_matches_contour(system6, fundamental_orbits, expansions, leading):
    grid = distribution_grid(system6, fundamental_orbits, expansions, leading, SMALL, 0.1, with_mask=False)
    i, j = 10, 16
    weights = orbit_weights(system6, fundamental_orbits, SectionComb(grid.q[j], grid.p[i], 0.1))
    contour = laurent_coefficient(expansions, leading.lam, 0, weights)
    assert grid.values[i, j] == pytest.approx(contour, rel=1e-5, abs=1e-9)
    assert grid.mask is None


def test_conjugate_points_give_conjugate_grids(system6, fundamental_orbits, expansions):
    upper = Resonance(complex(-0.7, 1.3), 1)
    lower = upper.conjugate()
    a = distribution_grid(system6, fundamental_orbits, expansions, upper, SMALL, 0.1, with_mask=False)
    b = distribution_grid(system6, fundamental_orbits, expansions, lower, SMALL, 0.1, with_mask=False)
    np.testing.assert_allclose(a.values, b.values.conj(), rtol=1e-9, atol=1e-14)


def test_empty_orbit_table_gives_zero_grid(system6, expansions, leading):
    grid = distribution_grid(system6, [], expansions, leading, SMALL, 0.1)
    assert grid.values.shape == (20, 40)
    assert not grid.values.any()


def test_grid_rejects_bad_sigma(system6, fundamental_orbits, expansions, leading):
    with pytest.raises(ConfigError):
        distribution_grid(system6, fundamental_orbits, expansions, leading, SMALL, 0.0)


def test_localization_bounds(system6, fundamental_orbits, expansions, leading):
    grid = distribution_grid(system6, fundamental_orbits, expansions, leading, SMALL, 0.1)
    assert localization_metric(grid, 40) == pytest.approx(1.0)
    assert 0.0 < localization_metric(grid, 0) <= localization_metric(grid, 2) <= 1.0
    with pytest.raises(ValueError):
        localization_metric(grid, -1)


@pytest.mark.slow
def test_localization_sharpens_with_sigma(system6, fundamental_orbits, expansions, leading):
    fine = GridSpec(400, 200)
    values = [
        localization_metric(distribution_grid(system6, fundamental_orbits, expansions, leading, fine, sigma), 2)
        for sigma in (0.1, 0.03, 0.01, 0.003, 0.001)
    ]
    assert all(0.0 <= v <= 1.0 for v in values)
    assert all(later >= earlier for earlier, later in zip(values, values[1:]))
    # strict until no mass is left outside the neighborhood
    for earlier, later in zip(values, values[1:]):
        if earlier < 1.0:
            assert later > earlier
    assert values[0] < 0.99
    assert values[-1] == 1.0


def test_contour_route_matches_ratio_grid(monkeypatch, system6, fundamental_orbits, expansions, leading):
    import ruelle_zeta.ruelle.grid as grid_module

    tiny = GridSpec(4, 3)
    ratio = distribution_grid(system6, fundamental_orbits, expansions, leading, tiny, 0.1, with_mask=False)

    def non_simple(*args, **kwargs):
        raise NonSimpleResonanceError("treat as non-simple")

    monkeypatch.setattr(grid_module, "residue_coefficients", non_simple)
    with pytest.raises(NonSimpleResonanceError):
        distribution_grid(system6, fundamental_orbits, expansions, leading, tiny, 0.1)
    contour = distribution_grid(
        system6, fundamental_orbits, expansions, leading, tiny, 0.1, with_mask=False, allow_contour=True
    )
    np.testing.assert_allclose(contour.values, ratio.values, rtol=1e-5, atol=1e-9)


def _grid(values):
    values = np.asarray(values, dtype=complex)
    n_p, n_q = values.shape
    return DistributionGrid(
        q=np.linspace(-math.pi, math.pi, n_q),
        p=np.linspace(-1.0, 1.0, n_p),
        sigma=0.1,
        lam0=-0.4,
        band=1,
        values=values,
        mask=np.zeros(values.shape, dtype=bool),
    )


def test_pgm_layout(tmp_path):
    path = write_pgm(_grid([[0.0, 1.0, 2.0], [3.0, 4.0, 6.0]]), tmp_path / "g.pgm")
    data = path.read_bytes()
    header = b"P5\n3 2\n255\n"
    assert data.startswith(header)
    pixels = np.frombuffer(data[len(header):], dtype=np.uint8).reshape(2, 3)
    # top row is p = +1
    assert pixels[0, 0] == round(255 * 3 / 6)
    assert pixels[0, 2] == 255
    assert pixels[1, 0] == 0


def test_constant_grid_is_mid_gray():
    assert (pgm_pixels(np.full((4, 5), 2.5)) == 128).all()


def test_grid_csv_layout(tmp_path):
    path = write_grid_csv(_grid([[1.0 + 2.0j, 0.0], [0.5, -1.0]]), tmp_path / "g.csv")
    lines = path.read_text().splitlines()
    assert lines[0] == "q,p,value_re,value_im,in_sigma1"
    frame = pd.read_csv(path)
    assert len(frame) == 4
    assert frame["p"].is_monotonic_increasing
    assert frame.loc[0, "value_im"] == 2.0
    assert set(frame["in_sigma1"]) == {0}
