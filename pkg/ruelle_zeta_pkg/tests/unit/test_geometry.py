import math

import numpy as np
import pytest

from ruelle_zeta.errors import ConfigError, DegenerateHitError
from ruelle_zeta.geometry import (
    C3V,
    IDENTITY,
    DiscSystem,
    GroupElement,
    PhasePoint,
    SectionPoint,
    element_mapping,
    fold_to_fundamental,
    from_birkhoff,
    in_wedge,
    next_reflection,
    to_birkhoff,
)


def test_centers_form_equilateral_triangle(system6):
    sides = [np.linalg.norm(system6.centers[i] - system6.centers[(i + 1) % 3]) for i in range(3)]
    assert np.allclose(sides, 6.0, atol=1e-12)
    assert np.allclose(system6.centers.mean(axis=0), 0.0, atol=1e-12)


def test_overlapping_discs_rejected():
    with pytest.raises(ConfigError):
        DiscSystem(2.0)
    with pytest.raises(ConfigError):
        DiscSystem(1.5)


def test_small_separation_warns(caplog):
    with caplog.at_level("WARNING"):
        DiscSystem(2.2)
    assert "pruned" in caplog.text


def test_phase_point_requires_unit_direction():
    with pytest.raises(ValueError):
        PhasePoint((0.0, 0.0), (1.0, 1.0))


def test_collinear_ray_hits_facing_disc(system6):
    c0, c1 = system6.centers[0], system6.centers[1]
    u = (c1 - c0) / np.linalg.norm(c1 - c0)
    hit = next_reflection(system6, PhasePoint(c0 + u, u))
    assert hit.disc == 1
    assert hit.flight_length == pytest.approx(4.0, abs=1e-12)
    assert np.allclose(hit.point.direction, -u, atol=1e-12)


def test_outward_ray_escapes(system6):
    c0 = system6.centers[0]
    out = c0 / np.linalg.norm(c0)
    assert next_reflection(system6, PhasePoint(c0 + out, out)) is None


def test_tangent_hit_is_degenerate(system6):
    c0 = system6.centers[0]
    start = np.array([c0[0] - 3.0, 1.0])
    with pytest.raises(DegenerateHitError):
        next_reflection(system6, PhasePoint(start, (1.0, 0.0)))


def test_start_inside_disc_rejected(system6):
    with pytest.raises(ValueError):
        next_reflection(system6, PhasePoint(system6.centers[0], (1.0, 0.0)))


def test_birkhoff_origin_and_tangent(system6):
    origin = system6.boundary_point(0, system6.origin_angle(0))
    normal = origin - system6.centers[0]
    s = to_birkhoff(system6, PhasePoint(origin, normal))
    assert s.q == pytest.approx(0.0, abs=1e-15)
    assert s.p == pytest.approx(0.0, abs=1e-15)

    angle = system6.origin_angle(0)
    tangent = (-math.sin(angle), math.cos(angle))
    assert to_birkhoff(system6, PhasePoint(origin, tangent)).p == pytest.approx(1.0)


def test_birkhoff_round_trip(system6):
    rng = np.random.default_rng(7)
    samples = zip(rng.uniform(-3.1, 3.1, 10_000), rng.uniform(-0.99, 0.99, 10_000), rng.integers(0, 3, 10_000))
    for q, p, disc in samples:
        disc = int(disc)
        back = to_birkhoff(system6, from_birkhoff(system6, SectionPoint(q, p, disc)), disc)
        assert back.q == pytest.approx(q, abs=1e-12)
        assert back.p == pytest.approx(p, abs=1e-12)


def test_from_birkhoff_rejects_tangent(system6):
    with pytest.raises(ValueError):
        from_birkhoff(system6, SectionPoint(0.0, 1.0))


def test_group_closure_and_labels():
    for g in C3V:
        for h in C3V:
            gh = g * h
            assert gh in C3V
            assert all(gh.act_label(i) == g.act_label(h.act_label(i)) for i in range(3))
            assert np.allclose(gh.matrix, g.matrix @ h.matrix, atol=1e-15)
        assert g * g.inverse() == IDENTITY
        assert np.allclose(g.matrix @ g.matrix.T, np.eye(2), atol=1e-15)


def test_group_permutes_disc_centers(system6):
    for g in C3V:
        for i in range(3):
            assert np.allclose(g.act(system6.centers[i]), system6.centers[g.act_label(i)], atol=1e-12)


def test_element_mapping_pairs():
    g = element_mapping((0, 1), (1, 0))
    assert g.act_label(0) == 1 and g.act_label(1) == 0
    assert g.reflected


def test_fold_into_wedge(system6):
    rng = np.random.default_rng(3)
    for x in _random_phase_points(rng, 10_000):
        folded, g = fold_to_fundamental(system6, x)
        assert in_wedge(folded.position)
        restored = folded.transformed(g.inverse())
        assert np.allclose(restored.position, x.position, atol=1e-12)
        assert np.allclose(restored.direction, x.direction, atol=1e-12)


def test_fold_inside_wedge_is_identity(system6):
    x = PhasePoint.from_angle((2.0, 0.5), 1.0)
    folded, g = fold_to_fundamental(system6, x)
    assert g == IDENTITY
    assert np.allclose(folded.position, x.position)


def test_mirror_has_negative_determinant():
    assert GroupElement(0, True).determinant == -1
    assert GroupElement(2, False).order == 3


def _random_phase_points(rng, count):
    radii = rng.uniform(0.1, 6.0, count)
    angles = rng.uniform(-math.pi, math.pi, count)
    headings = rng.uniform(-math.pi, math.pi, count)
    return [
        PhasePoint.from_angle((rho * math.cos(a), rho * math.sin(a)), h)
        for rho, a, h in zip(radii, angles, headings)
    ]


def test_fold_is_invariant_under_the_group(system6):
    rng = np.random.default_rng(4)
    for x in _random_phase_points(rng, 2000):
        folded, _ = fold_to_fundamental(system6, x)
        for g in C3V:
            image, _ = fold_to_fundamental(system6, x.transformed(g))
            assert np.allclose(image.position, folded.position, atol=1e-12)
            assert np.allclose(image.direction, folded.direction, atol=1e-12)


def test_reflected_directions_stay_unit_over_many_bounces(system6):
    rng = np.random.default_rng(11)
    worst = 0.0
    for q, p, disc in zip(rng.uniform(-3.1, 3.1, 3000), rng.uniform(-0.99, 0.99, 3000), rng.integers(0, 3, 3000)):
        x = from_birkhoff(system6, SectionPoint(q, p, int(disc)))
        for _ in range(6):
            hit = next_reflection(system6, x)
            if hit is None:
                break
            x = hit.point
            worst = max(worst, abs(np.linalg.norm(x.direction) - 1.0))
    assert worst <= 1e-15


def _march_to_first_hit(system, x, horizon):
    """First entry into a disc by stepping along the ray, refined by bisection."""
    def inside(t):
        points = x.position + np.multiply.outer(t, x.direction)
        gaps = np.linalg.norm(points[..., None, :] - system.centers, axis=-1) - system.r
        return gaps.min(axis=-1) < 0.0, gaps.argmin(axis=-1)

    lo = 1e-9
    for step in (1e-3, 1e-6):
        t = np.arange(lo, horizon, step)
        flags, _ = inside(t)
        if not flags.any():
            return None
        first = int(np.argmax(flags))
        lo, horizon = t[max(first - 1, 0)], t[first] + step
    a, b = lo, horizon
    while b - a > 1e-13:
        mid = 0.5 * (a + b)
        if inside(np.array([mid]))[0][0]:
            b = mid
        else:
            a = mid
    return int(inside(np.array([b]))[1][0]), b


def test_flight_matches_time_stepping(system6):
    rng = np.random.default_rng(5)
    for q, p in zip(rng.uniform(-1.2, 1.2, 40), rng.uniform(-0.9, 0.9, 40)):
        x = from_birkhoff(system6, SectionPoint(q, p, 0))
        hit = next_reflection(system6, x)
        oracle = _march_to_first_hit(system6, x, 3.0 * system6.d)
        if hit is None:
            assert oracle is None
            continue
        assert oracle is not None
        assert oracle[0] == hit.disc
        assert oracle[1] == pytest.approx(hit.flight_length, abs=1e-10)
