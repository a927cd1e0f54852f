import math

import pytest

import hopfbif


def octupole(fixtures):
    m = hopfbif.load_model(str(fixtures / "octupole.json"))
    m["quad"], _ = hopfbif.rotate_to_diagonal(m["quad"])
    return m


def test_hopf_round_trip():
    x = hopfbif.PoincareState(0.01, -0.02, 0.015, 0.005)
    h = hopfbif.poincare_to_hopf(x)
    assert abs(h.sphere_residual()) < 1e-15
    X2, Y2 = hopfbif.hopf_to_section_plane(h)
    back = hopfbif.section_plane_to_hopf(h.sigma0, X2, Y2)
    assert back.sigma3 == pytest.approx(h.sigma3, abs=1e-15)


def test_octupole_coefficients_vanish_a(fixtures):
    m = hopfbif.load_model(str(fixtures / "params.json"))
    assert m["kind"] == "params"
    assert m["quad"].A == 0.0


def test_quadratic_roots_and_census(fixtures):
    m = octupole(fixtures)
    q, z = m["quad"], m["poly"]
    roots = hopfbif.f1_roots(q, m["sigma0_max"])
    assert roots
    assert all(0 < r <= m["sigma0_max"] for r in roots)
    c = hopfbif.labeled_census(z, 0.0055, m["sigma0_max"])
    assert len(c.cpi) in (2, 4, 6)
    for p in c.cpi:
        assert abs(hopfbif.equilibrium_residual(z, p.location)) < 1e-9
    E_L, E_R = hopfbif.energy_limits(z, 0.0055)
    assert E_L < E_R


def test_sequence_matches_analytic_roots(fixtures):
    m = octupole(fixtures)
    q, z = m["quad"], m["poly"]
    hi = m["sigma0_max"]
    events = hopfbif.bifurcation_sequence(z, 1e-3 * hi, hi)
    analytic = sorted(hopfbif.f1_roots(q, hi) + [s for s in hopfbif.cpii_values(q) if 1e-3 * hi < s < hi])
    assert len(events) == len(analytic)
    for e, s in zip(sorted(events, key=lambda e: e.sigma0_low), analytic):
        assert e.sigma0_low - 1e-6 <= s <= e.sigma0_high + 1e-6


def test_portrait_svg(fixtures):
    m = octupole(fixtures)
    z = m["poly"]
    levels = hopfbif.auto_levels(z, 0.0055, 5)
    assert len(levels) == 5
    svg = hopfbif.portrait_svg(z, 0.0055, levels, grid=128)
    assert svg.startswith("<svg") or svg.startswith("<?xml")
    curves = hopfbif.contour_curves(z, 0.0055, levels, grid=128)
    assert curves


def test_reduced_flow_conserves(fixtures):
    z = octupole(fixtures)["poly"]
    s0 = 0.0055
    h0 = hopfbif.section_plane_to_hopf(s0, 0.03, 0.02)
    r = hopfbif.integrate_reduced(z, h0, 2000.0, 1e-11)
    assert r["casimir_drift"] < 1e-8
    assert r["energy_drift"] < 1e-8


def test_errors_carry_kind(fixtures):
    with pytest.raises(hopfbif.HopfbifError) as err:
        hopfbif.load_model(str(fixtures / "malformed.json"))
    assert err.value.kind
    with pytest.raises(hopfbif.HopfbifError):
        hopfbif.load_model(str(fixtures / "params_degenerate.json"))


def test_oracle_counts_agree(fixtures):
    m = octupole(fixtures)
    q, z = m["quad"], m["poly"]
    for s0 in (0.0055, 0.010):
        n = len(hopfbif.labeled_census(z, s0, m["sigma0_max"]).cpi)
        assert hopfbif.grid_tangency_scan_count(z, s0, 100000) == n
        assert hopfbif.quartic_bruteforce_count(q, s0, 100000) == n
