import math

import pytest

import ifsthermo as it

DELTA_MT = math.log(2) / math.log(3)


def test_middle_thirds_delta():
    assert abs(it.solve_delta(it.IfsSpec.middle_thirds()) - DELTA_MT) < 1e-9


def test_pressure_exact_for_affine():
    est = it.pressure(it.IfsSpec.two_map_affine(0.1, 0.5), it.geometric_potential(), 12)
    assert est.depth == 12
    assert all(abs(p - math.log(0.6)) < 1e-12 for _, p in est.per_level)


def test_square_law():
    spec = it.IfsSpec.middle_thirds()
    rep = it.lambda_dimension(spec, it.scaled_geometric(DELTA_MT), 1.0)
    assert abs(rep.s - DELTA_MT**2) < 1e-6
    assert rep.s < rep.delta


def test_darst_ordering():
    for ratios, note in [((0.1, 0.5), "dim_nu > s"), ((0.01, 0.8), "dim_nu < s")]:
        spec = it.IfsSpec.two_map_affine(*ratios)
        rep = it.lambda_dimension(spec, it.darst_shift(spec), 1.0)
        assert rep.ordering_note == note
    assert it.darst_consistency(it.IfsSpec.two_map_affine(0.1, 0.5)) < 1e-8


def test_staircase():
    spec = it.IfsSpec.middle_thirds()
    psi = it.scaled_geometric(DELTA_MT)
    lo, hi = it.distribution_value(spec, psi, 0.25, 12)
    assert lo <= 1 / 3 <= hi
    rows = it.staircase_sample(spec, psi, 4)
    assert len(rows) == 32
    assert all(a[1] <= b[1] for a, b in zip(rows, rows[1:]))


def test_nonlinear_system():
    spec = it.IfsSpec.nonlinear([(0.3, 0.05, 0.05), (0.3, 0.65, 0.05)])
    assert it.validate_ifs(spec, 1024) == []
    assert 0.55 < it.solve_delta(spec, 12) < 0.6


def test_blocks_and_diagnostics():
    spec = it.IfsSpec.middle_thirds()
    psi = it.scaled_geometric(DELTA_MT)
    blocks = it.detect_blocks([1, 0, 0, 1, 1, 1, 0], spec, psi, 1.0)
    assert [(b.symbol, b.level, b.length) for b in blocks] == [(0, 1, 2), (1, 3, 3)]
    assert not it.oscillation_candidate(spec, psi, 1.0, [], [0, 1], 220)


def test_errors_map_to_exceptions():
    with pytest.raises(it.InputError):
        it.pressure(it.IfsSpec.two_map_affine(0.6, 0.5), it.geometric_potential(), 8)
    with pytest.raises(it.ResourceError):
        it.pressure(it.IfsSpec.middle_thirds(), it.geometric_potential(), 40)
    assert issubclass(it.InputError, it.Error)
