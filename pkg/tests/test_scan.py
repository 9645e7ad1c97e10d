import numpy as np
import pytest

import euler2c
from euler2c import config
from euler2c.core import EnergyMomentum, OrbitKind
from euler2c.errors import DomainError
from euler2c.periods import critical_orbit_periods


@pytest.mark.parametrize('threads', [1, 4, None])
def test_parallel_map_keeps_order(threads):
    items = list(range(50))
    assert euler2c.parallel_map(
        lambda x: x * x, items, threads) == [x * x for x in items]


def test_parallel_map_empty():
    assert euler2c.parallel_map(abs, [], 4) == []


def test_max_threads(monkeypatch):
    monkeypatch.setenv('EULER2C_THREADS', '3')
    assert config.max_threads() == 3
    monkeypatch.setenv('EULER2C_THREADS', 'many')
    assert config.max_threads() >= 1
    monkeypatch.setenv('EULER2C_THREADS', '0')
    assert config.max_threads() >= 1


def test_scan_point_regular():
    em = EnergyMomentum.at(0.5, 2.0, -3.0)
    record = euler2c.scan_point(em)
    assert record.region == 'S'
    assert record.rotation.value == pytest.approx(
        euler2c.rotation_number(em).value)
    assert record.tau_xi == pytest.approx(
        euler2c.period_closed_form(em).tau_xi)


def test_scan_point_on_the_interior_orbit(half):
    record = euler2c.scan_point(EnergyMomentum(half, 1.0, -3.0))
    assert record.region == 'OnL3/InteriorCollision'
    periods = critical_orbit_periods(half, -3.0, OrbitKind.INTERIOR)
    assert record.tau_xi == pytest.approx(periods.tau_xi)
    assert record.tau_eta == pytest.approx(periods.tau_eta)


def test_scan_point_with_sentinel(quarter):
    record = euler2c.scan_point(EnergyMomentum(quarter, 0.25 / -1.0, -1.0))
    assert record.region == 'OnL4'
    assert record.rotation.is_infinite
    assert record.as_row()['rotation'] == 'inf'
    assert record.as_row()['tau_eta'] == 'inf'


def test_scan_point_forbidden(half):
    record = euler2c.scan_point(EnergyMomentum(half, -10.0, -3.0))
    assert record.region == 'Forbidden'
    assert record.rotation is None
    assert record.as_row()['rotation'] == ''
    assert record.as_row()['tau_xi'] == ''


def test_scan_is_g_major():
    records = list(euler2c.scan(0.5, -4.0, -3.0, 3, 1.5, 2.5, 2))
    assert len(records) == 6
    assert [r.g for r in records] == [1.5, 1.5, 1.5, 2.5, 2.5, 2.5]
    assert [r.c for r in records[:3]] == [-4.0, -3.5, -3.0]
    assert {r.mu for r in records} == {0.5}


def test_scan_single_point():
    records = list(euler2c.scan(0.25, -3.0, -3.0, 10, 3.0, 3.0, 10))
    assert len(records) == 1
    assert records[0].region == 'Sprime'


def test_scan_rows_are_complete():
    for record in euler2c.scan(0.25, -3.0, -0.5, 6, -2.0, 4.0, 7):
        row = record.as_row()
        assert set(row) == {
            'mu', 'g', 'c', 'region', 'rotation', 'tau_xi', 'tau_eta'}
        if record.rotation is not None and not record.rotation.exact:
            assert np.isfinite(float(row['rotation']))


@pytest.mark.parametrize('args', [
    (0.5, -3.0, -4.0, 3, 1.0, 2.0, 2),
    (0.5, -3.0, 0.5, 3, 1.0, 2.0, 2),
    (0.5, -4.0, -3.0, 3, 2.0, 1.0, 2),
    (0.7, -4.0, -3.0, 3, 1.0, 2.0, 2),
])
def test_scan_arguments(args):
    with pytest.raises(DomainError):
        list(euler2c.scan(*args))


def test_public_names():
    assert all(isinstance(name, str) for name in euler2c.__all__)
    assert len(euler2c.__all__) == len(set(euler2c.__all__))
    namespace = {}
    exec('from euler2c import *', namespace)
    for name in euler2c.__all__:
        assert namespace[name] is getattr(euler2c, name)
