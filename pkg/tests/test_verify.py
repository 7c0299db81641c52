import pytest

from jgeo.errors import InputError
from jgeo.verify import SUITES, parallel_map, run, run_suite, worker_count


@pytest.mark.parametrize("name", sorted(SUITES))
def test_every_suite_passes(name):
    result = run_suite(name, seed=11, trials=20)
    assert result.passed, result.as_dict()
    assert result.max_residual <= result.tolerance


def test_threads_give_identical_results(monkeypatch):
    monkeypatch.setenv("JGEO_THREADS", "1")
    serial = [r.as_dict() for r in run("all", seed=3, trials=8)]
    monkeypatch.setenv("JGEO_THREADS", "4")
    assert worker_count() == 4
    assert [r.as_dict() for r in run("all", seed=3, trials=8)] == serial


def test_seed_changes_samples():
    a = run_suite("lyapunov", seed=1, trials=5).max_residual
    b = run_suite("lyapunov", seed=2, trials=5).max_residual
    assert a != b


def test_worker_count_parsing(monkeypatch):
    monkeypatch.setenv("JGEO_THREADS", "zero")
    assert worker_count() == 1
    monkeypatch.setenv("JGEO_THREADS", "-3")
    assert worker_count() == 1
    monkeypatch.delenv("JGEO_THREADS")
    assert worker_count() == 1


def test_parallel_map_keeps_order(monkeypatch):
    monkeypatch.setenv("JGEO_THREADS", "3")
    assert parallel_map(lambda x: x * x, range(20)) == [x * x for x in range(20)]


def test_tolerance_override_and_dim():
    r = run_suite("jordan", dim=2, trials=5, tol=0.0)
    assert r.tolerance == 0.0 and r.trials == 5
    assert not r.passed or r.max_residual == 0.0


def test_unknown_suite():
    with pytest.raises(InputError):
        run_suite("nope")
