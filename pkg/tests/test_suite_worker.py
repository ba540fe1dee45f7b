import pytest

from core.suite_worker import run_tasks


def _tasks(n):
    return [lambda k=k: k * k for k in range(n)]


def test_inline_keeps_order():
    assert run_tasks(_tasks(5)) == [0, 1, 4, 9, 16]
    assert run_tasks([]) == []


def test_inline_progress():
    seen = []
    run_tasks(_tasks(3), progress=lambda done, total: seen.append((done, total)))
    assert seen == [(1, 3), (2, 3), (3, 3)]


def test_inline_error_propagates():
    def boom():
        raise RuntimeError("boom")

    with pytest.raises(RuntimeError, match="boom"):
        run_tasks([lambda: 1, boom])


def test_pool_keeps_submission_order():
    pytest.importorskip("PyQt5.QtCore")
    seen = []
    results = run_tasks(_tasks(12), workers=3, progress=lambda done, total: seen.append(done))
    assert results == [k * k for k in range(12)]
    assert sorted(seen) == list(range(1, 13))


def test_pool_raises_first_error():
    pytest.importorskip("PyQt5.QtCore")

    def fail(k):
        def task():
            raise ValueError(f"task {k}")
        return task

    with pytest.raises(ValueError, match="task 1"):
        run_tasks([lambda: 0, fail(1), lambda: 2, fail(3)], workers=2)
