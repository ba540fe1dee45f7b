"""Concurrent runner for independent verification checks.

With one worker the checks run inline in the calling thread and Qt is never
imported. With more, each check is a QRunnable on a QThreadPool and results
are stored under a QMutex, then handed back in submission order.
"""
import logging
import time

logger = logging.getLogger(__name__)


def _run_inline(tasks, progress):
    results = []
    for k, task in enumerate(tasks):
        results.append(task())
        if progress:
            progress(k + 1, len(tasks))
    return results


def _run_pooled(tasks, workers, progress):
    from PyQt5.QtCore import QMutex, QMutexLocker, QRunnable, QThreadPool

    results = [None] * len(tasks)
    errors = []
    done = [0]
    mutex = QMutex()

    class CheckJob(QRunnable):
        """One check on the pool"""

        def __init__(self, index, task):
            super().__init__()
            self.index = index
            self.task = task
            self.setAutoDelete(True)

        def run(self):
            try:
                value = self.task()
                error = None
            except Exception as e:  # handed back to the caller after the pool drains
                value, error = None, e
            locker = QMutexLocker(mutex)
            try:
                results[self.index] = value
                if error is not None:
                    errors.append((self.index, error))
                done[0] += 1
                if progress:
                    progress(done[0], len(tasks))
            finally:
                del locker

    pool = QThreadPool()
    pool.setMaxThreadCount(workers)
    for k, task in enumerate(tasks):
        pool.start(CheckJob(k, task))
    pool.waitForDone()
    if errors:
        index, error = min(errors, key=lambda item: item[0])
        logger.error(f"❌ check {index} raised {type(error).__name__}: {error}")
        raise error
    return results


def run_tasks(tasks, workers=1, progress=None):
    """Run zero-argument callables, returning their results in order"""
    tasks = list(tasks)
    start = time.perf_counter()
    if workers <= 1 or len(tasks) <= 1:
        results = _run_inline(tasks, progress)
    else:
        logger.info(f"🔄 running {len(tasks)} checks on {workers} workers")
        results = _run_pooled(tasks, workers, progress)
    logger.debug(f"📊 {len(tasks)} checks in {time.perf_counter() - start:.2f}s")
    return results
