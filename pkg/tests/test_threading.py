import threading
import time

import pytest

from zerolab.utils import get_thread_count, ordered_map
from zerolab.utils._threading import THREADS_ENV


def test_thread_count_resolution(monkeypatch):
    monkeypatch.delenv(THREADS_ENV, raising=False)
    assert get_thread_count() == 1
    monkeypatch.setenv(THREADS_ENV, "3")
    assert get_thread_count() == 3
    assert get_thread_count(2) == 2
    monkeypatch.setenv(THREADS_ENV, "many")
    with pytest.raises(ValueError, match="must be an integer"):
        get_thread_count()
    with pytest.raises(ValueError, match=">= 1"):
        get_thread_count(0)


@pytest.mark.parametrize("threads", [1, 4])
def test_ordered_map_keeps_order(threads):
    def slow_square(i: int) -> int:
        time.sleep(0.001 * (5 - i % 5))
        return i * i

    assert list(ordered_map(slow_square, range(20), threads)) == [
        i * i for i in range(20)
    ]


def test_ordered_map_uses_workers():
    names = set()

    def record(i: int) -> int:
        names.add(threading.current_thread().name)
        time.sleep(0.01)
        return i

    list(ordered_map(record, range(8), threads=4))
    assert all(n.startswith("zerolab") for n in names)
