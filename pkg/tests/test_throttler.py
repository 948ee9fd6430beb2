from unittest.mock import Mock

import pytest

from zerolab.utils import EmissionPolicy, ThrottledCallable, throttled


class FakeClock:
    def __init__(self) -> None:
        self.now = 0.0

    def __call__(self) -> float:
        return self.now


def test_throttled_leading_and_flush():
    mock = Mock()
    clock = FakeClock()
    f = ThrottledCallable(mock, timeout=100, clock=clock)

    f(1)
    mock.assert_called_once_with(1)
    clock.now = 0.05
    f(2)
    f(3)
    assert mock.call_count == 1
    f.flush()
    assert mock.call_count == 2
    mock.assert_called_with(3)
    f.flush()
    assert mock.call_count == 2


def test_throttled_window_reopens():
    mock = Mock()
    clock = FakeClock()
    f = ThrottledCallable(mock, timeout=100, clock=clock)
    for i in range(10):
        clock.now = i * 0.01
        f(i)
    assert mock.call_count == 1
    clock.now = 0.2
    f(99)
    assert mock.call_count == 2
    mock.assert_called_with(99)


def test_cancel_drops_pending():
    mock = Mock()
    clock = FakeClock()
    f = ThrottledCallable(mock, timeout=100, clock=clock)
    f()
    f()
    f.cancel()
    f.flush()
    mock.assert_called_once()


def test_trailing_only_policy():
    mock = Mock()
    f = ThrottledCallable(mock, timeout=100, policy=EmissionPolicy.Trailing)
    f("a")
    mock.assert_not_called()
    f.flush()
    mock.assert_called_once_with("a")


def test_decorator_forms():
    calls = []

    @throttled(timeout=1000)
    def f1(x: int) -> None:
        calls.append(x)

    def f2(x: int) -> None:
        calls.append(-x)

    g = throttled(f2, timeout=1000, leading=False)
    for i in range(5):
        f1(i)
        g(i)
    assert calls == [0]
    g.flush()
    f1.flush()
    assert calls == [0, -4, 4]
    assert f1.__name__ == "f1"
    assert f1.timeout == 1000
    f1.timeout = 10
    assert f1.timeout == 10
    with pytest.raises(ValueError, match="timeout"):
        f1.timeout = -1
