"""Rate-limited callables.

A stripped down, clock-driven relative of the signal throttler: calls made
while the throttle window is open are coalesced into a single pending call,
which is delivered either by the first call after the window closes or by an
explicit :meth:`ThrottledCallable.flush`.
"""

from __future__ import annotations

import time
from enum import IntFlag, auto
from functools import wraps
from threading import Lock
from typing import TYPE_CHECKING, Any, Callable, Generic, TypeVar, overload

if TYPE_CHECKING:
    from typing_extensions import ParamSpec

    P = ParamSpec("P")
# maintain runtime compatibility with older typing_extensions
else:
    try:
        from typing_extensions import ParamSpec

        P = ParamSpec("P")
    except ImportError:
        P = TypeVar("P")

R = TypeVar("R")


class EmissionPolicy(IntFlag):
    Trailing = auto()
    Leading = auto()


class ThrottledCallable(Generic[P, R]):
    """Wrap `func` so that it runs at most once per `timeout` milliseconds.

    Parameters
    ----------
    func : Callable
        The callable to throttle.
    timeout : int
        Minimum interval between two invocations, in milliseconds.
    policy : EmissionPolicy
        ``Leading`` invokes immediately when the window is closed. With
        ``Trailing`` set as well, the most recent suppressed call is kept and
        delivered later (by the next open window or by :meth:`flush`).
    clock : Callable[[], float]
        Monotonic clock returning seconds, injectable for tests.
    """

    def __init__(
        self,
        func: Callable[P, R],
        timeout: int = 100,
        policy: EmissionPolicy = EmissionPolicy.Leading | EmissionPolicy.Trailing,
        clock: Callable[[], float] = time.monotonic,
    ) -> None:
        self._func = func
        self._timeout = timeout
        self._policy = policy
        self._clock = clock
        self._last: float | None = None
        self._pending: tuple[tuple[Any, ...], dict[str, Any]] | None = None
        self._lock = Lock()
        self.__wrapped__ = func

    @property
    def timeout(self) -> int:
        """Minimum interval between calls, in milliseconds."""
        return self._timeout

    @timeout.setter
    def timeout(self, timeout: int) -> None:
        if timeout < 0:
            raise ValueError(f"timeout must be >= 0, got {timeout}")
        self._timeout = timeout

    def __call__(self, *args: P.args, **kwargs: P.kwargs) -> None:
        with self._lock:
            now = self._clock()
            window_open = (
                self._last is not None and (now - self._last) * 1000 < self._timeout
            )
            if window_open or not (self._policy & EmissionPolicy.Leading):
                if self._policy & EmissionPolicy.Trailing:
                    self._pending = (args, kwargs)
                return
            self._last = now
            self._pending = None
        self._func(*args, **kwargs)

    def flush(self) -> None:
        """Deliver the pending call, if any, right away."""
        with self._lock:
            pending, self._pending = self._pending, None
            if pending is not None:
                self._last = self._clock()
        if pending is not None:
            args, kwargs = pending
            self._func(*args, **kwargs)

    def cancel(self) -> None:
        """Drop the pending call, if any."""
        with self._lock:
            self._pending = None


@overload
def throttled(
    func: Callable[P, R],
    timeout: int = 100,
    leading: bool = True,
) -> ThrottledCallable[P, R]: ...


@overload
def throttled(
    func: None = ...,
    timeout: int = 100,
    leading: bool = True,
) -> Callable[[Callable[P, R]], ThrottledCallable[P, R]]: ...


def throttled(
    func: Callable[P, R] | None = None,
    timeout: int = 100,
    leading: bool = True,
) -> ThrottledCallable[P, R] | Callable[[Callable[P, R]], ThrottledCallable[P, R]]:
    """Create a throttled function that invokes func at most once per timeout.

    The throttled function comes with a `cancel` method to cancel delayed func
    invocations and a `flush` method to immediately invoke them.

    Parameters
    ----------
    func : Callable
        A function to throttle
    timeout : int
        Timeout in milliseconds to wait before allowing another call, by default 100
    leading : bool
        Whether to invoke the function on the leading edge of the wait timer,
        by default True
    """
    policy = EmissionPolicy.Trailing
    if leading:
        policy |= EmissionPolicy.Leading

    def deco(func: Callable[P, R]) -> ThrottledCallable[P, R]:
        return wraps(func)(ThrottledCallable(func, timeout, policy))  # type: ignore

    return deco(func) if func is not None else deco
