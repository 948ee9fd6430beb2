from __future__ import annotations

import logging
import traceback
from typing import TYPE_CHECKING

from zerolab._exceptions import ConfigError, ConvergenceError

if TYPE_CHECKING:
    from types import TracebackType

logger = logging.getLogger("zerolab.cli")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3


class exit_on_error:
    """Context manager that turns known failures into a logged message and exit code.

    To determine whether an exception was raised, check the `exception`
    attribute after the context manager has exited; `exit_code` holds the
    code the command should return.

    Parameters
    ----------
    msg_template : str, optional
        The message to log.  It is formatted using three variables:

        - `exc_value`: the exception instance
        - `exc_type`: the exception type
        - `tb`: the traceback as a string

        The default template is the content of the exception: `"{exc_value}"`
    codes : dict[type[BaseException], int], optional
        Exception types to catch and the exit code of each; the first
        matching entry wins.  By default `ConfigError` maps to 2 and
        `ConvergenceError` and `FloatingPointError` map to 3.

    Attributes
    ----------
    exception : BaseException | None
        Will hold the exception instance if an exception was raised and caught.
    exit_code : int
        0, or the code of the caught exception.

    Examples
    --------
    ```python
    with exit_on_error() as ctx:
        run_config("experiments.toml")
    sys.exit(ctx.exit_code)
    ```
    """

    exception: BaseException | None
    exit_code: int

    def __init__(
        self,
        msg_template: str = "{exc_value}",
        codes: dict[type[BaseException], int] | None = None,
    ):
        self.msg_template = msg_template
        self.codes = codes or {
            ConfigError: EXIT_CONFIG,
            ConvergenceError: EXIT_NUMERIC,
            FloatingPointError: EXIT_NUMERIC,
        }
        self.exception = None
        self.exit_code = EXIT_OK

    def __enter__(self) -> exit_on_error:
        return self

    def __exit__(
        self,
        exc_type: type[BaseException] | None,
        exc_value: BaseException | None,
        tb: TracebackType | None,
    ) -> bool:
        if exc_value is None:
            return False
        code = next(
            (c for t, c in self.codes.items() if isinstance(exc_value, t)), None
        )
        if code is None:
            return False  # let it propagate

        self.exception = exc_value
        self.exit_code = code
        if "{tb}" in self.msg_template:
            _tb = "\n".join(traceback.format_exception(exc_type, exc_value, tb))
        else:
            _tb = ""
        text = self.msg_template.format(exc_value=exc_value, exc_type=exc_type, tb=_tb)
        logger.error(text)
        return True  # swallow the exception
