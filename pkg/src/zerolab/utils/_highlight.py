from __future__ import annotations

from typing import TYPE_CHECKING

from pygments import highlight
from pygments.formatters import Terminal256Formatter, TerminalFormatter
from pygments.lexers import find_lexer_class, get_lexer_by_name
from pygments.util import ClassNotFound

if TYPE_CHECKING:
    from pygments.lexer import Lexer


def _get_lexer(lang: str) -> Lexer:
    try:
        return get_lexer_by_name(lang)
    except ClassNotFound:
        cls = find_lexer_class(lang)
        if cls is None:
            raise
        return cls()


def highlight_text(text: str, lang: str = "json", theme: str | None = None) -> str:
    """Return `text` with ANSI colour codes for a terminal.

    Parameters
    ----------
    text : str
        Source to colour.
    lang : str
        Pygments lexer name or class name, by default ``"json"``.
    theme : str, optional
        Pygments style name; when given a 256-colour formatter is used,
        otherwise the basic 16-colour terminal formatter.
    """
    formatter = Terminal256Formatter(style=theme) if theme else TerminalFormatter()
    return highlight(text, _get_lexer(lang), formatter)
