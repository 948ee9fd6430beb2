import pytest
from pygments.util import ClassNotFound

from zerolab.utils import highlight_text


def test_highlight_json():
    text = '{"slope": 0.03, "r_squared": 0.99}'
    out = highlight_text(text, "json")
    assert "\x1b[" in out
    assert "slope" in out


def test_highlight_by_name():
    out = highlight_text("Traceback (most recent call last):\n", "Python Traceback")
    assert "Traceback" in out


def test_highlight_theme():
    out = highlight_text("N,p_hat\n4,0.3\n", "text", theme="monokai")
    assert "p_hat" in out


def test_highlight_unknown_lexer():
    with pytest.raises(ClassNotFound):
        highlight_text("x", "no-such-language")
