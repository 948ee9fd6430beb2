__all__ = (
    "EmissionPolicy",
    "ThrottledCallable",
    "get_thread_count",
    "highlight_text",
    "ordered_map",
    "throttled",
)

from ._highlight import highlight_text
from ._threading import get_thread_count, ordered_map
from ._throttler import EmissionPolicy, ThrottledCallable, throttled
