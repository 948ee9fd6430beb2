from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

from ._domains import DomainSpec

if TYPE_CHECKING:
    from collections.abc import Sequence

    from ._roots import RootSet

__all__ = ["count_batch", "count_in_domain", "nevanlinna_count"]


def count_in_domain(roots: RootSet, domain: DomainSpec) -> int:
    """Number of zeros (with multiplicity) in the open domain."""
    if domain.m != 1:
        raise ValueError("zero counting is defined for m = 1")
    inside = int(np.count_nonzero(domain.contains_points(roots.roots)))
    if domain.contains_infinity:
        inside += roots.at_infinity
    return inside


def count_batch(roots: Sequence[RootSet], domain: DomainSpec) -> np.ndarray:
    """`count_in_domain` for many root sets, as an int array."""
    return np.array([count_in_domain(r, domain) for r in roots], dtype=np.int64)


def nevanlinna_count(roots: RootSet, r: float) -> int:
    """n_f(r, 0): the number of zeros in the disk |z| < r."""
    return count_in_domain(roots, DomainSpec.disk(r))
