"""Zeros of sections on CP^1: root finding, domain counting and maximum modulus."""

from ._aberth import AberthResult, aberth, backward_errors
from ._counting import count_batch, count_in_domain, nevanlinna_count
from ._domains import DomainKind, DomainSpec
from ._modulus import DEFAULT_LEVELS, max_modulus, max_modulus_batch, sphere_grid
from ._roots import RootSet, find_roots, find_roots_batch

__all__ = [
    "DEFAULT_LEVELS",
    "AberthResult",
    "DomainKind",
    "DomainSpec",
    "RootSet",
    "aberth",
    "backward_errors",
    "count_batch",
    "count_in_domain",
    "find_roots",
    "find_roots_batch",
    "max_modulus",
    "max_modulus_batch",
    "nevanlinna_count",
    "sphere_grid",
]
