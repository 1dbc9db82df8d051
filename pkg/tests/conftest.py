"""Shared group catalogs for the test suite."""

from __future__ import annotations

# Representatives of the test orders {2, 3, 4, 6, 8, 9, 12, 36}, including
# distinct presentations of isomorphic groups to exercise the moduli handling.
CATALOG = (
    (2,),
    (3,),
    (4,),
    (2, 2),
    (6,),
    (8,),
    (2, 4),
    (2, 2, 2),
    (9,),
    (3, 3),
    (12,),
    (2, 6),
    (2, 18),
    (12, 3),
    (36,),
    (6, 6),
    (4, 9),
)

# Small groups where exhaustive double loops over G x G stay cheap.
SMALL = ((2,), (3,), (4,), (2, 2), (6,), (2, 4), (3, 3))

# Extra shapes for unitarity checks up to order 64.
UNITARY_EXTRAS = ((2, 2, 2, 2), (4, 4), (64,))
