"""Finite abelian groups as explicit products of cyclic factors.

Elements are coordinate tuples (c_1, ..., c_k) with 0 <= c_j < m_j, indexed in
mixed radix with the first coordinate varying fastest.  The character pairing
chi_x(y) = exp(2*pi*i * sum_j x_j y_j / m_j) is evaluated through an exact
integer exponent modulo lcm(m_1, ..., m_k), so algebraic identities hold to
machine rounding only.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator

import numpy as np

from .errors import ResourceLimitError

DEFAULT_ENUMERATION_CAP = 1 << 20


@dataclass(frozen=True)
class GroupSpec:
    """A finite abelian group Z_{m_1} x ... x Z_{m_k} given by its moduli."""

    moduli: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "moduli", tuple(int(m) for m in self.moduli))
        if len(self.moduli) == 0:
            raise ValueError("a group needs at least one cyclic factor")
        for m in self.moduli:
            if m < 2:
                raise ValueError(f"cyclic factor modulus must be >= 2, got {m}")

    @cached_property
    def order(self) -> int:
        return math.prod(self.moduli)

    @cached_property
    def strides(self) -> tuple[int, ...]:
        """Mixed-radix strides: index(x) = sum_j x_j * strides[j], first factor fastest."""
        strides = [1]
        for m in self.moduli[:-1]:
            strides.append(strides[-1] * m)
        return tuple(strides)

    @cached_property
    def lcm_exponent(self) -> int:
        return math.lcm(*self.moduli)

    @property
    def zero(self) -> GroupElement:
        return GroupElement(self, (0,) * len(self.moduli))

    def element(self, coords: Iterable[int]) -> GroupElement:
        """Validate a coordinate tuple and wrap it as an element of this group."""
        c = tuple(int(v) for v in coords)
        if len(c) != len(self.moduli):
            raise ValueError(f"expected {len(self.moduli)} coordinates, got {len(c)}")
        for v, m in zip(c, self.moduli):
            if not 0 <= v < m:
                raise ValueError(f"coordinate {v} out of range for modulus {m}")
        return GroupElement(self, c)

    def element_at(self, index: int) -> GroupElement:
        """Decode a mixed-radix index into an element."""
        if not 0 <= index < self.order:
            raise ValueError(f"index {index} out of range for group of order {self.order}")
        coords = []
        rem = index
        for m in self.moduli:
            coords.append(rem % m)
            rem //= m
        return GroupElement(self, tuple(coords))

    def elements(self) -> Iterator[GroupElement]:
        """Iterate all elements in index order."""
        for i in range(self.order):
            yield self.element_at(i)

    def direct_power(self, n: int) -> GroupSpec:
        """The group G^n with this group's factors repeated blockwise n times."""
        if n < 1:
            raise ValueError(f"direct power needs n >= 1, got {n}")
        return GroupSpec(self.moduli * n)


@dataclass(frozen=True)
class GroupElement:
    """An element of a GroupSpec, stored as a coordinate tuple."""

    group: GroupSpec
    coords: tuple[int, ...]

    @property
    def index(self) -> int:
        return sum(c * s for c, s in zip(self.coords, self.group.strides))

    def _require_same_group(self, other: GroupElement) -> None:
        if not isinstance(other, GroupElement):
            raise TypeError(f"expected a GroupElement, got {type(other).__name__}")
        if other.group != self.group:
            raise ValueError(
                f"elements belong to different groups: {self.group.moduli} vs {other.group.moduli}"
            )

    def __add__(self, other: GroupElement) -> GroupElement:
        self._require_same_group(other)
        coords = tuple((a + b) % m for a, b, m in zip(self.coords, other.coords, self.group.moduli))
        return GroupElement(self.group, coords)

    def __neg__(self) -> GroupElement:
        coords = tuple((-a) % m for a, m in zip(self.coords, self.group.moduli))
        return GroupElement(self.group, coords)

    def __sub__(self, other: GroupElement) -> GroupElement:
        self._require_same_group(other)
        coords = tuple((a - b) % m for a, b, m in zip(self.coords, other.coords, self.group.moduli))
        return GroupElement(self.group, coords)

    def scaled(self, k: int) -> GroupElement:
        """The repeated sum k*x (k may be negative)."""
        coords = tuple((k * a) % m for a, m in zip(self.coords, self.group.moduli))
        return GroupElement(self.group, coords)


def coerce_element(group: GroupSpec, value: GroupElement | Iterable[int]) -> GroupElement:
    """Accept either an element of `group` or a raw coordinate tuple."""
    if isinstance(value, GroupElement):
        if value.group != group:
            raise ValueError(
                f"element of group {value.group.moduli} used where {group.moduli} expected"
            )
        return value
    return group.element(value)


def weight(x: GroupElement, width: int = 1) -> int:
    """Number of nonzero blocks of `width` adjacent coordinates."""
    if width < 1:
        raise ValueError(f"width must be >= 1, got {width}")
    k = len(x.coords)
    if k % width != 0:
        raise ValueError(f"{k} coordinates do not split into blocks of width {width}")
    return sum(
        1 for j in range(0, k, width) if any(c != 0 for c in x.coords[j : j + width])
    )


def distance(x: GroupElement, y: GroupElement, width: int = 1) -> int:
    """Blockwise Hamming distance between two elements."""
    return weight(x - y, width)


def pairing_exponent(x: GroupElement, y: GroupElement) -> int:
    """Integer e with chi_x(y) = exp(2*pi*i*e/L), L = lcm of the moduli; exact."""
    x._require_same_group(y)
    group = x.group
    L = group.lcm_exponent
    total = 0
    for a, b, m in zip(x.coords, y.coords, group.moduli):
        total += a * b * (L // m)
    return total % L


def character_eval(x: GroupElement, y: GroupElement) -> complex:
    """Value of the character chi_x at y."""
    group = x.group
    e = pairing_exponent(x, y)
    if e == 0:
        return 1.0 + 0.0j
    return cmath.exp(2j * math.pi * e / group.lcm_exponent)


@dataclass(frozen=True)
class Subgroup:
    """A subgroup held as its full element list (sorted by index) plus generators."""

    group: GroupSpec
    elements: tuple[GroupElement, ...]
    generators: tuple[GroupElement, ...] = field(compare=False)

    @cached_property
    def _index_set(self) -> frozenset[int]:
        return frozenset(e.index for e in self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[GroupElement]:
        return iter(self.elements)

    def __contains__(self, x: GroupElement) -> bool:
        return isinstance(x, GroupElement) and x.group == self.group and x.index in self._index_set

    def contains_subgroup(self, other: Subgroup) -> bool:
        """Whether every element of `other` lies in this subgroup."""
        if other.group != self.group:
            raise ValueError("subgroups of different ambient groups are incomparable")
        return other._index_set <= self._index_set

    @classmethod
    def from_generators(
        cls,
        group: GroupSpec,
        generators: Iterable[GroupElement | Iterable[int]],
        max_elements: int | None = None,
    ) -> Subgroup:
        """Close a generating set under addition (breadth-first, capped)."""
        cap = DEFAULT_ENUMERATION_CAP if max_elements is None else max_elements
        gens = tuple(coerce_element(group, g) for g in generators)
        seen: dict[int, GroupElement] = {group.zero.index: group.zero}
        frontier = [group.zero]
        while frontier:
            new_frontier = []
            for x in frontier:
                for g in gens:
                    y = x + g
                    if y.index not in seen:
                        if len(seen) >= cap:
                            raise ResourceLimitError(
                                f"subgroup closure exceeded the cap of {cap} elements"
                            )
                        seen[y.index] = y
                        new_frontier.append(y)
            frontier = new_frontier
        elements = tuple(seen[i] for i in sorted(seen))
        return cls(group, elements, gens)

    @classmethod
    def from_elements(
        cls, group: GroupSpec, elements: Iterable[GroupElement | Iterable[int]]
    ) -> Subgroup:
        """Wrap an explicit element set, verifying closure and deriving small generators."""
        elts = {}
        for e in elements:
            e = coerce_element(group, e)
            elts[e.index] = e
        if group.zero.index not in elts:
            raise ValueError("a subgroup must contain the identity element")
        ordered = [elts[i] for i in sorted(elts)]
        gens: list[GroupElement] = []
        span: set[int] = {group.zero.index}
        span_elts: list[GroupElement] = [group.zero]
        for e in ordered:
            if e.index in span:
                continue
            gens.append(e)
            # extend the current span by all multiples of the new generator
            multiples = [group.zero]
            step = e
            while step.index != group.zero.index:
                multiples.append(step)
                step = step + e
            new_elts = []
            for s in span_elts:
                for t in multiples[1:]:
                    u = s + t
                    if u.index not in span:
                        span.add(u.index)
                        new_elts.append(u)
            span_elts.extend(new_elts)
        if span != set(elts):
            raise ValueError("element set is not closed under addition")
        return cls(group, tuple(ordered), tuple(gens))

    @classmethod
    def trivial(cls, group: GroupSpec) -> Subgroup:
        return cls(group, (group.zero,), ())

    @classmethod
    def full(cls, group: GroupSpec) -> Subgroup:
        gens = []
        for j in range(len(group.moduli)):
            coords = [0] * len(group.moduli)
            coords[j] = 1
            gens.append(group.element(coords))
        return cls(group, tuple(group.elements()), tuple(gens))


def annihilator(subgroup: Subgroup) -> Subgroup:
    """The annihilator {x : chi_x(h) = 1 for all h in H}, computed exactly."""
    group = subgroup.group
    gens = subgroup.generators if subgroup.generators else (group.zero,)
    members = [
        x for x in group.elements() if all(pairing_exponent(x, g) == 0 for g in gens)
    ]
    return Subgroup.from_elements(group, members)


def character_sum_over(subgroup: Subgroup, x: GroupElement) -> complex:
    """sum_{h in H} chi_x(h); equals |H| on the annihilator and 0 elsewhere."""
    if x.group != subgroup.group:
        raise ValueError("character argument must live in the subgroup's ambient group")
    return sum((character_eval(x, h) for h in subgroup), start=0.0 + 0.0j)


@dataclass(frozen=True, eq=False)
class CosetTable:
    """Cosets of a subgroup across an ambient set, with min-weight representatives."""

    subgroup: Subgroup
    representatives: tuple[GroupElement, ...]
    width: int
    _index_of: dict[int, int] = field(repr=False)

    def __len__(self) -> int:
        return len(self.representatives)

    def index_of(self, x: GroupElement) -> int:
        """Coset index of x; raises if x lies outside the tabulated ambient set."""
        if x.group != self.subgroup.group:
            raise ValueError("element belongs to a different group than the coset table")
        try:
            return self._index_of[x.index]
        except KeyError:
            raise ValueError(f"element {x.coords} is not covered by this coset table") from None

    def representative_of(self, x: GroupElement) -> GroupElement:
        return self.representatives[self.index_of(x)]

    @cached_property
    def dense_labels(self) -> np.ndarray:
        """Coset label of every ambient index; only for tables covering the whole group."""
        order = self.subgroup.group.order
        if len(self._index_of) != order:
            raise ValueError("dense labels require a coset table over the entire group")
        labels = np.empty(order, dtype=np.int64)
        for idx, lab in self._index_of.items():
            labels[idx] = lab
        labels.setflags(write=False)
        return labels


def coset_table(
    ambient: GroupSpec | Subgroup, subgroup: Subgroup, width: int = 1
) -> CosetTable:
    """Partition an ambient group (or subgroup) into cosets of `subgroup`.

    Representatives are the minimum blockwise-weight member of each coset, with
    lexicographically smallest coordinates breaking ties, so the table doubles as
    a coset-leader table for decoding.
    """
    if isinstance(ambient, GroupSpec):
        if subgroup.group != ambient:
            raise ValueError("subgroup does not live in the given ambient group")
        universe = list(ambient.elements())
    else:
        if not ambient.contains_subgroup(subgroup):
            raise ValueError("coset table needs the subgroup to lie inside the ambient subgroup")
        universe = list(ambient.elements)
    universe.sort(key=lambda e: (weight(e, width), e.coords))
    representatives: list[GroupElement] = []
    index_of: dict[int, int] = {}
    for e in universe:
        if e.index in index_of:
            continue
        ci = len(representatives)
        representatives.append(e)
        for h in subgroup:
            index_of[(e + h).index] = ci
    return CosetTable(subgroup, tuple(representatives), width, index_of)


def all_subgroups(group: GroupSpec, max_elements: int | None = None) -> tuple[Subgroup, ...]:
    """Every subgroup, found by closing each known subgroup with one more generator."""
    trivial = Subgroup.trivial(group)
    found: dict[frozenset[int], Subgroup] = {trivial._index_set: trivial}
    queue = [trivial]
    while queue:
        current = queue.pop()
        for e in group.elements():
            if e in current:
                continue
            extended = Subgroup.from_generators(
                group, current.generators + (e,), max_elements=max_elements
            )
            if extended._index_set not in found:
                found[extended._index_set] = extended
                queue.append(extended)
    ordered = sorted(found.values(), key=lambda s: (s.order, tuple(e.index for e in s.elements)))
    return tuple(ordered)
