"""
Finite Groups Module.

Finite groups given by multiplication tables, monomorphisms between them and
left transversals. This module provides:
- Exhaustive validation of tables (identity, inverses, latin square, associativity)
- Validated monomorphisms with coset decomposition g = t·map(c)
- Minimal-index left transversals used by every normal form
- Constructors for the small groups used by fixtures and the corpus

Element 0 is always the identity.
"""
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from app.config.settings import settings
from app.core.errors import (
    GroupTooLarge,
    NotAGroup,
    NotHomomorphism,
    NotInjective,
    SchemaError,
)
from app.utils.logging import get_logger

logger = get_logger("core.finite_group")

RawTable = Union[Sequence[Sequence[int]], np.ndarray]


# === Domain Types ===

@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """
    A validated finite group.

    Attributes:
        table: Read-only ``order × order`` product table
        inverses: Read-only inverse table
        names: Optional display names, one per element
    """
    table: np.ndarray
    inverses: np.ndarray
    names: Optional[Tuple[str, ...]] = None
    _rows: Tuple[Tuple[int, ...], ...] = field(init=False, repr=False)
    _inv: Tuple[int, ...] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        # Plain tuples for the hot paths; numpy stays the storage of record
        object.__setattr__(self, "_rows", tuple(tuple(row) for row in self.table.tolist()))
        object.__setattr__(self, "_inv", tuple(self.inverses.tolist()))

    @property
    def order(self) -> int:
        return len(self._inv)

    @property
    def elements(self) -> range:
        return range(self.order)

    @property
    def is_trivial(self) -> bool:
        return self.order == 1

    def mul(self, a: int, b: int) -> int:
        return self._rows[a][b]

    def inv(self, a: int) -> int:
        return self._inv[a]

    def product(self, *elements: int) -> int:
        result = 0
        for element in elements:
            result = self._rows[result][element]
        return result

    def element_order(self, a: int) -> int:
        k, power = 1, a
        while power != 0:
            power = self._rows[power][a]
            k += 1
        return k

    def name(self, a: int) -> str:
        if self.names is not None:
            return self.names[a]
        return str(a)

    def __repr__(self) -> str:
        return f"FiniteGroup(order={self.order})"


@dataclass(frozen=True, eq=False)
class Monomorphism:
    """
    A validated injective homomorphism ``source → target``.

    Attributes:
        source: Domain group
        target: Codomain group
        images: ``images[i]`` is the image of source element ``i``
    """
    source: FiniteGroup
    target: FiniteGroup
    images: Tuple[int, ...]
    _preimage: Dict[int, int] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_preimage", {t: s for s, t in enumerate(self.images)})

    def __call__(self, element: int) -> int:
        return self.images[element]

    @property
    def image(self) -> frozenset:
        return frozenset(self._preimage)

    @property
    def index(self) -> int:
        return self.target.order // self.source.order

    def contains(self, element: int) -> bool:
        return element in self._preimage

    def preimage(self, element: int) -> int:
        """Source element mapping to ``element``; KeyError when outside the image."""
        return self._preimage[element]

    @cached_property
    def transversal(self) -> Tuple[int, ...]:
        return tuple(left_transversal(self))

    @cached_property
    def _decomposition(self) -> Tuple[Tuple[int, int], ...]:
        parts: List[Tuple[int, int]] = [(-1, -1)] * self.target.order
        mul = self.target.mul
        for rep in self.transversal:
            for c, image in enumerate(self.images):
                parts[mul(rep, image)] = (rep, c)
        return tuple(parts)

    def decompose(self, element: int) -> Tuple[int, int]:
        """
        Split a target element along the left cosets of the image.

        Returns:
            ``(t, c)`` with ``element = t · map(c)`` and ``t`` the transversal
            representative of the coset ``element · image``
        """
        return self._decomposition[element]

    def coset_representative(self, element: int) -> int:
        return self._decomposition[element][0]

    def then(self, other: "Monomorphism") -> "Monomorphism":
        """Composite ``other ∘ self``, validated."""
        if other.source is not self.target:
            raise SchemaError("composition needs matching middle groups")
        return validate_mono(self.source, other.target, [other(x) for x in self.images])


# === Validation ===

def validate_group(
    table: RawTable,
    names: Optional[Sequence[str]] = None,
    max_order: Optional[int] = None,
) -> FiniteGroup:
    """
    Validate a raw multiplication table.

    Checks run in a fixed order (shape and range, identity, inverses, latin
    square, associativity) and stop at the first failure.

    Args:
        table: Square table over 0..n-1
        names: Optional display names
        max_order: Order cap (default: settings.max_group_order)

    Returns:
        Validated FiniteGroup

    Raises:
        NotAGroup: With the failing axiom and the first offending triple
        GroupTooLarge: When the order exceeds the cap
    """
    cap = settings.max_group_order if max_order is None else max_order

    try:
        arr = np.array(table, dtype=np.int64)
    except (ValueError, TypeError):
        raise NotAGroup("latin-square", ()) from None

    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise NotAGroup("latin-square", tuple(int(x) for x in arr.shape))
    n = arr.shape[0]
    if n > cap:
        raise GroupTooLarge(n, cap)
    if names is not None and len(names) != n:
        raise SchemaError(f"{len(names)} element names for a group of order {n}")

    # 1. Entries in range
    bad = np.argwhere((arr < 0) | (arr >= n))
    if len(bad):
        raise NotAGroup("latin-square", tuple(int(x) for x in bad[0]))

    # 2. Identity pinned at 0
    ids = np.arange(n)
    bad_row = np.flatnonzero(arr[0] != ids)
    if len(bad_row):
        raise NotAGroup("identity", (0, int(bad_row[0])))
    bad_col = np.flatnonzero(arr[:, 0] != ids)
    if len(bad_col):
        raise NotAGroup("identity", (int(bad_col[0]), 0))

    # 3. Two-sided inverses
    is_identity = arr == 0
    two_sided = is_identity & is_identity.T
    missing = np.flatnonzero(~two_sided.any(axis=1))
    if len(missing):
        raise NotAGroup("inverses", (int(missing[0]),))

    # 4. Latin square: rows then columns
    for grid, transpose in ((arr, False), (arr.T, True)):
        for i, line in enumerate(grid):
            if len(np.unique(line)) != n:
                seen: Dict[int, int] = {}
                for j, value in enumerate(line.tolist()):
                    if value in seen:
                        k = seen[value]
                        raise NotAGroup(
                            "latin-square", (k, j, i) if transpose else (i, k, j)
                        )
                    seen[value] = j

    # 5. Associativity, exhaustively: (ij)k vs i(jk)
    left = arr[arr]
    right = arr[:, arr]
    bad = np.argwhere(left != right)
    if len(bad):
        raise NotAGroup("associativity", tuple(int(x) for x in bad[0]))

    inverses = np.argmax(two_sided, axis=1).astype(np.int64)
    arr.setflags(write=False)
    inverses.setflags(write=False)
    return FiniteGroup(arr, inverses, tuple(names) if names is not None else None)


def validate_mono(
    source: FiniteGroup,
    target: FiniteGroup,
    mapping: Union[Sequence[int], Mapping[int, int]],
) -> Monomorphism:
    """
    Validate an element map as an injective homomorphism.

    Args:
        source: Domain group
        target: Codomain group
        mapping: Sequence indexed by source elements, or a total dict

    Returns:
        Validated Monomorphism

    Raises:
        SchemaError: Map is not total or leaves the target
        NotInjective: Two source elements share an image
        NotHomomorphism: With the first pair (i, j) breaking multiplicativity
    """
    if isinstance(mapping, Mapping):
        try:
            images = [int(mapping[i]) for i in source.elements]
        except KeyError as e:
            raise SchemaError(f"map is not total: missing {e.args[0]}") from None
    else:
        images = [int(x) for x in mapping]
    if len(images) != source.order:
        raise SchemaError(f"map has {len(images)} entries, source has order {source.order}")
    if any(not 0 <= x < target.order for x in images):
        raise SchemaError("map leaves the target group")

    first: Dict[int, int] = {}
    for i, x in enumerate(images):
        if x in first:
            raise NotInjective((first[x], i))
        first[x] = i

    img = np.array(images, dtype=np.int64)
    lhs = img[source.table]
    rhs = target.table[img[:, None], img[None, :]]
    bad = np.argwhere(lhs != rhs)
    if len(bad):
        raise NotHomomorphism((int(bad[0][0]), int(bad[0][1])))

    return Monomorphism(source, target, tuple(images))


def left_transversal(mono: Monomorphism) -> List[int]:
    """
    Minimal-index representatives of the left cosets ``t · image(mono)``.

    The first representative is always the identity 0.
    """
    target = mono.target
    covered = [False] * target.order
    reps: List[int] = []
    for t in target.elements:
        if covered[t]:
            continue
        reps.append(t)
        for h in mono.images:
            covered[target.mul(t, h)] = True
    return reps


# === Constructors ===

def trivial_group() -> FiniteGroup:
    return validate_group([[0]], names=["1"])


def cyclic_group(n: int) -> FiniteGroup:
    """ℤ/n with element k written additively."""
    ks = np.arange(n)
    return validate_group((ks[:, None] + ks[None, :]) % n, names=[str(k) for k in range(n)])


def dihedral_group(n: int) -> FiniteGroup:
    """
    Dihedral group of order 2n.

    Element ``k + n·f`` stands for r^k s^f, with s r s = r⁻¹.
    """
    size = 2 * n
    table = np.zeros((size, size), dtype=np.int64)
    for a in range(size):
        k1, f1 = a % n, a // n
        for b in range(size):
            k2, f2 = b % n, b // n
            k = (k1 + (-k2 if f1 else k2)) % n
            table[a, b] = k + n * ((f1 + f2) % 2)
    names = [f"r{k}" for k in range(n)] + [f"r{k}s" for k in range(n)]
    return validate_group(table, names=names)


def direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    """G × H with element ``a·|H| + b`` for the pair (a, b)."""
    m = h.order
    size = g.order * m
    table = np.zeros((size, size), dtype=np.int64)
    for x in range(size):
        a1, b1 = divmod(x, m)
        for y in range(size):
            a2, b2 = divmod(y, m)
            table[x, y] = g.mul(a1, a2) * m + h.mul(b1, b2)
    names = [f"({g.name(x // m)},{h.name(x % m)})" for x in range(size)]
    return validate_group(table, names=names)


def klein_group() -> FiniteGroup:
    return direct_product(cyclic_group(2), cyclic_group(2))


def cyclic_subgroup_embedding(source: FiniteGroup, target: FiniteGroup, generator: int) -> Monomorphism:
    """Embed a cyclic ``source`` (element k = k-th power) by sending 1 to ``generator``."""
    images = [0]
    for _ in range(source.order - 1):
        images.append(target.mul(images[-1], generator))
    return validate_mono(source, target, images)


def subgroup_embedding(source: FiniteGroup, target: FiniteGroup, images: Sequence[int]) -> Monomorphism:
    """Embedding given by the image of every source element."""
    return validate_mono(source, target, images)


def trivial_embedding(target: FiniteGroup, source: Optional[FiniteGroup] = None) -> Monomorphism:
    return validate_mono(source or trivial_group(), target, [0])
