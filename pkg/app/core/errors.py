"""
Error Types.

Every failure the toolkit reports is a subclass of VfkitError. Each class
carries an ``exit_code`` used by the command-line surface:

- 2: schema problems (malformed documents or words)
- 3: algebraic problems (invalid groups, embeddings, graphs, words)
- 4: a subgroup that does not act freely on the tree
- 5: a failed bound verdict
- 6: a desk-scale cap was exceeded
"""
from typing import Any, Optional, Tuple


class VfkitError(Exception):
    """Base class for all toolkit errors."""

    exit_code: int = 1


# === Schema ===

class SchemaError(VfkitError):
    """Instance document does not match the expected structure."""

    exit_code = 2


class WordSyntaxError(SchemaError):
    """A generator word could not be tokenized."""

    def __init__(self, word: str, token: str):
        self.word = word
        self.token = token
        super().__init__(f"bad token {token!r} in word {word!r}")


# === Algebra ===

class AlgebraError(VfkitError):
    """Structural or algebraic invariant violated."""

    exit_code = 3


class NotAGroup(AlgebraError):
    """Multiplication table fails a group axiom."""

    REASONS = ("identity", "inverses", "associativity", "latin-square")

    def __init__(self, reason: str, witness: Tuple[int, ...]):
        self.reason = reason
        self.witness = witness
        super().__init__(f"not a group ({reason}), witness {witness}")


class GroupTooLarge(AlgebraError):
    def __init__(self, order: int, cap: int):
        self.order = order
        self.cap = cap
        super().__init__(f"group order {order} exceeds cap {cap}")


class NotInjective(AlgebraError):
    def __init__(self, witness: Tuple[int, int]):
        self.witness = witness
        super().__init__(f"map is not injective: {witness[0]} and {witness[1]} collide")


class NotHomomorphism(AlgebraError):
    def __init__(self, witness: Tuple[int, int]):
        self.witness = witness
        super().__init__(f"map is not a homomorphism at pair {witness}")


class EdgePairGroupMismatch(AlgebraError):
    def __init__(self, edge: int):
        self.edge = edge
        super().__init__(f"edge {edge} and its inverse carry different edge groups")


class Disconnected(AlgebraError):
    def __init__(self, u: int, v: int):
        self.u = u
        self.v = v
        super().__init__(f"graph is disconnected: no path from {u} to {v}")


class IsATree(AlgebraError):
    def __init__(self) -> None:
        super().__init__("graph is a tree and has no core")


class NotClosed(AlgebraError):
    def __init__(self, start: int, end: int):
        self.start = start
        self.end = end
        super().__init__(f"path from {start} ends at {end}, not closed")


class BrokenPath(AlgebraError):
    def __init__(self, position: int):
        self.position = position
        super().__init__(f"edge sequence is not a path at position {position}")


class NotAMorphism(AlgebraError):
    def __init__(self, edge: int):
        self.edge = edge
        super().__init__(f"map does not commute with src/dst/inv at edge {edge}")


class TooLarge(AlgebraError):
    def __init__(self, size: int, cap: int):
        self.size = size
        self.cap = cap
        super().__init__(f"graph with {size} vertices exceeds isomorphism cap {cap}")


class UnknownVertex(AlgebraError):
    def __init__(self, vertex: Any):
        self.vertex = vertex
        super().__init__(f"unknown vertex {vertex!r}")


class UnknownEdge(AlgebraError):
    def __init__(self, edge: Any):
        self.edge = edge
        super().__init__(f"unknown edge {edge!r}")


class UnknownElement(AlgebraError):
    def __init__(self, vertex: int, element: Any):
        self.vertex = vertex
        self.element = element
        super().__init__(f"unknown element {element!r} of the group at vertex {vertex}")


class BaseMismatch(AlgebraError):
    def __init__(self, left: int, right: int):
        self.left = left
        self.right = right
        super().__init__(f"cannot concatenate: word ends at {left}, next starts at {right}")


class IdentityGenerator(AlgebraError):
    def __init__(self, index: int):
        self.index = index
        super().__init__(f"generator {index} is the identity")


class AmbientMismatch(AlgebraError):
    def __init__(self) -> None:
        super().__init__("subgroup graphs live over different graphs of groups")


class UnknownSubgroup(AlgebraError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"instance has no subgroup named {name!r}")


# === Free action ===

class FreeActionViolation(VfkitError):
    """
    Folding identified an element of a block with a twisted copy of itself.

    The generated subgroup meets a conjugate of the vertex group at
    ``vertex`` in a nontrivial element; ``twist`` is that element's
    vertex-group coordinate.
    """

    exit_code = 4

    def __init__(self, vertex: int, twist: int, subgroup: Optional[str] = None):
        self.vertex = vertex
        self.twist = twist
        self.subgroup = subgroup
        super().__init__(self._message())

    def _message(self) -> str:
        where = f" in subgroup {self.subgroup}" if self.subgroup else ""
        return (
            f"free action violated{where}: twist {self.twist} "
            f"in a block over vertex {self.vertex}"
        )

    def tagged(self, subgroup: str) -> "FreeActionViolation":
        """Copy of this error labelled with a subgroup name."""
        return FreeActionViolation(self.vertex, self.twist, subgroup)


# === Bounds ===

class BoundFailure(VfkitError):
    exit_code = 5

    def __init__(self, failed: Tuple[str, ...]):
        self.failed = failed
        super().__init__(f"verdicts failed: {', '.join(failed)}")


# === Caps ===

class CapExceeded(VfkitError):
    exit_code = 6


class BallTooLarge(CapExceeded):
    def __init__(self, size: int, cap: int):
        self.size = size
        self.cap = cap
        super().__init__(f"tree ball exceeds {cap} vertices")


class SetTooLarge(CapExceeded):
    def __init__(self, size: int, cap: int):
        self.size = size
        self.cap = cap
        super().__init__(f"element set exceeds {cap} elements")


class RadiusTooLarge(CapExceeded):
    def __init__(self, radius: int, cap: int):
        self.radius = radius
        self.cap = cap
        super().__init__(f"ball radius {radius} exceeds cap {cap}")
