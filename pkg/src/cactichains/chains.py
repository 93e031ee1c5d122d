"""The cellular chain complex of normalized cacti.

Chains are integer-linear combinations of decorated trees of a common
degree.  The boundary operator has two kinds of faces: angle collapses
(simplex faces of the spineless part) and spine flips (endpoints of the
circle 1-cells).  A cell is an ordered product [spine cells by label]
x [spineless part], so the angle-collapse block carries the Koszul
prefix (-1)^(number of dec=1 vertices); within the spineless block the
sign of the collapse at edge e is (-1)^(num(e)-1) for the traversal
numbering of the angle edges.  Collapsing the marked angle of a dec=1
vertex lands in a lower-dimensional cell and contributes nothing.
"""

from __future__ import annotations

import json
from dataclasses import replace

from .trees import (
    BlackVertex,
    DecoratedTree,
    TreeError,
    WhiteVertex,
    parse,
    serialize,
    tree_degree,
    validate,
)

__all__ = [
    "ChainElement",
    "degree",
    "angle_edges",
    "collapsed_angle",
    "angle_collapse",
    "spine_flip",
    "boundary",
    "boundary_tree",
]


def degree(tree: DecoratedTree) -> int:
    """White-edge count plus the number of dec=1 vertices."""
    return tree_degree(tree)


class ChainElement:
    """A finite integer combination of trees of one degree and label set."""

    __slots__ = ("n", "degree", "terms")

    def __init__(self, n: int, deg: int, terms: dict[DecoratedTree, int] | None = None):
        self.n = n
        self.degree = deg
        self.terms: dict[DecoratedTree, int] = {}
        if terms:
            for t, c in terms.items():
                if c:
                    self.terms[t] = self.terms.get(t, 0) + c
            self.terms = {t: c for t, c in self.terms.items() if c}
        for t in self.terms:
            if tree_degree(t) != deg:
                raise TreeError(f"mixed degrees in chain: expected {deg}, got {tree_degree(t)}")
            if len(t.labels()) != n:
                raise TreeError("mixed label counts in chain")

    @staticmethod
    def from_tree(tree: DecoratedTree, coeff: int = 1) -> "ChainElement":
        n = validate(tree)
        return ChainElement(n, tree_degree(tree), {tree: coeff})

    @staticmethod
    def zero(n: int, deg: int) -> "ChainElement":
        return ChainElement(n, deg, {})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "ChainElement") -> "ChainElement":
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if (self.n, self.degree) != (other.n, other.degree):
            raise TreeError("cannot add chains of different degree or label count")
        merged = dict(self.terms)
        for t, c in other.terms.items():
            merged[t] = merged.get(t, 0) + c
        return ChainElement(self.n, self.degree, merged)

    def __sub__(self, other: "ChainElement") -> "ChainElement":
        return self + other.scale(-1)

    def scale(self, k: int) -> "ChainElement":
        if k == 0:
            return ChainElement.zero(self.n, self.degree)
        return ChainElement(self.n, self.degree, {t: k * c for t, c in self.terms.items()})

    def __neg__(self) -> "ChainElement":
        return self.scale(-1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ChainElement):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return self.n == other.n
        return (self.n, self.degree, self.terms) == (other.n, other.degree, other.terms)

    def __hash__(self):
        return hash((self.n, self.degree, frozenset(self.terms.items())))

    def items(self):
        return sorted(self.terms.items(), key=lambda tc: serialize(tc[0]))

    def __repr__(self):
        if self.is_zero():
            return "0"
        return " + ".join(f"{c}*{serialize(t)}" for t, c in self.items())

    def to_json(self) -> str:
        return json.dumps(
            {
                "n": self.n,
                "degree": self.degree,
                "terms": [{"coeff": str(c), "tree": serialize(t)} for t, c in self.items()],
            }
        )

    @staticmethod
    def from_json(text: str) -> "ChainElement":
        data = json.loads(text)
        terms: dict[DecoratedTree, int] = {}
        for item in data["terms"]:
            t = parse(item["tree"])
            terms[t] = terms.get(t, 0) + int(item["coeff"])
        return ChainElement(int(data["n"]), int(data["degree"]), terms)


# ---------------------------------------------------------------------------
# angle edges and collapses


def angle_edges(tree: DecoratedTree) -> list[tuple[int, int]]:
    """Angle-bearing edges as (white label, flag index), ordered by the
    perimeter traversal of the corresponding arcs.

    The perimeter walks each lobe's arcs in planar order, descending into
    branches between them; the arc closing a lobe (its outgoing flag)
    comes after everything attached to the lobe.  Leaf lobes carry a
    single arc and contribute no angle edges.
    """
    out: list[tuple[int, int]] = []

    def visit_white(w: WhiteVertex):
        for j, b in enumerate(w.children):
            out.append((w.label, j + 1))
            for w2 in b.children:
                visit_white(w2)
        if w.children:
            out.append((w.label, 0))

    for w in tree.lobes:
        visit_white(w)
    return out


def collapsed_angle(w: WhiteVertex, flag: int) -> int:
    """The angle that shrinks when edge `flag` merges with its predecessor."""
    return (flag - 1) % w.val


def _transport_dec0(mark: int, flag: int, k: int) -> int:
    if flag == 0:
        return 0 if mark in (k, 0) else mark
    if flag == 1:
        return 0 if mark in (0, 1) else mark - 1
    return mark - 1 if mark >= flag else (flag - 1 if mark == flag - 1 else mark)


def _transport_dec1(mark: int, flag: int, k: int) -> int:
    # caller already excluded the collapsed angle itself
    if flag == 0:
        return mark
    return mark - 1 if mark >= flag else mark


def angle_collapse(tree: DecoratedTree, label: int, flag: int) -> DecoratedTree:
    """Collapse the angle between edge `flag` of lobe `label` and its
    cyclic predecessor, merging the two boundary points of the arc.

    flag 0 is the outgoing edge (the arc closing the lobe shrinks, so the
    last attached branch slides past the base point); flag j >= 1 is the
    j-th child edge.  Raises on leaf lobes and on the marked angle of a
    dec=1 vertex.
    """
    target = tree.white(label)
    k = len(target.children)
    if k == 0:
        raise TreeError(f"lobe {label} is a leaf; no angle edges")
    if not (0 <= flag <= k):
        raise TreeError(f"flag {flag} out of range at lobe {label}")
    if target.dec == 1 and collapsed_angle(target, flag) == target.mark:
        raise TreeError("collapsing the marked angle of a dec=1 vertex is degenerate")

    def new_mark(w: WhiteVertex) -> tuple[int, int]:
        if w.dec == 0:
            return 0, _transport_dec0(w.mark, flag, k)
        return 1, _transport_dec1(w.mark, flag, k)

    def rewrite_list(whites: tuple[WhiteVertex, ...]) -> tuple[WhiteVertex, ...]:
        out: list[WhiteVertex] = []
        for w in whites:
            if w.label == label:
                dec, mark = new_mark(w)
                if flag == 0:
                    merged_away = w.children[k - 1]
                    kept = w.children[: k - 1]
                    out.append(replace(w, dec=dec, mark=mark, children=kept))
                    out.extend(merged_away.children)
                elif flag == 1:
                    merged_away = w.children[0]
                    kept = w.children[1:]
                    out.extend(merged_away.children)
                    out.append(replace(w, dec=dec, mark=mark, children=kept))
                else:
                    i = flag
                    merged = BlackVertex(w.children[i - 2].children + w.children[i - 1].children)
                    kept = w.children[: i - 2] + (merged,) + w.children[i:]
                    out.append(replace(w, dec=dec, mark=mark, children=kept))
            else:
                new_blacks = tuple(BlackVertex(rewrite_list(b.children)) for b in w.children)
                out.append(replace(w, children=new_blacks))
        return tuple(out)

    result = DecoratedTree(lobes=rewrite_list(tree.lobes))
    validate(result)
    return result


def spine_flip(tree: DecoratedTree, label: int) -> ChainElement:
    """Boundary of the spine 1-cell at a dec=1 vertex.

    The two endpoint cells mark the flags bounding the marked angle:
    successor minus predecessor.  For a valence-one lobe the endpoints
    coincide and the flip is zero.
    """
    target = tree.white(label)
    if target.dec != 1:
        raise TreeError(f"lobe {label} has no spine to flip")
    n = len(tree.labels())
    if target.val == 1:
        return ChainElement.zero(n, tree_degree(tree) - 1)

    def with_mark(mark: int) -> DecoratedTree:
        def rewrite(whites):
            out = []
            for w in whites:
                if w.label == label:
                    out.append(replace(w, dec=0, mark=mark))
                else:
                    out.append(replace(w, children=tuple(BlackVertex(rewrite(b.children)) for b in w.children)))
            return tuple(out)

        return DecoratedTree(lobes=rewrite(tree.lobes))

    m = target.mark
    plus = with_mark((m + 1) % target.val)
    minus = with_mark(m)
    chain = ChainElement.from_tree(plus) - ChainElement.from_tree(minus)
    return chain


def boundary_tree(tree: DecoratedTree) -> ChainElement:
    """Boundary of a single cell."""
    n = validate(tree)
    deg = tree_degree(tree)
    if deg == 0:
        return ChainElement.zero(n, 0)
    total = ChainElement.zero(n, deg - 1)
    dec_ones = sorted(w.label for w in tree.whites() if w.dec == 1)
    for r, label in enumerate(dec_ones):
        total = total + spine_flip(tree, label).scale((-1) ** r)
    prefix = (-1) ** len(dec_ones)
    decs = {w.label: (w.dec, w.mark, w.val) for w in tree.whites()}
    for num, (label, flag) in enumerate(angle_edges(tree), start=1):
        dec, mark, val = decs[label]
        if dec == 1 and (flag - 1) % val == mark:
            continue
        face = angle_collapse(tree, label, flag)
        total = total + ChainElement.from_tree(face, prefix * (-1) ** (num - 1))
    return total


def boundary(chain: ChainElement) -> ChainElement:
    """Linear extension of the cell boundary; zero on degree 0."""
    if chain.degree == 0 or chain.is_zero():
        return ChainElement.zero(chain.n, chain.degree - 1)
    total = ChainElement.zero(chain.n, chain.degree - 1)
    for t, c in chain.items():
        total = total + boundary_tree(t).scale(c)
    return total
