"""Spine-decorated planar planted bipartite labelled trees.

A tree is a black base vertex (the planted root) carrying an ordered
sequence of white lobes; whites carry ordered black children, blacks
carry ordered white children, and white leaves are the only leaves.
Every white vertex has a label (a bijection onto 1..n) and a spine
decoration: dec=0 marks one of its flags, dec=1 marks one of its angles.

Flag index 0 at a white vertex is the outgoing flag; flags 1..k are the
edges to its black children in planar order.  Angle index a lies between
flag a and flag a+1 (mod val), so angle 0 opens just after the outgoing
flag and angle val-1 closes just before it.

Realizations make the cell structure explicit: a spine edge is inserted
into each marked angle, and free tails (future algebra inputs) are
inserted into angles of the realized vertices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

__all__ = [
    "WhiteVertex",
    "BlackVertex",
    "DecoratedTree",
    "TreeError",
    "ParseError",
    "parse",
    "serialize",
    "tree_degree",
    "enumerate_cells",
    "spineless_cells",
    "point_cell",
    "bv_cell",
    "product_tree",
    "cyclic_brace_tree",
    "RNode",
    "RealizedTree",
    "realize",
    "weight_sign",
    "perm_parity",
]


class TreeError(ValueError):
    pass


class ParseError(TreeError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


@dataclass(frozen=True)
class BlackVertex:
    children: tuple["WhiteVertex", ...]


@dataclass(frozen=True)
class WhiteVertex:
    label: int
    dec: int
    mark: int
    children: tuple[BlackVertex, ...]

    @property
    def val(self) -> int:
        return 1 + len(self.children)


@dataclass(frozen=True)
class DecoratedTree:
    lobes: tuple[WhiteVertex, ...]

    @property
    def n(self) -> int:
        return len(self.labels())

    def labels(self) -> list[int]:
        out: list[int] = []

        def walk_w(w: WhiteVertex):
            out.append(w.label)
            for b in w.children:
                for w2 in b.children:
                    walk_w(w2)

        for w in self.lobes:
            walk_w(w)
        return out

    def whites(self) -> list[WhiteVertex]:
        out: list[WhiteVertex] = []

        def walk_w(w: WhiteVertex):
            out.append(w)
            for b in w.children:
                for w2 in b.children:
                    walk_w(w2)

        for w in self.lobes:
            walk_w(w)
        return out

    def white(self, label: int) -> WhiteVertex:
        for w in self.whites():
            if w.label == label:
                return w
        raise TreeError(f"no white vertex labelled {label}")

    def __str__(self) -> str:
        return serialize(self)


def validate(tree: DecoratedTree, contiguous: bool = True) -> int:
    """Check all invariants; returns the label count n.

    With contiguous=False labels only need to be distinct, which lets
    intermediate stages of the operadic surgery use disjoint ranges.
    """
    labels = []

    def walk_w(w: WhiteVertex):
        labels.append(w.label)
        if w.dec not in (0, 1):
            raise TreeError(f"dec must be 0 or 1 at label {w.label}")
        if not (0 <= w.mark < w.val):
            raise TreeError(f"mark {w.mark} out of range at label {w.label} (val {w.val})")
        for b in w.children:
            if not b.children:
                raise TreeError("black vertex without white children (white-leaves-only)")
            for w2 in b.children:
                walk_w(w2)

    if not tree.lobes:
        raise TreeError("tree must carry at least one lobe")
    for w in tree.lobes:
        walk_w(w)
    n = len(labels)
    if contiguous:
        if sorted(labels) != list(range(1, n + 1)):
            raise TreeError(f"labels {sorted(labels)} are not a bijection onto 1..{n}")
    elif len(set(labels)) != n:
        raise TreeError("labels are not distinct")
    return n


def tree_degree(tree: DecoratedTree) -> int:
    """Cell dimension: white-edge count plus number of dec=1 vertices.

    A white edge runs from a white parent to a black child, so the count
    equals the number of non-root black vertices.
    """
    deg = 0
    for w in tree.whites():
        deg += len(w.children) + w.dec
    return deg


# ---------------------------------------------------------------------------
# grammar:  root( W* )   W := w<label;dec;mark>( B* )   B := b( W* )


def serialize(tree: DecoratedTree) -> str:
    parts = ["root("]

    def emit_w(w: WhiteVertex):
        parts.append(f"w<{w.label};{w.dec};{w.mark}>(")
        for b in w.children:
            parts.append("b(")
            for w2 in b.children:
                emit_w(w2)
            parts.append(")")
        parts.append(")")

    for w in tree.lobes:
        emit_w(w)
    parts.append(")")
    return "".join(parts)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def expect(self, token: str):
        self.skip_ws()
        if not self.text.startswith(token, self.pos):
            raise ParseError(f"expected {token!r}", self.pos)
        self.pos += len(token)

    def peek(self, token: str) -> bool:
        self.skip_ws()
        return self.text.startswith(token, self.pos)

    def integer(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise ParseError("expected an integer", start)
        return int(self.text[start:self.pos])

    def white(self) -> WhiteVertex:
        self.expect("w")
        self.expect("<")
        label = self.integer()
        self.expect(";")
        dec = self.integer()
        self.expect(";")
        mark = self.integer()
        self.expect(">")
        self.expect("(")
        blacks = []
        while self.peek("b"):
            blacks.append(self.black())
        self.expect(")")
        return WhiteVertex(label=label, dec=dec, mark=mark, children=tuple(blacks))

    def black(self) -> BlackVertex:
        self.expect("b")
        self.expect("(")
        whites = []
        while self.peek("w"):
            whites.append(self.white())
        self.expect(")")
        return BlackVertex(children=tuple(whites))

    def tree(self) -> DecoratedTree:
        self.expect("root")
        self.expect("(")
        whites = []
        while self.peek("w"):
            whites.append(self.white())
        self.expect(")")
        self.skip_ws()
        if self.pos != len(self.text):
            raise ParseError("trailing input", self.pos)
        return DecoratedTree(lobes=tuple(whites))


def parse(text: str) -> DecoratedTree:
    """Parse the tree grammar; raises ParseError with a position."""
    tree = _Parser(text).tree()
    validate(tree)
    return tree


# ---------------------------------------------------------------------------
# stock cells


def point_cell() -> DecoratedTree:
    """The one-lobe 0-cell (operad unit)."""
    return parse("root(w<1;0;0>())")


def bv_cell() -> DecoratedTree:
    """The one-lobe 1-cell with a spine; induces the BV operator."""
    return parse("root(w<1;1;0>())")


def product_tree(n: int) -> DecoratedTree:
    """n lobes at the base point; induces the n-fold cup product."""
    if n < 1:
        raise TreeError("product_tree needs n >= 1")
    return DecoratedTree(lobes=tuple(WhiteVertex(i + 1, 0, 0, ()) for i in range(n)))


def cyclic_brace_tree(n: int, i: int) -> DecoratedTree:
    """One dec=1 lobe (label 1) with n lobes g_1..g_n grafted around it.

    The marked angle i in 0..n selects where the spine sits relative to
    the grafted lobes; the induced operation is the cyclic brace.
    """
    if n < 1 or not (0 <= i <= n):
        raise TreeError("cyclic_brace_tree needs n >= 1 and 0 <= i <= n")
    blacks = tuple(BlackVertex((WhiteVertex(l + 2, 0, 0, ()),)) for l in range(n))
    return DecoratedTree(lobes=(WhiteVertex(1, 1, i, blacks),))


# ---------------------------------------------------------------------------
# enumeration

# shapes are nested tuples: a white shape is a tuple of black shapes,
# a black shape is a nonempty tuple of white shapes


@lru_cache(maxsize=None)
def _white_shapes(nw: int, max_blacks: int) -> tuple:
    if nw < 1:
        return ()
    out = []
    for seq in _black_sequences(nw - 1, max_blacks):
        out.append(seq)
    return tuple(out)


@lru_cache(maxsize=None)
def _black_sequences(m: int, max_blacks: int) -> tuple:
    """Ordered sequences of black shapes holding m whites in total."""
    if m == 0:
        return ((),)
    out = []
    if max_blacks <= 0:
        return ()
    for first in range(1, m + 1):
        for bshape in _black_shape(first, max_blacks - 1):
            for rest in _black_sequences(m - first, max_blacks - 1 - _count_blacks_b(bshape)):
                out.append((bshape,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def _black_shape(m: int, max_blacks: int) -> tuple:
    """Black shapes (nonempty white sequences) holding m whites."""
    out = []
    for split in _compositions(m):
        for combo in itertools.product(*[_white_shapes(p, max_blacks) for p in split]):
            shape = tuple(combo)
            if _count_blacks_seq(shape) <= max_blacks:
                out.append(shape)
    return tuple(out)


@lru_cache(maxsize=None)
def _compositions(m: int) -> tuple:
    if m == 0:
        return ((),)
    out = []
    for first in range(1, m + 1):
        for rest in _compositions(m - first):
            out.append((first,) + rest)
    return tuple(out)


def _count_blacks_w(wshape) -> int:
    return sum(1 + _count_blacks_b(b) for b in wshape)


def _count_blacks_b(bshape) -> int:
    return sum(_count_blacks_w(w) for w in bshape)


def _count_blacks_seq(shape) -> int:
    return sum(_count_blacks_w(w) for w in shape)


def _root_shapes(n: int, max_deg: int):
    """All base shapes with n whites and at most max_deg non-root blacks."""
    out = []
    for split in _compositions(n):
        if not split:
            continue
        for combo in itertools.product(*[_white_shapes(p, max_deg) for p in split]):
            if _count_blacks_seq(combo) <= max_deg:
                out.append(tuple(combo))
    return out


def _build_labelled(shape, labels: list[int], decorations) -> DecoratedTree:
    it_label = iter(labels)
    it_dec = iter(decorations)

    def build_w(wshape) -> WhiteVertex:
        label = next(it_label)
        dec, mark = next(it_dec)
        blacks = tuple(build_b(b) for b in wshape)
        return WhiteVertex(label=label, dec=dec, mark=mark, children=blacks)

    def build_b(bshape) -> BlackVertex:
        return BlackVertex(children=tuple(build_w(w) for w in bshape))

    return DecoratedTree(lobes=tuple(build_w(w) for w in shape))


def _white_vals(shape) -> list[int]:
    """Valences of the whites of a base shape, in construction order."""
    vals: list[int] = []

    def walk_w(wshape):
        vals.append(1 + len(wshape))
        for b in wshape:
            for w in b:
                walk_w(w)

    for w in shape:
        walk_w(w)
    return vals


def enumerate_cells(n: int, max_degree: int) -> list[DecoratedTree]:
    """All decorated trees with labels 1..n and degree <= max_degree.

    Deterministic order: by degree, then by serialized form.
    """
    if n < 1 or max_degree < 0:
        return []
    out: list[DecoratedTree] = []
    for shape in _root_shapes(n, max_degree):
        shape_deg = _count_blacks_seq(shape)
        budget = max_degree - shape_deg
        if budget < 0:
            continue
        vals = _white_vals(shape)
        per_white_options = []
        for v in vals:
            opts = [(0, m) for m in range(v)] + [(1, m) for m in range(v)]
            per_white_options.append(opts)
        for labels in itertools.permutations(range(1, n + 1)):
            for decorations in itertools.product(*per_white_options):
                if sum(d for d, _ in decorations) > budget:
                    continue
                out.append(_build_labelled(shape, list(labels), decorations))
    out.sort(key=lambda t: (tree_degree(t), serialize(t)))
    return out


def spineless_cells(n: int, max_degree: int) -> list[DecoratedTree]:
    """The dec=0, mark=0 sub-enumeration (cells of the spineless complex)."""
    return [
        t
        for t in enumerate_cells(n, max_degree)
        if all(w.dec == 0 and w.mark == 0 for w in t.whites())
    ]


# ---------------------------------------------------------------------------
# realizations

OUT = "out"  # marker for the outgoing flag in mark references


class RNode:
    """Mutable node of a realized tree.

    kind is one of "base", "black", "white", "tail", "spine".  For whites,
    children holds blacks, tails and spines interleaved in planar order and
    mark_ref names the marked flag for dec=0 vertices (OUT or a black
    child node).  Tails carry a tag recording their insertion identity.
    """

    __slots__ = ("kind", "label", "dec", "children", "mark_ref", "tag")

    def __init__(self, kind, label=None, dec=0, children=None, mark_ref=None, tag=None):
        self.kind = kind
        self.label = label
        self.dec = dec
        self.children = children if children is not None else []
        self.mark_ref = mark_ref
        self.tag = tag

    def clone(self, memo=None) -> "RNode":
        if memo is None:
            memo = {}
        node = RNode(self.kind, self.label, self.dec, [], None, self.tag)
        memo[id(self)] = node
        node.children = [c.clone(memo) for c in self.children]
        if self.mark_ref is OUT or self.mark_ref is None:
            node.mark_ref = self.mark_ref
        else:
            node.mark_ref = memo[id(self.mark_ref)]
        return node

    def __repr__(self):
        return f"RNode({self.kind}, label={self.label})"


class RealizedTree:
    """A realization: base vertex, spine edges in marked angles, tails."""

    def __init__(self, base: RNode):
        self.base = base

    def clone(self) -> "RealizedTree":
        return RealizedTree(self.base.clone())

    def whites(self) -> list[RNode]:
        out = []

        def walk(node):
            for c in node.children:
                if c.kind == "white":
                    out.append(c)
                    walk(c)
                elif c.kind == "black":
                    walk(c)

        walk(self.base)
        return out

    def white(self, label: int) -> RNode:
        for w in self.whites():
            if w.label == label:
                return w
        raise TreeError(f"no white vertex labelled {label}")

    def parents(self) -> dict[int, RNode]:
        par: dict[int, RNode] = {}

        def walk(node):
            for c in node.children:
                par[id(c)] = node
                walk(c)

        walk(self.base)
        return par

    def tails(self) -> list[RNode]:
        """Free tails in planar order (the correlator input slots)."""
        out = []

        def walk(node):
            for c in node.children:
                if c.kind == "tail":
                    out.append(c)
                else:
                    walk(c)

        walk(self.base)
        return out

    def spine_flags(self) -> list[RNode]:
        out = []

        def walk(node):
            for c in node.children:
                if c.kind == "spine":
                    out.append(c)
                else:
                    walk(c)

        walk(self.base)
        return out

    def internal_edges(self) -> list[tuple[RNode, RNode]]:
        """(parent, child) pairs excluding root, tail and spine edges."""
        out = []

        def walk(node):
            for c in node.children:
                if c.kind in ("white", "black"):
                    out.append((node, c))
                    walk(c)

        walk(self.base)
        return out

    def flag_cycle(self, w: RNode) -> list:
        """Flags of a white vertex in cyclic order: OUT then children."""
        return [OUT] + list(w.children)

    def prec_prime(self, w: RNode) -> list:
        """Flags reordered to start at the spine (dec=1) or marked flag."""
        cyc = self.flag_cycle(w)
        if w.dec == 1:
            start = next(i for i, c in enumerate(cyc) if c is not OUT and c.kind == "spine")
        else:
            if w.mark_ref is OUT:
                start = 0
            else:
                start = next(i for i, c in enumerate(cyc) if c is w.mark_ref)
        return cyc[start:] + cyc[:start]

    def core(self) -> DecoratedTree | None:
        """Strip spine edges back to decorations; None when degenerate.

        A black vertex without white children is a point of valence two in
        the underlying cactus.  It survives only as a spine position (its
        lobe's marked flag points at it, turning dec to 1); otherwise the
        configuration lies in a lower-dimensional cell.
        """
        degenerate = False

        def build_w(w: RNode) -> WhiteVertex:
            nonlocal degenerate
            dec, mark = w.dec, 0
            core_children: list[RNode] = []
            spine_angle = None
            conv_angle = None
            for c in w.children:
                if c.kind == "spine":
                    spine_angle = len(core_children)
                elif c.kind == "tail":
                    raise TreeError("core() requires a tail-free realization")
                elif c.kind == "black":
                    if not c.children:
                        if w.dec == 0 and w.mark_ref is c:
                            conv_angle = len(core_children)
                        else:
                            degenerate = True
                    else:
                        core_children.append(c)
            if w.dec == 1:
                if spine_angle is None:
                    raise TreeError("dec=1 vertex without spine edge")
                mark = spine_angle
            elif conv_angle is not None:
                dec, mark = 1, conv_angle
            else:
                if w.mark_ref is OUT:
                    mark = 0
                else:
                    hit = next((k for k, c in enumerate(core_children) if c is w.mark_ref), None)
                    if hit is None:
                        raise TreeError("dangling mark reference")
                    mark = hit + 1
            blacks = tuple(BlackVertex(tuple(build_w(x) for x in c.children)) for c in core_children)
            return WhiteVertex(label=w.label, dec=dec, mark=mark, children=blacks)

        lobes = tuple(build_w(w) for w in self.base.children)
        if degenerate:
            return None
        tree = DecoratedTree(lobes=lobes)
        validate(tree, contiguous=False)
        return tree

    def __repr__(self):
        return f"RealizedTree({_debug_string(self.base)})"


def _debug_string(node: RNode) -> str:
    if node.kind == "tail":
        return f"T{node.tag}"
    if node.kind == "spine":
        return "S"
    inner = "".join(_debug_string(c) for c in node.children)
    if node.kind == "white":
        return f"w{node.label}[{inner}]"
    return f"{'root' if node.kind == 'base' else 'b'}({inner})"


def _realize_white(w: WhiteVertex) -> RNode:
    node = RNode("white", label=w.label, dec=w.dec)
    blacks = [_realize_black(b) for b in w.children]
    children: list[RNode] = list(blacks)
    if w.dec == 1:
        children.insert(w.mark, RNode("spine"))
        node.mark_ref = None
    else:
        node.mark_ref = OUT if w.mark == 0 else blacks[w.mark - 1]
    node.children = children
    return node


def _realize_black(b: BlackVertex) -> RNode:
    return RNode("black", children=[_realize_white(w) for w in b.children])


def realize(tree: DecoratedTree, tail_plan: dict[int, tuple[int, ...]] | None = None) -> RealizedTree:
    """Insert spine edges and free tails.

    tail_plan maps a white label to a sequence of angle indices of the
    *realized* vertex (spine edge already counted as a flag).  Tails
    inserted into the same angle land in plan order; their tags record
    the plan sequence.
    """
    validate(tree, contiguous=False)
    base = RNode("base", children=[_realize_white(w) for w in tree.lobes])
    r = RealizedTree(base)
    if tail_plan:
        for label, angles in tail_plan.items():
            w = r.white(label)
            val = 1 + len(w.children)
            for a in angles:
                if not (0 <= a < val):
                    raise TreeError(f"angle {a} out of range at label {label} (valence {val})")
            buckets: dict[int, list[RNode]] = {}
            for seq, a in enumerate(angles):
                buckets.setdefault(a, []).append(RNode("tail", tag=seq))
            new_children: list[RNode] = []
            for gap in range(val):
                new_children.extend(buckets.get(gap, []))
                if gap < len(w.children):
                    new_children.append(w.children[gap])
            w.children = new_children
    return r


def marked_flag_index(w: RNode) -> int:
    """Index of the spine (dec=1) or marked flag in the flag cycle."""
    if w.dec == 1:
        return next(k for k, c in enumerate(w.children) if c.kind == "spine") + 1
    if w.mark_ref is OUT:
        return 0
    return next(k for k, c in enumerate(w.children) if c is w.mark_ref) + 1


def ordered_tail_plans(w: RNode, n_tails: int):
    """Tail placements at one realized vertex, as angle sequences whose
    order (hence the tags) follows the spine-adjusted flag order."""
    val = 1 + len(w.children)
    s = marked_flag_index(w)
    for combo in itertools.combinations_with_replacement(range(val), n_tails):
        yield tuple(sorted(combo, key=lambda a: (a - s) % val))


def canonical_tags(r: RealizedTree) -> int:
    """Retag every vertex's tails in the spine-adjusted order; returns the
    orientation change this induces on weight_sign."""
    parity = 1
    for w in r.whites():
        tails_prec = [c for c in r.prec_prime(w) if c is not OUT and c.kind == "tail"]
        if len(tails_prec) < 2:
            for k, t in enumerate(tails_prec):
                t.tag = k
            continue
        old_order = sorted(range(len(tails_prec)), key=lambda k: tails_prec[k].tag)
        perm = [0] * len(tails_prec)
        for newpos, oldpos in enumerate(old_order):
            perm[oldpos] = newpos
        parity *= perm_parity(perm)
        for k, t in enumerate(tails_prec):
            t.tag = k
    return parity


def perm_parity(perm: list[int]) -> int:
    """Sign of a permutation given as the image list."""
    seen = [False] * len(perm)
    sign = 1
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, cyc = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            cyc += 1
        if cyc % 2 == 0:
            sign = -sign
    return sign


def network_sign(r: RealizedTree, arities: dict[int, int], rho=None) -> int:
    """Orientation sign of one realization with cochain factors included.

    Three Koszul contributions on top of the weight-edge permutation:
    the cochains move from label order to traversal order (degree =
    arity), each spine crosses the cochains of earlier lobes, and a
    dec=0 lobe read from a marked flag other than the outgoing one
    rotates its cochain's legs.
    """
    sign = weight_sign(r)
    whites = r.whites()
    order = [w.label for w in whites]
    for i in range(len(order)):
        for j in range(i + 1, len(order)):
            if order[i] > order[j] and arities[order[i]] % 2 and arities[order[j]] % 2:
                sign = -sign
    before = 0
    for w in whites:
        a = arities[w.label]
        if w.dec == 1:
            if before % 2:
                sign = -sign
        elif w.mark_ref is not OUT:
            # core flag index of the mark (tail insertions do not move it)
            mark = 1
            for c in w.children:
                if c is w.mark_ref:
                    break
                if c.kind == "black":
                    mark += 1
            amount = rho(mark) if rho is not None else mark
            if (a * amount) % 2:
                sign = -sign
        before += a
    return sign


def weight_sign(r: RealizedTree) -> int:
    """Orientation sign of a realization.

    Compares the planar order of the weight edges (root edge, white
    edges, tails, spines) against the blocked per-vertex order: root
    edge first, then at each white vertex in traversal order its white
    edges in the spine-adjusted order, its tails by tag, and its spine.
    """
    source: list[int] = []
    target_whites: list[RNode] = []

    def walk(node: RNode):
        for c in node.children:
            if c.kind == "white":
                target_whites.append(c)
                walk(c)
            elif c.kind == "black":
                source.append(id(c))
                walk(c)
            elif c.kind == "tail":
                source.append(id(c))
            elif c.kind == "spine":
                source.append(id(c))

    # the root edge heads both lists and never moves; omit it
    for w in r.base.children:
        target_whites.append(w)
        walk(w)

    target: list[int] = []
    for w in target_whites:
        order = r.prec_prime(w)
        ew = [c for c in order if c is not OUT and c.kind == "black"]
        tails = sorted((c for c in w.children if c.kind == "tail"), key=lambda c: c.tag)
        spine = [c for c in w.children if c.kind == "spine"]
        target.extend(id(c) for c in ew + tails + spine)

    pos = {tok: i for i, tok in enumerate(source)}
    perm = [pos[tok] for tok in target]
    return perm_parity(perm)
