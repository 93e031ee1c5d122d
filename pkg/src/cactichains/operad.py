"""Chain-level operad structure on decorated trees.

compose(t, i, t') replaces lobe i of t by the whole of t': the lobes
and branches hanging off lobe i re-attach along the perimeter of t' in
all ways compatible with the cyclic order, anchored by gluing the spine
(dec=1) or marked flag (dec=0) of lobe i to the base point of t'.  Each
configuration is produced by substituting a tail-decorated realization
of t' into a realization of t (foliage_substitute below); configurations
whose base point would vanish as an unmarked valence-two point lie in a
lower-dimensional cell and are dropped.

The sign of a configuration is determined by orientation bookkeeping on
realizations: sign = weight_sign(r_t) * weight_sign(r_t') *
weight_sign(composite).  This is the factorization that makes the
foliage operator multiplicative over composition, and it is pinned by
the associativity, unit, equivariance and chain-map checks.
"""

from __future__ import annotations

from itertools import product

from .chains import ChainElement, boundary  # noqa: F401  (re-exported for CLI convenience)
from .trees import (
    OUT,
    BlackVertex,
    DecoratedTree,
    RealizedTree,
    RNode,
    TreeError,
    WhiteVertex,
    ordered_tail_plans,
    realize,
    serialize,
    tree_degree,
    validate,
    weight_sign,
)

__all__ = [
    "foliage_substitute",
    "compose",
    "compose_chain",
    "relabel",
    "gamma",
    "CompositionTable",
]


def relabel(tree: DecoratedTree, sigma: dict[int, int] | list[int]) -> DecoratedTree:
    """Apply a label bijection; shape, decorations and marks unchanged."""
    n = validate(tree, contiguous=False)
    labels = tree.labels()
    if isinstance(sigma, (list, tuple)):
        if len(sigma) != n:
            raise TreeError("permutation size mismatch")
        mapping = {i + 1: sigma[i] for i in range(n)}
    else:
        mapping = dict(sigma)
    if set(mapping.keys()) < set(labels) or len(set(mapping[l] for l in labels)) != n:
        raise TreeError("not a bijection on the label set")
    mapping = {l: mapping[l] for l in labels}

    def walk(w: WhiteVertex) -> WhiteVertex:
        return WhiteVertex(
            label=mapping[w.label],
            dec=w.dec,
            mark=w.mark,
            children=tuple(BlackVertex(tuple(walk(x) for x in b.children)) for b in w.children),
        )

    return DecoratedTree(lobes=tuple(walk(w) for w in tree.lobes))


def _reroot(rp: RealizedTree, out_tail: RNode) -> RNode:
    """Reorient rp so that the lobe holding out_tail points upward there.

    The tail is removed (its position becomes the new outgoing flag) and
    the old path to the base is reversed; the base vertex turns into an
    ordinary black vertex with the root flag contracted away.
    """
    parents = rp.parents()

    def down(node: RNode, from_child: RNode) -> RNode:
        ch = node.children
        j = next(k for k, c in enumerate(ch) if c is from_child)
        after, before = ch[j + 1:], ch[:j]
        if node.kind == "base":
            return RNode("black", children=after + before)
        dn = down(parents[id(node)], node)
        if node.kind == "white":
            if node.mark_ref is OUT:
                node.mark_ref = dn
            elif node.mark_ref is from_child:
                node.mark_ref = OUT
        node.children = after + [dn] + before
        return node

    u = parents[id(out_tail)]
    j = next(k for k, c in enumerate(u.children) if c is out_tail)
    after, before = u.children[j + 1:], u.children[:j]
    dn = down(parents[id(u)], u)
    if u.mark_ref is OUT:
        u.mark_ref = dn
    u.children = after + [dn] + before
    return u


def _respine(r: RealizedTree) -> RealizedTree:
    """Turn marked black leaves back into spine edges.

    After gluing, a lobe whose marked flag points at a childless black
    vertex carries its spine at a point of valence two: the same cell
    coordinate as a spine edge in that angle.  Rewriting it keeps weight
    signs comparable across realizations of the same cell.
    """
    for w in r.whites():
        if w.dec == 0 and w.mark_ref is not OUT and w.mark_ref.kind == "black" and not w.mark_ref.children:
            pos = next(k for k, c in enumerate(w.children) if c is w.mark_ref)
            w.children[pos] = RNode("spine")
            w.dec = 1
            w.mark_ref = None
    return r


def foliage_substitute(r: RealizedTree, slot: int, rp: RealizedTree) -> RealizedTree | None:
    """Substitute a tail-decorated realization into lobe `slot` of r.

    The root edge of rp is glued to the spine edge (dec=1) or marked
    flag (dec=0) of the lobe; the remaining flags of the lobe, in the
    spine-adjusted order, replace the tails of rp in planar order.
    Returns None when the tail counts do not match (the zero element).
    """
    r = r.clone()
    rp = rp.clone()
    v = r.white(slot)
    parents = r.parents()
    P = parents[id(v)]
    q = next(k for k, c in enumerate(P.children) if c is v)
    order = r.prec_prime(v)
    tails_p = rp.tails()
    if len(tails_p) != len(order) - 1:
        return None
    slot0 = order[0]

    rp_parents = rp.parents()
    out_tail = None
    for flag, tail in zip(order[1:], tails_p):
        if flag is OUT:
            out_tail = tail
        else:
            holder = rp_parents[id(tail)]
            pos = next(k for k, c in enumerate(holder.children) if c is tail)
            holder.children[pos] = flag

    if v.dec == 0 and slot0 is not OUT:
        # the marked edge is contracted onto the root edge: the marked
        # branch point merges with the base of rp, its lobes first
        rp.base.children = slot0.children + rp.base.children

    if v.dec == 0 and slot0 is OUT:
        P.children[q:q + 1] = rp.base.children
    else:
        if out_tail is None:
            raise TreeError("missing outgoing flag in substitution")
        P.children[q] = _reroot(rp, out_tail)
    return _respine(RealizedTree(r.base))


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


class CompositionTable:
    """Idempotent memo for compose results, keyed by serialized forms."""

    def __init__(self):
        self._memo: dict[tuple[str, int, str], ChainElement] = {}

    def get(self, t: DecoratedTree, slot: int, tp: DecoratedTree) -> ChainElement | None:
        return self._memo.get((serialize(t), slot, serialize(tp)))

    def put(self, t: DecoratedTree, slot: int, tp: DecoratedTree, value: ChainElement):
        self._memo.setdefault((serialize(t), slot, serialize(tp)), value)

    def __len__(self):
        return len(self._memo)


_default_table = CompositionTable()


def compose(t: DecoratedTree, slot: int, tp: DecoratedTree,
            table: CompositionTable | None = _default_table) -> ChainElement:
    """Operadic composition of cells; a signed sum of composite cells.

    Labels of tp occupy slot..slot+m-1; the remaining labels of t are
    renumbered preserving their order.
    """
    n = validate(t)
    m = validate(tp)
    if not (1 <= slot <= n):
        raise TreeError(f"slot {slot} out of range for an {n}-labelled tree")
    if table is not None:
        hit = table.get(t, slot, tp)
        if hit is not None:
            return hit

    deg_total = tree_degree(t) + tree_degree(tp)
    # work with disjoint label ranges; final renumbering below
    tp_shifted = relabel(tp, {j: j + n for j in range(1, m + 1)})
    final_map: dict[int, int] = {}
    for j in range(1, n + 1):
        if j < slot:
            final_map[j] = j
        elif j > slot:
            final_map[j] = j + m - 1
    for j in range(1, m + 1):
        final_map[j + n] = slot - 1 + j

    r_t = realize(t)
    v = r_t.white(slot)
    needed = len(r_t.prec_prime(v)) - 1
    sign_t = weight_sign(r_t)

    lobes = realize(tp_shifted).whites()
    terms: dict[DecoratedTree, int] = {}
    for split in _compositions(needed, len(lobes)):
        per = [list(ordered_tail_plans(w, c)) for w, c in zip(lobes, split)]
        for placement in product(*per):
            plan = {w.label: angles for w, angles in zip(lobes, placement) if angles}
            r_tp = realize(tp_shifted, plan)
            comp = foliage_substitute(r_t, slot, r_tp)
            core = comp.core()
            if core is None:
                continue
            if tree_degree(core) != deg_total:
                raise TreeError("composition produced a cell of unexpected dimension")
            sgn = sign_t * weight_sign(r_tp) * weight_sign(comp)
            out = relabel(core, {lab: final_map[lab] for lab in core.labels()})
            terms[out] = terms.get(out, 0) + sgn
    result = ChainElement(n + m - 1, deg_total, terms)
    if table is not None:
        table.put(t, slot, tp, result)
    return result


def compose_chain(chain: ChainElement, slot: int, tp: DecoratedTree | ChainElement,
                  table: CompositionTable | None = _default_table) -> ChainElement:
    """Bilinear extension of compose."""
    if isinstance(tp, DecoratedTree):
        tp = ChainElement.from_tree(tp)
    n = chain.n + tp.n - 1
    deg = chain.degree + tp.degree
    total = ChainElement.zero(n, deg)
    for a, ca in chain.items():
        for b, cb in tp.items():
            total = total + compose(a, slot, b, table).scale(ca * cb)
    return total


def gamma(t: DecoratedTree, args: list[DecoratedTree],
          table: CompositionTable | None = _default_table) -> ChainElement:
    """Full composition: iterated compose from the highest slot down."""
    n = validate(t)
    if len(args) != n:
        raise TreeError(f"gamma needs {n} arguments, got {len(args)}")
    chain = ChainElement.from_tree(t)
    for s in range(n, 0, -1):
        chain = compose_chain(chain, s, args[s - 1], table)
    return chain
