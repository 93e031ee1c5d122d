"""Operadic correlation functions: trees acting on Hochschild cochains.

A realized tree is contracted as a tensor network: every internal edge
carries the Casimir element, every white vertex the dual tensor of its
cochain read in the spine-adjusted flag order, and every internal black
vertex the functional eta(1, ordered product).  The root flag carries
the distinguished input a_0, free tails carry a_1..a_N in planar order,
and spine flags carry the unit.

The action of a cell on cochains sums the network over all tail
placements; the tail count of each lobe is pinned by the arity of its
cochain, which keeps the sum finite.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

from .chains import ChainElement
from .frobenius import FrobeniusAlgebra
from .hochschild import Cochain, DualTensor, dualize, undualize, zero_cochain
from .linalg import F0, F1
from .trees import (
    OUT,
    DecoratedTree,
    RealizedTree,
    TreeError,
    network_sign,
    ordered_tail_plans,
    realize,
    tree_degree,
    weight_sign,
)

__all__ = [
    "CorrelatorAssignment",
    "correlate",
    "act",
    "act_chain",
    "realization_dual_tensor",
    "tail_counts",
]

# rotation weight for a dec=0 mark at core flag index m (calibration knob)
SIGN_RHO = None


class _Network:
    """Contraction state for one realization."""

    def __init__(self, r: RealizedTree, cochains: dict[int, Cochain], algebra: FrobeniusAlgebra):
        self.r = r
        self.cochains = cochains
        self.A = algebra
        self.dim = algebra.dim
        self._eta1_cache: dict[tuple[int, ...], Fraction] = {}
        self.tail_order = {id(t): k for k, t in enumerate(r.tails())}

    def eta1(self, indices: tuple[int, ...]) -> Fraction:
        """eta(1, e_{i_1} e_{i_2} ...) in the given order."""
        if indices in self._eta1_cache:
            return self._eta1_cache[indices]
        vec = self.A.basis_vector(indices[0])
        for i in indices[1:]:
            vec = self.A.multiply(vec, self.A.basis_vector(i))
        val = self.A.pair_unit(vec)
        self._eta1_cache[indices] = val
        return val

    # tensors are (tail_nodes, list over leg index of dict{tail index tuple: value})

    def _outer(self, parts):
        """Combine (tails, dict) factors by outer product."""
        tails: list = []
        combo: dict[tuple[int, ...], Fraction] = {(): F1}
        for part_tails, part_map in parts:
            new: dict[tuple[int, ...], Fraction] = {}
            for k1, v1 in combo.items():
                for k2, v2 in part_map.items():
                    new[k1 + k2] = new.get(k1 + k2, F0) + v1 * v2
            tails = tails + part_tails
            combo = {k: v for k, v in new.items() if v}
        return tails, combo

    def _apply_casimir(self, raw):
        """Turn the exposed leg q into the parent-side leg p via C[p][q]."""
        C = self.A.casimir()
        d = self.dim
        out = []
        for p in range(d):
            acc: dict[tuple[int, ...], Fraction] = {}
            for q in range(d):
                c = C[p][q]
                if not c:
                    continue
                for k, v in raw[q].items():
                    acc[k] = acc.get(k, F0) + c * v
            out.append({k: v for k, v in acc.items() if v})
        return out

    def black_tensor(self, b) -> tuple[list, list[dict]]:
        d = self.dim
        children = [self.white_tensor(w) for w in b.children]
        tails: list = []
        raw = [dict() for _ in range(d)]
        for assignment in product(range(d), repeat=len(children)):
            parts = []
            dead = False
            for (ct, cmap), z in zip(children, assignment):
                if not cmap[z]:
                    dead = True
                    break
                parts.append((ct, cmap[z]))
            if dead:
                continue
            tails, combined = self._outer(parts)
            for q in range(d):
                coeff = self.eta1((q,) + assignment)
                if not coeff:
                    continue
                target = raw[q]
                for k, v in combined.items():
                    target[k] = target.get(k, F0) + coeff * v
        if not children:
            tails = []
        return tails, self._apply_casimir(raw)

    def white_tensor(self, w) -> tuple[list, list[dict]]:
        d = self.dim
        f = self.cochains[w.label]
        ft = dualize(f)
        order = self.r.prec_prime(w)
        if len(order) != f.arity + 1:
            raise TreeError(
                f"lobe {w.label}: realized valence {len(order)} does not match cochain arity {f.arity}"
            )
        legs = []
        for item in order:
            if item is OUT:
                legs.append(("up", None))
            elif item.kind == "spine":
                legs.append(("unit", None))
            elif item.kind == "tail":
                legs.append(("tail", item))
            else:
                legs.append(("child", self.black_tensor(item)))
        raw = [dict() for _ in range(d)]
        tails_final: list = []
        for idx in product(range(d), repeat=len(legs)):
            coeff = ft.value(idx)
            if not coeff:
                continue
            up_index = None
            parts = []
            dead = False
            for (kind, payload), i in zip(legs, idx):
                if kind == "up":
                    up_index = i
                elif kind == "unit":
                    u = self.A.unit[i]
                    if not u:
                        dead = True
                        break
                    coeff = coeff * u
                elif kind == "tail":
                    parts.append(([payload], {(i,): F1}))
                else:
                    ct, cmaps = payload
                    if not cmaps[i]:
                        dead = True
                        break
                    parts.append((ct, cmaps[i]))
            if dead or up_index is None:
                continue
            tails_final, combined = self._outer(parts)
            target = raw[up_index]
            for k, v in combined.items():
                target[k] = target.get(k, F0) + coeff * v
        return tails_final, self._apply_casimir(raw)

    def base_tensor(self) -> tuple[list, list[dict]]:
        """Dual tensor legs: a_0 index, then subtree tails (planar order)."""
        d = self.dim
        children = [self.white_tensor(w) for w in self.r.base.children]
        out = [dict() for _ in range(d)]
        tails: list = []
        for assignment in product(range(d), repeat=len(children)):
            parts = []
            dead = False
            for (ct, cmap), z in zip(children, assignment):
                if not cmap[z]:
                    dead = True
                    break
                parts.append((ct, cmap[z]))
            if dead:
                continue
            tails, combined = self._outer(parts)
            for i0 in range(d):
                coeff = self.eta1((i0,) + assignment)
                if not coeff:
                    continue
                target = out[i0]
                for k, v in combined.items():
                    target[k] = target.get(k, F0) + coeff * v
        return tails, out

    def dual_tensor_data(self) -> tuple:
        """Flat data of the (N+1)-tensor with tails in planar order."""
        tails, maps = self.base_tensor()
        n_tails = len(self.tail_order)
        # permutation sending contraction axis -> planar axis
        axis_of = [self.tail_order[id(t)] for t in tails]
        d = self.dim
        size = d ** (n_tails + 1)
        data = [F0] * size
        for i0 in range(d):
            for key, val in maps[i0].items():
                planar = [0] * n_tails
                for axis, i in zip(axis_of, key):
                    planar[axis] = i
                pos = i0
                for i in planar:
                    pos = pos * d + i
                data[pos] = val
        return tuple(data)


def realization_dual_tensor(r: RealizedTree, cochains: dict[int, Cochain], algebra: FrobeniusAlgebra) -> DualTensor:
    """Contract one realization; no orientation sign applied."""
    net = _Network(r, cochains, algebra)
    return DualTensor(algebra, len(net.tail_order), net.dual_tensor_data())


class CorrelatorAssignment:
    """A realized tree with cochains on its lobes and boundary inputs."""

    def __init__(self, realized: RealizedTree, cochains: dict[int, Cochain], algebra: FrobeniusAlgebra,
                 a0, tail_inputs):
        self.realized = realized
        self.cochains = cochains
        self.algebra = algebra
        self.a0 = tuple(Fraction(x) for x in a0)
        self.tail_inputs = [tuple(Fraction(x) for x in v) for v in tail_inputs]
        for f in cochains.values():
            if f.algebra != algebra:
                raise ValueError("cochain algebra does not match the assignment algebra")

    def arity_consistent(self) -> bool:
        for w in self.realized.whites():
            f = self.cochains.get(w.label)
            if f is None or len(w.children) != f.arity:
                return False
        return len(self.tail_inputs) == len(self.realized.tails())


def correlate(assignment: CorrelatorAssignment) -> Fraction:
    """Evaluate one realization on explicit inputs.

    Returns 0 on arity mismatch; the value carries the orientation sign
    of the realization.
    """
    if not assignment.arity_consistent():
        return F0
    A = assignment.algebra
    d = A.dim
    tensor = realization_dual_tensor(assignment.realized, assignment.cochains, A)
    n = len(assignment.tail_inputs)
    total = F0
    for idx in product(range(d), repeat=n + 1):
        coeff = assignment.a0[idx[0]]
        if not coeff:
            continue
        for slot, i in enumerate(idx[1:]):
            coeff *= assignment.tail_inputs[slot][i]
            if not coeff:
                break
        if not coeff:
            continue
        v = tensor.value(idx)
        if v:
            total += coeff * v
    return weight_sign(assignment.realized) * total


def tail_counts(tree: DecoratedTree, cochains: dict[int, Cochain]) -> dict[int, int] | None:
    """Pinned tail count per label, or None when some count is negative."""
    counts = {}
    for w in tree.whites():
        f = cochains[w.label]
        c = f.arity - len(w.children) - w.dec
        if c < 0:
            return None
        counts[w.label] = c
    return counts


def act(tree: DecoratedTree, cochains: dict[int, Cochain] | list[Cochain], algebra: FrobeniusAlgebra | None = None) -> Cochain:
    """The operation of a cell on cochains (one per label)."""
    if isinstance(cochains, (list, tuple)):
        cochains = {i + 1: f for i, f in enumerate(cochains)}
    if algebra is None:
        algebra = next(iter(cochains.values())).algebra
    n_arities = sum(f.arity for f in cochains.values())
    target_arity = n_arities - tree_degree(tree)
    counts = tail_counts(tree, cochains)
    if counts is None or target_arity < 0:
        return zero_cochain(algebra, max(target_arity, 0))
    d = algebra.dim
    base = realize(tree)  # spine edges only; cloned per placement
    whites = base.whites()
    arities = {lab: f.arity for lab, f in cochains.items()}
    per_vertex = []
    for w in whites:
        per_vertex.append(list(ordered_tail_plans(w, counts[w.label])))
    total = [F0] * (d ** (target_arity + 1))
    for placement in product(*per_vertex):
        plan = {w.label: angles for w, angles in zip(whites, placement) if angles}
        r = realize(tree, plan)
        sign = network_sign(r, arities, SIGN_RHO)
        data = _Network(r, cochains, algebra).dual_tensor_data()
        if sign == 1:
            total = [a + b for a, b in zip(total, data)]
        else:
            total = [a - b for a, b in zip(total, data)]
    return undualize(DualTensor(algebra, target_arity, tuple(total)))


def act_chain(chain: ChainElement, cochains: dict[int, Cochain] | list[Cochain], algebra: FrobeniusAlgebra | None = None) -> Cochain:
    """Linear extension of act over a chain's integer coefficients."""
    if isinstance(cochains, (list, tuple)):
        cochains = {i + 1: f for i, f in enumerate(cochains)}
    if algebra is None:
        algebra = next(iter(cochains.values())).algebra
    n_arities = sum(f.arity for f in cochains.values())
    target_arity = max(n_arities - chain.degree, 0)
    total = zero_cochain(algebra, target_arity)
    for t, c in chain.items():
        total = total + act(t, cochains, algebra).scale(c)
    return total
