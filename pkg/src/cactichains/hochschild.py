"""Normalized Hochschild cochains of a Frobenius algebra.

A cochain of arity n is a multilinear map A^n -> A stored densely over
the algebra basis; normalization (vanishing whenever an input is the
unit) is an invariant checked at construction.  The inner product turns
a cochain into its dual tensor f~(a_0,..,a_n) = eta(a_0, f(a_1,..,a_n)),
which is how the cyclic operator and the tree correlators see it.

Operator conventions:

* hdiff is the standard normalized Hochschild coboundary,
  (df)(a_1..a_{n+1}) = a_1 f(a_2..) + sum_i (-1)^i f(.., a_i a_{i+1}, ..)
  + (-1)^{n+1} f(a_1..a_n) a_{n+1};
* brace insertions carry (-1)^{(|g_l|-1)(p_l-1)} where p_l is the input
  position of the l-th insertion, and the Gerstenhaber bracket is
  [f,g] = f{g} - (-1)^{(|f|-1)(|g|-1)} g{f};
* cdelta is the cyclic operator: eta(a_0, (Df)(a_1..a_{n-1})) =
  eta(1, f o N(a_0..a_{n-1})) with N = 1 + t + .. + t^{n-1} and
  t the signed cyclic shift.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .frobenius import FrobeniusAlgebra, builtin
from .linalg import F0, F1, QuotientSpace, format_fraction, nullspace, parse_fraction

__all__ = [
    "Cochain",
    "DualTensor",
    "zero_cochain",
    "dualize",
    "undualize",
    "hdiff",
    "cup",
    "brace",
    "bracket",
    "cdelta",
    "cohomology",
    "CohomologyData",
    "random_cochain",
    "cochain_from_json",
    "cochain_to_json",
]


def _all_tuples(dim: int, n: int):
    return product(range(dim), repeat=n)


def _sign(exponent: int) -> int:
    # (-1) ** n returns a float for negative n; exponents here may be
    # negative through shifted degrees of arity-0 cochains
    return -1 if exponent % 2 else 1


class Cochain:
    """Dense multilinear map A^arity -> A; always normalized."""

    __slots__ = ("algebra", "arity", "data")

    def __init__(self, algebra: FrobeniusAlgebra, arity: int, data, check: bool = True):
        self.algebra = algebra
        self.arity = arity
        self.data = tuple(Fraction(x) for x in data)
        d = algebra.dim
        if len(self.data) != d ** arity * d:
            raise ValueError("coefficient block has the wrong size")
        if check and not self._is_normalized():
            raise ValueError("cochain is not normalized (nonzero on a unit input)")

    def _flat(self, idx: tuple[int, ...]) -> int:
        pos = 0
        for i in idx:
            pos = pos * self.algebra.dim + i
        return pos * self.algebra.dim

    def value(self, idx: tuple[int, ...]) -> tuple[Fraction, ...]:
        """f on a tuple of basis vectors, as coordinates."""
        base = self._flat(idx)
        return self.data[base:base + self.algebra.dim]

    def evaluate(self, inputs) -> tuple[Fraction, ...]:
        """f on arbitrary algebra elements (coordinate vectors)."""
        if len(inputs) != self.arity:
            raise ValueError("arity mismatch")
        d = self.algebra.dim
        out = [F0] * d
        for idx in _all_tuples(d, self.arity):
            coeff = F1
            for slot, i in enumerate(idx):
                coeff *= inputs[slot][i]
                if not coeff:
                    break
            if not coeff:
                continue
            val = self.value(idx)
            for j in range(d):
                if val[j]:
                    out[j] += coeff * val[j]
        return tuple(out)

    def _is_normalized(self) -> bool:
        d = self.algebra.dim
        unit = self.algebra.unit
        for slot in range(self.arity):
            for rest in _all_tuples(d, self.arity - 1):
                acc = [F0] * d
                for u in range(d):
                    if not unit[u]:
                        continue
                    idx = rest[:slot] + (u,) + rest[slot:]
                    val = self.value(idx)
                    for j in range(d):
                        if val[j]:
                            acc[j] += unit[u] * val[j]
                if any(acc):
                    return False
        return True

    def is_zero(self) -> bool:
        return not any(self.data)

    def __add__(self, other: "Cochain") -> "Cochain":
        if self.algebra is not other.algebra and self.algebra != other.algebra:
            raise ValueError("cochains over different algebras")
        if self.arity != other.arity:
            raise ValueError("cannot add cochains of different arity")
        return Cochain(self.algebra, self.arity, [a + b for a, b in zip(self.data, other.data)], check=False)

    def __sub__(self, other: "Cochain") -> "Cochain":
        return self + other.scale(Fraction(-1))

    def scale(self, k) -> "Cochain":
        k = Fraction(k)
        return Cochain(self.algebra, self.arity, [k * a for a in self.data], check=False)

    def __neg__(self) -> "Cochain":
        return self.scale(Fraction(-1))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cochain):
            return NotImplemented
        return self.arity == other.arity and self.data == other.data and self.algebra == other.algebra

    def __hash__(self):
        return hash((self.arity, self.data))

    def __repr__(self):
        return f"Cochain(arity={self.arity}, algebra={self.algebra.name})"


def zero_cochain(algebra: FrobeniusAlgebra, arity: int) -> Cochain:
    d = algebra.dim
    return Cochain(algebra, arity, [F0] * (d ** arity * d), check=False)


@dataclass(frozen=True)
class DualTensor:
    """f~(a_0,..,a_n) as a dense (n+1)-tensor over the basis."""

    algebra: FrobeniusAlgebra
    arity: int  # the arity of the underlying cochain; tensor rank is arity+1
    data: tuple

    def value(self, idx: tuple[int, ...]) -> Fraction:
        pos = 0
        for i in idx:
            pos = pos * self.algebra.dim + i
        return self.data[pos]


def dualize(f: Cochain) -> DualTensor:
    """f~(a_0,..) = eta(a_0, f(a_1,..))."""
    A = f.algebra
    d = A.dim
    out = []
    for idx in _all_tuples(d, f.arity + 1):
        val = f.value(idx[1:])
        out.append(sum((A.eta[idx[0]][j] * val[j] for j in range(d) if val[j]), start=F0))
    return DualTensor(A, f.arity, tuple(out))


def undualize(t: DualTensor) -> Cochain:
    """Inverse of dualize via the inverse pairing."""
    A = t.algebra
    d = A.dim
    data = []
    for idx in _all_tuples(d, t.arity):
        for j in range(d):
            data.append(sum((A.eta_inv[j][i0] * t.value((i0,) + idx) for i0 in range(d)), start=F0))
    return Cochain(A, t.arity, data, check=False)


def hdiff(f: Cochain) -> Cochain:
    """Normalized Hochschild coboundary, arity n -> n+1."""
    A = f.algebra
    d = A.dim
    n = f.arity
    data = [F0] * (d ** (n + 1) * d)
    for idx in _all_tuples(d, n + 1):
        pos = 0
        for i in idx:
            pos = pos * d + i
        pos *= d
        acc = list(A.multiply(A.basis_vector(idx[0]), f.value(idx[1:])))
        for i in range(1, n + 1):
            sign = (-1) ** i
            merged = A.mul[idx[i - 1]][idx[i]]
            for k in range(d):
                if merged[k]:
                    val = f.value(idx[: i - 1] + (k,) + idx[i + 1:])
                    for j in range(d):
                        if val[j]:
                            acc[j] += sign * merged[k] * val[j]
        tailmul = A.multiply(f.value(idx[:n]), A.basis_vector(idx[n]))
        sign = (-1) ** (n + 1)
        for j in range(d):
            if tailmul[j]:
                acc[j] += sign * tailmul[j]
        data[pos:pos + d] = acc
    return Cochain(A, n + 1, data, check=False)


def cup(f: Cochain, g: Cochain) -> Cochain:
    """(f u g)(a_1..a_{p+q}) = f(a_1..a_p) g(a_{p+1}..)."""
    A = f.algebra
    d = A.dim
    p, q = f.arity, g.arity
    data = []
    for idx in _all_tuples(d, p + q):
        data.extend(A.multiply(f.value(idx[:p]), g.value(idx[p:])))
    return Cochain(A, p + q, data, check=False)


def brace(f: Cochain, *gs: Cochain) -> Cochain:
    """Brace operation f{g_1,..,g_m}: ordered insertions into f's slots."""
    A = f.algebra
    d = A.dim
    m = len(gs)
    if m == 0:
        return f
    n = f.arity
    arities = [g.arity for g in gs]
    N = n + sum(arities) - m
    if N < 0 or m > n:
        return zero_cochain(A, max(N, 0))
    out = zero_cochain(A, N)
    data = list(out.data)
    from itertools import combinations

    for slots in combinations(range(1, n + 1), m):
        # input position of the l-th inserted operation
        positions = []
        consumed = 0
        for l, s in enumerate(slots):
            positions.append(s - l + consumed)
            consumed += arities[l]
        sign = _sign(sum((arities[l] - 1) * (positions[l] - 1) for l in range(m)))
        # f argument descriptors: a direct input or the output of some g
        fdesc = []
        gi = 0
        for s in range(1, n + 1):
            if gi < m and slots[gi] == s:
                fdesc.append(("g", gi))
                gi += 1
            else:
                fdesc.append(("a", None))
        for idx in _all_tuples(d, N):
            terms = [(F1, [])]
            pos = 0
            for kind, which in fdesc:
                if kind == "a":
                    i = idx[pos]
                    pos += 1
                    terms = [(c, args + [i]) for c, args in terms]
                else:
                    g = gs[which]
                    gin = idx[pos: pos + g.arity]
                    pos += g.arity
                    gval = g.value(tuple(gin))
                    terms = [
                        (c * gval[k], args + [k])
                        for c, args in terms
                        for k in range(d)
                        if gval[k]
                    ]
            if not terms:
                continue
            base = 0
            for i in idx:
                base = base * d + i
            base *= d
            for c, args in terms:
                val = f.value(tuple(args))
                for j in range(d):
                    if val[j]:
                        data[base + j] += sign * c * val[j]
    return Cochain(A, N, data, check=False)


def bracket(f: Cochain, g: Cochain) -> Cochain:
    """Gerstenhaber bracket [f,g] = f{g} - (-1)^{(|f|-1)(|g|-1)} g{f}."""
    sign = _sign((f.arity - 1) * (g.arity - 1))
    return brace(f, g) - brace(g, f).scale(sign)


def cdelta(f: Cochain) -> Cochain:
    """The cyclic (Connes-type) operator on normalized cochains."""
    A = f.algebra
    d = A.dim
    n = f.arity
    if n < 1:
        raise ValueError("cdelta needs arity >= 1")
    eta1 = [A.pair_unit(A.basis_vector(j)) for j in range(d)]
    out = []
    rot_sign = (-1) ** (n - 1)
    for idx in _all_tuples(d, n):
        total = F0
        sign = 1
        for r in range(n):
            rotated = idx[n - r:] + idx[: n - r]
            val = f.value(rotated)
            contrib = sum((eta1[j] * val[j] for j in range(d) if val[j]), start=F0)
            total += sign * contrib
            sign *= rot_sign
        out.append(total)
    return undualize(DualTensor(A, n - 1, tuple(out)))


# ---------------------------------------------------------------------------
# normalized coordinates and cohomology


def _complement_range(algebra: FrobeniusAlgebra) -> range:
    return range(1, algebra.dim)


def norm_dim(algebra: FrobeniusAlgebra, arity: int) -> int:
    return (algebra.dim - 1) ** arity * algebra.dim


def to_norm_coords(f: Cochain) -> list[Fraction]:
    """Coordinates of a normalized cochain: values on the complement basis."""
    A = f.algebra
    d = A.dim
    from_u = A.from_unit_basis
    coords: list[Fraction] = []
    for idx in product(_complement_range(A), repeat=f.arity):
        inputs = [tuple(from_u[r][c] for r in range(d)) for c in idx]
        coords.extend(f.evaluate(inputs))
    return coords


def from_norm_coords(algebra: FrobeniusAlgebra, arity: int, coords) -> Cochain:
    A = algebra
    d = A.dim
    to_u = A.to_unit_basis
    dc = d - 1
    coords = list(coords)
    data = []
    for idx in _all_tuples(d, arity):
        acc = [F0] * d
        for cidx_pos, cidx in enumerate(product(range(dc), repeat=arity)):
            coeff = F1
            for slot in range(arity):
                coeff *= to_u[cidx[slot] + 1][idx[slot]]
                if not coeff:
                    break
            if not coeff:
                continue
            base = cidx_pos * d
            for j in range(d):
                if coords[base + j]:
                    acc[j] += coeff * coords[base + j]
        data.extend(acc)
    return Cochain(A, arity, data, check=False)


def _norm_basis(algebra: FrobeniusAlgebra, arity: int) -> list[Cochain]:
    nd = norm_dim(algebra, arity)
    out = []
    for i in range(nd):
        coords = [F0] * nd
        coords[i] = F1
        out.append(from_norm_coords(algebra, arity, coords))
    return out


@dataclass
class CohomologyData:
    algebra: FrobeniusAlgebra
    arity: int
    dimension: int
    representatives: list[Cochain]
    quotient: QuotientSpace

    def reduce(self, f: Cochain) -> list[Fraction]:
        """Coset coordinates of a cocycle in the chosen basis of HH^n."""
        return self.quotient.reduce(to_norm_coords(f))

    def is_coboundary(self, f: Cochain) -> bool:
        return all(x == 0 for x in self.reduce(f))


def cohomology(algebra: FrobeniusAlgebra, n: int) -> CohomologyData:
    """HH^n computed from the normalized complex by exact elimination."""
    if n < 0:
        raise ValueError("n must be >= 0")
    ambient = norm_dim(algebra, n)
    # kernel of hdiff at arity n
    rows_out = []  # one row per output coordinate of hdiff
    basis_n = _norm_basis(algebra, n)
    images = [to_norm_coords(hdiff(b)) for b in basis_n]
    out_dim = norm_dim(algebra, n + 1)
    matrix = [[images[c][r] for c in range(ambient)] for r in range(out_dim)]
    kernel = nullspace(matrix) if ambient else []
    if n == 0:
        image_vectors: list[list[Fraction]] = []
    else:
        basis_prev = _norm_basis(algebra, n - 1)
        image_vectors = [to_norm_coords(hdiff(b)) for b in basis_prev]
    quotient = QuotientSpace(kernel, image_vectors, ambient)
    reps = [from_norm_coords(algebra, n, v) for v in quotient.representatives]
    return CohomologyData(algebra, n, quotient.dimension, reps, quotient)


def random_cochain(algebra: FrobeniusAlgebra, arity: int, rng: random.Random) -> Cochain:
    """Seeded random normalized cochain with small rational entries."""
    nd = norm_dim(algebra, arity)
    coords = [Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(nd)]
    return from_norm_coords(algebra, arity, coords)


# ---------------------------------------------------------------------------
# JSON


def _nest(data, dim: int, arity: int):
    if arity == 0:
        return [format_fraction(x) for x in data]
    step = len(data) // dim
    return [_nest(data[i * step:(i + 1) * step], dim, arity - 1) for i in range(dim)]


def cochain_to_json(f: Cochain) -> str:
    return json.dumps(
        {
            "algebra": f.algebra.name,
            "arity": f.arity,
            "coeffs": _nest(list(f.data), f.algebra.dim, f.arity),
        }
    )


def _flatten(nested, arity: int):
    if arity == 0:
        return [parse_fraction(x) for x in nested]
    out = []
    for sub in nested:
        out.extend(_flatten(sub, arity - 1))
    return out


def cochain_from_json(text: str, algebra: FrobeniusAlgebra | None = None) -> Cochain:
    data = json.loads(text)
    if algebra is None:
        algebra = builtin(data["algebra"])
    arity = int(data["arity"])
    return Cochain(algebra, arity, _flatten(data["coeffs"], arity))
