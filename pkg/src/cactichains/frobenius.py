"""Finite-dimensional Frobenius algebras over exact rationals.

A Frobenius algebra here is a unital associative algebra A with a
symmetric, invariant (eta(ab,c) = eta(a,bc)), nondegenerate pairing eta.
All axioms are checked exhaustively on basis triples at construction;
the inverse pairing and the Casimir tensor C = e_i eta^{ij} (x) e_j are
precomputed.

Vectors are coordinate tuples of Fractions in the algebra basis.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .linalg import F0, F1, format_fraction, identity, parse_fraction, rref, solve

Vec = tuple[Fraction, ...]


class FrobeniusError(ValueError):
    """A Frobenius axiom failed; carries the axiom name and a witness."""

    def __init__(self, axiom: str, witness=None):
        self.axiom = axiom
        self.witness = witness
        msg = f"axiom failed: {axiom}"
        if witness is not None:
            msg += f" (witness {witness})"
        super().__init__(msg)


def _tupled(rows):
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


@dataclass(frozen=True)
class FrobeniusAlgebra:
    dim: int
    mul: tuple  # mul[i][j][k]: coefficient of e_k in e_i * e_j
    unit: Vec
    eta: tuple  # eta[i][j] = eta(e_i, e_j)
    eta_inv: tuple
    name: str = "custom"
    # basis of A with the unit first, plus both change-of-basis matrices;
    # used for normalized-cochain coordinates
    unit_basis: tuple = field(default=(), compare=False)
    to_unit_basis: tuple = field(default=(), compare=False)
    from_unit_basis: tuple = field(default=(), compare=False)

    def multiply(self, a: Vec, b: Vec) -> Vec:
        d = self.dim
        out = [F0] * d
        for i in range(d):
            if not a[i]:
                continue
            for j in range(d):
                if not b[j]:
                    continue
                c = a[i] * b[j]
                row = self.mul[i][j]
                for k in range(d):
                    if row[k]:
                        out[k] += c * row[k]
        return tuple(out)

    def pair(self, a: Vec, b: Vec) -> Fraction:
        return sum(
            (a[i] * self.eta[i][j] * b[j] for i in range(self.dim) for j in range(self.dim) if a[i] and self.eta[i][j]),
            start=F0,
        )

    def pair_unit(self, a: Vec) -> Fraction:
        """eta(1, a)."""
        return self.pair(self.unit, a)

    def basis_vector(self, i: int) -> Vec:
        return tuple(F1 if j == i else F0 for j in range(self.dim))

    def casimir(self) -> tuple:
        """C[i][j] with C = sum_ij C[i][j] e_i (x) e_j, the inverse pairing."""
        return self.eta_inv

    def is_unit_input(self, v: Vec) -> bool:
        return v == self.unit

    def to_json(self) -> str:
        data = {
            "dim": self.dim,
            "unit": [format_fraction(x) for x in self.unit],
            "mul": [[[format_fraction(x) for x in row] for row in plane] for plane in self.mul],
            "eta": [[format_fraction(x) for x in row] for row in self.eta],
        }
        return json.dumps(data)


def _invert(eta_rows: list[list[Fraction]]) -> list[list[Fraction]] | None:
    d = len(eta_rows)
    aug = [eta_rows[i][:] + identity(d)[i] for i in range(d)]
    red, pivots = rref(aug)
    if pivots != list(range(d)):
        return None
    return [red[i][d:] for i in range(d)]


def make_algebra(dim: int, mul, unit, eta, name: str = "custom") -> FrobeniusAlgebra:
    """Validate the structure constants and build the algebra.

    Raises FrobeniusError naming the first failed axiom together with a
    witnessing basis triple.
    """
    mul = tuple(_tupled(plane) for plane in mul)
    eta_t = _tupled(eta)
    unit_t = tuple(Fraction(x) for x in unit)
    if len(mul) != dim or any(len(p) != dim for p in mul) or len(unit_t) != dim or len(eta_t) != dim:
        raise FrobeniusError("shape", (dim,))

    alg = FrobeniusAlgebra(dim=dim, mul=mul, unit=unit_t, eta=eta_t, eta_inv=(), name=name)

    basis = [alg.basis_vector(i) for i in range(dim)]
    for i in range(dim):
        if alg.multiply(unit_t, basis[i]) != basis[i] or alg.multiply(basis[i], unit_t) != basis[i]:
            raise FrobeniusError("unit", (i,))
    for i, j, k in product(range(dim), repeat=3):
        lhs = alg.multiply(alg.multiply(basis[i], basis[j]), basis[k])
        rhs = alg.multiply(basis[i], alg.multiply(basis[j], basis[k]))
        if lhs != rhs:
            raise FrobeniusError("associativity", (i, j, k))
    for i, j in product(range(dim), repeat=2):
        if eta_t[i][j] != eta_t[j][i]:
            raise FrobeniusError("symmetry", (i, j))
    for i, j, k in product(range(dim), repeat=3):
        if alg.pair(alg.multiply(basis[i], basis[j]), basis[k]) != alg.pair(basis[i], alg.multiply(basis[j], basis[k])):
            raise FrobeniusError("invariance", (i, j, k))
    inv = _invert([list(r) for r in eta_t])
    if inv is None:
        raise FrobeniusError("nondegeneracy")

    ubasis, to_u, from_u = _unit_first_basis(dim, unit_t)
    return FrobeniusAlgebra(
        dim=dim,
        mul=mul,
        unit=unit_t,
        eta=eta_t,
        eta_inv=_tupled(inv),
        name=name,
        unit_basis=_tupled(ubasis),
        to_unit_basis=_tupled(to_u),
        from_unit_basis=_tupled(from_u),
    )


def _unit_first_basis(dim, unit):
    """Complete the unit to a basis by greedy use of standard vectors.

    Used for the normalized-cochain coordinate space; the complement is a
    plain linear complement (eta-orthogonality is not available since the
    unit may be isotropic, e.g. the dual numbers).
    """
    rows = [list(unit)]
    for i in range(dim):
        cand = [F1 if j == i else F0 for j in range(dim)]
        test = rows + [cand]
        if len(rref(test)[1]) == len(test):
            rows.append(cand)
        if len(rows) == dim:
            break
    # from_u: columns are the new basis vectors; maps u-coords -> std coords
    from_u = [[rows[c][r] for c in range(dim)] for r in range(dim)]
    to_u = _invert([row[:] for row in from_u])
    assert to_u is not None
    return rows, to_u, from_u


def casimir(algebra: FrobeniusAlgebra) -> tuple:
    """The Casimir two-tensor C = e_i eta^{ij} (x) e_j."""
    return algebra.casimir()


def _builtin_dual() -> FrobeniusAlgebra:
    # Q[x]/(x^2), basis (1, x), eta(1,x)=1, eta(1,1)=eta(x,x)=0
    mul = [[[1, 0], [0, 1]], [[0, 1], [0, 0]]]
    return make_algebra(2, mul, [1, 0], [[0, 1], [1, 0]], name="dual")


def _builtin_group(n: int, name: str) -> FrobeniusAlgebra:
    # Q[Z/n], basis g^0..g^{n-1}; eta(a,b) = coefficient of the identity in ab
    mul = [[[1 if k == (i + j) % n else 0 for k in range(n)] for j in range(n)] for i in range(n)]
    eta = [[1 if (i + j) % n == 0 else 0 for j in range(n)] for i in range(n)]
    unit = [1 if i == 0 else 0 for i in range(n)]
    return make_algebra(n, mul, unit, eta, name=name)


def _builtin_m2() -> FrobeniusAlgebra:
    # 2x2 matrices, basis (E11, E12, E21, E22), trace pairing
    idx = [(0, 0), (0, 1), (1, 0), (1, 1)]
    def e(a, b):
        return idx.index((a, b))
    mul = [[[0] * 4 for _ in range(4)] for _ in range(4)]
    for (a, b) in idx:
        for (c, d) in idx:
            if b == c:
                mul[e(a, b)][e(c, d)][e(a, d)] = 1
    eta = [[0] * 4 for _ in range(4)]
    for (a, b) in idx:
        for (c, d) in idx:
            # tr(E_ab E_cd) = [b==c][d==a]
            if b == c and d == a:
                eta[e(a, b)][e(c, d)] = 1
    unit = [1, 0, 0, 1]
    return make_algebra(4, mul, unit, eta, name="m2")


_BUILTINS = {
    "dual": _builtin_dual,
    "z2": lambda: _builtin_group(2, "z2"),
    "z3": lambda: _builtin_group(3, "z3"),
    "m2": _builtin_m2,
}

_builtin_cache: dict[str, FrobeniusAlgebra] = {}


def builtin(name: str) -> FrobeniusAlgebra:
    """One of the stock algebras: dual, z2, z3, m2."""
    if name not in _BUILTINS:
        raise KeyError(f"unknown builtin algebra {name!r}; choose from {sorted(_BUILTINS)}")
    if name not in _builtin_cache:
        _builtin_cache[name] = _BUILTINS[name]()
    return _builtin_cache[name]


def algebra_from_json(text: str) -> FrobeniusAlgebra:
    data = json.loads(text)
    dim = int(data["dim"])
    mul = [[[parse_fraction(x) for x in row] for row in plane] for plane in data["mul"]]
    unit = [parse_fraction(x) for x in data["unit"]]
    eta = [[parse_fraction(x) for x in row] for row in data["eta"]]
    return make_algebra(dim, mul, unit, eta, name=data.get("name", "custom"))


def resolve_algebra(spec: str) -> FrobeniusAlgebra:
    """CLI helper: a builtin name or @file.json."""
    if spec.startswith("@"):
        with open(spec[1:], "r", encoding="utf-8") as fh:
            return algebra_from_json(fh.read())
    return builtin(spec)
