"""
Dieudonne spaces of height n and dimension d, the coset map Psi, and the
canonical flag.

A Dieudonne space with basis is a pair ``(a, b)`` of n x n matrices over
GF(p^k) with ``F = a ⊗ sigma`` and ``V = b ⊗ sigma^{-1}``.  The set X asks
``rank a = n - d``, ``rank b = d`` and ``a sigma(b) = sigma(b) a = 0``; Y adds
``ker a = V_2``.  For a complement ``H`` of ``im a`` the element ``f_H`` of
GL_n acts as ``a`` on ``V_1`` and sends ``v`` in ``V_2`` to the unique
``h`` in ``H`` with ``sigma(b) h = v``.  Changing ``H`` moves ``f_H`` inside
its coset ``f_H V`` with ``V = R_u(Q)``.

Two flag engines live here.  The linear one works with arbitrary subspaces
over the field and applies ``V`` and ``F^{-1}`` to a pair.  The
combinatorial one works with index sets and a permutation ``f``; it is all
that is needed for the representatives ``f_w = z w`` since every member of
their canonical flag is a coordinate subspace.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .field import GF, Matrix
from .rootzip import (
    ParabolicDescriptor, Root, ZipDatum, all_roots, is_stratum_parameter,
)
from .weyl import Permutation

__all__ = [
    "DieudonnePair", "CoordinateFlag", "FlagError",
    "perm_matrix", "standard_pair", "pair_from_matrix", "coordinate_complements",
    "all_complements",
    "complement_basis", "psi", "act", "levi_part", "in_P", "in_V", "check_transform",
    "random_invertible", "random_P", "random_pair", "random_complement",
    "span", "linear_canonical_flag", "lemma_flag",
    "v_op", "finv_op", "v_op_simplified", "finv_op_simplified", "is_stable",
    "flag_closure", "canonical_flag", "ordered_set_partitions",
    "exhaustive_coarsest_flag", "flag_stabilizer", "canonical_type",
    "EXHAUSTIVE_MAX_N",
]

EXHAUSTIVE_MAX_N = 5

Subspace = tuple  # RREF basis rows, tuple[tuple[int, ...], ...]


class FlagError(RuntimeError):
    """The closure of the operators did not produce a chain."""


# pairs and the coset map

@dataclass(frozen=True)
class DieudonnePair:
    a: Matrix
    b: Matrix
    d: int
    p: int
    k: int = 1

    @property
    def n(self) -> int:
        return len(self.a)

    @property
    def field(self) -> GF:
        return GF.get(self.p, self.k)

    def sigma_b(self) -> Matrix:
        return self.field.matfrob(self.b)

    def in_X(self) -> bool:
        F, n, d = self.field, self.n, self.d
        sb = self.sigma_b()
        zero = F.zeros(n)
        return (F.rank(self.a) == n - d and F.rank(self.b) == d
                and F.matmul(self.a, sb) == zero and F.matmul(sb, self.a) == zero)

    def in_Y(self) -> bool:
        if not self.in_X():
            return False
        n, d = self.n, self.d
        # ker a has dimension d, so it equals V_2 as soon as it contains V_2
        return all(self.a[i][j] == 0 for i in range(n) for j in range(n - d, n))


def perm_matrix(F: GF, f: Permutation) -> Matrix:
    return F.from_int_matrix(f.matrix())


def _projections(F: GF, Z: ZipDatum) -> tuple[Matrix, Matrix]:
    """``pi_1`` onto ``V_1`` along ``V_2`` and ``pi_2`` onto ``V_2`` along ``V_1``."""
    n, m = Z.n, Z.n - Z.d
    pi1 = tuple(tuple(1 if i == j and i < m else 0 for j in range(n)) for i in range(n))
    pi2 = tuple(tuple(1 if i == j and i >= m else 0 for j in range(n)) for i in range(n))
    return pi1, pi2


def pair_from_matrix(Z: ZipDatum, f: Matrix, k: int = 1) -> DieudonnePair:
    """The pair in Y whose coset is ``f V``: ``a = f pi_1``, ``sigma(b) = pi_2 f^{-1}``."""
    F = GF.get(Z.p, k)
    pi1, pi2 = _projections(F, Z)
    a = F.matmul(f, pi1)
    sb = F.matmul(pi2, F.inverse(f))
    return DieudonnePair(a, F.matfrob(sb, -1), Z.d, Z.p, k)


def standard_pair(Z: ZipDatum, w: Permutation, k: int = 1) -> DieudonnePair:
    """0/1 pair of ``f_w = z w``: each row and column carries at most one 1."""
    if not is_stratum_parameter(w, Z):
        raise ValueError(f"{w} is not a stratum parameter")
    return pair_from_matrix(Z, perm_matrix(GF.get(Z.p, k), Z.z * w), k)


def complement_basis(F: GF, S: Iterable[int], n: int) -> Matrix:
    """n x |S| matrix of the unit vectors ``e_i``, ``i in S``."""
    S = sorted(S)
    return tuple(tuple(1 if i == s else 0 for s in S) for i in range(1, n + 1))


def _as_basis(F: GF, H, n: int) -> Matrix:
    if isinstance(H, (set, frozenset)):
        return complement_basis(F, H, n)
    return tuple(tuple(row) for row in H)


def _is_complement(F: GF, pair: DieudonnePair, Hm: Matrix) -> bool:
    return len(Hm[0]) == pair.d and F.rank(F.hstack(pair.a, Hm)) == pair.n


def coordinate_complements(pair: DieudonnePair) -> list[frozenset[int]]:
    """Index sets ``S`` with ``im a ⊕ <e_i, i in S> = k^n``."""
    F, n = pair.field, pair.n
    out = []
    for S in combinations(range(1, n + 1), pair.d):
        if _is_complement(F, pair, complement_basis(F, S, n)):
            out.append(frozenset(S))
    return out


def all_complements(pair: DieudonnePair) -> list[Matrix]:
    """
    One basis (n x d, columns in reduced echelon form) for every complement of
    ``im a``; exponential, meant for n <= 4 over small fields.
    """
    F, n, d = pair.field, pair.n, pair.d
    found: dict[Subspace, Matrix] = {}
    for values in _tuples(F.q, n * d):
        Hm = tuple(tuple(values[i * d:(i + 1) * d]) for i in range(n))
        if not _is_complement(F, pair, Hm):
            continue
        key = span(F, zip(*Hm), n)
        if key not in found:
            found[key] = tuple(zip(*key))
    return [found[key] for key in sorted(found)]


def _tuples(q: int, k: int) -> Iterator[tuple[int, ...]]:
    if k == 0:
        yield ()
        return
    for head in range(q):
        for tail in _tuples(q, k - 1):
            yield (head,) + tail


def psi(pair: DieudonnePair, H) -> Matrix:
    """
    ``f_H`` for a complement ``H`` of ``im a``, given as an index set or as an
    n x d basis matrix.
    """
    F, n, d = pair.field, pair.n, pair.d
    Hm = _as_basis(F, H, n)
    if not _is_complement(F, pair, Hm):
        raise ValueError("H is not a complement of im(a)")
    sbH = F.matmul(pair.sigma_b(), Hm)
    cols = []
    for j in range(n):
        if j < n - d:
            cols.append([pair.a[i][j] for i in range(n)])
        else:
            e = [1 if i == j else 0 for i in range(n)]
            c = F.solve(sbH, e)
            cols.append([_dot(F, Hm[i], c) for i in range(n)])
    f = tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))
    if not F.is_invertible(f):
        raise AssertionError("f_H is singular")
    return f


def _dot(F: GF, u: Sequence[int], v: Sequence[int]) -> int:
    s = 0
    for x, y in zip(u, v):
        if x and y:
            s = F.add(s, F.mul(x, y))
    return s


def act(M: Matrix, pair: DieudonnePair) -> DieudonnePair:
    """``(M a sigma(M)^{-1}, M b sigma^{-1}(M)^{-1})``."""
    F = pair.field
    if not F.is_invertible(M):
        raise ValueError("M is singular")
    a = F.matmul(F.matmul(M, pair.a), F.inverse(F.matfrob(M, 1)))
    b = F.matmul(F.matmul(M, pair.b), F.inverse(F.matfrob(M, -1)))
    return DieudonnePair(a, b, pair.d, pair.p, pair.k)


def _block(i: int, Z: ZipDatum) -> int:
    return 1 if i <= Z.n - Z.d else 2


def levi_part(M: Matrix, Z: ZipDatum) -> Matrix:
    """Block-diagonal part of ``M`` with respect to ``V_1 ⊕ V_2``."""
    n = Z.n
    return tuple(tuple(M[i][j] if _block(i + 1, Z) == _block(j + 1, Z) else 0 for j in range(n))
                 for i in range(n))


def in_P(M: Matrix, Z: ZipDatum) -> bool:
    """``M`` preserves ``V_2`` (no entry from a ``V_2`` column into a ``V_1`` row)."""
    n = Z.n
    return all(M[i][j] == 0 for i in range(n) for j in range(n)
               if _block(i + 1, Z) == 1 and _block(j + 1, Z) == 2)


def in_V(M: Matrix, Z: ZipDatum) -> bool:
    """``M`` lies in ``R_u(Q)``: identity plus entries at the roots of ``V``."""
    n = Z.n
    for i in range(n):
        for j in range(n):
            if i == j:
                ok = M[i][j] == 1
            else:
                ok = M[i][j] == 0 or Root(i + 1, j + 1) in Z.V
            if not ok:
                return False
    return True


def check_transform(M: Matrix, pair: DieudonnePair, H, Z: ZipDatum) -> bool:
    """``M f_H == f'_{H'} sigma(Mbar)`` with ``H' = M H`` and ``f'`` built from ``act(M, pair)``."""
    F = pair.field
    if not in_P(M, Z):
        raise ValueError("M does not lie in P")
    Hm = _as_basis(F, H, pair.n)
    lhs = F.matmul(M, psi(pair, Hm))
    rhs = F.matmul(psi(act(M, pair), F.matmul(M, Hm)), F.matfrob(levi_part(M, Z)))
    return lhs == rhs


# random generators for property tests

def random_invertible(F: GF, n: int, rng: random.Random) -> Matrix:
    while True:
        m = tuple(tuple(rng.randrange(F.q) for _ in range(n)) for _ in range(n))
        if F.is_invertible(m):
            return m


def random_P(F: GF, Z: ZipDatum, rng: random.Random) -> Matrix:
    n = Z.n
    while True:
        m = tuple(tuple(0 if (_block(i, Z), _block(j, Z)) == (1, 2) else rng.randrange(F.q)
                        for j in range(1, n + 1)) for i in range(1, n + 1))
        if F.is_invertible(m):
            return m


def random_pair(Z: ZipDatum, rng: random.Random, k: int = 1) -> DieudonnePair:
    F = GF.get(Z.p, k)
    return pair_from_matrix(Z, random_invertible(F, Z.n, rng), k)


def random_complement(pair: DieudonnePair, rng: random.Random) -> Matrix:
    F, n, d = pair.field, pair.n, pair.d
    while True:
        Hm = tuple(tuple(rng.randrange(F.q) for _ in range(d)) for _ in range(n))
        if _is_complement(F, pair, Hm):
            return Hm


# subspaces over the field

def span(F: GF, vectors: Iterable[Sequence[int]], n: int) -> Subspace:
    """Canonical (reduced row echelon) basis of the span."""
    rows = [tuple(v) for v in vectors if any(v)]
    if not rows:
        return ()
    m, pivots = F._rref(tuple(rows))
    return tuple(tuple(r) for r in m[:len(pivots)])


def _image(F: GF, m: Matrix, U: Subspace, n: int) -> Subspace:
    return span(F, (tuple(_dot(F, row, u) for row in m) for u in U), n)


def _annihilator(F: GF, U: Subspace, n: int) -> list[tuple[int, ...]]:
    return F.nullspace(U, cols=n)


def _preimage(F: GF, m: Matrix, U: Subspace, n: int) -> Subspace:
    """``{x : m x in U}``."""
    C = _annihilator(F, U, n)
    if not C:
        return span(F, F.eye(n), n)
    Cm = F.matmul(tuple(C), m)
    return span(F, F.nullspace(Cm), n)


def _intersect(F: GF, U: Subspace, W: Subspace, n: int) -> Subspace:
    C = _annihilator(F, U, n) + _annihilator(F, W, n)
    if not C:
        return span(F, F.eye(n), n)
    return span(F, F.nullspace(tuple(C)), n)


def _sum(F: GF, U: Subspace, W: Subspace, n: int) -> Subspace:
    return span(F, list(U) + list(W), n)


def _frob_sub(F: GF, U: Subspace, power: int, n: int) -> Subspace:
    return span(F, (tuple(F.frob(x, power) for x in u) for u in U), n)


def _coord(F: GF, S: Iterable[int], n: int) -> Subspace:
    return span(F, (tuple(1 if i == s else 0 for i in range(1, n + 1)) for s in S), n)


def _closure(ops, n: int, F: GF) -> list[Subspace]:
    members = {(), span(F, F.eye(n), n)}
    frontier = list(members)
    while frontier:
        new = []
        for W in frontier:
            for op in ops:
                X = op(W)
                if X not in members:
                    members.add(X)
                    new.append(X)
        frontier = new
    chain = sorted(members, key=len)
    for U, W in zip(chain, chain[1:]):
        if len(U) == len(W) or _sum(F, U, W, n) != W:
            raise FlagError("operator closure is not a chain")
    return chain


def linear_canonical_flag(pair: DieudonnePair) -> list[Subspace]:
    """Closure of ``{0, D}`` under ``V = b sigma^{-1}`` and ``F^{-1} = sigma^{-1} a^{-1}``."""
    F, n = pair.field, pair.n

    def V(W):
        return _image(F, pair.b, _frob_sub(F, W, -1, n), n)

    def Finv(W):
        return _frob_sub(F, _preimage(F, pair.a, W, n), -1, n)

    return _closure((V, Finv), n, F)


def lemma_flag(f: Matrix, Z: ZipDatum, k: int = 1) -> list[Subspace]:
    """
    The same closure computed from ``f`` through
    ``V(W) = V_2 ∩ (sigma^{-1}(f^{-1} W) + V_1)`` and
    ``F^{-1}(W) = V_2 + (sigma^{-1}(f^{-1} W) ∩ V_1)``.
    """
    F, n = GF.get(Z.p, k), Z.n
    finv = F.inverse(f)
    V1, V2 = _coord(F, Z.V1, n), _coord(F, Z.V2, n)

    def pull(W):
        return _frob_sub(F, _image(F, finv, W, n), -1, n)

    def V(W):
        return _intersect(F, V2, _sum(F, pull(W), V1, n), n)

    def Finv(W):
        return _sum(F, V2, _intersect(F, pull(W), V1, n), n)

    return _closure((V, Finv), n, F)


# coordinate flags

@dataclass(frozen=True)
class CoordinateFlag:
    """A chain ``∅ = W_0 ⊂ ... ⊂ W_m = {1..n}`` of coordinate subspaces."""

    n: int
    chain: tuple[frozenset[int], ...]

    def __post_init__(self):
        chain = tuple(frozenset(W) for W in self.chain)
        full = frozenset(range(1, self.n + 1))
        if not chain or chain[0] or chain[-1] != full:
            raise ValueError("a flag runs from the empty set to {1..n}")
        if any(not U < W for U, W in zip(chain, chain[1:])):
            raise ValueError("flag members must be strictly increasing")
        object.__setattr__(self, "chain", chain)

    def blocks(self) -> tuple[frozenset[int], ...]:
        return tuple(W - U for U, W in zip(self.chain, self.chain[1:]))

    def block_sizes(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.blocks())

    def index_sets(self) -> list[list[int]]:
        return [sorted(W) for W in self.chain]

    def __str__(self) -> str:
        return " < ".join("{" + ",".join(map(str, sorted(W))) + "}" for W in self.chain)


def _pre(f: Permutation, W: frozenset[int]) -> frozenset[int]:
    return frozenset(f.inverse()(i) for i in W)


def v_op(W: Iterable[int], f: Permutation, Z: ZipDatum) -> frozenset[int]:
    """``V_2 ∩ (f^{-1} W + V_1)`` on index sets (Frobenius fixes coordinate spans)."""
    return Z.V2 & (_pre(f, frozenset(W)) | Z.V1)


def finv_op(W: Iterable[int], f: Permutation, Z: ZipDatum) -> frozenset[int]:
    """``V_2 + (f^{-1} W ∩ V_1)`` on index sets."""
    return Z.V2 | (_pre(f, frozenset(W)) & Z.V1)


def v_op_simplified(W: Iterable[int], f: Permutation, Z: ZipDatum) -> frozenset[int]:
    """``V_2 ∩ f^{-1} W``."""
    return Z.V2 & _pre(f, frozenset(W))


def finv_op_simplified(W: Iterable[int], f: Permutation, Z: ZipDatum) -> frozenset[int]:
    """``V_2 + f^{-1} W``."""
    return Z.V2 | _pre(f, frozenset(W))


def is_stable(chain: Sequence[frozenset[int]], f: Permutation, Z: ZipDatum) -> bool:
    """Every member is sandwiched ``v_op(W) ⊆ W ⊆ finv_op(W)`` and both bounds are members."""
    members = set(chain)
    for W in chain:
        lo, hi = v_op(W, f, Z), finv_op(W, f, Z)
        if not (lo <= W <= hi and lo in members and hi in members):
            return False
    return True


def _close(f: Permutation, Z: ZipDatum, vop, fop) -> list[frozenset[int]]:
    n = Z.n
    members = {frozenset(), frozenset(range(1, n + 1))}
    rounds = 0
    while True:
        new = set(members)
        for W in members:
            new.add(vop(W, f, Z))
            new.add(fop(W, f, Z))
        if new == members:
            break
        members = new
        rounds += 1
        if rounds > 2 * n:
            raise AssertionError("flag closure did not stabilise within 2n rounds")
    return sorted(members, key=len)


def flag_closure(f: Permutation, Z: ZipDatum) -> CoordinateFlag:
    """Closure of ``{∅, full}`` under both operators, for a permutation ``f``."""
    chain = _close(f, Z, v_op, finv_op)
    if any(not U < W for U, W in zip(chain, chain[1:])):
        raise FlagError(f"operator closure for f={f} is not a chain")
    if _close(f, Z, v_op_simplified, finv_op_simplified) != chain:
        raise AssertionError("simplified operators disagree with the general ones")
    if not is_stable(chain, f, Z):
        raise AssertionError("closure is not sandwiched by its operators")
    return CoordinateFlag(Z.n, tuple(chain))


def canonical_flag(Z: ZipDatum, w: Permutation) -> CoordinateFlag:
    """The canonical flag of ``f_w = z w``."""
    if not is_stratum_parameter(w, Z):
        raise ValueError(f"{w} is not a stratum parameter")
    return flag_closure(Z.z * w, Z)


def ordered_set_partitions(n: int) -> Iterator[tuple[frozenset[int], ...]]:
    """Every ordered set partition of ``{1..n}`` into nonempty blocks."""
    def rec(rest: frozenset[int]):
        if not rest:
            yield ()
            return
        items = sorted(rest)
        for r in range(1, len(items) + 1):
            for first in combinations(items, r):
                block = frozenset(first)
                for tail in rec(rest - block):
                    yield (block,) + tail
    yield from rec(frozenset(range(1, n + 1)))


def exhaustive_coarsest_flag(Z: ZipDatum, w: Permutation, max_n: int = EXHAUSTIVE_MAX_N) -> CoordinateFlag:
    """
    Independent oracle: the members common to every stable coordinate flag of
    ``f_w``, found by running over all ordered set partitions.
    """
    if Z.n > max_n:
        raise ValueError(f"exhaustive enumeration is limited to n <= {max_n}")
    f = Z.z * w
    common: set[frozenset[int]] | None = None
    for parts in ordered_set_partitions(Z.n):
        chain, acc = [frozenset()], frozenset()
        for b in parts:
            acc = acc | b
            chain.append(acc)
        if is_stable(chain, f, Z):
            common = set(chain) if common is None else common & set(chain)
    if common is None:
        raise AssertionError("no stable flag found")
    result = sorted(common, key=len)
    if not is_stable(result, f, Z):
        raise AssertionError("intersection of stable flags is not stable")
    return CoordinateFlag(Z.n, tuple(result))


def flag_stabilizer(Z: ZipDatum, flag: CoordinateFlag) -> tuple[ParabolicDescriptor, tuple[frozenset[int], ...]]:
    """Parabolic of roots ``(i, j)`` with ``j in W => i in W`` for every member, and its ordered blocks."""
    roots = frozenset(r for r in all_roots(Z.n)
                      if all(r.source in W for W in flag.chain if r.target in W))
    return ParabolicDescriptor(Z.n, roots), flag.blocks()


def canonical_type(f: Permutation, Z: ZipDatum) -> tuple[tuple[int, int, int], ...]:
    """``(dim W, dim V(W), dim F^{-1}(W))`` along the canonical flag: an isomorphism invariant."""
    return tuple((len(W), len(v_op(W, f, Z)), len(finv_op(W, f, Z)))
                 for W in flag_closure(f, Z).chain)
