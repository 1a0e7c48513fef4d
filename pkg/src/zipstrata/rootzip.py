"""
Roots of GL_n, parabolic descriptors, zip data with frames, and strata.

A root ``Root(i, j)`` is ``e_i - e_j`` and corresponds to the matrix unit
``E_ij``; it is positive when ``i < j`` so that ``B`` is the upper triangular
Borel.  Every subgroup handled here contains the diagonal torus and is
represented by its set of roots.  Frobenius fixes every root subgroup of the
split group, so it acts as the identity on root sets; the prime ``p`` is only
carried along for the finite-field computations.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from itertools import combinations
from typing import Iterable, NamedTuple, Union

from .weyl import (
    Permutation, blocks_of, is_min_left, is_min_right, length, longest_element,
    min_coset_reps,
)

__all__ = [
    "Root", "RootSet", "ParabolicDescriptor", "ZipDatum", "StratumDescriptor",
    "FrameError",
    "all_roots", "positive_roots", "simple_root", "root_closure", "is_closed",
    "levi_roots_of_partition", "partition_of_levi", "standard_parabolic",
    "conjugate", "parabolic_dim", "parabolic_closure",
    "is_prime", "gl_zip_datum", "frame_violations", "check_frame",
    "intermediate_parabolics", "derived_zip_datum", "enumerate_strata", "in_IW",
    "borel_z", "stratum_parameters", "is_stratum_parameter",
]


class FrameError(ValueError):
    """A zip datum violates one of the frame or zip-datum conditions."""


class Root(NamedTuple):
    source: int
    target: int

    def __str__(self) -> str:
        return f"{self.source}-{self.target}"

    @classmethod
    def parse(cls, text: str) -> Root:
        i, j = text.split("-")
        return cls(int(i), int(j))

    def neg(self) -> Root:
        return Root(self.target, self.source)

    @property
    def positive(self) -> bool:
        return self.source < self.target


RootSet = frozenset  # frozenset[Root]


def all_roots(n: int) -> frozenset[Root]:
    return frozenset(Root(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j)


def positive_roots(n: int) -> frozenset[Root]:
    return frozenset(Root(i, j) for i, j in combinations(range(1, n + 1), 2))


def simple_root(i: int) -> Root:
    return Root(i, i + 1)


def root_closure(roots: Iterable[Root]) -> frozenset[Root]:
    """Smallest superset closed under ``(i,j) + (j,k) = (i,k)``."""
    out = set(roots)
    changed = True
    while changed:
        changed = False
        by_source: dict[int, set[int]] = {}
        for r in out:
            by_source.setdefault(r.source, set()).add(r.target)
        for i, js in list(by_source.items()):
            for j in list(js):
                for k in by_source.get(j, ()):
                    if k != i and Root(i, k) not in out:
                        out.add(Root(i, k))
                        changed = True
    return frozenset(out)


def is_closed(roots: Iterable[Root]) -> bool:
    roots = frozenset(roots)
    return root_closure(roots) == roots


def levi_roots_of_partition(blocks: Iterable[Iterable[int]]) -> frozenset[Root]:
    out = set()
    for b in blocks:
        for i in b:
            for j in b:
                if i != j:
                    out.add(Root(i, j))
    return frozenset(out)


def partition_of_levi(roots: Iterable[Root], n: int) -> list[frozenset[int]]:
    """Connected components of a Levi root set, sorted by smallest member."""
    parent = list(range(n + 1))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for r in roots:
        parent[find(r.source)] = find(r.target)
    comps: dict[int, set[int]] = {}
    for i in range(1, n + 1):
        comps.setdefault(find(i), set()).add(i)
    return sorted((frozenset(c) for c in comps.values()), key=min)


@dataclass(frozen=True)
class ParabolicDescriptor:
    """
    A parabolic subgroup containing the diagonal torus, given by its roots.

    ``type`` records the subset K of simple roots when the descriptor was built
    as a conjugate of the standard parabolic P_K; it does not take part in
    equality.
    """

    n: int
    roots: frozenset[Root]
    type: frozenset[int] | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "roots", frozenset(Root(*r) for r in self.roots))
        full = all_roots(self.n)
        if not self.roots <= full:
            raise ValueError("descriptor contains roots outside Phi")
        if not is_closed(self.roots):
            raise ValueError("root set is not closed")
        if self.roots | {r.neg() for r in self.roots} != full:
            raise ValueError("root set is not parabolic (R ∪ -R != Phi)")

    @property
    def levi(self) -> frozenset[Root]:
        return frozenset(r for r in self.roots if r.neg() in self.roots)

    @property
    def unipotent(self) -> frozenset[Root]:
        return self.roots - self.levi

    @property
    def dim(self) -> int:
        return self.n + len(self.roots)

    def __le__(self, other: ParabolicDescriptor) -> bool:
        return self.roots <= other.roots

    def __lt__(self, other: ParabolicDescriptor) -> bool:
        return self.roots < other.roots

    def blocks(self) -> list[frozenset[int]]:
        return partition_of_levi(self.levi, self.n)


def parabolic_dim(P0: ParabolicDescriptor) -> int:
    """Torus rank plus number of roots."""
    return P0.n + len(P0.roots)


def standard_parabolic(K: Iterable[int], n: int) -> ParabolicDescriptor:
    K = frozenset(K)
    roots = positive_roots(n) | levi_roots_of_partition(blocks_of(K, n))
    return ParabolicDescriptor(n, roots, type=K)


def parabolic_closure(roots: Iterable[Root], n: int) -> ParabolicDescriptor:
    return ParabolicDescriptor(n, root_closure(roots))


Conjugable = Union[ParabolicDescriptor, frozenset]


def conjugate(obj: Conjugable, w: Permutation) -> Conjugable:
    """Apply ``w`` to every root: ``(i, j) -> (w(i), w(j))``."""
    if isinstance(obj, ParabolicDescriptor):
        return ParabolicDescriptor(obj.n, conjugate(obj.roots, w), type=obj.type)
    return frozenset(Root(w(r.source), w(r.target)) for r in obj)


def is_prime(p: int) -> bool:
    return p >= 2 and all(p % q for q in range(2, int(p ** 0.5) + 1))


@dataclass(frozen=True)
class ZipDatum:
    """
    A zip datum (GL_n, P, L, Q, M, phi) together with its frame (B, T, z).

    ``I`` and ``J`` are the types of ``P`` and ``Q``; ``U`` and ``V`` the root
    sets of their unipotent radicals.
    """

    n: int
    d: int
    p: int
    I: frozenset[int]
    J: frozenset[int]
    z: Permutation
    P: ParabolicDescriptor
    Q: ParabolicDescriptor
    L: frozenset[Root]
    M: frozenset[Root]
    U: frozenset[Root]
    V: frozenset[Root]

    @property
    def V1(self) -> frozenset[int]:
        return frozenset(range(1, self.n - self.d + 1))

    @property
    def V2(self) -> frozenset[int]:
        return frozenset(range(self.n - self.d + 1, self.n + 1))

    @property
    def dim_G(self) -> int:
        return self.n * self.n

    @property
    def dim_E(self) -> int:
        return self.P.dim + len(self.V)

    @property
    def borel(self) -> ParabolicDescriptor:
        return standard_parabolic((), self.n)

    @property
    def zborel(self) -> ParabolicDescriptor:
        return borel_z(self)


def borel_z(Z: ZipDatum) -> ParabolicDescriptor:
    """The Borel ^zB = z B z^{-1}, typed by the empty subset."""
    return conjugate(standard_parabolic((), Z.n), Z.z)


def _assemble(n, d, p, I, J, z, P, Q, L, M) -> ZipDatum:
    return ZipDatum(
        n=n, d=d, p=p, I=frozenset(I), J=frozenset(J), z=z, P=P, Q=Q,
        L=frozenset(L), M=frozenset(M),
        U=P.roots - frozenset(L), V=Q.roots - frozenset(M),
    )


def gl_zip_datum(n: int, d: int, p: int) -> ZipDatum:
    """
    Zip datum of Dieudonne spaces of height ``n`` and dimension ``d``.

    ``V_1 = <e_1..e_{n-d}>``, ``V_2 = <e_{n-d+1}..e_n>``, ``P = Stab(V_2)``,
    ``Q = Stab(V_1)`` and ``z = w_0 w_{0,I}`` (the block swap
    ``e_j -> e_{n-d+j}`` for ``j <= d``, ``e_j -> e_{j-d}`` otherwise).
    """
    if not isinstance(n, int) or n < 2:
        raise ValueError(f"n must be an integer >= 2, got {n!r}")
    if not 1 <= d <= n - 1:
        raise ValueError(f"d must lie in [1, n-1], got d={d} for n={n}")
    if not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    delta = set(range(1, n))
    I = frozenset(delta - {d})
    J = frozenset(delta - {n - d})
    z = longest_element(delta, n) * longest_element(I, n)
    V1 = set(range(1, n - d + 1))
    V2 = set(range(n - d + 1, n + 1))
    full = all_roots(n)
    # E_ij preserves span(S) iff (j in S => i in S)
    P = ParabolicDescriptor(n, frozenset(r for r in full if r.target not in V2 or r.source in V2), type=I)
    Q = ParabolicDescriptor(n, frozenset(r for r in full if r.target not in V1 or r.source in V1), type=J)
    L = levi_roots_of_partition([V1, V2])
    Z = _assemble(n, d, p, I, J, z, P, Q, L, L)
    check_frame(Z)
    return Z


def frame_violations(Z: ZipDatum) -> list[str]:
    """All frame / zip-datum conditions that fail for ``Z`` (empty when valid)."""
    n = Z.n
    bad = []
    phi_plus = positive_roots(n)
    if Z.P.levi != Z.L:
        bad.append("L is not the Levi part of P")
    if Z.Q.levi != Z.M:
        bad.append("M is not the Levi part of Q")
    if Z.L != Z.M:
        bad.append("phi(L) != M")
    if conjugate(standard_parabolic(Z.I, n), Z.z).roots != Z.P.roots:
        bad.append("P is not ^z P_I")
    if standard_parabolic(Z.J, n).roots != Z.Q.roots:
        bad.append("Q is not the standard parabolic of type J")
    if not phi_plus <= Z.Q.roots:
        bad.append("B not in Q")
    zB = conjugate(phi_plus, Z.z)
    if not zB <= Z.P.roots:
        bad.append("^zB not in P")
    if (zB & Z.L) != (phi_plus & Z.M):
        bad.append("phi(^zB ∩ L) != B ∩ M")
    if Z.U != Z.P.roots - Z.L or Z.V != Z.Q.roots - Z.M:
        bad.append("unipotent radicals inconsistent")
    if Z.dim_E != n * n:
        bad.append(f"dim E = {Z.dim_E} != n^2")
    return bad


def check_frame(Z: ZipDatum) -> None:
    bad = frame_violations(Z)
    if bad:
        raise FrameError("; ".join(bad))


def intermediate_parabolics(Z: ZipDatum) -> list[ParabolicDescriptor]:
    """
    All parabolics ``^zB ⊆ P_0 ⊆ P``, realised as ``^z P_K`` for the subsets K
    of simple roots sent by ``z`` into ``Phi_L``.  Sorted by (|K|, K).
    """
    n = Z.n
    admissible = [i for i in range(1, n) if Root(Z.z(i), Z.z(i + 1)) in Z.L]
    out = []
    for r in range(len(admissible) + 1):
        for K in combinations(admissible, r):
            out.append(conjugate(standard_parabolic(K, n), Z.z))
    return out


def _is_intermediate(Z: ZipDatum, P0: ParabolicDescriptor) -> bool:
    return P0.n == Z.n and borel_z(Z) <= P0 <= Z.P


def _type_of(Z: ZipDatum, P0: ParabolicDescriptor) -> frozenset[int]:
    if P0.type is not None:
        return P0.type
    std = conjugate(P0, Z.z.inverse())
    return frozenset(i for i in range(1, Z.n) if Root(i + 1, i) in std.roots)


def derived_zip_datum(Z: ZipDatum, P0: ParabolicDescriptor) -> ZipDatum:
    """The datum Z_0 = (G, P_0, L_0, Q_0, M_0, phi) with ``M_0 = phi(L_0)``, ``Q_0 = M_0 B``."""
    if not _is_intermediate(Z, P0):
        raise ValueError("P0 does not lie between ^zB and P")
    n = Z.n
    I0 = _type_of(Z, P0)
    L0 = P0.levi
    M0 = L0  # Frobenius is trivial on roots
    Q0 = parabolic_closure(positive_roots(n) | M0, n)
    J0 = frozenset(i for i in range(1, n) if simple_root(i) in Q0.levi)
    Q0 = replace(Q0, type=J0)
    P0 = replace(P0, type=I0)
    Z0 = _assemble(n, Z.d, Z.p, I0, J0, Z.z, P0, Q0, L0, M0)
    check_frame(Z0)
    return Z0


@dataclass(frozen=True)
class StratumDescriptor:
    """E-orbit of ``z w``: its parameter ``w``, dimension, and representative ``f_w = z w``."""

    w: Permutation
    length: int
    dimension: int
    representative: Permutation


def stratum_parameters(Z: ZipDatum) -> list[Permutation]:
    """
    The parameter set W^J of the strata (minimal in ``w W_J``), sorted by
    (length, one-line notation).

    Both ^I W and W^J give a system of orbit representatives ``z w`` of the
    same lengths and dimensions, but only for ``w`` in W^J is ``z w`` in
    position with respect to ``^zB``: the stabiliser of its canonical flag
    contains ``^zB``, which is what the flag side needs.
    """
    return min_coset_reps(Z.J, "right", Z.n)


def is_stratum_parameter(w: Permutation, Z: ZipDatum) -> bool:
    """
    ``w ∈ W^J``, cross-checked against the root form ``w(Phi_+ ∩ Phi_M) ⊆ Phi_+``,
    equivalently ``^{zw}(B ∩ M) ⊆ ^zB``.
    """
    if w.n != Z.n:
        return False
    test = is_min_right(w, Z.J)
    roots = conjugate(positive_roots(Z.n) & Z.M, w)
    if test != all(r.positive for r in roots):
        raise AssertionError(f"coset test and root criterion disagree at w={w}")
    return test


def enumerate_strata(Z: ZipDatum) -> list[StratumDescriptor]:
    """One descriptor per parameter ``w``, with ``dim G_w = l(w) + dim P``; sorted by dimension."""
    out = []
    for w in stratum_parameters(Z):
        lw = length(w)
        out.append(StratumDescriptor(w, lw, lw + Z.P.dim, Z.z * w))
    out.sort(key=lambda s: (s.dimension, s.w.images))
    return out


def in_IW(w: Permutation, Z: ZipDatum) -> bool:
    """
    Minimal coset test ``w ∈ ^I W``, cross-checked against the root-level
    equivalence ``^zB ∩ L = ^{zw}B ∩ L``.
    """
    test = is_min_left(w, Z.I)
    phi_plus = positive_roots(Z.n)
    roots_agree = (conjugate(phi_plus, Z.z) & Z.L) == (conjugate(phi_plus, Z.z * w) & Z.L)
    if test != roots_agree:
        raise AssertionError(f"coset test and root criterion disagree at w={w}")
    return test
