"""
The symmetric group S_n as the Weyl group of GL_n.

Permutations are stored in one-line notation on ``1..n`` and composed as
functions, ``(u * v)(i) == u(v(i))``.  A permutation ``w`` acts on the basis
by ``e_i -> e_{w(i)}``, which makes its permutation matrix the lift used
everywhere else in the package.

Simple roots are indexed by ``i in 1..n-1`` (``alpha_i = e_i - e_{i+1}``) and
subsets of simple roots are plain ``frozenset[int]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations
from typing import Iterable, Iterator, Literal

__all__ = [
    "Permutation", "SimpleSubset",
    "simple_subset", "identity", "simple_reflection", "all_permutations",
    "length", "longest_element", "parabolic_subgroup", "blocks_of",
    "left_descents", "right_descents", "is_min_left", "is_min_right",
    "min_coset_reps", "double_coset_reps", "double_coset_min", "decompose",
    "conjugate_subset", "reduced_word", "bruhat_leq",
]

SimpleSubset = frozenset  # frozenset[int], members in 1..n-1


def simple_subset(members: Iterable[int] = ()) -> frozenset[int]:
    return frozenset(int(m) for m in members)


@dataclass(frozen=True, order=True)
class Permutation:
    """A permutation of ``{1..n}`` in one-line notation: ``images[i-1] == w(i)``."""

    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(x) for x in self.images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"not a permutation of 1..{len(images)}: {self.images}")
        object.__setattr__(self, "images", images)

    @classmethod
    def parse(cls, text: str) -> Permutation:
        """Read the external encoding ``"3,1,2"``."""
        parts = [p for p in text.replace(" ", "").split(",") if p]
        if not parts:
            raise ValueError(f"empty permutation string: {text!r}")
        return cls(tuple(int(p) for p in parts))

    def __str__(self) -> str:
        return ",".join(map(str, self.images))

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __mul__(self, other: Permutation) -> Permutation:
        if self.n != other.n:
            raise ValueError("cannot compose permutations of different degrees")
        return Permutation(tuple(self.images[j - 1] for j in other.images))

    def __pow__(self, k: int) -> Permutation:
        base = self if k >= 0 else self.inverse()
        out = identity(self.n)
        for _ in range(abs(k)):
            out = out * base
        return out

    def inverse(self) -> Permutation:
        inv = [0] * self.n
        for i, wi in enumerate(self.images, start=1):
            inv[wi - 1] = i
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return self.images == tuple(range(1, self.n + 1))

    def order(self) -> int:
        k, w = 1, self
        while not w.is_identity():
            w = w * self
            k += 1
        return k

    def cycles(self) -> list[tuple[int, ...]]:
        seen: set[int] = set()
        out = []
        for start in range(1, self.n + 1):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            nxt = self(start)
            while nxt != start:
                cyc.append(nxt)
                seen.add(nxt)
                nxt = self(nxt)
            out.append(tuple(cyc))
        return out

    def matrix(self) -> list[list[int]]:
        """Permutation matrix with ``M e_i = e_{w(i)}`` (column i has its 1 in row w(i))."""
        m = [[0] * self.n for _ in range(self.n)]
        for i, wi in enumerate(self.images):
            m[wi - 1][i] = 1
        return m


def identity(n: int) -> Permutation:
    return Permutation(tuple(range(1, n + 1)))


def simple_reflection(i: int, n: int) -> Permutation:
    if not 1 <= i <= n - 1:
        raise ValueError(f"simple reflection index {i} out of range for n={n}")
    images = list(range(1, n + 1))
    images[i - 1], images[i] = images[i], images[i - 1]
    return Permutation(tuple(images))


@lru_cache(maxsize=None)
def all_permutations(n: int) -> tuple[Permutation, ...]:
    return tuple(Permutation(p) for p in permutations(range(1, n + 1)))


def length(w: Permutation) -> int:
    """Number of inversions, i.e. the Coxeter length."""
    im = w.images
    return sum(1 for a, b in combinations(range(w.n), 2) if im[a] > im[b])


def blocks_of(K: Iterable[int], n: int) -> list[tuple[int, ...]]:
    """Consecutive blocks of ``1..n`` glued along the simple roots in ``K``."""
    K = set(K)
    blocks, cur = [], [1]
    for i in range(1, n):
        if i in K:
            cur.append(i + 1)
        else:
            blocks.append(tuple(cur))
            cur = [i + 1]
    blocks.append(tuple(cur))
    return blocks


def _check_subset(K: Iterable[int], n: int) -> frozenset[int]:
    K = frozenset(K)
    if any(not 1 <= i <= n - 1 for i in K):
        raise ValueError(f"simple subset {sorted(K)} not contained in 1..{n - 1}")
    return K


def longest_element(K: Iterable[int], n: int) -> Permutation:
    """Longest element of W_K: reverses each block of K."""
    K = _check_subset(K, n)
    images = []
    for block in blocks_of(K, n):
        images.extend(reversed(block))
    return Permutation(tuple(images))


def parabolic_subgroup(K: Iterable[int], n: int) -> list[Permutation]:
    """All elements of W_K (permutations preserving each block of K)."""
    K = _check_subset(K, n)
    blocks = blocks_of(K, n)
    out = []
    for w in all_permutations(n):
        if all(set(w(i) for i in b) == set(b) for b in blocks):
            out.append(w)
    return out


def left_descents(w: Permutation) -> frozenset[int]:
    """Simple i with l(s_i w) < l(w), equivalently w^{-1}(alpha_i) < 0."""
    inv = w.inverse()
    return frozenset(i for i in range(1, w.n) if inv(i) > inv(i + 1))


def right_descents(w: Permutation) -> frozenset[int]:
    """Simple i with l(w s_i) < l(w)."""
    return frozenset(i for i in range(1, w.n) if w(i) > w(i + 1))


def is_min_left(w: Permutation, K: Iterable[int]) -> bool:
    """``w`` is minimal in ``W_K w``."""
    return not (left_descents(w) & frozenset(K))


def is_min_right(w: Permutation, K: Iterable[int]) -> bool:
    """``w`` is minimal in ``w W_K``."""
    return not (right_descents(w) & frozenset(K))


def min_coset_reps(K: Iterable[int], side: Literal["left", "right"], n: int) -> list[Permutation]:
    """
    Minimal length coset representatives, by descent filtering.

    ``side="left"`` gives ^K W (minimal in W_K w), ``side="right"`` gives W^K
    (minimal in w W_K).  Output is sorted by (length, one-line notation).
    """
    K = _check_subset(K, n)
    if side == "left":
        test = is_min_left
    elif side == "right":
        test = is_min_right
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    reps = [w for w in all_permutations(n) if test(w, K)]
    return sorted(reps, key=lambda w: (length(w), w.images))


def double_coset_reps(K: Iterable[int], R: Iterable[int], n: int) -> list[Permutation]:
    """^K W^R, the minimal representatives of W_K \\ W / W_R."""
    K, R = _check_subset(K, n), _check_subset(R, n)
    reps = [w for w in all_permutations(n) if is_min_left(w, K) and is_min_right(w, R)]
    return sorted(reps, key=lambda w: (length(w), w.images))


def double_coset_min(w: Permutation, K: Iterable[int], R: Iterable[int]) -> Permutation:
    """Minimal element of W_K w W_R, by stripping descents until none are left."""
    K, R = frozenset(K), frozenset(R)
    n = w.n
    while True:
        left = left_descents(w) & K
        if left:
            w = simple_reflection(min(left), n) * w
            continue
        right = right_descents(w) & R
        if right:
            w = w * simple_reflection(min(right), n)
            continue
        return w


def conjugate_subset(x: Permutation, K: Iterable[int], J: Iterable[int]) -> frozenset[int]:
    """``J ∩ x^{-1} K x`` on simple roots: those j in J with x(alpha_j) a simple root in K."""
    K = frozenset(K)
    return frozenset(j for j in J if x(j + 1) == x(j) + 1 and x(j) in K)


def decompose(w: Permutation, I: Iterable[int], J: Iterable[int]) -> tuple[Permutation, Permutation]:
    """
    Split ``w`` in ^I W as ``x * w_J`` with ``x`` in ^I W^J and ``w_J`` in ^{I_x} W_J,
    where ``I_x = J ∩ x^{-1} I x``.  Lengths add.
    """
    I, J = frozenset(I), frozenset(J)
    if not is_min_left(w, I):
        raise ValueError(f"{w} is not a minimal representative of W_I w for I={sorted(I)}")
    x = double_coset_min(w, I, J)
    wJ = x.inverse() * w
    Ix = conjugate_subset(x, I, J)
    blocks = blocks_of(J, w.n)
    # the factorisation is a theorem; these guard the conventions
    assert all(set(wJ(i) for i in b) == set(b) for b in blocks), "w_J left W_J"
    assert is_min_left(wJ, Ix)
    assert length(w) == length(x) + length(wJ)
    return x, wJ


def reduced_word(w: Permutation) -> list[int]:
    """A reduced word ``[i_1, ..., i_l]`` with ``w = s_{i_1} ... s_{i_l}``."""
    word = []
    while True:
        desc = right_descents(w)
        if not desc:
            break
        i = min(desc)
        word.append(i)
        w = w * simple_reflection(i, w.n)
    return word[::-1]


def bruhat_leq(u: Permutation, w: Permutation) -> bool:
    """Bruhat order via the rank-matrix (tableau) criterion."""
    if u.n != w.n:
        raise ValueError("permutations of different degrees")
    n = u.n
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            cu = sum(1 for a in range(1, i + 1) if u(a) >= j)
            cw = sum(1 for a in range(1, i + 1) if w(a) >= j)
            if cu > cw:
                return False
    return True


def iter_subwords(word: list[int], n: int) -> Iterator[Permutation]:
    """Products of all subwords of ``word`` (with repetition); exponential."""
    for mask in range(1 << len(word)):
        out = identity(n)
        for pos, i in enumerate(word):
            if mask >> pos & 1:
                out = out * simple_reflection(i, n)
        yield out
