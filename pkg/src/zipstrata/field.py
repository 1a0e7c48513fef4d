"""
Small finite fields GF(p^k) and dense matrix arithmetic over them.

Elements are ints ``0 <= x < p^k`` whose base-p digits are the coefficients
of a polynomial residue modulo a fixed irreducible polynomial (Conway
polynomials, frozen below).  All arithmetic goes through precomputed tables,
so a field is cheap to use once built.  Matrices are tuples of row tuples.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

__all__ = ["GF", "CONWAY", "Matrix"]

# monic, coefficients low -> high
CONWAY: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 1): (1, 1),
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 1, 1, 0, 1),
    (3, 1): (1, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 0, 0, 2, 1),
    (5, 1): (3, 1),
    (5, 2): (2, 4, 1),
    (5, 3): (3, 3, 0, 1),
}

Matrix = tuple  # tuple[tuple[int, ...], ...]


class GF:
    """The field with ``p**k`` elements; use :meth:`get` to share instances."""

    def __init__(self, p: int, k: int = 1):
        if (p, k) not in CONWAY:
            raise ValueError(f"no frozen modulus for GF({p}^{k})")
        self.p, self.k, self.q = p, k, p ** k
        self.modulus = CONWAY[(p, k)]
        q = self.q
        self._add = [[self._enc([(a + b) % p for a, b in zip(self._dec(x), self._dec(y))])
                      for y in range(q)] for x in range(q)]
        self._mul = [[self._polymul(x, y) for y in range(q)] for x in range(q)]
        self._neg = [self._enc([(-a) % p for a in self._dec(x)]) for x in range(q)]
        self._inv = [0] * q
        for x in range(1, q):
            for y in range(1, q):
                if self._mul[x][y] == 1:
                    self._inv[x] = y
                    break
            else:
                raise ArithmeticError(f"modulus for GF({p}^{k}) is reducible")
        self._frob = [self.pow(x, p) for x in range(q)]
        self._frob_inv = [0] * q
        for x, fx in enumerate(self._frob):
            self._frob_inv[fx] = x

    @classmethod
    @lru_cache(maxsize=None)
    def get(cls, p: int, k: int = 1) -> GF:
        return cls(p, k)

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.k})"

    def _dec(self, x: int) -> list[int]:
        out = []
        for _ in range(self.k):
            out.append(x % self.p)
            x //= self.p
        return out

    def _enc(self, coeffs: Sequence[int]) -> int:
        x = 0
        for c in reversed(coeffs):
            x = x * self.p + c
        return x

    def _polymul(self, x: int, y: int) -> int:
        p, k, mod = self.p, self.k, self.modulus
        a, b = self._dec(x), self._dec(y)
        prod = [0] * (2 * k - 1)
        for i, ai in enumerate(a):
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
        for deg in range(len(prod) - 1, k - 1, -1):
            c = prod[deg]
            if c:
                for i in range(k + 1):
                    prod[deg - k + i] = (prod[deg - k + i] - c * mod[i]) % p
        return self._enc(prod[:k])

    # scalar arithmetic
    def add(self, x: int, y: int) -> int:
        return self._add[x][y]

    def sub(self, x: int, y: int) -> int:
        return self._add[x][self._neg[y]]

    def mul(self, x: int, y: int) -> int:
        return self._mul[x][y]

    def neg(self, x: int) -> int:
        return self._neg[x]

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("inverse of 0")
        return self._inv[x]

    def pow(self, x: int, e: int) -> int:
        out = 1
        for _ in range(e):
            out = self._mul[out][x]
        return out

    def frob(self, x: int, power: int = 1) -> int:
        """``sigma^power``; negative powers use the inverse Frobenius."""
        table = self._frob if power >= 0 else self._frob_inv
        for _ in range(abs(power) % self.k if self.k > 1 else 0):
            x = table[x]
        return x

    def elements(self) -> range:
        return range(self.q)

    def units(self) -> range:
        return range(1, self.q)

    # matrices
    def zeros(self, rows: int, cols: int | None = None) -> Matrix:
        return tuple((0,) * (rows if cols is None else cols) for _ in range(rows))

    def eye(self, n: int) -> Matrix:
        return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))

    def from_int_matrix(self, m: Sequence[Sequence[int]]) -> Matrix:
        """Embed a 0/1 (or prime-field) integer matrix."""
        return tuple(tuple(int(x) % self.p for x in row) for row in m)

    def matmul(self, a: Matrix, b: Matrix) -> Matrix:
        add, mul = self._add, self._mul
        cols = list(zip(*b))
        out = []
        for row in a:
            r = []
            for col in cols:
                s = 0
                for x, y in zip(row, col):
                    if x and y:
                        s = add[s][mul[x][y]]
                r.append(s)
            out.append(tuple(r))
        return tuple(out)

    def matfrob(self, a: Matrix, power: int = 1) -> Matrix:
        return tuple(tuple(self.frob(x, power) for x in row) for row in a)

    def _rref(self, a: Matrix) -> tuple[list[list[int]], list[int]]:
        m = [list(row) for row in a]
        rows, cols = len(m), len(m[0]) if m else 0
        pivots = []
        r = 0
        for c in range(cols):
            piv = next((i for i in range(r, rows) if m[i][c]), None)
            if piv is None:
                continue
            m[r], m[piv] = m[piv], m[r]
            s = self._inv[m[r][c]]
            m[r] = [self._mul[s][x] for x in m[r]]
            for i in range(rows):
                if i != r and m[i][c]:
                    f = self._neg[m[i][c]]
                    m[i] = [self._add[x][self._mul[f][y]] for x, y in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
            if r == rows:
                break
        return m, pivots

    def rank(self, a: Matrix) -> int:
        return len(self._rref(a)[1])

    def inverse(self, a: Matrix) -> Matrix:
        n = len(a)
        aug = tuple(tuple(row) + e for row, e in zip(a, self.eye(n)))
        m, pivots = self._rref(aug)
        if pivots[:n] != list(range(n)):
            raise ZeroDivisionError("singular matrix")
        return tuple(tuple(row[n:]) for row in m)

    def is_invertible(self, a: Matrix) -> bool:
        return self.rank(a) == len(a)

    def solve(self, a: Matrix, b: Sequence[int]) -> tuple[int, ...]:
        """One solution ``x`` of ``a x = b``; raises if inconsistent."""
        cols = len(a[0])
        aug = tuple(tuple(row) + (bi,) for row, bi in zip(a, b))
        m, pivots = self._rref(aug)
        if cols in pivots:
            raise ValueError("inconsistent linear system")
        x = [0] * cols
        for row, c in zip(m, pivots):
            x[c] = row[cols]
        return tuple(x)

    def nullspace(self, a: Matrix, cols: int | None = None) -> list[tuple[int, ...]]:
        """A basis of ``{x : a x = 0}``; ``cols`` is needed when ``a`` has no rows."""
        cols = len(a[0]) if a else cols
        if cols is None:
            raise ValueError("cannot infer the number of columns of an empty matrix")
        if not a:
            return [tuple(1 if i == j else 0 for i in range(cols)) for j in range(cols)]
        m, pivots = self._rref(a)
        free = [c for c in range(cols) if c not in pivots]
        basis = []
        for f in free:
            x = [0] * cols
            x[f] = 1
            for row, c in zip(m, pivots):
                x[c] = self._neg[row[f]]
            basis.append(tuple(x))
        return basis

    def column_space_basis(self, a: Matrix) -> Matrix:
        """Columns of ``a`` at pivot positions, returned as an n x r matrix."""
        _, pivots = self._rref(a)
        return tuple(tuple(row[c] for c in pivots) for row in a)

    def hstack(self, a: Matrix, b: Matrix) -> Matrix:
        return tuple(tuple(x) + tuple(y) for x, y in zip(a, b))
