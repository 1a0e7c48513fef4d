"""
Canonical parabolics of zip strata and the two criteria that characterise them.

For a stratum parameter ``w`` (see ``rootzip.stratum_parameters``) the Levi ``M_w`` is the largest Frobenius-twisted stable
subgroup of ``^{(zw)^{-1}} L``; with Frobenius trivial on roots this is the
largest ``zw``-stable subset of ``Phi_L``.  From it come ``L_w = ^{zw} M_w``,
``P_w = L_w . ^zB`` and ``Q_w = M_w . B``.

For an intermediate parabolic ``^zB ⊆ P_0 ⊆ P`` two properties are tested:

* (i)  the projection of the fine flag stratum onto ``G_w`` is an isomorphism,
       decided by ``P_w ⊆ P_0`` and, independently, by the index of
       ``A_1 ∩ P_0`` in the finite group ``A_1``;
* (ii) the fine flag stratum is open in its coarse stratum, decided by
       ``^{zw} M_0 = L_0`` and, independently, by comparing orbit dimensions.

The two routes for (ii) do not always agree; reports carry both and the
scans say where they differ instead of hiding it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod
from typing import Iterator, Literal

from .field import CONWAY, GF
from .rootzip import (
    ParabolicDescriptor, Root, ZipDatum, borel_z, conjugate, derived_zip_datum,
    intermediate_parabolics, is_stratum_parameter, parabolic_closure, positive_roots,
)
from .weyl import Permutation, double_coset_min, is_min_right, length

__all__ = [
    "CanonicalData", "CriterionReport", "Certificate",
    "TheoremInconsistency", "BudgetExceeded",
    "compute_Mw", "canonical_data", "ordered_blocks",
    "is_pi_isomorphism", "has_coarse_closure", "fine_stratum_dim",
    "coarse_stratum_dim", "criterion_report", "canonical_parabolic_scan",
    "canonical_parabolic_certified",
    "stabilizer_dimension", "gl_order", "block_cycles", "a1_order",
    "enumerate_a1", "a1_cycle_solutions", "pi_degree",
]

DEFAULT_BUDGET = 200_000


class TheoremInconsistency(RuntimeError):
    """A criterion scan contradicted the canonical-parabolic theorem."""


class BudgetExceeded(RuntimeError):
    """A brute-force enumeration would exceed its configured budget."""


def _require_param(Z: ZipDatum, w: Permutation) -> None:
    if w.n != Z.n:
        raise ValueError(f"w has degree {w.n}, datum has n={Z.n}")
    if not is_stratum_parameter(w, Z):
        raise ValueError(f"{w} is not a stratum parameter (W^J, J={sorted(Z.J)})")


def _require_intermediate(Z: ZipDatum, P0: ParabolicDescriptor) -> None:
    if P0.n != Z.n or not (borel_z(Z) <= P0 <= Z.P):
        raise ValueError("P0 does not lie between ^zB and P")


def compute_Mw(Z: ZipDatum, w: Permutation, orientation: Literal["zw", "wz"] = "zw") -> frozenset[Root]:
    """
    Roots of M_w: the intersection of ``g^k Phi_L`` over ``k``, ``g = z w``.

    ``orientation="wz"`` uses ``g = w z`` instead; it exists only so tests can
    show that convention is wrong.
    """
    _require_param(Z, w)
    g = Z.z * w if orientation == "zw" else w * Z.z
    out = frozenset(Z.L)
    gk = g
    for _ in range(g.order() - 1):
        out &= conjugate(Z.L, gk)
        gk = gk * g
    return out


def ordered_blocks(P: ParabolicDescriptor) -> list[frozenset[int]]:
    """Levi blocks of ``P`` in the order of the flag it stabilises."""
    blocks = P.blocks()

    def preceding(b: frozenset[int]) -> int:
        i = min(b)
        return sum(1 for c in blocks if c != b and Root(min(c), i) in P.roots)

    return sorted(blocks, key=preceding)


@dataclass(frozen=True)
class CanonicalData:
    w: Permutation
    Mw_roots: frozenset[Root]
    Lw_roots: frozenset[Root]
    Pw: ParabolicDescriptor
    Qw: ParabolicDescriptor
    blocks: tuple[frozenset[int], ...]
    datum: ZipDatum = field(repr=False, compare=False)


def canonical_data(Z: ZipDatum, w: Permutation, orientation: Literal["zw", "wz"] = "zw") -> CanonicalData:
    """Assemble ``M_w, L_w, P_w, Q_w`` and the zip datum ``Z_w``."""
    Mw = compute_Mw(Z, w, orientation)
    zw = Z.z * w
    Lw = conjugate(Mw, zw)
    n = Z.n
    zB = borel_z(Z)
    Pw = parabolic_closure(Lw | zB.roots, n)
    Qw = parabolic_closure(Mw | positive_roots(n), n)
    if not (Lw <= Z.L and Mw <= Z.M):
        raise AssertionError("L_w or M_w escaped the Levi of Z")
    if Pw.levi != Lw or Qw.levi != Mw:
        raise AssertionError("P_w / Q_w Levi parts differ from L_w / M_w")
    # Z_w coincides with the derived datum at P_0 = P_w; building it checks the frame
    Zw = derived_zip_datum(Z, Pw)
    if Zw.Q != Qw:
        raise AssertionError("Q_w differs from the derived Q_0 at P_w")
    return CanonicalData(w, Mw, Lw, Zw.P, Zw.Q, tuple(ordered_blocks(Pw)), Zw)


def is_pi_isomorphism(Z: ZipDatum, w: Permutation, P0: ParabolicDescriptor) -> bool:
    """Criterion (i) in its root form ``P_w ⊆ P_0``."""
    _require_intermediate(Z, P0)
    return canonical_data(Z, w).Pw <= P0


def has_coarse_closure(Z: ZipDatum, w: Permutation, P0: ParabolicDescriptor) -> bool:
    """Criterion (ii) in its Levi form ``^{zw} M_0 = L_0``."""
    _require_param(Z, w)
    Z0 = derived_zip_datum(Z, P0)
    return conjugate(Z0.M, Z.z * w) == Z0.L


def fine_stratum_dim(Z: ZipDatum, w: Permutation, P0: ParabolicDescriptor) -> int:
    """Dimension of the E_{Z_0}-orbit of ``z w``: ``dim P_0 + l(w)``, for ``w`` in W^{J_0}."""
    Z0 = derived_zip_datum(Z, P0)
    if not is_min_right(w, Z0.J):
        raise ValueError(f"{w} is not in W^{{J_0}} for J_0={sorted(Z0.J)}")
    return Z0.P.dim + length(w)


def coarse_stratum_dim(Z: ZipDatum, x: Permutation, P0: ParabolicDescriptor) -> int:
    """Dimension of ``P_0 z x Q_0``: ``2 dim P_0 - dim(P_0 ∩ ^{zx} Q_0)``."""
    Z0 = derived_zip_datum(Z, P0)
    if double_coset_min(x, Z0.I, Z0.J) != x:
        raise ValueError(f"{x} is not in ^{{I_0}} W^{{J_0}}")
    stab = Z0.P.roots & conjugate(Z0.Q.roots, Z.z * x)
    return 2 * Z0.P.dim - (Z.n + len(stab))


@dataclass(frozen=True)
class CriterionReport:
    """
    Both criteria at one intermediate parabolic.  ``has_coarse_closure`` is
    the Levi form; ``fine_dim == coarse_dim`` is the dimension form.
    """

    P0_type: frozenset[int]
    pi_is_isomorphism: bool
    has_coarse_closure: bool
    fine_dim: int
    coarse_dim: int
    pi_degree: int | None = None

    @property
    def open_by_dimension(self) -> bool:
        return self.fine_dim == self.coarse_dim

    @property
    def routes_agree(self) -> bool:
        return self.has_coarse_closure == self.open_by_dimension

    @property
    def degree_agrees(self) -> bool:
        return self.pi_degree is None or (self.pi_degree == 1) == self.pi_is_isomorphism


def criterion_report(Z: ZipDatum, w: Permutation, P0: ParabolicDescriptor, budget: int = 0) -> CriterionReport:
    """
    Evaluate both criteria at ``P0``.  With ``budget > 0`` the degree of the
    projection is also computed by enumeration when affordable.
    """
    Z0 = derived_zip_datum(Z, P0)
    x = double_coset_min(w, Z0.I, Z0.J)
    fine = fine_stratum_dim(Z, w, P0)
    coarse = coarse_stratum_dim(Z, x, P0)
    closure = has_coarse_closure(Z, w, P0)
    iso = is_pi_isomorphism(Z, w, P0)
    degree = None
    if budget > 0:
        try:
            degree = pi_degree(Z, w, P0, budget=budget)
        except BudgetExceeded:
            degree = None
    return CriterionReport(Z0.I, iso, closure, fine, coarse, degree)


@dataclass(frozen=True)
class Certificate:
    """
    Criterion scan over all intermediate parabolics for one stratum.

    ``smallest_for_i``, ``largest_for_ii`` and ``unique_canonical`` are the
    extremal claims; ``exact_i`` / ``exact_ii`` the sharper statements that (i)
    holds exactly above ``P_w`` and (ii) exactly below it; ``routes_agree``
    that the Levi and dimension forms of (ii) coincide everywhere and
    ``degrees_agree`` that every computed degree matches (i).  Criterion (ii)
    is read in its Levi form throughout.
    """

    w: Permutation
    Pw_type: frozenset[int]
    reports: tuple[CriterionReport, ...]
    smallest_for_i: bool
    largest_for_ii: bool
    unique_canonical: bool
    exact_i: bool
    exact_ii: bool
    routes_agree: bool
    degrees_agree: bool

    @property
    def ok(self) -> bool:
        return all((self.smallest_for_i, self.largest_for_ii, self.unique_canonical,
                    self.exact_i, self.exact_ii, self.routes_agree, self.degrees_agree))

    def failures(self) -> list[str]:
        names = ("smallest_for_i", "largest_for_ii", "unique_canonical",
                 "exact_i", "exact_ii", "routes_agree", "degrees_agree")
        return [name for name in names if not getattr(self, name)]


def canonical_parabolic_scan(Z: ZipDatum, w: Permutation, budget: int = 0) -> tuple[ParabolicDescriptor, Certificate]:
    """``P_w`` and the criterion scan over every intermediate parabolic; never raises on a failed claim."""
    Pw = canonical_data(Z, w).Pw
    parabolics = intermediate_parabolics(Z)
    reports = [criterion_report(Z, w, P0, budget) for P0 in parabolics]
    good_i = [P0 for P0, r in zip(parabolics, reports) if r.pi_is_isomorphism]
    good_ii = [P0 for P0, r in zip(parabolics, reports) if r.has_coarse_closure]
    both = [P0 for P0 in good_i if P0 in good_ii]
    cert = Certificate(
        w=w,
        Pw_type=_type_in(parabolics, Pw),
        reports=tuple(reports),
        smallest_for_i=Pw in good_i and all(Pw <= P0 for P0 in good_i),
        largest_for_ii=Pw in good_ii and all(P0 <= Pw for P0 in good_ii),
        unique_canonical=both == [Pw],
        exact_i=all(r.pi_is_isomorphism == (Pw <= P0) for P0, r in zip(parabolics, reports)),
        exact_ii=all(r.has_coarse_closure == (P0 <= Pw) for P0, r in zip(parabolics, reports)),
        routes_agree=all(r.routes_agree for r in reports),
        degrees_agree=all(r.degree_agrees for r in reports),
    )
    return Pw, cert


def _type_in(parabolics: list[ParabolicDescriptor], P: ParabolicDescriptor) -> frozenset[int]:
    for P0 in parabolics:
        if P0 == P:
            return P0.type
    raise AssertionError("P_w is not an intermediate parabolic")


def canonical_parabolic_certified(Z: ZipDatum, w: Permutation, budget: int = 0) -> tuple[ParabolicDescriptor, Certificate]:
    """
    ``P_w`` with a certificate: it is the smallest intermediate parabolic with
    property (i), the largest with property (ii), and the only one with both.
    Raises :class:`TheoremInconsistency` when any claim of the scan fails.
    """
    Pw, cert = canonical_parabolic_scan(Z, w, budget)
    if not cert.ok:
        raise TheoremInconsistency(f"criterion scan for w={w} failed: {', '.join(cert.failures())}")
    return Pw, cert


def stabilizer_dimension(Z: ZipDatum, w: Permutation) -> int:
    """``dim E - dim G_w = d(n-d) - l(w)``."""
    _require_param(Z, w)
    return Z.dim_E - (length(w) + Z.P.dim)


def gl_order(m: int, q: int) -> int:
    return prod(q ** m - q ** i for i in range(m))


def block_cycles(Z: ZipDatum, w: Permutation) -> list[list[frozenset[int]]]:
    """Cycles of ``z w`` acting on the Levi blocks of ``L_w``."""
    data = canonical_data(Z, w)
    g = Z.z * w
    blocks = list(data.blocks)
    image = {}
    for b in blocks:
        gb = frozenset(g(i) for i in b)
        if gb not in blocks:
            raise AssertionError(f"z w does not permute the blocks of L_w (w={w})")
        image[b] = gb
    seen, cycles = set(), []
    for b in blocks:
        if b in seen:
            continue
        cyc = [b]
        seen.add(b)
        nxt = image[b]
        while nxt != b:
            cyc.append(nxt)
            seen.add(nxt)
            nxt = image[nxt]
        cycles.append(cyc)
    return cycles


def a1_order(Z: ZipDatum, w: Permutation) -> int:
    """
    ``|A_1|`` for ``A_1 = {x in L_w : zw phi(x) (zw)^{-1} = x}``: a cycle of
    ``c`` blocks of size ``m`` contributes ``|GL_m(F_{p^c})|``.
    """
    _require_param(Z, w)
    return prod(gl_order(len(cyc[0]), Z.p ** len(cyc)) for cyc in block_cycles(Z, w))


def _splitting_field(Z: ZipDatum, w: Permutation) -> GF:
    # every fixed point satisfies x = sigma^r(x) with r = ord(z w)
    r = (Z.z * w).order()
    if (Z.p, r) not in CONWAY:
        raise BudgetExceeded(f"GF({Z.p}^{r}) is not tabulated")
    return GF.get(Z.p, r)


def _is_fixed(F: GF, g: Permutation, x: dict[tuple[int, int], int], idx: list[tuple[int, int]]) -> bool:
    return all(x[(g(i), g(j))] == F.frob(x[(i, j)]) for i, j in idx)


def enumerate_a1(Z: ZipDatum, w: Permutation, budget: int = DEFAULT_BUDGET) -> Iterator[dict[tuple[int, int], int]]:
    """
    Brute force: run over every block-diagonal matrix of ``L_w`` over the
    splitting field and keep the invertible fixed points.  Yields entry maps
    ``{(i, j): value}`` on the block positions.
    """
    _require_param(Z, w)
    F = _splitting_field(Z, w)
    blocks = canonical_data(Z, w).blocks
    idx = [(i, j) for b in blocks for i in sorted(b) for j in sorted(b)]
    if F.q ** len(idx) > budget:
        raise BudgetExceeded(f"{F.q}^{len(idx)} candidates exceed budget {budget}")
    g = Z.z * w
    for values in _product(F.q, len(idx)):
        x = dict(zip(idx, values))
        if not _is_fixed(F, g, x, idx):
            continue
        if all(F.is_invertible(_block(x, b)) for b in blocks):
            yield x


def _product(q: int, k: int) -> Iterator[tuple[int, ...]]:
    if k == 0:
        yield ()
        return
    for head in range(q):
        for tail in _product(q, k - 1):
            yield (head,) + tail


def _block(x: dict[tuple[int, int], int], b: frozenset[int]) -> tuple:
    s = sorted(b)
    return tuple(tuple(x[(i, j)] for j in s) for i in s)


def a1_cycle_solutions(Z: ZipDatum, w: Permutation, budget: int = DEFAULT_BUDGET) -> list[list[dict[tuple[int, int], int]]]:
    """
    ``A_1`` factored along block cycles: for each cycle, the list of its
    components (entries on the cycle's blocks).  ``A_1`` is their product.
    The first block of a cycle is enumerated; the rest is forced.
    """
    _require_param(Z, w)
    F = _splitting_field(Z, w)
    g = Z.z * w
    cycles = block_cycles(Z, w)
    cost = sum(F.q ** (len(c[0]) ** 2) for c in cycles)
    if cost > budget:
        raise BudgetExceeded(f"{cost} candidates exceed budget {budget}")
    out = []
    for cyc in cycles:
        first = sorted(cyc[0])
        idx0 = [(i, j) for i in first for j in first]
        sols = []
        for values in _product(F.q, len(idx0)):
            if not F.is_invertible(tuple(tuple(values[r * len(first):(r + 1) * len(first)]) for r in range(len(first)))):
                continue
            x = dict(zip(idx0, values))
            cur = idx0
            for _ in range(len(cyc) - 1):
                nxt = [(g(i), g(j)) for i, j in cur]
                for (i, j), (gi, gj) in zip(cur, nxt):
                    x[(gi, gj)] = F.frob(x[(i, j)])
                cur = nxt
            if all(x[(g(i), g(j))] == F.frob(x[(i, j)]) for i, j in cur):
                sols.append(x)
        out.append(sols)
    return out


def _in_parabolic(x: dict[tuple[int, int], int], P0: ParabolicDescriptor) -> bool:
    return all(v == 0 or i == j or Root(i, j) in P0.roots for (i, j), v in x.items())


def pi_degree(Z: ZipDatum, w: Permutation, P0: ParabolicDescriptor, budget: int = DEFAULT_BUDGET) -> int:
    """Index ``[A_1 : A_1 ∩ P_0]``, the degree of the projection of the fine stratum."""
    _require_intermediate(Z, P0)
    total, inside = 1, 1
    for sols in a1_cycle_solutions(Z, w, budget):
        total *= len(sols)
        inside *= sum(1 for x in sols if _in_parabolic(x, P0))
    if total % inside:
        raise AssertionError("A_1 ∩ P_0 is not a subgroup of A_1")
    return total // inside
