"""
Property checks over ranges of (n, d), shared by the ``verify`` command and
the acceptance tests.  Every check returns a :class:`CheckResult` and never
raises on a failed property; failures are counted and the first few are
described in ``detail``.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from math import comb, factorial
from typing import Callable, Iterable

from .canonical import (
    a1_order, canonical_data, canonical_parabolic_scan, enumerate_a1,
    pi_degree, stabilizer_dimension, BudgetExceeded, DEFAULT_BUDGET,
)
from .dieudonne import (
    all_complements, canonical_flag, canonical_type, check_transform,
    exhaustive_coarsest_flag, flag_stabilizer, in_V, psi, random_complement,
    random_P, random_pair, standard_pair, EXHAUSTIVE_MAX_N,
)
from .field import GF
from .rootzip import (
    derived_zip_datum, enumerate_strata, gl_zip_datum, intermediate_parabolics,
    stratum_parameters, ZipDatum,
)
from .weyl import (
    Permutation, conjugate_subset, decompose,
    double_coset_reps, is_min_left, length, min_coset_reps, parabolic_subgroup,
)

MAX_DETAIL = 3


@dataclass
class CheckResult:
    name: str
    checked: int = 0
    failures: int = 0
    seconds: float = 0.0
    notes: list[str] = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    @property
    def detail(self) -> str:
        head = f"{self.checked - self.failures}/{self.checked} ok"
        if self.extra:
            head += "; " + ", ".join(f"{k}={v}" for k, v in sorted(self.extra.items()))
        if self.notes:
            head += "; e.g. " + " | ".join(self.notes[:MAX_DETAIL])
        return head

    def fail(self, note: str) -> None:
        self.failures += 1
        if len(self.notes) < MAX_DETAIL:
            self.notes.append(note)

    def as_dict(self) -> dict:
        return {"name": self.name, "pass": self.passed, "detail": self.detail,
                "checked": self.checked, "failures": self.failures,
                "seconds": round(self.seconds, 3)}


def cases(n_max: int, n_min: int = 2, d: int | None = None) -> list[tuple[int, int]]:
    out = []
    for n in range(n_min, n_max + 1):
        for dd in range(1, n):
            if d is None or dd == d:
                out.append((n, dd))
    return out


def _timed(name: str, body: Callable[[CheckResult], None]) -> CheckResult:
    res = CheckResult(name)
    t0 = time.perf_counter()
    body(res)
    res.seconds = time.perf_counter() - t0
    return res


def check_flag_stabilizer(case_list: Iterable[tuple[int, int]], p: int = 2) -> CheckResult:
    """Stabiliser of the canonical flag equals ``P_w``, with the same ordered blocks."""
    def body(res):
        for n, d in case_list:
            Z = gl_zip_datum(n, d, p)
            for w in stratum_parameters(Z):
                res.checked += 1
                P, blocks = flag_stabilizer(Z, canonical_flag(Z, w))
                data = canonical_data(Z, w)
                if P != data.Pw or tuple(blocks) != tuple(data.blocks):
                    res.fail(f"({n},{d}) w={w}")
    return _timed("flag_stabilizer_equals_Pw", body)


def check_theorem_scan(case_list: Iterable[tuple[int, int]], p: int = 2,
                       budget: int = 20_000) -> CheckResult:
    """
    Over every intermediate ``P0``: (i) holds exactly when ``P_w ⊆ P0``,
    (ii) exactly when ``P0 ⊆ P_w``, and ``P_w`` is the only ``P0`` with both.
    (i) is read from the degree ``[A_1 : A_1 ∩ P0]`` whenever the enumeration
    fits in ``budget``, else from root containment; (ii) is the Levi form.
    """
    def body(res):
        enumerated = 0
        for n, d in case_list:
            Z = gl_zip_datum(n, d, p)
            parabolics = intermediate_parabolics(Z)
            for w in stratum_parameters(Z):
                res.checked += 1
                Pw, cert = canonical_parabolic_scan(Z, w, budget)
                bad = []
                holds_i = []
                for P0, r in zip(parabolics, cert.reports):
                    if r.pi_degree is not None:
                        enumerated += 1
                        holds_i.append(r.pi_degree == 1)
                    else:
                        holds_i.append(r.pi_is_isomorphism)
                if any(h != (Pw <= P0) for h, P0 in zip(holds_i, parabolics)):
                    bad.append("(i) not exactly above P_w")
                if not cert.exact_ii:
                    bad.append("(ii) not exactly below P_w")
                both = [P0 for P0, h, r in zip(parabolics, holds_i, cert.reports)
                        if h and r.has_coarse_closure]
                if both != [Pw]:
                    bad.append("P_w is not the unique parabolic with both")
                if bad:
                    res.fail(f"({n},{d}) w={w}: " + ", ".join(bad))
        res.extra["degrees_enumerated"] = enumerated
    return _timed("theorem_uniqueness_scan", body)


def check_closure_routes(case_list: Iterable[tuple[int, int]], p: int = 2) -> CheckResult:
    """Levi form of coarse closure agrees with the dimension comparison on every tuple; both hold at ^zB."""
    def body(res):
        borel_bad = 0
        for n, d in case_list:
            Z = gl_zip_datum(n, d, p)
            for w in stratum_parameters(Z):
                _, cert = canonical_parabolic_scan(Z, w)
                for k, r in enumerate(cert.reports):
                    res.checked += 1
                    if k == 0 and not (r.has_coarse_closure and r.open_by_dimension):
                        borel_bad += 1
                        res.fail(f"({n},{d}) w={w} at ^zB")
                    elif not r.routes_agree:
                        res.fail(f"({n},{d}) w={w} P0 type {sorted(r.P0_type)}: "
                                 f"Levi {r.has_coarse_closure}, dims {r.fine_dim}/{r.coarse_dim}")
        res.extra["borel_failures"] = borel_bad
    return _timed("coarse_closure_routes_agree", body)


def check_flag_oracle(case_list: Iterable[tuple[int, int]], p: int = 2) -> CheckResult:
    """Operator closure equals the intersection of all stable coordinate flags."""
    def body(res):
        for n, d in case_list:
            if n > EXHAUSTIVE_MAX_N:
                continue
            Z = gl_zip_datum(n, d, p)
            for w in stratum_parameters(Z):
                res.checked += 1
                if canonical_flag(Z, w) != exhaustive_coarsest_flag(Z, w):
                    res.fail(f"({n},{d}) w={w}")
    return _timed("canonical_flag_matches_exhaustive", body)


def check_transform_law(case_list: Iterable[tuple[int, int]], p: int = 2, k: int = 2,
                        trials: int = 100, seed: int = 0) -> CheckResult:
    """``M f_H = f'_{H'} sigma(Mbar)`` on random triples over GF(p^k)."""
    def body(res):
        rng = random.Random(seed)
        F = GF.get(p, k)
        for n, d in case_list:
            Z = gl_zip_datum(n, d, p)
            for _ in range(trials):
                res.checked += 1
                pair = random_pair(Z, rng, k)
                H = random_complement(pair, rng)
                M = random_P(F, Z, rng)
                if not check_transform(M, pair, H, Z):
                    res.fail(f"({n},{d})")
    return _timed("transform_law", body)


def check_psi_well_defined(case_list: Iterable[tuple[int, int]], p: int = 2, k: int = 1) -> CheckResult:
    """
    For each standard pair and every two complements ``H, H'`` of ``im a``
    (all subspaces over GF(p^k), not only coordinate ones):
    ``f_H^{-1} f_{H'}`` lies in ``V``.
    """
    def body(res):
        F = GF.get(p, k)
        for n, d in case_list:
            Z = gl_zip_datum(n, d, p)
            for w in stratum_parameters(Z):
                pair = standard_pair(Z, w, k)
                comps = all_complements(pair)
                fs = {H: psi(pair, H) for H in comps}
                for H in comps:
                    inv = F.inverse(fs[H])
                    for H2 in comps:
                        res.checked += 1
                        if not in_V(F.matmul(inv, fs[H2]), Z):
                            res.fail(f"({n},{d}) w={w}")
    return _timed("psi_well_defined", body)


def check_a1_orders(case_list: Iterable[tuple[int, int]], p: int = 2,
                    budget: int = DEFAULT_BUDGET) -> CheckResult:
    """Cycle-product formula for ``|A_1|`` against naive fixed-point enumeration."""
    def body(res):
        for n, d in case_list:
            Z = gl_zip_datum(n, d, p)
            for w in stratum_parameters(Z):
                res.checked += 1
                formula = a1_order(Z, w)
                try:
                    brute = sum(1 for _ in enumerate_a1(Z, w, budget))
                except BudgetExceeded as exc:
                    res.fail(f"({n},{d}) w={w}: {exc}")
                    continue
                if formula != brute:
                    res.fail(f"({n},{d}) w={w}: formula {formula}, enumeration {brute}")
    return _timed("a1_orders", body)


def check_counting(case_list: Iterable[tuple[int, int]], p: int = 2) -> CheckResult:
    """Parameter counts, stratum dimensions and stabiliser dimensions."""
    def body(res):
        for n, d in case_list:
            Z = gl_zip_datum(n, d, p)
            res.checked += 1
            bad = []
            if len(min_coset_reps(Z.I, "left", n)) != comb(n, d):
                bad.append("|^I W|")
            strata = enumerate_strata(Z)
            if len(strata) != comb(n, d):
                bad.append("stratum count")
            dims = [s.dimension for s in strata]
            if any(s.dimension != s.length + Z.P.dim for s in strata):
                bad.append("dim != l(w) + dim P")
            if dims.count(Z.P.dim) != 1 or min(dims) != Z.P.dim or not strata[0].w.images == tuple(range(1, n + 1)):
                bad.append("minimum")
            if dims.count(n * n) != 1 or max(dims) != n * n:
                bad.append("maximum")
            stabs = [stabilizer_dimension(Z, s.w) for s in strata]
            if any(st != d * (n - d) - s.length or st < 0 for st, s in zip(stabs, strata)):
                bad.append("stabiliser dimension")
            if stabs.count(0) != 1 or stabs[-1] != 0:
                bad.append("zero stabiliser off the open stratum")
            if bad:
                res.fail(f"({n},{d}): " + ", ".join(bad))
    return _timed("counting_and_dimensions", body)


def check_parameter_sets(case_list: Iterable[tuple[int, int]], p: int = 2) -> CheckResult:
    """
    ``z ^I W`` and ``z W^J`` meet the same orbits: matching by canonical type
    is a bijection that preserves length.
    """
    def body(res):
        for n, d in case_list:
            Z = gl_zip_datum(n, d, p)
            res.checked += 1
            left = {canonical_type(Z.z * w, Z): w for w in min_coset_reps(Z.I, "left", n)}
            right = {canonical_type(Z.z * v, Z): v for v in stratum_parameters(Z)}
            if len(left) != comb(n, d) or set(left) != set(right):
                res.fail(f"({n},{d}): orbit sets differ")
            elif any(length(left[t]) != length(right[t]) for t in left):
                res.fail(f"({n},{d}): lengths differ")
    return _timed("parameter_sets_agree", body)


def _factorisations(w: Permutation, I: frozenset[int], J: frozenset[int]) -> list[tuple[Permutation, Permutation]]:
    """Every ``(x, y)`` with ``x`` in ^I W^J, ``y`` in ^{I_x} W_J and ``x y = w``."""
    n = w.n
    out = []
    for x in double_coset_reps(I, J, n):
        Ix = conjugate_subset(x, I, J)
        for y in parabolic_subgroup(J, n):
            if is_min_left(y, Ix) and x * y == w:
                out.append((x, y))
    return out


def _zip_subset_pairs(Z: ZipDatum) -> list[tuple[frozenset[int], frozenset[int]]]:
    pairs = {(Z.I, Z.J)}
    for P0 in intermediate_parabolics(Z):
        Z0 = derived_zip_datum(Z, P0)
        pairs.add((Z0.I, Z0.J))
    return sorted(pairs, key=lambda ij: (sorted(ij[0]), sorted(ij[1])))


def check_decomposition(case_list: Iterable[tuple[int, int]], p: int = 2, oracle_n: int = 4) -> CheckResult:
    """``w = x w_J`` is total, length additive and unique; counts reassemble to ``n!``."""
    def body(res):
        for n, d in case_list:
            Z = gl_zip_datum(n, d, p)
            for I, J in _zip_subset_pairs(Z):
                res.checked += 1
                bad = []
                seen: dict[Permutation, int] = {}
                for w in min_coset_reps(I, "left", n):
                    try:
                        x, y = decompose(w, I, J)
                    except (ValueError, AssertionError) as exc:
                        bad.append(f"w={w}: {exc}")
                        continue
                    if x * y != w or length(w) != length(x) + length(y):
                        bad.append(f"w={w}: not a length-additive factorisation")
                    seen[x] = seen.get(x, 0) + 1
                    if n <= oracle_n and _factorisations(w, I, J) != [(x, y)]:
                        bad.append(f"w={w}: oracle disagrees")
                size_WI = len(parabolic_subgroup(I, n))
                total = 0
                for x in double_coset_reps(I, J, n):
                    Ix = conjugate_subset(x, I, J)
                    count = sum(1 for y in parabolic_subgroup(J, n) if is_min_left(y, Ix))
                    if seen.get(x, 0) != count:
                        bad.append(f"x={x}: {seen.get(x, 0)} factorisations, expected {count}")
                    total += size_WI * count
                if total != factorial(n):
                    bad.append(f"reassembly gives {total}, expected {factorial(n)}")
                if bad:
                    res.fail(f"({n},{d}) I={sorted(I)} J={sorted(J)}: {bad[0]}")
    return _timed("decomposition", body)


def pi_degree_consistency(case_list: Iterable[tuple[int, int]], p: int = 2,
                          budget: int = DEFAULT_BUDGET) -> CheckResult:
    """``P_w ⊆ P0`` exactly when the projection has degree one, wherever enumeration fits."""
    def body(res):
        skipped = 0
        for n, d in case_list:
            Z = gl_zip_datum(n, d, p)
            for w in stratum_parameters(Z):
                Pw = canonical_data(Z, w).Pw
                for P0 in intermediate_parabolics(Z):
                    try:
                        deg = pi_degree(Z, w, P0, budget)
                    except BudgetExceeded:
                        skipped += 1
                        continue
                    res.checked += 1
                    if (deg == 1) != (Pw <= P0):
                        res.fail(f"({n},{d}) w={w} P0 type {sorted(P0.type)}: degree {deg}")
        res.extra["skipped_over_budget"] = skipped
    return _timed("pi_degree_matches_containment", body)


def run_suite(n_max: int, d: int | None = None, p: int = 2, budget: int = DEFAULT_BUDGET,
              field_n_max: int = 4) -> list[CheckResult]:
    """All checks over ``2 <= n <= n_max`` (a single ``d`` if given); field oracles stop at ``field_n_max``."""
    comb_cases = cases(n_max, d=d)
    field_cases = cases(min(n_max, field_n_max), d=d)
    a1_cases = cases(min(n_max, 3), d=d)
    return [
        check_counting(comb_cases, p),
        check_decomposition(comb_cases, p),
        check_parameter_sets(comb_cases, p),
        check_flag_stabilizer(comb_cases, p),
        check_flag_oracle(cases(min(n_max, EXHAUSTIVE_MAX_N), d=d), p),
        check_theorem_scan(comb_cases, p, budget=min(budget, 20_000)),
        check_closure_routes(comb_cases, p),
        check_transform_law(field_cases, p),
        check_psi_well_defined(field_cases, p),
        check_a1_orders(a1_cases, p, budget),
        pi_degree_consistency(field_cases, p, budget),
    ]
