"""Finitely generated subsemigroups of Z^d and their monomial fibers.

A presentation is a d x r integer matrix whose columns n_1, ..., n_r
generate the semigroup S.  Everything downstream needs S to admit only
finitely many factorizations per element, which is certified here by a
rational weight vector w with w.n_i >= 1 for every generator: such a w
exists exactly when no nonzero nonnegative combination of the columns
vanishes.  The weight also bounds every fiber enumeration.
"""
from __future__ import annotations

import json
from fractions import Fraction
from itertools import product

from .orders import Monomial, TermOrder

Degree = tuple[int, ...]


class SemigroupError(ValueError):
    pass


class ZeroGenerator(SemigroupError):
    """Some generator column is the zero vector."""


class NotCombinatoriallyFinite(SemigroupError):
    """A nonzero nonnegative combination of generators is zero."""


def _dot(w, v):
    return sum(a * b for a, b in zip(w, v))


def _fourier_motzkin_point(rows: list[tuple[tuple[int, ...], int]], dim: int):
    """Feasible rational point for the system {coeffs . x >= rhs}, or None.

    Variables are eliminated from the last index down to index 1, then the
    point is rebuilt front to back, clamping 0 into the admissible interval
    of each variable.  Deterministic by construction.
    """
    systems = [rows]
    for var in range(dim - 1, 0, -1):
        current = systems[-1]
        lower, upper, rest = [], [], []
        for coeffs, rhs in current:
            c = coeffs[var]
            if c > 0:
                lower.append((coeffs, rhs))
            elif c < 0:
                upper.append((coeffs, rhs))
            else:
                rest.append((coeffs, rhs))
        combined = list(rest)
        for pc, prhs in lower:
            for nc, nrhs in upper:
                a, b = pc[var], -nc[var]
                # a*(upper row) + b*(lower row): positive combination, var cancels
                coeffs = tuple(a * nc[i] + b * pc[i] for i in range(dim))
                combined.append((coeffs, a * nrhs + b * prhs))
        systems.append(combined)

    point: list[Fraction] = []
    for var in range(dim):
        current = systems[dim - 1 - var]
        lo = hi = None
        for coeffs, rhs in current:
            c = coeffs[var]
            residual = Fraction(rhs) - sum(
                coeffs[i] * point[i] for i in range(var)
            )
            if c > 0:
                bound = residual / c
                lo = bound if lo is None else max(lo, bound)
            elif c < 0:
                bound = residual / c
                hi = bound if hi is None else min(hi, bound)
            elif residual > 0:
                return None
        if lo is not None and hi is not None and lo > hi:
            return None
        x = Fraction(0)
        if lo is not None:
            x = max(x, lo)
        if hi is not None:
            x = min(x, hi)
        point.append(x)
    return point


def validate_presentation(dim: int, generators) -> tuple[Fraction, ...]:
    """Accept a presentation and return its positive grading certificate.

    Raises ZeroGenerator or NotCombinatoriallyFinite on bad input; the
    returned weight w satisfies w.n_i >= 1 for every generator and is
    normalized so the smallest such product is exactly 1.
    """
    return Semigroup(dim, generators).grading


class Semigroup:
    """Validated presentation of a combinatorially finite semigroup.

    Immutable after construction; all query methods are pure (results are
    memoized internally, which is safe for concurrent readers).
    """

    def __init__(self, dim: int, generators):
        if dim < 1:
            raise SemigroupError("dimension must be positive")
        gens = tuple(tuple(int(x) for x in col) for col in generators)
        if not gens:
            raise SemigroupError("at least one generator required")
        for col in gens:
            if len(col) != dim:
                raise SemigroupError(f"generator {col} does not have length {dim}")
            if not any(col):
                raise ZeroGenerator(f"zero generator column {col}")
        self.dim = dim
        self.generators = gens
        self.num_generators = len(gens)
        self.grading = self._positive_grading()
        self._wdots = tuple(_dot(self.grading, n) for n in gens)
        self._member_cache: dict[Degree, bool] = {}
        self._fiber_cache: dict[tuple, tuple[Monomial, ...]] = {}

    @classmethod
    def from_dict(cls, data) -> "Semigroup":
        try:
            dim = data["dim"]
            generators = data["generators"]
        except (TypeError, KeyError) as exc:
            raise SemigroupError(f"malformed semigroup description: {exc}") from exc
        return cls(dim, generators)

    @classmethod
    def from_file(cls, path) -> "Semigroup":
        with open(path, "r", encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise SemigroupError(f"invalid JSON in {path}: {exc}") from exc
        return cls.from_dict(data)

    def to_dict(self):
        return {"dim": self.dim, "generators": [list(col) for col in self.generators]}

    def _positive_grading(self) -> tuple[Fraction, ...]:
        rows = [(col, 1) for col in self.generators]
        point = _fourier_motzkin_point(rows, self.dim)
        if point is None:
            raise NotCombinatoriallyFinite(
                "no positive grading exists: a nonzero nonnegative combination "
                "of generators is zero"
            )
        scale = min(_dot(point, n) for n in self.generators)
        return tuple(x / scale for x in point)

    def weight(self, m: Degree) -> Fraction:
        return _dot(self.grading, m)

    def degree_of(self, mono: Monomial) -> Degree:
        if len(mono) != self.num_generators:
            raise SemigroupError(
                f"exponent vector of length {len(mono)}, expected {self.num_generators}"
            )
        return tuple(
            sum(a * n[j] for a, n in zip(mono, self.generators))
            for j in range(self.dim)
        )

    def zero_degree(self) -> Degree:
        return (0,) * self.dim

    def sub_degree(self, m: Degree, mp: Degree) -> Degree:
        return tuple(a - b for a, b in zip(m, mp))

    def member(self, m: Degree) -> bool:
        """Is m a nonnegative integer combination of the generators?"""
        m = tuple(m)
        cached = self._member_cache.get(m)
        if cached is not None:
            return cached
        result = self._search(m, find_all=False) is True
        self._member_cache[m] = result
        return result

    def s_less(self, mp: Degree, m: Degree) -> bool:
        """The divisibility partial order: mp precedes m iff m - mp is in S."""
        return self.member(self.sub_degree(m, mp))

    def fiber(self, m: Degree, order: TermOrder) -> tuple[Monomial, ...]:
        """All monomials of degree m, sorted decreasing in the term order."""
        m = tuple(m)
        key = (m, order.kind)
        cached = self._fiber_cache.get(key)
        if cached is None:
            sols = self._search(m, find_all=True)
            cached = tuple(order.sort_decreasing(sols))
            self._fiber_cache[key] = cached
            self._member_cache[m] = bool(cached)
        return cached

    def _search(self, m: Degree, find_all: bool):
        """DFS over exponent vectors with weight-bound pruning.

        Any solution alpha satisfies sum(a_i * w.n_i) = w.m with every
        w.n_i >= 1, so each exponent is bounded by the residual weight.
        The last coordinate is solved exactly instead of scanned.
        """
        r = self.num_generators
        gens = self.generators
        wdots = self._wdots
        wm = self.weight(m)
        if wm < 0:
            return [] if find_all else False
        solutions: list[Monomial] = []
        last = gens[-1]
        pivot = next(i for i, x in enumerate(last) if x)

        def close(residual, prefix):
            # residual must be a nonnegative multiple of the last generator
            q, rem = divmod(residual[pivot], last[pivot])
            if rem or q < 0:
                return None
            if any(residual[j] != q * last[j] for j in range(self.dim)):
                return None
            return prefix + (q,)

        def rec(i, residual, wres, prefix):
            if i == r - 1:
                sol = close(residual, prefix)
                if sol is not None:
                    solutions.append(sol)
                    return not find_all
                return False
            bound = int(wres / wdots[i])
            res = list(residual)
            n = gens[i]
            for a in range(bound + 1):
                if rec(i + 1, tuple(res), wres - a * wdots[i], prefix + (a,)):
                    return True
                for j in range(self.dim):
                    res[j] -= n[j]
            return False

        if r == 1:
            sol = close(tuple(m), ())
            if sol is not None:
                solutions.append(sol)
        else:
            found = rec(0, tuple(m), wm, ())
            if not find_all:
                return found
        if not find_all:
            return bool(solutions)
        return solutions

    def brute_force_fiber(self, m: Degree) -> set[Monomial]:
        """Independent boxed enumeration of the fiber, for cross-checking.

        Scans the full box 0 <= a_i <= w.m / w.n_i coordinate by coordinate
        with no pruning or early solving.
        """
        m = tuple(m)
        wm = self.weight(m)
        if wm < 0:
            return set()
        ranges = [range(int(wm / wd) + 1) for wd in self._wdots]
        return {
            alpha
            for alpha in product(*ranges)
            if self.degree_of(alpha) == m
        }

    def degrees_up_to(self, w_bound) -> list[Degree]:
        """All semigroup elements of weight at most w_bound, canonically ordered."""
        bound = Fraction(w_bound)
        zero = self.zero_degree()
        seen = {zero}
        frontier = [zero]
        while frontier:
            nxt = []
            for m in frontier:
                for n in self.generators:
                    m2 = tuple(a + b for a, b in zip(m, n))
                    if m2 not in seen and self.weight(m2) <= bound:
                        seen.add(m2)
                        nxt.append(m2)
            frontier = nxt
        return sorted(seen, key=lambda d: (self.weight(d), d))

    def matrix_rank(self) -> int:
        """Rank of the generator matrix over the rationals."""
        rows = [
            [Fraction(self.generators[i][j]) for i in range(self.num_generators)]
            for j in range(self.dim)
        ]
        rank = 0
        for col in range(self.num_generators):
            piv = next((i for i in range(rank, self.dim) if rows[i][col]), None)
            if piv is None:
                continue
            rows[rank], rows[piv] = rows[piv], rows[rank]
            pivot = rows[rank][col]
            for i in range(self.dim):
                if i != rank and rows[i][col]:
                    f = rows[i][col] / pivot
                    rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
            rank += 1
            if rank == self.dim:
                break
        return rank

    def __repr__(self):
        return f"Semigroup(dim={self.dim}, generators={list(self.generators)})"
