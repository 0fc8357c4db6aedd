"""Fiber complexes and index-set comparison complexes.

For a degree m the fiber complex has the monomials of degree m as
vertices and declares a subset a face when its gcd is a proper monomial.
Since the gcd of a set is nontrivial exactly when some variable divides
every member, the complex is the union of one full simplex per variable
(the cover sets below), which keeps face enumeration cheap.

The comparison complex lives on the variable indices themselves: a
subset F is a face when m minus the sum of the corresponding generators
stays in the semigroup.  Both complexes have the same reduced homology,
which the test suite exercises as a property.
"""
from __future__ import annotations

from itertools import combinations

from .orders import (
    Monomial,
    TermOrder,
    mono_div,
    mono_divides,
    mono_gcd,
    mono_is_unit,
)
from .semigroup import Degree, Semigroup

Face = tuple[int, ...]


class DegreeMismatch(ValueError):
    """The restricting monomial's degree does not divide the complex degree."""


class NablaComplex:
    """Simplicial complex on a monomial fiber, faces = subsets with gcd != 1.

    Vertices are stored in decreasing term order; all face lists are
    deterministic for a fixed presentation, degree and order.  Immutable
    after construction.
    """

    def __init__(self, semigroup: Semigroup, degree: Degree, order: TermOrder,
                 vertices: tuple[Monomial, ...]):
        self.semigroup = semigroup
        self.degree = tuple(degree)
        self.order = order
        self.vertices = vertices
        self.vertex_index = {v: i for i, v in enumerate(vertices)}
        r = semigroup.num_generators
        self.cover = tuple(
            frozenset(i for i, v in enumerate(vertices) if v[var] > 0)
            for var in range(r)
        )
        self._faces: dict[int, tuple[Face, ...]] = {}

    @property
    def is_void(self) -> bool:
        """No vertices at all (the degree is not in the semigroup)."""
        return not self.vertices

    @property
    def is_irrelevant(self) -> bool:
        """Has vertices but no faces (only the unit monomial, degree zero)."""
        return bool(self.vertices) and not any(self.cover)

    @property
    def dimension(self) -> int:
        return max((len(d) for d in self.cover), default=0) - 1

    def face_gcd(self, face: Face) -> Monomial:
        return mono_gcd(*(self.vertices[i] for i in face))

    def is_face(self, face: Face) -> bool:
        face = tuple(face)
        if not face or any(not 0 <= i < len(self.vertices) for i in face):
            return False
        return not mono_is_unit(self.face_gcd(face))

    def faces_of_dim(self, j: int) -> tuple[Face, ...]:
        """All j-faces, largest gcd first, ties by ascending index tuple."""
        if j < 0 or j > self.dimension:
            return ()
        cached = self._faces.get(j)
        if cached is not None:
            return cached
        found: set[Face] = set()
        for cover_set in self.cover:
            if len(cover_set) > j:
                found.update(combinations(sorted(cover_set), j + 1))
        ordered = sorted(found)
        ordered.sort(key=lambda f: self.order.key(self.face_gcd(f)), reverse=True)
        result = tuple(ordered)
        self._faces[j] = result
        return result

    def facets(self) -> tuple[Face, ...]:
        """Maximal faces: the maximal distinct cover simplices."""
        sets = {d for d in self.cover if d}
        maximal = [d for d in sets if not any(d < other for other in sets)]
        return tuple(sorted(tuple(sorted(d)) for d in maximal))

    def components(self) -> list[set[int]]:
        """Connected components of the vertex set (union of cover simplices)."""
        parent = list(range(len(self.vertices)))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for cover_set in self.cover:
            members = sorted(cover_set)
            for other in members[1:]:
                ra, rb = find(members[0]), find(other)
                if ra != rb:
                    parent[rb] = ra
        groups: dict[int, set[int]] = {}
        for i in range(len(self.vertices)):
            groups.setdefault(find(i), set()).add(i)
        return [groups[k] for k in sorted(groups)]

    def to_dict(self):
        return {
            "degree": list(self.degree),
            "vertices": [list(v) for v in self.vertices],
            "facets": [list(f) for f in self.facets()],
        }

    def __repr__(self):
        return f"NablaComplex(degree={self.degree}, vertices={len(self.vertices)})"


def build_nabla(semigroup: Semigroup, m: Degree, order: TermOrder) -> NablaComplex:
    vertices = semigroup.fiber(m, order)
    return NablaComplex(semigroup, m, order, vertices)


def restrict_nabla(complex_: NablaComplex, beta: Monomial) -> NablaComplex:
    """Divide out a monomial of the fiber of m - m'.

    The vertices divisible by beta, each divided by beta, form exactly the
    fiber of the reduced degree; faces restrict accordingly.  The result is
    rebuilt directly so it compares equal to a fresh construction.
    """
    sg = complex_.semigroup
    beta = tuple(beta)
    target = sg.sub_degree(complex_.degree, sg.degree_of(beta))
    if not sg.member(target):
        raise DegreeMismatch(
            f"degree of {beta} does not divide {complex_.degree} inside the semigroup"
        )
    reduced = [mono_div(v, beta) for v in complex_.vertices if mono_divides(beta, v)]
    vertices = tuple(complex_.order.sort_decreasing(reduced))
    return NablaComplex(sg, target, complex_.order, vertices)


class DeltaComplex:
    """Complex on variable indices: F is a face iff m - n_F stays in S.

    Contains the empty face whenever m itself lies in S.  Faces of each
    dimension are ordered by ascending index tuple.
    """

    def __init__(self, semigroup: Semigroup, degree: Degree, faces: frozenset):
        self.semigroup = semigroup
        self.degree = tuple(degree)
        self.faces = faces
        self.num_vertices = semigroup.num_generators
        self._by_dim: dict[int, tuple[Face, ...]] = {}

    @property
    def is_void(self) -> bool:
        return not self.faces

    @property
    def is_irrelevant(self) -> bool:
        return self.faces == frozenset({()})

    @property
    def dimension(self) -> int:
        return max((len(f) for f in self.faces), default=0) - 1

    def is_face(self, face: Face) -> bool:
        return tuple(sorted(face)) in self.faces

    def faces_of_dim(self, j: int) -> tuple[Face, ...]:
        cached = self._by_dim.get(j)
        if cached is None:
            cached = tuple(sorted(f for f in self.faces if len(f) == j + 1))
            self._by_dim[j] = cached
        return cached

    def facets(self) -> tuple[Face, ...]:
        proper = {f for f in self.faces if f}
        maximal = [
            f for f in proper
            if not any(set(f) < set(other) for other in proper)
        ]
        return tuple(sorted(maximal))

    def to_dict(self):
        return {
            "degree": list(self.degree),
            "num_vertices": self.num_vertices,
            "facets": [list(f) for f in self.facets()],
        }

    def __repr__(self):
        return f"DeltaComplex(degree={self.degree}, faces={len(self.faces)})"


def build_delta(semigroup: Semigroup, m: Degree) -> DeltaComplex:
    r = semigroup.num_generators
    faces = set()
    for size in range(r + 1):
        for face in combinations(range(r), size):
            shifted = m
            for i in face:
                shifted = semigroup.sub_degree(shifted, semigroup.generators[i])
            if semigroup.member(shifted):
                faces.add(face)
    return DeltaComplex(semigroup, m, frozenset(faces))
