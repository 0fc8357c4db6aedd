"""Reduced simplicial homology over an exact field with fixed bases.

Boundary matrices are taken with respect to the deterministic face orders
of the host complex.  Gaussian elimination with a fixed pivot rule (scan
columns left to right, take the topmost nonzero entry, eliminate rows top
to bottom then columns left to right) produces invertible P and Q with

    P^-1 A Q = [[I_r, 0], [0, 0]],

so the last columns of Q are a cycle basis and the images of the first
columns of Q under the boundary map are a boundary basis.  Extending the
boundary basis greedily through the cycle basis yields, per degree and
dimension, one fixed basis of the cycle space whose tail represents
homology classes.  Every choice here is load bearing: the resolution
machinery is only well defined relative to these bases.
"""
from __future__ import annotations

import hashlib
import json
import os
from fractions import Fraction

Face = tuple[int, ...]
Chain = dict  # Face -> field scalar


class NotACycle(ValueError):
    """A chain handed to express_in_basis has a nonzero boundary."""


# ---------------------------------------------------------------------------
# coefficient fields


class RationalField:
    """Exact rationals; plain ints are kept as a fast path where possible."""

    name = "rational"
    modulus = None
    zero = 0
    one = 1

    def of(self, n):
        if isinstance(n, Fraction) and n.denominator == 1:
            return n.numerator
        return n

    def neg(self, a):
        return -a

    def div(self, a, b):
        q = Fraction(a) / Fraction(b)
        return q.numerator if q.denominator == 1 else q

    def to_str(self, a) -> str:
        f = Fraction(a)
        return f"{f.numerator}/{f.denominator}"

    def from_str(self, txt: str):
        return self.of(Fraction(txt))

    def __repr__(self):
        return "RationalField()"


class PrimeField:
    """Integers modulo a prime, represented as ints in [0, p)."""

    def __init__(self, p: int):
        if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        self.modulus = p
        self.name = f"prime:{p}"
        self.zero = 0
        self.one = 1 % p

    def of(self, n):
        return int(n) % self.modulus

    def neg(self, a):
        return -a % self.modulus

    def div(self, a, b):
        b %= self.modulus
        if not b:
            raise ZeroDivisionError("division by zero in prime field")
        return a * pow(b, self.modulus - 2, self.modulus) % self.modulus

    def to_str(self, a) -> str:
        return str(a % self.modulus)

    def from_str(self, txt: str):
        return self.of(int(txt))

    def __repr__(self):
        return f"PrimeField({self.modulus})"


def get_field(spec):
    """Field from a config value: 'rational', an int, or 'prime:p'."""
    if spec is None or spec == "rational":
        return RationalField()
    if isinstance(spec, int):
        return PrimeField(spec)
    if isinstance(spec, str):
        text = spec.removeprefix("prime:")
        return PrimeField(int(text))
    raise ValueError(f"unrecognized field spec {spec!r}")


# ---------------------------------------------------------------------------
# boundary matrices and chains


class BoundaryMatrix:
    """Integer matrix of a boundary map relative to fixed face orders."""

    def __init__(self, row_faces, col_faces, data):
        self.row_faces = row_faces
        self.col_faces = col_faces
        self.data = data  # list of rows

    @property
    def shape(self):
        return (len(self.data), len(self.col_faces))

    def to_dict(self):
        return {
            "rows": [list(f) for f in self.row_faces],
            "cols": [list(f) for f in self.col_faces],
            "data": [list(row) for row in self.data],
        }


def boundary_matrix(complex_, j: int, field=None) -> BoundaryMatrix:
    """Matrix of the j-th boundary map; the target of d_0 is the empty face."""
    cols = complex_.faces_of_dim(j)
    rows = ((),) if j == 0 else complex_.faces_of_dim(j - 1)
    row_index = {f: i for i, f in enumerate(rows)}
    data = [[0] * len(cols) for _ in rows]
    for k, face in enumerate(cols):
        for pos in range(len(face)):
            sub = face[:pos] + face[pos + 1:]
            data[row_index[sub]][k] = 1 if pos % 2 == 0 else -1
    return BoundaryMatrix(rows, cols, data)


def chain_boundary(chain: Chain, modulus=None) -> Chain:
    """Boundary of a sparse chain; 0-faces map to the empty face."""
    out: Chain = {}
    for face, coeff in chain.items():
        for pos in range(len(face)):
            sub = face[:pos] + face[pos + 1:]
            c = coeff if pos % 2 == 0 else -coeff
            acc = out.get(sub)
            acc = c if acc is None else acc + c
            if modulus is not None:
                acc %= modulus
            if acc:
                out[sub] = acc
            elif sub in out:
                del out[sub]
    return out


def chain_add_scaled(target: Chain, source: Chain, scale, modulus=None) -> None:
    if not scale:
        return
    for face, coeff in source.items():
        acc = target.get(face)
        acc = scale * coeff if acc is None else acc + scale * coeff
        if modulus is not None:
            acc %= modulus
        if acc:
            target[face] = acc
        elif face in target:
            del target[face]


# ---------------------------------------------------------------------------
# deterministic Gaussian elimination


def _row_axpy(dst, src, factor, p):
    """dst -= factor * src, entrywise, optionally mod p."""
    if p is None:
        for k, v in enumerate(src):
            if v:
                dst[k] -= factor * v
    else:
        for k, v in enumerate(src):
            if v:
                dst[k] = (dst[k] - factor * v) % p


class GaussDecomposition:
    """Result of gauss_reduce: rank, Q as columns, P^-1 as rows, lazy P."""

    def __init__(self, field, nrows, ncols, rank, p_inv_rows, q_cols):
        self.field = field
        self.nrows = nrows
        self.ncols = ncols
        self.rank = rank
        self.p_inv_rows = p_inv_rows
        self.q_cols = q_cols
        self._p_cols = None

    def kernel_columns(self):
        """Last ncols - rank columns of Q: a basis of the kernel."""
        return self.q_cols[self.rank:]

    def q_column(self, i):
        return self.q_cols[i]

    @property
    def p_columns(self):
        """Columns of P, computed on demand by inverting P^-1."""
        if self._p_cols is None:
            inv = gauss_reduce(self.p_inv_rows, self.nrows, self.field)
            if inv.rank != self.nrows:
                raise ArithmeticError("P^-1 is singular; elimination is broken")
            cols = []
            for i in range(self.nrows):
                e = [self.field.zero] * self.nrows
                e[i] = self.field.one
                cols.append(inv.solve(e))
            self._p_cols = cols
        return self._p_cols

    def apply_p_inv(self, vec):
        p = self.field.modulus
        support = [k for k, v in enumerate(vec) if v]
        out = []
        for row in self.p_inv_rows:
            s = sum(row[k] * vec[k] for k in support)
            out.append(s if p is None else s % p)
        return out

    def solve(self, vec):
        """One solution x of A x = vec, or None when inconsistent.

        Uses x = Q . [(P^-1 vec)_{1..r}; 0], which is deterministic and
        linear in vec.
        """
        u = self.apply_p_inv(vec)
        if any(u[self.rank:]):
            return None
        x = [self.field.zero] * self.ncols
        p = self.field.modulus
        for i in range(self.rank):
            ui = u[i]
            if not ui:
                continue
            col = self.q_cols[i]
            for k, q in enumerate(col):
                if q:
                    x[k] = x[k] + ui * q if p is None else (x[k] + ui * q) % p
        return x


def gauss_reduce(rows, ncols: int, field) -> GaussDecomposition:
    """Reduce a matrix to the block identity form with fixed pivoting.

    Pivot rule: scan columns left to right; within a column take the
    topmost nonzero entry below the finished block.  Rows are cleared top
    to bottom, then columns left to right.
    """
    m = len(rows)
    n = ncols
    fz, fo = field.zero, field.one
    p = field.modulus
    M = [[field.of(v) for v in row] for row in rows]
    p_inv = [[fo if i == k else fz for k in range(m)] for i in range(m)]
    q_cols = [[fo if i == k else fz for i in range(n)] for k in range(n)]
    t = 0
    for c in range(n):
        if t >= m:
            break
        piv = next((i for i in range(t, m) if M[i][c]), None)
        if piv is None:
            continue
        if piv != t:
            M[t], M[piv] = M[piv], M[t]
            p_inv[t], p_inv[piv] = p_inv[piv], p_inv[t]
        if c != t:
            for row in M:
                row[t], row[c] = row[c], row[t]
            q_cols[t], q_cols[c] = q_cols[c], q_cols[t]
        pivot = M[t][t]
        if pivot != fo:
            inv = field.div(fo, pivot)
            row = M[t]
            for k, v in enumerate(row):
                if v:
                    row[k] = v * inv if p is None else (v * inv) % p
            row = p_inv[t]
            for k, v in enumerate(row):
                if v:
                    row[k] = v * inv if p is None else (v * inv) % p
        src = M[t]
        for i in range(m):
            if i != t and M[i][t]:
                f = M[i][t]
                _row_axpy(M[i], src, f, p)
                _row_axpy(p_inv[i], p_inv[t], f, p)
        # column t is now e_t, so clearing row t only zeroes M itself;
        # the real work is the bookkeeping on Q
        qt = q_cols[t]
        for jj in range(n):
            if jj != t and src[jj]:
                _row_axpy(q_cols[jj], qt, src[jj], p)
                src[jj] = fz
        t += 1
    return GaussDecomposition(field, m, n, t, p_inv, q_cols)


class _EchelonTracker:
    """Incremental independence test over a field."""

    def __init__(self, field):
        self.field = field
        self.rows = {}  # pivot position -> normalized row (dict pos -> scalar)

    def add(self, vec) -> bool:
        """Reduce vec against the stored rows; keep and report if independent."""
        field = self.field
        work = {k: v for k, v in enumerate(vec) if v}
        while work:
            piv = min(work)
            row = self.rows.get(piv)
            if row is None:
                inv = field.div(field.one, work[piv])
                normalized = {
                    k: field.of(v * inv) if field.modulus is None else (v * inv) % field.modulus
                    for k, v in work.items()
                }
                self.rows[piv] = normalized
                return True
            factor = work[piv]
            for k, v in row.items():
                acc = work.get(k, field.zero) - factor * v
                if field.modulus is not None:
                    acc %= field.modulus
                if acc:
                    work[k] = acc
                elif k in work:
                    del work[k]
        return False


# ---------------------------------------------------------------------------
# fixed cycle bases


class ChainBasis:
    """Fixed basis of the cycle space in one degree and dimension.

    ``boundary`` holds pairs (cycle, preimage): the cycle is the image of
    the (j+1)-chain described by the sparse preimage column of Q_{j+1}.
    ``homology`` holds the cycle-basis columns whose classes form a basis
    of reduced homology.
    """

    def __init__(self, degree, dim, order_name, field, faces, up_faces,
                 boundary, homology, rank_down, rank_up):
        self.degree = tuple(degree)
        self.dim = dim
        self.order_name = order_name
        self.field = field
        self.faces = tuple(faces)
        self.up_faces = tuple(up_faces)
        self.boundary = boundary
        self.homology = homology
        self.rank_down = rank_down
        self.rank_up = rank_up
        self.face_index = {f: i for i, f in enumerate(self.faces)}
        self._solver = None

    @property
    def cycle_dim(self) -> int:
        return len(self.boundary) + len(self.homology)

    def _dense(self, chain: Chain):
        vec = [self.field.zero] * len(self.faces)
        for face, coeff in chain.items():
            idx = self.face_index.get(face)
            if idx is None:
                raise NotACycle(f"face {face} is not a {self.dim}-face here")
            vec[idx] = coeff
        return vec

    def _get_solver(self):
        if self._solver is None:
            cols = [self._dense(ch) for ch in self.homology]
            cols += [self._dense(ch) for ch, _ in self.boundary]
            rows = [
                [col[i] for col in cols]
                for i in range(len(self.faces))
            ]
            self._solver = gauss_reduce(rows, len(cols), self.field)
        return self._solver

    def express(self, chain: Chain):
        """Unique coordinates (lam, mu) with chain = sum lam.b + sum mu.h."""
        if chain_boundary(chain, self.field.modulus):
            raise NotACycle("chain has nonzero boundary")
        if not chain:
            return ([self.field.zero] * len(self.homology),
                    [self.field.zero] * len(self.boundary))
        sol = self._get_solver().solve(self._dense(chain))
        if sol is None:
            raise NotACycle("cycle is outside the fixed cycle basis span")
        t2 = len(self.homology)
        return sol[:t2], sol[t2:]

    def to_dict(self):
        def chain_out(ch):
            return [
                [list(face), self.field.to_str(coeff)]
                for face, coeff in sorted(ch.items())
            ]

        return {
            "degree": list(self.degree),
            "dim": self.dim,
            "order": self.order_name,
            "field": self.field.name,
            "faces": [list(f) for f in self.faces],
            "up_faces": [list(f) for f in self.up_faces],
            "rank_down": self.rank_down,
            "rank_up": self.rank_up,
            "boundary": [
                {
                    "cycle": chain_out(ch),
                    "preimage": [[k, self.field.to_str(v)] for k, v in sorted(pre.items())],
                }
                for ch, pre in self.boundary
            ],
            "homology": [chain_out(ch) for ch in self.homology],
        }

    @classmethod
    def from_dict(cls, data, field):
        def chain_in(items):
            return {tuple(face): field.from_str(c) for face, c in items}

        boundary = [
            (chain_in(entry["cycle"]),
             {int(k): field.from_str(v) for k, v in entry["preimage"]})
            for entry in data["boundary"]
        ]
        return cls(
            degree=tuple(data["degree"]),
            dim=data["dim"],
            order_name=data["order"],
            field=field,
            faces=[tuple(f) for f in data["faces"]],
            up_faces=[tuple(f) for f in data["up_faces"]],
            boundary=boundary,
            homology=[chain_in(ch) for ch in data["homology"]],
            rank_down=data["rank_down"],
            rank_up=data["rank_up"],
        )


def fixed_cycle_basis(complex_, j: int, field, g_down=None, g_up=None) -> ChainBasis:
    """The fixed basis of cycles in dimension j, boundaries listed first.

    Precomputed reductions of the two relevant boundary matrices may be
    passed in; they must come from gauss_reduce on this complex's faces.
    """
    faces = complex_.faces_of_dim(j)
    up_faces = complex_.faces_of_dim(j + 1)
    if not faces:
        return ChainBasis(complex_.degree, j, complex_.order.kind
                          if hasattr(complex_, "order") else "index",
                          field, (), up_faces, [], [], 0, 0)
    face_index = {f: i for i, f in enumerate(faces)}
    if g_down is None:
        g_down = gauss_reduce(boundary_matrix(complex_, j).data, len(faces), field)
    if g_up is None:
        g_up = gauss_reduce(boundary_matrix(complex_, j + 1).data, len(up_faces), field)

    tracker = _EchelonTracker(field)
    boundary = []
    for i in range(g_up.rank):
        qcol = g_up.q_column(i)
        preimage = {k: v for k, v in enumerate(qcol) if v}
        pre_chain = {up_faces[k]: v for k, v in preimage.items()}
        cycle = chain_boundary(pre_chain, field.modulus)
        dense = [field.zero] * len(faces)
        for face, coeff in cycle.items():
            dense[face_index[face]] = coeff
        if not tracker.add(dense):
            raise ArithmeticError("boundary basis vectors are dependent")
        boundary.append((cycle, preimage))

    homology = []
    for col in g_down.kernel_columns():
        if tracker.add(col):
            homology.append({faces[k]: v for k, v in enumerate(col) if v})

    order_name = complex_.order.kind if hasattr(complex_, "order") else "index"
    return ChainBasis(complex_.degree, j, order_name, field, faces, up_faces,
                      boundary, homology, g_down.rank, g_up.rank)


def betti_reduced(complex_, j: int, field) -> int:
    """Rank of reduced homology in dimension j (j = -1 supported)."""
    if j < 0:
        if j == -1:
            return 1 if complex_.is_irrelevant else 0
        return 0
    faces = complex_.faces_of_dim(j)
    if not faces:
        return 0
    g_down = gauss_reduce(boundary_matrix(complex_, j).data, len(faces), field)
    up = complex_.faces_of_dim(j + 1)
    rank_up = 0
    if up:
        rank_up = gauss_reduce(boundary_matrix(complex_, j + 1).data, len(up), field).rank
    return (len(faces) - g_down.rank) - rank_up


def express_in_basis(chain: Chain, basis: ChainBasis):
    """Coordinates of a cycle in the fixed basis; raises NotACycle otherwise."""
    return basis.express(chain)


# ---------------------------------------------------------------------------
# on-disk basis cache


def basis_cache_key(semigroup, m, j, order_name, field_name) -> str:
    payload = json.dumps(
        [semigroup.to_dict(), list(m), j, order_name, field_name],
        sort_keys=True, separators=(",", ":"),
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def load_cached_basis(cache_dir, key, field):
    path = os.path.join(cache_dir, f"basis-{key}.json")
    if not os.path.exists(path):
        return None
    with open(path, "r", encoding="utf-8") as fh:
        return ChainBasis.from_dict(json.load(fh), field)


def store_cached_basis(cache_dir, key, basis) -> None:
    os.makedirs(cache_dir, exist_ok=True)
    path = os.path.join(cache_dir, f"basis-{key}.json")
    if os.path.exists(path):
        return
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(basis.to_dict(), fh, sort_keys=True, separators=(",", ":"))
    os.replace(tmp, path)
