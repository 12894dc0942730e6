"""Cocycle crossed G-modules: graded spaces with a right action twisted by chi.

Laws for a homogeneous basis vector v:

* |v <| x| = x^-1 |v| x
* v <| e = v
* (v <| x) <| y = chi(x,y)(|v|) v <| (xy)

Actions are stored as one sparse matrix A_x per group element, with column v
equal to v <| x.  Tensor products use the flat basis index v*dim(W) + w, so
rebracketing (U (x) V) (x) W -> U (x) (V (x) W) is the identity on indices and
the associator is the diagonal matrix phi(|u|,|v|,|w|).

The braiding is Psi(v (x) w) = w (x) v <| |w|, the form induced by
R = sum_x X_x (x) P_x.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .cochain import Cochain3, chi_from_phi
from .cyclotomic import CycScalar, scalar_from_json
from .dpr import DPRInstance, build_dpr, coproduct_ratio
from .group import FiniteGroup
from .linalg import rank
from .qhopf import scalar_to_json_compact
from .report import Report

MAX_NNZ = 4_000_000


class MemoryGuardError(MemoryError):
    """An intermediate sparse result would exceed the configured entry budget."""


class CrossedModuleError(ValueError):
    pass


def _obj(values) -> np.ndarray:
    out = np.empty(len(values), dtype=object)
    out[:] = list(values)
    return out


def _nonzero_mask(data: np.ndarray) -> np.ndarray:
    return np.fromiter((not v.is_zero() for v in data), dtype=bool, count=len(data))


class SparseMatrix:
    """Compressed-column matrix with exact cyclotomic entries."""

    __slots__ = ("shape", "indptr", "indices", "data", "order")

    def __init__(self, shape, indptr, indices, data, order: int):
        self.shape = (int(shape[0]), int(shape[1]))
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self.indices = np.asarray(indices, dtype=np.int64)
        self.data = data
        self.order = order

    # -- constructors --

    @classmethod
    def from_triples(cls, shape, rows, cols, vals, order: int, max_nnz: Optional[int] = None) -> "SparseMatrix":
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        vals = vals if isinstance(vals, np.ndarray) else _obj(vals)
        limit = MAX_NNZ if max_nnz is None else max_nnz
        if len(vals) > limit:
            raise MemoryGuardError(f"{len(vals)} intermediate entries exceed the budget of {limit}")
        if len(vals):
            perm = np.lexsort((rows, cols))
            rows, cols, vals = rows[perm], cols[perm], vals[perm]
            new = np.ones(len(rows), dtype=bool)
            new[1:] = (rows[1:] != rows[:-1]) | (cols[1:] != cols[:-1])
            if not new.all():
                starts = np.flatnonzero(new)
                vals = np.add.reduceat(vals, starts)
                rows, cols = rows[starts], cols[starts]
            keep = _nonzero_mask(vals)
            if not keep.all():
                rows, cols, vals = rows[keep], cols[keep], vals[keep]
        counts = np.bincount(cols, minlength=shape[1]) if len(cols) else np.zeros(shape[1], dtype=np.int64)
        indptr = np.zeros(shape[1] + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])
        return cls(shape, indptr, rows, vals, order)

    @classmethod
    def from_columns(cls, shape, columns: dict, order: int) -> "SparseMatrix":
        rows, cols, vals = [], [], []
        for j, col in columns.items():
            for i, v in col.items():
                rows.append(i)
                cols.append(j)
                vals.append(v)
        return cls.from_triples(shape, rows, cols, vals, order)

    @classmethod
    def identity(cls, m: int, order: int) -> "SparseMatrix":
        one = CycScalar.one(order)
        return cls((m, m), np.arange(m + 1), np.arange(m), _obj([one] * m), order)

    @classmethod
    def diagonal(cls, vals: np.ndarray, order: int) -> "SparseMatrix":
        m = len(vals)
        return cls.from_triples((m, m), np.arange(m), np.arange(m), vals, order)

    @classmethod
    def zeros(cls, shape, order: int) -> "SparseMatrix":
        return cls(shape, np.zeros(shape[1] + 1, dtype=np.int64), np.zeros(0, dtype=np.int64), _obj([]), order)

    # -- queries --

    @property
    def nnz(self) -> int:
        return len(self.indices)

    def col_indices(self) -> np.ndarray:
        return np.repeat(np.arange(self.shape[1], dtype=np.int64), np.diff(self.indptr))

    def column(self, j: int) -> dict:
        a, b = self.indptr[j], self.indptr[j + 1]
        return {int(i): v for i, v in zip(self.indices[a:b], self.data[a:b])}

    def entry(self, i: int, j: int) -> CycScalar:
        return self.column(j).get(i, CycScalar.zero(self.order))

    def is_monomial(self) -> bool:
        return bool(np.all(np.diff(self.indptr) <= 1))

    def is_invertible(self) -> bool:
        m, k = self.shape
        if m != k:
            return False
        counts = np.diff(self.indptr)
        if np.all(counts == 1):
            return len(np.unique(self.indices)) == m
        return rank({j: self.column(j) for j in range(k)}) == m

    def to_dense(self) -> list:
        m, k = self.shape
        if m * k > 1_000_000:
            raise MemoryGuardError(f"refusing to densify a {m}x{k} matrix")
        zero = CycScalar.zero(self.order)
        out = [[zero] * k for _ in range(m)]
        for j in range(k):
            for i, v in self.column(j).items():
                out[i][j] = v
        return out

    # -- arithmetic --

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        return self.compose(other)

    def compose(self, other: "SparseMatrix", max_nnz: Optional[int] = None) -> "SparseMatrix":
        """self @ other without densifying: gather the columns of self selected by other's rows."""
        if self.shape[1] != other.shape[0]:
            raise CrossedModuleError(f"cannot compose {self.shape} with {other.shape}")
        limit = MAX_NNZ if max_nnz is None else max_nnz
        k = other.indices  # middle index of each entry of other
        reps = self.indptr[k + 1] - self.indptr[k]
        total = int(reps.sum())
        if total > limit:
            raise MemoryGuardError(f"composition needs {total} intermediate entries, budget is {limit}")
        out_cols = np.repeat(other.col_indices(), reps)
        other_vals = np.repeat(other.data, reps) if len(other.data) else other.data
        # position of each gathered entry inside self
        starts = np.repeat(self.indptr[k], reps)
        offsets = np.arange(total, dtype=np.int64) - np.repeat(np.cumsum(reps) - reps, reps)
        pos = starts + offsets
        rows = self.indices[pos]
        vals = self.data[pos] * other_vals if total else _obj([])
        return SparseMatrix.from_triples((self.shape[0], other.shape[1]), rows, out_cols, vals, self.order, limit)

    def kron(self, other: "SparseMatrix", max_nnz: Optional[int] = None) -> "SparseMatrix":
        limit = MAX_NNZ if max_nnz is None else max_nnz
        total = self.nnz * other.nnz
        if total > limit:
            raise MemoryGuardError(f"tensor product needs {total} entries, budget is {limit}")
        (m1, k1), (m2, k2) = self.shape, other.shape
        ra, ca = self.indices, self.col_indices()
        rb, cb = other.indices, other.col_indices()
        rows = (ra[:, None] * m2 + rb[None, :]).ravel()
        cols = (ca[:, None] * k2 + cb[None, :]).ravel()
        vals = (self.data[:, None] * other.data[None, :]).ravel() if total else _obj([])
        return SparseMatrix.from_triples((m1 * m2, k1 * k2), rows, cols, vals, self.order, limit)

    def scale_columns(self, factors: np.ndarray) -> "SparseMatrix":
        vals = self.data * factors[self.col_indices()]
        return SparseMatrix.from_triples(self.shape, self.indices, self.col_indices(), vals, self.order)

    def scale_rows(self, factors: np.ndarray) -> "SparseMatrix":
        vals = self.data * factors[self.indices]
        return SparseMatrix.from_triples(self.shape, self.indices, self.col_indices(), vals, self.order)

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.shape != other.shape:
            raise CrossedModuleError("shape mismatch in addition")
        return SparseMatrix.from_triples(
            self.shape,
            np.concatenate([self.indices, other.indices]),
            np.concatenate([self.col_indices(), other.col_indices()]),
            np.concatenate([self.data, other.data]),
            self.order,
        )

    def scale(self, c: CycScalar) -> "SparseMatrix":
        return SparseMatrix.from_triples(self.shape, self.indices, self.col_indices(), self.data * c, self.order)

    def difference(self, other: "SparseMatrix") -> Optional[dict]:
        """None when equal, else the first differing entry in column-major order."""
        if self.shape != other.shape:
            return {"shape": [list(self.shape), list(other.shape)]}
        if (
            np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
            and all(a == b for a, b in zip(self.data, other.data))
        ):
            return None
        zero = CycScalar.zero(self.order)
        for j in range(self.shape[1]):
            a, b = self.column(j), other.column(j)
            if a != b:
                i = min(r for r in set(a) | set(b) if a.get(r, zero) != b.get(r, zero))
                return {"row": i, "col": j, "lhs": a.get(i, zero), "rhs": b.get(i, zero)}
        return None  # pragma: no cover

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.difference(other) is None

    __hash__ = None

    def __repr__(self) -> str:
        return f"SparseMatrix(shape={self.shape}, nnz={self.nnz})"


def gather_columns(mat: SparseMatrix, cols: np.ndarray, row_offset: Optional[np.ndarray] = None, nrows: Optional[int] = None) -> SparseMatrix:
    """Matrix whose j-th column is column ``cols[j]`` of ``mat``, rows shifted by ``row_offset[j]``."""
    cols = np.asarray(cols, dtype=np.int64)
    reps = mat.indptr[cols + 1] - mat.indptr[cols]
    total = int(reps.sum())
    starts = np.repeat(mat.indptr[cols], reps)
    offsets = np.arange(total, dtype=np.int64) - np.repeat(np.cumsum(reps) - reps, reps)
    pos = starts + offsets
    rows = mat.indices[pos]
    if row_offset is not None:
        rows = rows + np.repeat(np.asarray(row_offset, dtype=np.int64), reps)
    out_cols = np.repeat(np.arange(len(cols), dtype=np.int64), reps)
    shape = (nrows if nrows is not None else mat.shape[0], len(cols))
    return SparseMatrix.from_triples(shape, rows, out_cols, mat.data[pos], mat.order)


# -- objects -----------------------------------------------------------------------


def _phi_array(phi: Cochain3) -> np.ndarray:
    n = phi.group.size
    arr = np.empty((n, n, n), dtype=object)
    for a in range(n):
        for b in range(n):
            for c in range(n):
                arr[a, b, c] = phi.table[a][b][c]
    return arr


class CrossedGModule:
    """A G-graded space with a right cocycle action, given by per-element action matrices."""

    def __init__(
        self,
        group: FiniteGroup,
        cocycle: Cochain3,
        grading: Sequence[int],
        action: "Sequence[SparseMatrix] | Callable[[int], SparseMatrix]",
        label: str = "",
    ):
        if not group.same_as(cocycle.group):
            raise CrossedModuleError("cocycle lives on a different group")
        self.group = group
        self.cocycle = cocycle
        self.grading = np.asarray(grading, dtype=np.int64)
        self.label = label
        if callable(action):
            self._producer = action
            self._actions: dict = {}
        else:
            if len(action) != group.size:
                raise CrossedModuleError(f"need one action matrix per group element, got {len(action)}")
            self._producer = None
            self._actions = dict(enumerate(action))
        if np.any(self.grading < 0) or np.any(self.grading >= group.size):
            raise CrossedModuleError("grading entry outside the group")

    @property
    def dim(self) -> int:
        return len(self.grading)

    @property
    def order(self) -> int:
        return self.cocycle.order

    def action(self, x: int) -> SparseMatrix:
        A = self._actions.get(x)
        if A is None:
            A = self._producer(x)
            self._actions[x] = A
        return A

    def act(self, v: int, x: int) -> dict:
        """v <| x as a sparse vector."""
        return self.action(x).column(v)

    def compatible(self, other: "CrossedGModule") -> bool:
        return self.group.same_as(other.group) and (
            self.cocycle is other.cocycle or self.cocycle.table == other.cocycle.table
        )

    def with_grading(self, grading) -> "CrossedGModule":
        return CrossedGModule(self.group, self.cocycle, grading, [self.action(x) for x in self.group.elements], self.label)

    def to_json(self) -> dict:
        n, m = self.group.size, self.dim
        action = []
        for v in range(m):
            row = []
            for x in range(n):
                vec = [0] * m
                for i, c in self.act(v, x).items():
                    vec[i] = scalar_to_json_compact(c)
                row.append(vec)
            action.append(row)
        return {
            "group": self.group.to_json(),
            "cocycle": self.cocycle.to_json(),
            "grading": [int(s) for s in self.grading],
            "action": action,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "CrossedGModule":
        group = FiniteGroup.from_json(obj["group"]) if isinstance(obj["group"], dict) else None
        if group is None:
            from .group import parse_group

            group = parse_group(obj["group"])
        if isinstance(obj.get("cocycle"), dict):
            phi = Cochain3.from_json(obj["cocycle"], group=group)
        else:
            from .cochain import parse_cocycle

            phi = parse_cocycle(obj.get("cocycle", "trivial"), group)
        grading = obj["grading"]
        m = len(grading)
        order = phi.order
        acts = []
        for x in range(group.size):
            cols = {}
            for v in range(m):
                vec = obj["action"][v][x]
                if len(vec) != m:
                    raise CrossedModuleError(f"action vector for ({v},{x}) has length {len(vec)}, expected {m}")
                cols[v] = {i: scalar_from_json(c, order) for i, c in enumerate(vec) if c != 0}
            acts.append(SparseMatrix.from_columns((m, m), cols, order))
        return cls(group, phi, grading, acts)

    def __repr__(self) -> str:
        return f"CrossedGModule({self.label or 'V'}, dim={self.dim}, group={self.group.label})"


def trivial_object(group: FiniteGroup, phi: Cochain3) -> CrossedGModule:
    one = SparseMatrix.identity(1, phi.order)
    return CrossedGModule(group, phi, [group.identity], [one] * group.size, label="1")


def _conj_table(group: FiniteGroup) -> np.ndarray:
    n = group.size
    return np.array([[group.conj(x, s) for s in range(n)] for x in range(n)], dtype=np.int64)


def _chi_array(phi: Cochain3) -> np.ndarray:
    chi = chi_from_phi(phi)
    n = phi.group.size
    arr = np.empty((n, n, n), dtype=object)
    for x in range(n):
        for y in range(n):
            for s in range(n):
                arr[x, y, s] = chi.table[x][y][s]
    return arr


def verify_object(V: CrossedGModule, only=None) -> Report:
    g = V.group
    n, e = g.size, g.identity
    report = Report("crossed object", subject=f"{V.label or 'V'} dim {V.dim}")
    conj = _conj_table(g)
    grade = V.grading

    if report.wants("grading_compatibility", only):
        witness = None
        for x in range(n):
            A = V.action(x)
            rows, cols = A.indices, A.col_indices()
            bad = np.flatnonzero(grade[rows] != conj[x][grade[cols]])
            if len(bad):
                k = bad[0]
                witness = {"x": x, "basis": int(cols[k]), "image": int(rows[k]), "degree": int(grade[cols[k]]),
                           "image_degree": int(grade[rows[k]]), "expected": int(conj[x][grade[cols[k]]])}
                break
        report.add("grading_compatibility", witness is None, witness)

    if report.wants("unit_action", only):
        I = SparseMatrix.identity(V.dim, V.order)
        diff = V.action(e).difference(I)
        report.add("unit_action", diff is None, diff)

    if report.wants("cocycle_action", only):
        chi = _chi_array(V.cocycle)
        witness = None
        for x in range(n):
            Ax = V.action(x)
            for y in range(n):
                lhs = V.action(y) @ Ax
                factors = chi[x, y][grade]
                rhs = V.action(g.mul(x, y)).scale_columns(factors)
                diff = lhs.difference(rhs)
                if diff is not None:
                    witness = {"x": x, "y": y, "basis": diff.get("col"), **diff}
                    break
            if witness:
                break
        report.add("cocycle_action", witness is None, witness)

    if report.wants("action_invertible", only):
        bad = next((x for x in range(n) if not V.action(x).is_invertible()), None)
        report.add("action_invertible", bad is None, None if bad is None else {"x": bad})
    return report


def tensor_objects(V: CrossedGModule, W: CrossedGModule, check: bool = False) -> CrossedGModule:
    """|v (x) w| = |v||w| and (v (x) w) <| x = ratio(x;|v|,|w|) (v <| x) (x) (w <| x)."""
    if not V.compatible(W):
        raise CrossedModuleError("objects carry different groups or cocycles")
    g, phi = V.group, V.cocycle
    mt = np.asarray(g.mul_table, dtype=np.int64)
    mW = W.dim
    gv = np.repeat(V.grading, mW)
    gw = np.tile(W.grading, V.dim)
    grading = mt[gv, gw]
    n = g.size
    ratios = {}

    def ratio_vector(x):
        r = ratios.get(x)
        if r is None:
            table = np.empty((n, n), dtype=object)
            for a in range(n):
                for b in range(n):
                    table[a, b] = coproduct_ratio(phi, x, a, b)
            r = table[gv, gw]
            ratios[x] = r
        return r

    def produce(x):
        return V.action(x).kron(W.action(x)).scale_columns(ratio_vector(x))

    T = CrossedGModule(g, phi, grading, produce, label=f"({V.label or 'V'}*{W.label or 'W'})")
    if check:
        rep = verify_object(T)
        if not rep.ok:
            raise CrossedModuleError(f"tensor product fails {rep.failures()[0].name}")
    return T


@dataclass(eq=False)
class ModuleMap:
    source: CrossedGModule
    target: CrossedGModule
    matrix: SparseMatrix

    def __post_init__(self):
        if self.matrix.shape != (self.target.dim, self.source.dim):
            raise CrossedModuleError(f"matrix shape {self.matrix.shape} does not fit {self.target.dim}x{self.source.dim}")

    def __matmul__(self, other: "ModuleMap") -> "ModuleMap":
        return ModuleMap(other.source, self.target, self.matrix @ other.matrix)

    def tensor(self, other: "ModuleMap") -> "ModuleMap":
        return ModuleMap(
            tensor_objects(self.source, other.source), tensor_objects(self.target, other.target), self.matrix.kron(other.matrix)
        )

    def difference(self, other: "ModuleMap") -> Optional[dict]:
        return self.matrix.difference(other.matrix)


def identity_map(V: CrossedGModule) -> ModuleMap:
    return ModuleMap(V, V, SparseMatrix.identity(V.dim, V.order))


def verify_morphism(f: ModuleMap, iso: bool = False, only=None) -> Report:
    """Grading and intertwining; with ``iso`` also invertibility."""
    V, W = f.source, f.target
    report = Report("morphism", subject=f"{V.label or 'V'} -> {W.label or 'W'}")
    M = f.matrix
    if report.wants("grading", only):
        rows, cols = M.indices, M.col_indices()
        bad = np.flatnonzero(W.grading[rows] != V.grading[cols])
        w = None if not len(bad) else {"col": int(cols[bad[0]]), "row": int(rows[bad[0]])}
        report.add("grading", w is None, w)
    if report.wants("intertwining", only):
        witness = None
        for x in V.group.elements:
            diff = (M @ V.action(x)).difference(W.action(x) @ M)
            if diff is not None:
                witness = {"x": x, **diff}
                break
        report.add("intertwining", witness is None, witness)
    if iso and report.wants("invertible", only):
        report.add("invertible", M.is_invertible(), None if M.is_invertible() else {"shape": list(M.shape)})
    return report


def associator(V: CrossedGModule, W: CrossedGModule, Z: CrossedGModule, inverse: bool = False) -> ModuleMap:
    """(v (x) w) (x) z -> v (x) (w (x) z) scaled by phi(|v|,|w|,|z|)."""
    if not (V.compatible(W) and W.compatible(Z)):
        raise CrossedModuleError("objects carry different groups or cocycles")
    mW, mZ = W.dim, Z.dim
    a = np.repeat(V.grading, mW * mZ)
    b = np.tile(np.repeat(W.grading, mZ), V.dim)
    c = np.tile(Z.grading, V.dim * mW)
    vals = _phi_array(V.cocycle)[a, b, c]
    if inverse:
        vals = _obj([v.inverse() for v in vals])
    left = tensor_objects(tensor_objects(V, W), Z)
    right = tensor_objects(V, tensor_objects(W, Z))
    M = SparseMatrix.diagonal(vals, V.order)
    return ModuleMap(right, left, M) if inverse else ModuleMap(left, right, M)


def braiding(V: CrossedGModule, W: CrossedGModule, degree: Callable[[FiniteGroup, int], int] = None) -> ModuleMap:
    """Psi(v (x) w) = w (x) v <| |w|.

    ``degree`` maps |w| to the element acting on v; it exists so that tests can
    substitute a wrong rule and watch the hexagon fail.
    """
    if not V.compatible(W):
        raise CrossedModuleError("objects carry different groups or cocycles")
    g = V.group
    n, mV, mW = g.size, V.dim, W.dim
    acting = W.grading if degree is None else np.array([degree(g, int(s)) for s in W.grading], dtype=np.int64)
    # stack A_0 | A_1 | ... so that column x*mV + v is v <| x
    stacked_cols = [V.action(x) for x in range(n)]
    big = SparseMatrix(
        (mV, n * mV),
        np.concatenate([[0], np.cumsum(np.concatenate([np.diff(A.indptr) for A in stacked_cols]))]),
        np.concatenate([A.indices for A in stacked_cols]),
        np.concatenate([A.data for A in stacked_cols]),
        V.order,
    )
    v_idx = np.repeat(np.arange(mV, dtype=np.int64), mW)
    w_idx = np.tile(np.arange(mW, dtype=np.int64), mV)
    M = gather_columns(big, acting[w_idx] * mV + v_idx, row_offset=w_idx * mV, nrows=mW * mV)
    return ModuleMap(tensor_objects(V, W), tensor_objects(W, V), M)


def inverse_degree(g: FiniteGroup, s: int) -> int:
    return g.inv(s)


def verify_hexagon(V: CrossedGModule, W: CrossedGModule, Z: CrossedGModule, braid=braiding, only=None) -> Report:
    """Both hexagons and the braid relation as exact equalities of composed maps."""
    report = Report("hexagon", subject=f"{V.label or 'V'},{W.label or 'W'},{Z.label or 'Z'}")
    I = identity_map

    def assoc(a, b, c, inverse=False):
        return associator(a, b, c, inverse=inverse)

    if report.wants("hexagon_left", only):
        # Psi_{V(x)W, Z} = Phi_{Z,V,W} (Psi_{V,Z} (x) id) Phi^-1_{V,Z,W} (id (x) Psi_{W,Z}) Phi_{V,W,Z}
        lhs = braid(tensor_objects(V, W), Z)
        rhs = (
            assoc(Z, V, W)
            @ braid(V, Z).tensor(I(W))
            @ assoc(V, Z, W, inverse=True)
            @ I(V).tensor(braid(W, Z))
            @ assoc(V, W, Z)
        )
        report.add("hexagon_left", *_cmp(lhs, rhs, (V, W, Z)))

    if report.wants("hexagon_right", only):
        # Psi_{V, W(x)Z} = Phi^-1_{W,Z,V} (id (x) Psi_{V,Z}) Phi_{W,V,Z} (Psi_{V,W} (x) id) Phi^-1_{V,W,Z}
        lhs = braid(V, tensor_objects(W, Z))
        rhs = (
            assoc(W, Z, V, inverse=True)
            @ I(W).tensor(braid(V, Z))
            @ assoc(W, V, Z)
            @ braid(V, W).tensor(I(Z))
            @ assoc(V, W, Z, inverse=True)
        )
        report.add("hexagon_right", *_cmp(lhs, rhs, (V, W, Z)))

    if report.wants("braid_relation", only):
        lhs = (
            assoc(Z, W, V)
            @ braid(W, Z).tensor(I(V))
            @ assoc(W, Z, V, inverse=True)
            @ I(W).tensor(braid(V, Z))
            @ assoc(W, V, Z)
            @ braid(V, W).tensor(I(Z))
        )
        rhs = (
            I(Z).tensor(braid(V, W))
            @ assoc(Z, V, W)
            @ braid(V, Z).tensor(I(W))
            @ assoc(V, Z, W, inverse=True)
            @ I(V).tensor(braid(W, Z))
            @ assoc(V, W, Z)
        )
        report.add("braid_relation", *_cmp(lhs, rhs, (V, W, Z)))
    return report


def _cmp(lhs: ModuleMap, rhs: ModuleMap, objs) -> tuple:
    diff = lhs.difference(rhs)
    if diff is None:
        return True, None
    if "col" in diff:
        diff["source_basis"] = _unflatten(diff["col"], [o.dim for o in objs])
    return False, diff


def _unflatten(i: int, dims) -> list:
    out = []
    for m in reversed(dims):
        i, r = divmod(i, m)
        out.append(r)
    return out[::-1]


def verify_pentagon(V, W, Z, U, only=None) -> Report:
    """Phi_{V,W,Z(x)U} Phi_{V(x)W,Z,U} = (id (x) Phi_{W,Z,U}) Phi_{V,W(x)Z,U} (Phi_{V,W,Z} (x) id)."""
    report = Report("pentagon", subject="4 objects")
    if report.wants("pentagon", only):
        lhs = associator(V, W, tensor_objects(Z, U)) @ associator(tensor_objects(V, W), Z, U)
        rhs = (
            identity_map(V).tensor(associator(W, Z, U))
            @ associator(V, tensor_objects(W, Z), U)
            @ associator(V, W, Z).tensor(identity_map(U))
        )
        report.add("pentagon", *_cmp(lhs, rhs, (V, W, Z, U)))
    return report


def verify_naturality(V: CrossedGModule, Z: CrossedGModule, maps: Sequence[ModuleMap], braid=braiding, only=None) -> Report:
    """For f: V -> V': (id (x) f) Psi_{V,Z} = Psi_{V',Z} (f (x) id) and
    (f (x) id) Psi_{Z,V} = Psi_{Z,V'} (id (x) f)."""
    report = Report("naturality", subject=f"{len(maps)} maps")
    for name, side in (("natural_left", 0), ("natural_right", 1)):
        if not report.wants(name, only):
            continue
        witness = None
        for k, f in enumerate(maps):
            if side == 0:
                lhs = identity_map(Z).tensor(f) @ braid(f.source, Z)
                rhs = braid(f.target, Z) @ f.tensor(identity_map(Z))
            else:
                lhs = f.tensor(identity_map(Z)) @ braid(Z, f.source)
                rhs = braid(Z, f.target) @ identity_map(Z).tensor(f)
            diff = lhs.difference(rhs)
            if diff is not None:
                witness = {"map": k, **diff}
                break
        report.add(name, witness is None, witness)
    return report


# -- correspondence with D^phi(G)-modules ---------------------------------------


@dataclass(eq=False)
class LeftModule:
    """A representation of D^phi(G): one matrix per basis element x (x) delta_s."""

    dim: int
    rho: tuple

    def __post_init__(self):
        for M in self.rho:
            if M.shape != (self.dim, self.dim):
                raise CrossedModuleError("representation matrix has the wrong shape")


def regular_module(D: DPRInstance) -> LeftModule:
    alg = D.qhopf.algebra
    d = alg.dim
    mats = []
    for i in range(d):
        cols = {j: {k: c for k, c in alg.mul[i][j]} for j in range(d)}
        mats.append(SparseMatrix.from_columns((d, d), cols, alg.order))
    return LeftModule(d, tuple(mats))


def check_representation(D: DPRInstance, M: LeftModule) -> Optional[dict]:
    """Witness that M is not a D-module, or None."""
    alg = D.qhopf.algebra
    d, m = alg.dim, M.dim
    if len(M.rho) != d:
        return {"error": f"need {d} matrices, got {len(M.rho)}"}
    unit = SparseMatrix.zeros((m, m), alg.order)
    for (k,), c in alg.unit.terms.items():
        unit = unit + M.rho[k].scale(c)
    diff = unit.difference(SparseMatrix.identity(m, alg.order))
    if diff is not None:
        return {"unit": True, **diff}
    zero = SparseMatrix.zeros((m, m), alg.order)
    for i in range(d):
        for j in range(d):
            lhs = M.rho[i] @ M.rho[j]
            rhs = zero
            for k, c in alg.mul[i][j]:
                rhs = rhs + M.rho[k].scale(c)
            diff = lhs.difference(rhs)
            if diff is not None:
                return {"pair": [i, j], **diff}
    return None


def module_to_crossed(D: DPRInstance, M: LeftModule, check: bool = True) -> CrossedGModule:
    """|v| = s where (e (x) delta_s) fixes v; v <| x = (x (x) 1) |> v."""
    if check:
        w = check_representation(D, M)
        if w is not None:
            raise CrossedModuleError(f"not a representation: {w}")
    n, e = D.n, D.group.identity
    grading = np.full(M.dim, -1, dtype=np.int64)
    for s in range(n):
        P = M.rho[D.index(e, s)]
        for v in range(M.dim):
            col = P.column(v)
            if col:
                if col != {v: CycScalar.one(D.order)} or grading[v] != -1:
                    raise CrossedModuleError(f"basis vector {v} is not homogeneous")
                grading[v] = s
    if np.any(grading < 0):
        raise CrossedModuleError("some basis vector has no degree")
    acts = []
    for x in range(n):
        A = M.rho[D.index(x, 0)]
        for t in range(1, n):
            A = A + M.rho[D.index(x, t)]
        acts.append(A)
    return CrossedGModule(D.group, D.cocycle, grading, acts)


def crossed_to_module(V: CrossedGModule, D: Optional[DPRInstance] = None) -> LeftModule:
    """(x (x) delta_s) |> v = delta_{s,|v|} v <| x."""
    g = V.group
    n, m = g.size, V.dim
    one, zero = CycScalar.one(V.order), CycScalar.zero(V.order)
    mats = []
    for x in range(n):
        A = V.action(x)
        for s in range(n):
            proj = _obj([one if gs == s else zero for gs in V.grading])
            mats.append(A.scale_columns(proj))
    return LeftModule(m, tuple(mats))


def regular_object(group: FiniteGroup, phi: Cochain3, D: Optional[DPRInstance] = None) -> CrossedGModule:
    D = D or build_dpr(group, phi)
    V = module_to_crossed(D, regular_module(D), check=False)
    V.label = "reg"
    return V


def right_multiplication(D: DPRInstance, V: CrossedGModule, element) -> ModuleMap:
    """v -> v * element on the regular object; commutes with the left action."""
    alg = D.qhopf.algebra
    d = alg.dim
    cols = {}
    for j in range(d):
        col = {}
        for (k,), c in element.terms.items():
            for r, v in alg.mul[j][k]:
                col[r] = col.get(r, CycScalar.zero(alg.order)) + c * v
        cols[j] = col
    return ModuleMap(V, V, SparseMatrix.from_columns((d, d), cols, alg.order))


def regular_endomorphisms(D: DPRInstance, V: CrossedGModule) -> list:
    """Right multiplications by X_y and P_t: a generating set of End(regular)."""
    maps = [right_multiplication(D, V, D.X(y)) for y in D.group.elements]
    maps += [right_multiplication(D, V, D.P(t)) for t in D.group.elements]
    return maps


def rmatrix_braiding(D: DPRInstance, V: CrossedGModule, W: CrossedGModule, R=None) -> SparseMatrix:
    """v (x) w -> sum R2 |> w (x) R1 |> v through the module correspondence."""
    R = D.qhopf.rmatrix if R is None else R
    MV, MW = crossed_to_module(V, D), crossed_to_module(W, D)
    mV, mW = V.dim, W.dim
    # flip: index v*mW + w -> w*mV + v
    v_idx = np.repeat(np.arange(mV, dtype=np.int64), mW)
    w_idx = np.tile(np.arange(mW, dtype=np.int64), mV)
    one = CycScalar.one(V.order)
    flip = SparseMatrix.from_triples((mW * mV, mV * mW), w_idx * mV + v_idx, v_idx * mW + w_idx, _obj([one] * (mV * mW)), V.order)
    total = SparseMatrix.zeros((mW * mV, mW * mV), V.order)
    for (i, j), c in R.items():
        total = total + MW.rho[j].kron(MV.rho[i]).scale(c)
    return total @ flip


def verify_rmatrix_transport(D: DPRInstance, V: CrossedGModule, W: CrossedGModule, braid=braiding, only=None) -> Report:
    report = Report("R-matrix transport", subject=f"{V.label or 'V'},{W.label or 'W'}")
    if report.wants("rmatrix_braiding", only):
        lhs = braid(V, W).matrix
        rhs = rmatrix_braiding(D, V, W)
        diff = lhs.difference(rhs)
        report.add("rmatrix_braiding", diff is None, diff)
    return report


def verify_category(D: DPRInstance, triples: bool = True, only=None) -> Report:
    """Object laws, tensor closure, hexagons, braid relation, naturality and
    R-transport on the regular object of D."""
    V = regular_object(D.group, D.cocycle, D)
    report = Report("crossed category", subject=f"{D.group.label}, order {D.order}")

    def sub(prefix):
        if only is None:
            return None
        return {c[len(prefix) :] for c in only if c.startswith(prefix)}

    def run(prefix, fn, *args, **kw):
        o = sub(prefix)
        if o is not None and not o:
            return
        report.extend(fn(*args, only=o, **kw), prefix=prefix)

    run("object/", verify_object, V)
    run("tensor/", verify_object, tensor_objects(V, V))
    run("braiding_morphism/", verify_morphism, braiding(V, V), iso=True)
    run("rtransport/", verify_rmatrix_transport, D, V, V)
    run("naturality/", verify_naturality, V, V, regular_endomorphisms(D, V))
    if triples:
        run("hexagon/", verify_hexagon, V, V, V)
    else:
        one = trivial_object(D.group, D.cocycle)
        run("hexagon/", verify_hexagon, V, V, one)
    return report
