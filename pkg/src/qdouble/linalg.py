"""Exact sparse Gaussian elimination over Q(zeta_N).

Matrices are column maps ``col -> {row: scalar}`` with arbitrary hashable
row/column labels.  Large systems are never densified: the solver only
touches the connected block of the row/column incidence graph that the
right-hand side reaches.
"""
from __future__ import annotations

from collections import deque
from typing import Callable, Hashable, Iterable, Mapping

from .cyclotomic import CycScalar


class SingularError(ArithmeticError):
    pass


def _eliminate(rows: dict, cols_order: list, with_rhs: bool):
    """In-place Gauss-Jordan on row dicts; returns pivot map col -> row label."""
    col_index: dict = {}
    for r, entries in rows.items():
        for c in entries:
            if c != "__rhs__":
                col_index.setdefault(c, set()).add(r)
    pivots = {}
    used = set()
    for c in cols_order:
        cand = [r for r in col_index.get(c, ()) if r not in used]
        if not cand:
            continue
        pr = min(cand, key=lambda r: (len(rows[r]), repr(r)))
        used.add(pr)
        pivots[c] = pr
        prow = rows[pr]
        scale = prow[c].inverse()
        for k in list(prow):
            prow[k] = prow[k] * scale
        for r in list(col_index.get(c, ())):
            if r == pr:
                continue
            row = rows[r]
            f = row.get(c)
            if f is None:
                continue
            for k, v in prow.items():
                nv = row.get(k)
                nv = -(f * v) if nv is None else nv - f * v
                if nv.is_zero():
                    if k in row:
                        del row[k]
                    if k != "__rhs__":
                        col_index[k].discard(r)
                else:
                    if k not in row and k != "__rhs__":
                        col_index.setdefault(k, set()).add(r)
                    row[k] = nv
    return pivots


def solve_square(columns: Mapping[Hashable, Mapping[Hashable, CycScalar]], rhs: Mapping[Hashable, CycScalar]) -> dict:
    """Solve M x = rhs for a square nonsingular block given column-wise."""
    row_labels = set()
    for col in columns.values():
        row_labels.update(col)
    row_labels.update(rhs)
    if len(row_labels) != len(columns):
        raise SingularError(f"block is {len(row_labels)}x{len(columns)}, not square")
    rows: dict = {r: {} for r in row_labels}
    for c, col in columns.items():
        for r, v in col.items():
            if not v.is_zero():
                rows[r][c] = v
    for r, v in rhs.items():
        if not v.is_zero():
            rows[r]["__rhs__"] = v
    order = sorted(columns, key=repr)
    pivots = _eliminate(rows, order, True)
    if len(pivots) != len(columns):
        raise SingularError("singular block")
    sol = {}
    for c, r in pivots.items():
        v = rows[r].get("__rhs__")
        if v is not None and not v.is_zero():
            sol[c] = v
    return sol


def solve_reachable(
    column: Callable[[Hashable], Mapping[Hashable, CycScalar]],
    columns_hitting: Callable[[Hashable], Iterable[Hashable]],
    rhs: Mapping[Hashable, CycScalar],
) -> dict:
    """Solve M x = rhs restricted to the incidence block reachable from rhs.

    If the full matrix is invertible every connected block is square and
    nonsingular, so a non-square or singular reachable block proves that the
    full matrix is singular.
    """
    cols: dict = {}
    seen_rows = set(rhs)
    queue = deque(rhs)
    while queue:
        r = queue.popleft()
        for c in columns_hitting(r):
            if c in cols:
                continue
            col = column(c)
            cols[c] = col
            for r2 in col:
                if r2 not in seen_rows:
                    seen_rows.add(r2)
                    queue.append(r2)
    if len(cols) != len(seen_rows):
        raise SingularError(f"reachable block is {len(seen_rows)}x{len(cols)}, not square")
    return solve_square(cols, rhs)


def rank(columns: Mapping[Hashable, Mapping[Hashable, CycScalar]]) -> int:
    rows: dict = {}
    for c, col in columns.items():
        for r, v in col.items():
            if not v.is_zero():
                rows.setdefault(r, {})[c] = v
    return len(_eliminate(rows, sorted(columns, key=repr), False))
