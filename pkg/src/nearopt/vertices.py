"""Brute-force enumeration of basic feasible points, used as a test oracle.

Every vertex of a bounded polyhedron is the intersection of n active
hyperplanes chosen among constraint rows and finite variable bounds. The
oracle tries all combinations, skips near-singular systems, keeps the
feasible solutions, and deduplicates. It shares no code with the simplex
solver on purpose.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .errors import TooLargeError
from .lp import LinearProgram, VariableId, to_geq_form

_CHUNK = 100_000
_SINGULAR_TOL = 1e-10  # on unit-normalised rows, acts like a pivot cutoff


def enumerate_vertices(lp: LinearProgram, tol_feas: float = 1e-7,
                       max_vars: int = 12, max_hyperplanes: int = 24) -> list[dict]:
    """All basic feasible points of `lp`, as maps VariableId -> value.

    Raises TooLargeError when n > max_vars or the hyperplane count
    (>=-normalised rows plus finite bounds) exceeds max_hyperplanes.
    """
    n = lp.n
    if n > max_vars:
        raise TooLargeError(f"{n} variables exceed the guard of {max_vars}")

    geq = to_geq_form(lp)
    planes = []
    rhs = []
    for con in geq.constraints:
        row = np.zeros(n)
        for var, coef in con.expr.terms.items():
            row[var.index] = coef
        planes.append(row)
        rhs.append(con.rhs - con.expr.constant)
    for j in range(n):
        for bound in (lp.lower[j], lp.upper[j]):
            if math.isfinite(bound):
                row = np.zeros(n)
                row[j] = 1.0
                planes.append(row)
                rhs.append(bound)
    total = len(planes)
    if total > max_hyperplanes:
        raise TooLargeError(
            f"{total} hyperplanes exceed the guard of {max_hyperplanes}")
    if total < n:
        return []

    H = np.asarray(planes)
    h = np.asarray(rhs)
    norms = np.linalg.norm(H, axis=1)
    norms[norms == 0] = 1.0
    Hn = H / norms[:, None]
    hn = h / norms

    G = np.asarray([Hn[i] for i in range(len(geq.constraints))])
    g = hn[:len(geq.constraints)]
    lo = np.asarray(lp.lower)
    up = np.asarray(lp.upper)

    points: dict[tuple, np.ndarray] = {}
    combos = itertools.combinations(range(total), n)
    while True:
        chunk = list(itertools.islice(combos, _CHUNK))
        if not chunk:
            break
        idx = np.asarray(chunk)
        mats = Hn[idx]
        dets = np.abs(np.linalg.det(mats))
        ok = dets > _SINGULAR_TOL
        if not ok.any():
            continue
        sols = np.linalg.solve(mats[ok], hn[idx[ok]][..., None])[..., 0]
        feas = np.ones(len(sols), dtype=bool)
        if len(geq.constraints):
            feas &= (sols @ G.T >= g - tol_feas).all(axis=1)
        feas &= (sols >= lo - tol_feas).all(axis=1)
        feas &= (sols <= up + tol_feas).all(axis=1)
        for x in sols[feas]:
            key = tuple(np.round(x, 9))
            points.setdefault(key, x)

    return [{var: float(x[var.index]) for var in lp.variables}
            for x in points.values()]


def min_objective_over_vertices(lp: LinearProgram, tol_feas: float = 1e-7):
    """(best value, best vertex) of the lp objective over enumerated vertices.

    Returns (None, None) when no feasible vertex exists.
    """
    best_val, best_pt = None, None
    for point in enumerate_vertices(lp, tol_feas=tol_feas):
        val = lp.objective.constant + sum(
            coef * point[var] for var, coef in lp.objective.terms.items())
        if best_val is None or val < best_val:
            best_val, best_pt = val, point
    return best_val, best_pt
