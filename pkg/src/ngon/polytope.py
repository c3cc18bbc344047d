"""Vertex enumeration for the polytope of weight-capped channels.

The feasible set couples a 3 x |X| conditional matrix P with outcome
weights lam:

    P(y|x) >= 0,  P(y|x) <= lam_y,  sum_y P(y|x) = 1,
    lam_y >= 0,   sum_y lam_y = c,  with c in [2, 3].

Every constraint is affine with coefficients in {0, +-1}, so each basis
subset yields an integer matrix whose determinant is a whole number; a
determinant threshold of 0.5 separates singular from nonsingular exactly.
Vertices are found by brute force over all ways to saturate 2|X| + 2
inequalities on top of the equalities, solving the square systems in
batches, filtering for feasibility, and deduplicating geometrically.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .capacity import blahut_arimoto

ZERO_WEIGHT = "ZERO_WEIGHT"
CANONICAL_FOUR = "CANONICAL_FOUR"
UNCLASSIFIED = "UNCLASSIFIED"

MAX_ALPHABET = 4
FEASIBILITY_TOL = 1e-10
DEDUP_TOL = 1e-8


class ResourceBoundError(ValueError):
    """Requested alphabet size exceeds the enumeration bound."""


@dataclass(frozen=True, eq=False)
class VertexPoint:
    """A vertex of the capped-channel polytope.

    ``P`` is the 3 x alphabet conditional matrix, ``lam`` the outcome
    weights, ``saturated`` the names of all constraints tight at the point.
    """

    P: np.ndarray
    lam: np.ndarray
    c: float
    saturated: tuple

    def to_dict(self) -> dict:
        return {
            "c": float(self.c),
            "lambda": [float(v) for v in self.lam],
            "P": [[float(v) for v in row] for row in self.P],
            "class": classify_vertex(self),
        }


def _constraint_system(alphabet_size: int, c: float):
    """Equality matrix/rhs, inequality matrix (rows >= 0), and row names."""
    X = alphabet_size
    dim = 3 * X + 3
    eq = np.zeros((X + 1, dim))
    eq_rhs = np.empty(X + 1)
    for x in range(X):
        for y in range(3):
            eq[x, y * X + x] = 1.0
        eq_rhs[x] = 1.0
    eq[X, 3 * X :] = 1.0
    eq_rhs[X] = c

    rows = []
    names = []
    for y in range(3):
        for x in range(X):
            row = np.zeros(dim)
            row[y * X + x] = 1.0
            rows.append(row)
            names.append(f"P[{y},{x}]>=0")
    for y in range(3):
        for x in range(X):
            row = np.zeros(dim)
            row[3 * X + y] = 1.0
            row[y * X + x] = -1.0
            rows.append(row)
            names.append(f"P[{y},{x}]<=lam[{y}]")
    for y in range(3):
        row = np.zeros(dim)
        row[3 * X + y] = 1.0
        rows.append(row)
        names.append(f"lam[{y}]>=0")
    return eq, eq_rhs, np.array(rows), names


def _validate_request(alphabet_size: int, c: float) -> None:
    if not isinstance(alphabet_size, (int, np.integer)) or alphabet_size < 2:
        raise ValueError("alphabet_size must be an integer >= 2")
    if alphabet_size > MAX_ALPHABET:
        raise ResourceBoundError(
            f"alphabet_size {alphabet_size} exceeds the enumeration bound {MAX_ALPHABET}"
        )
    if not 2.0 - 1e-12 <= c <= 3.0 + 1e-12:
        raise ValueError("c must lie in [2, 3]")


def enumerate_vertices(
    alphabet_size: int,
    c: float,
    *,
    feasibility_tol: float = FEASIBILITY_TOL,
    dedup_tol: float = DEDUP_TOL,
    chunk: int = 32768,
) -> list[VertexPoint]:
    """All vertices of the polytope, deduplicated within ``dedup_tol``.

    Brute force over basis subsets: the equalities are always active, so a
    vertex needs 2|X| + 2 additional tight inequalities with independent
    gradients.  Degenerate vertices (more than the minimum tight) are still
    found because some nonsingular subset of their tight set is enumerated.
    """
    _validate_request(alphabet_size, c)
    X = alphabet_size
    dim = 3 * X + 3
    eq, eq_rhs, ineq, names = _constraint_system(X, c)
    need = dim - (X + 1)
    combos = np.array(list(itertools.combinations(range(len(ineq)), need)))
    rhs = np.concatenate([eq_rhs, np.zeros(need)])

    points = []
    for start in range(0, len(combos), chunk):
        batch = combos[start : start + chunk]
        systems = np.empty((len(batch), dim, dim))
        systems[:, : X + 1] = eq
        systems[:, X + 1 :] = ineq[batch]
        dets = np.abs(np.linalg.det(systems))
        good = dets > 0.5
        if not good.any():
            continue
        sols = np.linalg.solve(systems[good], rhs)
        feasible = (sols @ ineq.T >= -feasibility_tol).all(axis=1)
        points.extend(sols[feasible])

    unique = []
    seen = {}
    for z in points:
        key = tuple(np.round(z, 9))
        if key in seen:
            continue
        if any(np.abs(z - u).max() <= dedup_tol for u in unique):
            seen[key] = True
            continue
        seen[key] = True
        unique.append(z)
    unique.sort(key=lambda z: tuple(np.round(z, 9)))

    vertices = []
    for z in unique:
        slack = ineq @ z
        saturated = tuple(
            name for name, s in zip(names, slack) if abs(s) <= 10 * feasibility_tol
        )
        vertices.append(
            VertexPoint(
                P=z[: 3 * X].reshape(3, X),
                lam=z[3 * X :].copy(),
                c=float(c),
                saturated=saturated,
            )
        )
    return vertices


def is_vertex(
    P,
    lam,
    c: float,
    *,
    tol: float = 1e-8,
) -> bool:
    """Feasibility plus full-rank tight-constraint test at a single point.

    Cheap spot check for alphabet sizes where full enumeration is costly:
    the point is a vertex iff it satisfies every constraint and the
    gradients of its tight constraints span the whole variable space.
    """
    P = np.asarray(P, float)
    lam = np.asarray(lam, float)
    if P.ndim != 2 or P.shape[0] != 3 or lam.shape != (3,):
        raise ValueError("P must be 3 x alphabet and lam a 3-vector")
    X = P.shape[1]
    eq, eq_rhs, ineq, _ = _constraint_system(X, c)
    z = np.concatenate([P.reshape(-1), lam])
    if np.abs(eq @ z - eq_rhs).max() > tol:
        return False
    slack = ineq @ z
    if slack.min() < -tol:
        return False
    active = ineq[np.abs(slack) <= tol]
    basis = np.vstack([eq, active])
    return np.linalg.matrix_rank(basis) == 3 * X + 3


def classify_vertex(v: VertexPoint, *, tol: float = 1e-8) -> str:
    """Tag a vertex by its weight pattern.

    ZERO_WEIGHT: some outcome weight vanishes.  CANONICAL_FOUR: weights are
    a permutation of (c-2, 1, 1) and, in that permuted frame, every column
    is one of the four distributions (0,0,1), (0,1,0), (c-2,0,3-c),
    (c-2,3-c,0).  Anything else is UNCLASSIFIED.
    """
    lam = np.asarray(v.lam, float)
    if lam.min() <= 1e-10:
        return ZERO_WEIGHT
    c = float(v.c)
    target = np.array([c - 2.0, 1.0, 1.0])
    columns = np.array(
        [
            [0.0, 0.0, 1.0],
            [0.0, 1.0, 0.0],
            [c - 2.0, 0.0, 3.0 - c],
            [c - 2.0, 3.0 - c, 0.0],
        ]
    )
    for perm in itertools.permutations(range(3)):
        if np.abs(lam[list(perm)] - target).max() > tol:
            continue
        Pp = v.P[list(perm), :]
        ok = True
        for x in range(Pp.shape[1]):
            if np.abs(columns - Pp[:, x]).max(axis=1).min() > tol:
                ok = False
                break
        if ok:
            return CANONICAL_FOUR
    return UNCLASSIFIED


def max_vertex_capacity(alphabet_size: int, c: float, *, tol: float = 1e-10) -> float:
    """Largest channel capacity attained at any vertex of the polytope."""
    best = 0.0
    for v in enumerate_vertices(alphabet_size, c):
        best = max(best, blahut_arimoto(v.P.T, tol=tol).capacity_bits)
    return best


def vertex_summary(alphabet_size: int, c: float) -> dict:
    """Counts by class plus the maximum vertex capacity, for reporting."""
    vertices = enumerate_vertices(alphabet_size, c)
    tags = [classify_vertex(v) for v in vertices]
    best = 0.0
    for v in vertices:
        best = max(best, blahut_arimoto(v.P.T).capacity_bits)
    return {
        "c": float(c),
        "alphabet_size": int(alphabet_size),
        "vertex_count": len(vertices),
        "zero_weight_count": tags.count(ZERO_WEIGHT),
        "canonical_count": tags.count(CANONICAL_FOUR),
        "unclassified_count": tags.count(UNCLASSIFIED),
        "max_capacity_bits": best,
    }
