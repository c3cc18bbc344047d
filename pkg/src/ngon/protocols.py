"""Communication protocols over polygon theories.

Four executable constructions:

* ``run_ic`` plays the two-bit random access code over an even polygon:
  the sender encodes (x0, x1) into one extremal state, the receiver picks
  one of two antipodal pair measurements depending on which bit is wanted.
  The first bit is always decoded perfectly; the decodable information
  summed over both bits exceeds 1 bit even though the theory's one-shot
  classical capacity is exactly 1 bit.

* ``best_ic_encoding`` is the brute-force oracle for the same game: all
  encodings of the two bits into extremal states, against all antipodal
  pair measurements per requested bit.

* ``ne_matrix`` builds the nondeterministic NOT-EQUAL witness: the answer
  bit is never 1 when the inputs agree, and has strictly positive
  probability of being 1 whenever they differ.

* ``simulate_transmission`` reproduces one polygon transmission with
  classical messages: the sender splits the state into extremal vertices,
  transmits a vertex index (log2 n bits), and the receiver samples the
  measurement on that vertex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .capacity import antipodal_pair_rate, binary_entropy, theory_capacity
from .geometry import InvalidStateError, Measurement, Theory, extremal_decomposition
from .polytope import ResourceBoundError, max_vertex_capacity

IC_SEARCH_MAX = 24


@dataclass(frozen=True, eq=False)
class ICReport:
    """Exact statistics of the two-bit random access code."""

    n: int
    encoding: dict
    success_bit0: float
    success_bit1: float
    worst_bit_success: float
    info_bit0: float
    info_bit1: float
    info_sum_bits: float
    info_avg_bits: float

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "encoding": {f"{x0}{x1}": int(i) for (x0, x1), i in sorted(self.encoding.items())},
            "success_bit0": self.success_bit0,
            "success_bit1": self.success_bit1,
            "worst_bit_success": self.worst_bit_success,
            "info_bit0": self.info_bit0,
            "info_bit1": self.info_bit1,
            "info_sum_bits": self.info_sum_bits,
            "info_avg_bits": self.info_avg_bits,
        }


@dataclass(frozen=True, eq=False)
class NEReport:
    """NOT-EQUAL witness matrix P(answer=1 | x, y) over the effective alphabet."""

    n: int
    effective_alphabet: int
    matrix: np.ndarray
    min_offdiag: float
    max_diag: float

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "effective_alphabet": self.effective_alphabet,
            "matrix": [[float(v) for v in row] for row in self.matrix],
            "min_offdiag": self.min_offdiag,
            "max_diag": self.max_diag,
        }


@dataclass(frozen=True, eq=False)
class SimulationReport:
    """One simulated transmission: analytic marginal versus sampled counts."""

    n: int
    message_bits: float
    analytic_dist: np.ndarray
    empirical_dist: np.ndarray
    tv_distance: float
    samples: int
    seed: int

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "message_bits": self.message_bits,
            "analytic_dist": [float(v) for v in self.analytic_dist],
            "empirical_dist": [float(v) for v in self.empirical_dist],
            "tv_distance": self.tv_distance,
            "samples": self.samples,
            "seed": self.seed,
        }


def _require_even(theory: Theory) -> None:
    if not theory.even:
        raise ValueError("this protocol requires an even polygon")


def ic_encoding(theory: Theory) -> dict:
    """Map both bits to one extremal state: (x0, x1) -> x0*n/2 + (x0 xor x1).

    Placing the x0=1 pair antipodally to the x0=0 pair makes the first bit
    perfectly decodable; the xor twist aligns the second bit with the other
    antipodal measurement up to adjacent-vertex noise.
    """
    _require_even(theory)
    half = theory.n // 2
    return {
        (x0, x1): (x0 * half + (x0 ^ x1)) % theory.n
        for x0 in (0, 1)
        for x1 in (0, 1)
    }


def _pair_outcome_table(theory: Theory, anchor: int) -> np.ndarray:
    """P(first outcome | state i) for the antipodal pair at ``anchor``."""
    pair = theory.measurement((anchor, anchor + theory.n // 2))
    return np.clip(theory.states() @ pair.effects[0], 0.0, 1.0)


def _binary_info(t0: float, t1: float) -> float:
    """Information in bits between a fair input bit and the pair outcome."""
    hb = lambda p: float(binary_entropy(np.array(p)))
    return hb(0.5 * (t0 + t1)) - 0.5 * (hb(t0) + hb(t1))


def run_ic(theory: Theory) -> ICReport:
    """Play the random access code with the antipodal pair measurements.

    The receiver measures the pair anchored at 1 when asked for bit 0
    (first outcome means x0 = 0) and the pair anchored at 0 when asked for
    bit 1 (first outcome means x1 = 0).  All probabilities are exact dot
    products; both information quantities come from the exact joints.
    """
    _require_even(theory)
    if theory.n < 4:
        raise ValueError("need n >= 4")
    enc = ic_encoding(theory)
    g_bit0 = _pair_outcome_table(theory, 1)
    g_bit1 = _pair_outcome_table(theory, 0)

    # per-input probability that the requested bit is decoded correctly
    succ0 = []
    succ1 = []
    for (x0, x1), i in sorted(enc.items()):
        p_first0 = g_bit0[i]
        succ0.append(p_first0 if x0 == 0 else 1.0 - p_first0)
        p_first1 = g_bit1[i]
        succ1.append(p_first1 if x1 == 0 else 1.0 - p_first1)
    success_bit0 = float(np.mean(succ0))
    success_bit1 = float(np.mean(succ1))

    # I(x_j; outcome | j): average the other bit out of the outcome law
    t0 = 0.5 * (g_bit0[enc[(0, 0)]] + g_bit0[enc[(0, 1)]])
    t1 = 0.5 * (g_bit0[enc[(1, 0)]] + g_bit0[enc[(1, 1)]])
    info0 = _binary_info(float(t0), float(t1))
    s0 = 0.5 * (g_bit1[enc[(0, 0)]] + g_bit1[enc[(1, 0)]])
    s1 = 0.5 * (g_bit1[enc[(0, 1)]] + g_bit1[enc[(1, 1)]])
    info1 = _binary_info(float(s0), float(s1))

    return ICReport(
        n=theory.n,
        encoding=enc,
        success_bit0=success_bit0,
        success_bit1=success_bit1,
        worst_bit_success=min(success_bit0, success_bit1),
        info_bit0=info0,
        info_bit1=info1,
        info_sum_bits=info0 + info1,
        info_avg_bits=0.5 * (info0 + info1),
    )


def best_ic_encoding(theory: Theory):
    """Exhaustive random-access-code search over an even polygon.

    Scans all n^4 encodings of two bits into extremal states and, for each
    requested bit, all n/2 antipodal pair measurements, maximizing the sum
    of the two exact information terms.  Outcome relabelings are absorbed
    by the information quantity, so guess rules need not be searched.
    Returns (encoding, (anchor_bit0, anchor_bit1), info_sum_bits).
    """
    _require_even(theory)
    n = theory.n
    if n > IC_SEARCH_MAX:
        raise ResourceBoundError(f"n={n} exceeds the exhaustive search bound {IC_SEARCH_MAX}")
    half = n // 2
    # G[a, i] = P(first outcome | state i) under the pair anchored at a
    G = np.stack([_pair_outcome_table(theory, a) for a in range(half)])

    def hb(p):
        return binary_entropy(np.clip(p, 0.0, 1.0))

    # pair-average tables: PA[a, i, k] = mean outcome law when the averaged
    # bit picks state i or k equiprobably
    PA = 0.5 * (G[:, :, None] + G[:, None, :])
    HPA = hb(PA)
    # info for (pairA, pairB) under anchor a, then best anchor per pair-pair
    best = np.full((n * n, n * n), -1.0)
    flatPA = PA.reshape(half, n * n)
    flatH = HPA.reshape(half, n * n)
    for a in range(half):
        mix = hb(0.5 * (flatPA[a][:, None] + flatPA[a][None, :]))
        info = mix - 0.5 * (flatH[a][:, None] + flatH[a][None, :])
        np.maximum(best, info, out=best)
    q0 = best.reshape(n, n, n, n)  # axes (e00, e01, e10, e11)
    q1 = best.reshape(n, n, n, n).transpose(0, 2, 1, 3)  # pairs (e00,e10),(e01,e11)
    total = q0 + q1
    flat_idx = int(np.argmax(total))
    e00, e01, e10, e11 = np.unravel_index(flat_idx, (n, n, n, n))
    info_sum = float(total[e00, e01, e10, e11])

    enc = {(0, 0): int(e00), (0, 1): int(e01), (1, 0): int(e10), (1, 1): int(e11)}
    # recover the winning anchors for the report
    def best_anchor(i, k, r, s):
        vals = []
        for a in range(half):
            vals.append(_binary_info(float(PA[a, i, k]), float(PA[a, r, s])))
        return int(np.argmax(vals))

    a0 = best_anchor(e00, e01, e10, e11)
    a1 = best_anchor(e00, e10, e01, e11)
    return enc, (a0, a1), info_sum


def ne_matrix(theory: Theory) -> NEReport:
    """NOT-EQUAL witness over the theory's effective alphabet.

    Odd n: the receiver measures the 3-outcome completion on indices
    (y, y+(n-1)/2, y+(n+1)/2) and answers 1 unless the first outcome fires;
    the answer probability is assembled from the two non-anchor outcomes,
    whose overlaps vanish identically at x = y.  Even n: inputs index every
    second vertex and the receiver uses the antipodal pair (2y, 2y+n/2),
    answering 1 on the far outcome; the effective alphabet halves.
    """
    n = theory.n
    states = theory.states()
    if theory.even:
        size = n // 2
        matrix = np.empty((size, size))
        for y in range(size):
            pair = theory.measurement((2 * y, 2 * y + n // 2))
            far = np.clip(states @ pair.effects[1], 0.0, 1.0)
            matrix[:, y] = far[::2]
    else:
        size = n
        m = (n - 1) // 2
        matrix = np.empty((size, size))
        for y in range(size):
            triple = theory.measurement((y, y + m, y + m + 1))
            others = np.clip(states @ triple.effects[1:].T, 0.0, 1.0)
            matrix[:, y] = others.sum(axis=1)
    diag = np.diag(matrix)
    off = matrix[~np.eye(size, dtype=bool)]
    return NEReport(
        n=n,
        effective_alphabet=size,
        matrix=matrix,
        min_offdiag=float(off.min()) if size > 1 else float("nan"),
        max_diag=float(diag.max()),
    )


def even_full_alphabet_ne_matrix(theory: Theory) -> NEReport:
    """The uncorrected even-n construction on the full alphabet.

    Keeping every vertex as an input breaks the witness: the pair effect at
    y saturates on the neighboring vertex y-1, so the answer probability
    vanishes at x = y-1 even though the inputs differ.  Shipped only as a
    negative control; ``ne_matrix`` halves the alphabet instead.
    """
    _require_even(theory)
    n = theory.n
    states = theory.states()
    matrix = np.empty((n, n))
    for y in range(n):
        pair = theory.measurement((y, y + n // 2))
        matrix[:, y] = np.clip(states @ pair.effects[1], 0.0, 1.0)
    diag = np.diag(matrix)
    off = matrix[~np.eye(n, dtype=bool)]
    return NEReport(
        n=n,
        effective_alphabet=n,
        matrix=matrix,
        min_offdiag=float(off.min()),
        max_diag=float(diag.max()),
    )


def simulate_transmission(
    theory: Theory,
    state,
    measurement: Measurement,
    samples: int,
    seed: int,
) -> SimulationReport:
    """Simulate one state transmission with a classical vertex index.

    The state splits into extremal vertices (two adjacent vertices plus a
    uniformly spread barycenter share); the sender samples a vertex index
    and the receiver samples the measurement outcome on that vertex.  The
    analytic marginal equals the direct outcome law of the state itself by
    linearity, which the report exposes for comparison against the counts.
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    state = np.asarray(state, float)
    weights = extremal_decomposition(theory, state)  # raises InvalidStateError
    rows = np.clip(theory.states() @ measurement.effects.T, 0.0, 1.0)
    analytic = weights @ rows
    sampling_rows = rows / rows.sum(axis=1, keepdims=True)

    rng = np.random.default_rng(seed)
    vertex_counts = rng.multinomial(samples, weights / weights.sum())
    k = rows.shape[1]
    counts = np.zeros(k, dtype=np.int64)
    for i, c in enumerate(vertex_counts):
        if c:
            counts += rng.multinomial(int(c), sampling_rows[i])
    empirical = counts / samples
    tv = 0.5 * float(np.abs(empirical - analytic).sum())
    return SimulationReport(
        n=theory.n,
        message_bits=math.log2(theory.n),
        analytic_dist=analytic,
        empirical_dist=empirical,
        tv_distance=tv,
        samples=int(samples),
        seed=int(seed),
    )


_EVEN_VERTEX_BOUND = {}


def ic_bound_check(
    theory: Theory,
    *,
    info_threshold: float = 1e-9,
    capacity_tol: float = 1e-6,
    enumeration_max: int = 64,
) -> bool:
    """Witness that decodable information beats the one-shot capacity.

    True iff the random access code's information sum exceeds
    1 + info_threshold while the theory's capacity equals 1 within
    capacity_tol.  Up to ``enumeration_max`` the capacity comes from the
    full measurement enumeration; beyond it the antipodal pair provides the
    achievability side and the channel-polytope vertex bound (computed once
    and cached) certifies the converse, so the check stays exact at sizes
    where enumeration is impractical.
    """
    _require_even(theory)
    info = run_ic(theory).info_sum_bits
    if not info > 1.0 + info_threshold:
        return False
    if theory.n <= enumeration_max:
        cap = theory_capacity(theory, enumeration_max=enumeration_max).capacity_bits
        return abs(cap - 1.0) <= capacity_tol
    if "even" not in _EVEN_VERTEX_BOUND:
        _EVEN_VERTEX_BOUND["even"] = max_vertex_capacity(3, 2.0)
    upper = _EVEN_VERTEX_BOUND["even"]
    lower = antipodal_pair_rate(theory)
    return abs(lower - 1.0) <= capacity_tol and upper <= 1.0 + capacity_tol
