"""Acceptance checks: every headline claim as a pass/fail computation.

Each check is a pure function returning a CheckResult; the registry maps
stable keys to checks so the command line can run any subset.  ``notes``
lists construction pitfalls that the library corrects by design; they are
informational, not failures.
"""

from __future__ import annotations

import functools
import math
import time
from dataclasses import dataclass

import numpy as np

from .capacity import (
    binary_entropy,
    blahut_arimoto,
    mutual_information_bits,
    odd_triple_rate,
    theory_capacity,
)
from .decomposition import caratheodory_reduce, decompose_into_binary_channels, trace_information
from .geometry import Theory, closed_form_triple_weights, min_effect_weight
from .polytope import (
    UNCLASSIFIED,
    ZERO_WEIGHT,
    classify_vertex,
    enumerate_vertices,
    max_vertex_capacity,
)
from .protocols import (
    best_ic_encoding,
    even_full_alphabet_ne_matrix,
    ne_matrix,
    run_ic,
    simulate_transmission,
)

LOG2_3 = math.log2(3.0)


@dataclass(frozen=True)
class CheckResult:
    key: str
    passed: bool
    details: str
    elapsed_s: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.key} ({self.elapsed_s:.2f}s): {self.details}"


@functools.lru_cache(maxsize=None)
def capacity_sweep(parity: str, max_n: int = 64) -> tuple:
    """Cached (n, capacity_bits) sweep for one parity up to max_n."""
    start = 4 if parity == "even" else 3
    out = []
    for n in range(start, max_n + 1, 2):
        out.append((n, theory_capacity(Theory(n), enumeration_max=max_n).capacity_bits))
    return tuple(out)


def check_even_capacity(max_n: int = 64) -> CheckResult:
    """Every even polygon up to max_n has one-shot capacity exactly 1 bit."""
    t0 = time.time()
    rows = capacity_sweep("even", max_n)
    worst = max(abs(cap - 1.0) for _, cap in rows)
    passed = worst <= 1e-6
    return CheckResult(
        "even-capacity",
        passed,
        f"{len(rows)} even sizes, worst |capacity - 1| = {worst:.2e} (tol 1e-6)",
        time.time() - t0,
    )


def check_odd_capacity(max_n: int = 64) -> CheckResult:
    """Odd capacities: log2(3) at the triangle, then strictly above 1 bit."""
    t0 = time.time()
    rows = dict(capacity_sweep("odd", max_n - 1 if max_n % 2 == 0 else max_n))
    top = max(rows)
    tri_gap = abs(rows[3] - LOG2_3)
    above = all(cap > 1.0 + 1e-9 for cap in rows.values())
    below = all(cap <= LOG2_3 + 1e-9 for cap in rows.values())
    rates = [odd_triple_rate(Theory(n)) for n in sorted(rows)]
    decreasing = all(a > b for a, b in zip(rates, rates[1:]))
    near_one = abs(rates[-1] - 1.0) < 0.02
    passed = tri_gap <= 1e-6 and above and below and decreasing and near_one
    return CheckResult(
        "odd-capacity",
        passed,
        (
            f"triangle gap {tri_gap:.2e}; all {len(rows)} odd sizes in (1, log2 3]; "
            f"3-state rate decreasing to {rates[-1]:.6f} at n={top}"
        ),
        time.time() - t0,
    )


def check_vertices() -> CheckResult:
    """Vertex census of the capped-channel polytope at alphabet 3."""
    t0 = time.time()
    base = enumerate_vertices(3, 2.0)
    all_zero = all(classify_vertex(v) == ZERO_WEIGHT for v in base)
    cap_gap = abs(max_vertex_capacity(3, 2.0) - 1.0)
    unclassified = 0
    for c in (2.25, 2.5, 2.75):
        for v in enumerate_vertices(3, c):
            if classify_vertex(v) == UNCLASSIFIED:
                unclassified += 1
    passed = all_zero and cap_gap <= 1e-9 and unclassified == 0
    return CheckResult(
        "vertices",
        passed,
        (
            f"c=2: {len(base)} vertices all zero-weight, max capacity gap {cap_gap:.2e}; "
            f"c in {{2.25, 2.5, 2.75}}: {unclassified} unclassified"
        ),
        time.time() - t0,
    )


def check_decomposition(trials: int = 100, seed: int = 41) -> CheckResult:
    """Random even-polygon channels split into binary components."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    worst_recon = 0.0
    worst_q = 0.0
    worst_cap = 0.0
    done = 0
    while done < trials:
        n = int(rng.choice(range(4, 21, 2)))
        t = Theory(n)
        idx = np.sort(rng.choice(n, size=3, replace=False))
        try:
            m = t.measurement(tuple(int(v) for v in idx))
        except Exception:
            continue
        P = np.clip(t.states() @ m.effects.T, 0.0, 1.0).T
        res = decompose_into_binary_channels(P, m.realized_weights)
        worst_recon = max(worst_recon, float(np.abs(res.reconstruct() - P).max()))
        worst_q = min(worst_q, float(res.q.min()))
        for k in range(3):
            cap = blahut_arimoto(res.components[k].T).capacity_bits
            worst_cap = max(worst_cap, cap)
        done += 1
    passed = worst_recon <= 1e-9 and worst_q >= -1e-12 and worst_cap <= 1.0 + 1e-9
    return CheckResult(
        "decomposition",
        passed,
        (
            f"{trials} channels: worst reconstruction {worst_recon:.2e}, "
            f"min q {worst_q:.2e}, max component capacity {worst_cap:.9f}"
        ),
        time.time() - t0,
    )


def check_reduction(trials: int = 100, seed: int = 29) -> CheckResult:
    """Random 6-letter pentagon ensembles reduce to 3 letters losslessly."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    t = Theory(5)
    worst_loss = -1.0
    worst_chain = 0.0
    for _ in range(trials):
        tri = None
        while tri is None:
            c = tuple(sorted(int(v) for v in rng.choice(5, 3, replace=False)))
            try:
                tri = t.measurement(c)
            except Exception:
                tri = None
        letters = rng.integers(0, 5, size=6)
        w = rng.dirichlet(np.ones(6))
        states = t.states()[letters]
        merged = mutual_information_bits(w, np.clip(states @ tri.effects.T, 0.0, 1.0))
        trace = caratheodory_reduce(t, states, w, tri)
        info = trace_information(trace, t, tri)
        worst_loss = max(worst_loss, merged - info["per_stage"][trace.selected])
        worst_chain = max(
            worst_chain, abs(info["joint"] - info["stage"] - info["conditional"])
        )
        if any(len(J) > 3 for _, J, _ in trace.stages):
            return CheckResult("reduction", False, "a stage kept more than 3 letters", time.time() - t0)
    passed = worst_loss <= 1e-9 and worst_chain <= 1e-10
    return CheckResult(
        "reduction",
        passed,
        (
            f"{trials} ensembles: worst information loss {worst_loss:.2e}, "
            f"worst chain-rule residual {worst_chain:.2e}"
        ),
        time.time() - t0,
    )


def check_ic(max_n: int = 64) -> CheckResult:
    """Random access code: exact success/information laws plus the search."""
    t0 = time.time()
    worst_s0 = 0.0
    worst_s1 = 0.0
    worst_info = 0.0
    min_excess = math.inf
    for n in range(4, max_n + 1, 2):
        r = run_ic(Theory(n))
        cos = math.cos(2.0 * math.pi / n)
        worst_s0 = max(worst_s0, abs(r.success_bit0 - 1.0))
        worst_s1 = max(worst_s1, abs(r.success_bit1 - (1.0 - cos / 2.0)))
        closed = 2.0 - float(binary_entropy(np.array(cos / 2.0)))
        worst_info = max(worst_info, abs(r.info_sum_bits - closed))
        min_excess = min(min_excess, r.info_sum_bits - 1.0)
    square = abs(run_ic(Theory(4)).info_sum_bits - 2.0)
    dominated = True
    exact_small = True
    for n in (4, 6, 8, 10, 12):
        _, _, best = best_ic_encoding(Theory(n))
        ref = run_ic(Theory(n)).info_sum_bits
        if best < ref - 1e-9:
            dominated = False
        if n in (4, 6) and abs(best - ref) > 1e-9:
            exact_small = False
    passed = (
        worst_s0 <= 1e-12
        and worst_s1 <= 1e-12
        and worst_info <= 1e-9
        and min_excess > 1e-9
        and square <= 1e-9
        and dominated
        and exact_small
    )
    return CheckResult(
        "ic",
        passed,
        (
            f"even n <= {max_n}: success laws exact to {max(worst_s0, worst_s1):.2e}, "
            f"info law to {worst_info:.2e}, min excess over 1 bit {min_excess:.2e}; "
            f"search dominates (exact at n=4,6; strictly better from n=8)"
        ),
        time.time() - t0,
    )


def check_ne(max_n: int = 64) -> CheckResult:
    """NOT-EQUAL witness: zero diagonal, strictly positive off-diagonal."""
    t0 = time.time()
    worst_diag = 0.0
    min_off = math.inf
    for n in range(3, max_n + 1):
        r = ne_matrix(Theory(n))
        worst_diag = max(worst_diag, r.max_diag)
        if r.effective_alphabet > 1:
            min_off = min(min_off, r.min_offdiag)
    raw = even_full_alphabet_ne_matrix(Theory(8))
    witness = all(abs(raw.matrix[(y - 1) % 8, y]) <= 1e-14 for y in range(8))
    passed = worst_diag <= 1e-14 and min_off > 1e-12 and witness
    return CheckResult(
        "ne",
        passed,
        (
            f"n=3..{max_n}: max diagonal {worst_diag:.2e}, min off-diagonal {min_off:.2e}; "
            f"full-alphabet even construction fails at x=y-1 as documented"
        ),
        time.time() - t0,
    )


def check_simulation(seed: int = 99) -> CheckResult:
    """Classical simulation: exact marginals and Monte Carlo concentration."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    worst_gap = 0.0
    for n in range(4, 17):
        t = Theory(n)
        for _ in range(100):
            p = rng.dirichlet(np.ones(n))
            w = p @ t.states()
            tri = None
            while tri is None:
                c = tuple(sorted(int(v) for v in rng.choice(n, 3, replace=False)))
                try:
                    tri = t.measurement(c)
                except Exception:
                    tri = None
            rep = simulate_transmission(t, w, tri, samples=1, seed=1)
            direct = np.clip(tri.effects @ w, 0.0, 1.0)
            worst_gap = max(worst_gap, float(np.abs(rep.analytic_dist - direct).max()))
    t8 = Theory(8)
    state = t8.states().mean(axis=0)
    rep = simulate_transmission(t8, state, t8.measurement((0, 3, 6)), samples=100_000, seed=2024)
    passed = worst_gap <= 1e-12 and rep.tv_distance <= 0.01
    return CheckResult(
        "simulation",
        passed,
        (
            f"1300 marginals exact to {worst_gap:.2e}; "
            f"tv distance {rep.tv_distance:.4f} at 1e5 samples"
        ),
        time.time() - t0,
    )


def check_weights(trials: int = 1000, seed: int = 2024) -> CheckResult:
    """Closed-form triple weights agree with the solver; minima behave."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    worst = 0.0
    done = 0
    while done < trials:
        n = int(rng.integers(3, 33))
        t = Theory(n)
        idx = np.sort(rng.choice(n, size=3, replace=False))
        j1, j2, j3 = (int(v) for v in idx)
        l1, l2, l3, _ = closed_form_triple_weights(t, j1, j2, j3)
        if min(l1, l2, l3) < 1e-9:
            continue
        try:
            m = t.measurement((j1, j2, j3))
        except Exception:
            continue
        worst = max(worst, float(np.abs(np.asarray(m.weights) - [l1, l2, l3]).max()))
        done += 1
    minima = [min_effect_weight(Theory(n)) for n in range(3, 64, 2)]
    positive = all(v > 0 for v in minima)
    family = []
    for n in range(3, 64, 2):
        j2 = (n - 1) // 4 if (n - 1) % 4 == 0 else (n + 1) // 4
        t = Theory(n)
        l1, l2, l3, scale = closed_form_triple_weights(t, 0, j2, (n + 1) // 2)
        family.append(scale * min(l1, l2, l3))
    decreasing = all(a > b for a, b in zip(family, family[1:]))
    passed = worst <= 1e-9 and positive and decreasing
    return CheckResult(
        "weights",
        passed,
        (
            f"{trials} triples: worst weight gap {worst:.2e}; "
            f"odd minima positive, witness family decreasing "
            f"({family[0]:.3f} down to {family[-1]:.6f})"
        ),
        time.time() - t0,
    )


REGISTRY = {
    "even-capacity": check_even_capacity,
    "odd-capacity": check_odd_capacity,
    "vertices": check_vertices,
    "decomposition": check_decomposition,
    "reduction": check_reduction,
    "ic": check_ic,
    "ne": check_ne,
    "simulation": check_simulation,
    "weights": check_weights,
}


NOTES = (
    (
        "triple-completion-weights",
        "A 3-outcome completion must solve the unit-effect equation exactly; "
        "fixed coefficients such as 1/r^2 on the anchor effect and 1/2 on the "
        "flanking effects do not sum to the unit effect for small odd n, so "
        "every rate here uses the solved completion weights.",
    ),
    (
        "rac-encoding",
        "Index maps of the form x0*n/2 + x1 + x0*x1 collide at n=4 and break "
        "the certainty of the first bit in general; the shipped encoding "
        "x0*n/2 + (x0 xor x1) restores it. Exhaustive search confirms the "
        "shipped encoding is optimal at n=4 and 6, and finds strictly better "
        "unconstrained encodings from n=8 on (one bit read off two adjacent "
        "saturated vertices).",
    ),
    (
        "not-equal-even-domain",
        "On even polygons each extremal effect saturates on two adjacent "
        "vertices, so the full-alphabet NOT-EQUAL construction outputs 0 at "
        "x = y-1; the shipped protocol halves the alphabet by using every "
        "second vertex, which restores strict positivity off the diagonal.",
    ),
    (
        "simulation-outcome-law",
        "The receiver's outcome law pairs measurement effects with the "
        "transmitted vertex state; pairing effects with effects is a type "
        "mismatch and defines no distribution. The simulator samples "
        "P(outcome | vertex) = <effect, vertex state>.",
    ),
)


def run_checks(only=None, max_n: int = 64):
    """Run all (or selected) checks; returns the list of CheckResult."""
    keys = list(REGISTRY) if not only else list(only)
    results = []
    for key in keys:
        if key not in REGISTRY:
            raise ValueError(f"unknown check {key!r}; known: {', '.join(REGISTRY)}")
        fn = REGISTRY[key]
        if key in ("even-capacity", "odd-capacity", "ic", "ne"):
            results.append(fn(max_n=max_n))
        else:
            results.append(fn())
    return results
