"""Tests for binary-channel splits and alphabet reduction."""

import numpy as np
import pytest

from ngon.capacity import blahut_arimoto, mutual_information_bits
from ngon.decomposition import (
    DecompositionError,
    InfeasibleChannelError,
    caratheodory_reduce,
    decompose_into_binary_channels,
    trace_information,
)
from ngon.geometry import Theory


def random_capped_weights(rng):
    while True:
        a = rng.uniform(0.0, 1.0, 2)
        w = np.array([a[0], a[1], 2.0 - a[0] - a[1]])
        if 0.0 <= w[2] <= 1.0:
            return w


def random_capped_column(rng, w):
    while True:
        c = rng.dirichlet([1.0, 1.0, 1.0])
        if (c <= w + 1e-15).all():
            return c


def test_known_single_column_split():
    res = decompose_into_binary_channels(np.array([[1.0], [0.0], [0.0]]), [1.0, 0.5, 0.5])
    assert np.abs(res.q - [0.5, 0.5, 0.0]).max() < 1e-12
    assert np.abs(res.free.ravel() - [1.0, 1.0, 0.0]).max() < 1e-12
    assert np.abs(res.reconstruct() - [[1.0], [0.0], [0.0]]).max() < 1e-12


def test_component_shape_and_mixture():
    rng = np.random.default_rng(17)
    for _ in range(100):
        w = random_capped_weights(rng)
        P = np.array([random_capped_column(rng, w) for _ in range(4)]).T
        res = decompose_into_binary_channels(P, w)
        assert np.abs(res.reconstruct() - P).max() < 1e-9
        assert abs(res.q.sum() - 1.0) < 1e-9
        assert (res.q >= -1e-12).all()
        # each component keeps one outcome row identically zero
        assert np.abs(res.components[0][2]).max() == 0.0
        assert np.abs(res.components[1][1]).max() == 0.0
        assert np.abs(res.components[2][0]).max() == 0.0
        assert np.abs(res.components.sum(axis=1) - 1.0).max() < 1e-9


def test_component_capacity_at_most_one_bit():
    rng = np.random.default_rng(23)
    for _ in range(20):
        w = random_capped_weights(rng)
        P = np.array([random_capped_column(rng, w) for _ in range(3)]).T
        res = decompose_into_binary_channels(P, w)
        for k in range(3):
            cap = blahut_arimoto(res.components[k].T).capacity_bits
            assert cap <= 1.0 + 1e-9


def test_even_polygon_induced_channels_decompose():
    rng = np.random.default_rng(41)
    done = 0
    while done < 100:
        n = int(rng.choice(range(4, 21, 2)))
        t = Theory(n)
        idx = np.sort(rng.choice(n, size=3, replace=False))
        try:
            m = t.measurement(tuple(int(v) for v in idx))
        except Exception:
            continue
        P = np.clip(t.states() @ m.effects.T, 0.0, 1.0).T
        res = decompose_into_binary_channels(P, m.realized_weights)
        assert np.abs(res.reconstruct() - P).max() < 1e-9
        done += 1


def test_decomposition_rejects_bad_inputs():
    col = np.array([[1.0], [0.0], [0.0]])
    with pytest.raises(InfeasibleChannelError):
        decompose_into_binary_channels(col, [0.6, 0.6, 0.6])
    with pytest.raises(InfeasibleChannelError):
        decompose_into_binary_channels(col, [0.5, 0.75, 0.75])
    with pytest.raises(InfeasibleChannelError):
        decompose_into_binary_channels(np.array([[0.9], [0.2], [0.0]]), [1.0, 0.5, 0.5])


def test_reduce_passthrough_on_three_letters():
    t = Theory(5)
    m = t.measurement((0, 1, 3))
    w = np.array([0.5, 0.25, 0.25])
    trace = caratheodory_reduce(t, t.states()[[0, 1, 3]], w, m)
    assert len(trace.stages) == 1
    assert trace.stages[0][1] == (0, 1, 3)
    assert np.abs(np.asarray(trace.stages[0][2]) - w).max() < 1e-12


def test_reduce_point_mass():
    t = Theory(5)
    m = t.measurement((0, 1, 3))
    trace = caratheodory_reduce(t, [t.state(2)], [1.0], m)
    assert len(trace.stages) == 1 and trace.stages[0][1] == (2,)


def test_reduce_preserves_barycenter_per_stage():
    rng = np.random.default_rng(11)
    for n, tri in [(5, (0, 1, 3)), (8, (0, 3, 6)), (12, (0, 4, 8))]:
        t = Theory(n)
        m = t.measurement(tri)
        w = rng.dirichlet(np.ones(n))
        trace = caratheodory_reduce(t, t.states(), w, m)
        mean = w @ t.states()
        total = 0.0
        for qk, J, beta in trace.stages:
            assert len(J) <= 3
            bary = np.asarray(beta) @ t.states()[list(J)]
            assert np.abs(bary - mean).max() < 1e-9
            total += qk
        assert abs(total - 1.0) < 1e-12


def test_reduce_handles_mixed_inputs():
    t = Theory(7)
    m = t.measurement((0, 2, 4))
    states = np.vstack([t.states()[:3], [0.5 * t.state(0) + 0.5 * t.state(4)]])
    w = np.array([0.3, 0.3, 0.2, 0.2])
    trace = caratheodory_reduce(t, states, w, m)
    mean = w @ states
    for qk, J, beta in trace.stages:
        bary = np.asarray(beta) @ t.states()[list(J)]
        assert np.abs(bary - mean).max() < 1e-9


def test_reduce_never_loses_information():
    rng = np.random.default_rng(29)
    worst = 0.0
    for _ in range(100):
        n = 5
        t = Theory(n)
        tri = None
        while tri is None:
            c = tuple(sorted(int(v) for v in rng.choice(n, 3, replace=False)))
            try:
                tri = t.measurement(c)
            except Exception:
                tri = None
        # six weighted extremal letters: vertex indices with repetition allowed
        letters = rng.integers(0, n, size=6)
        w = rng.dirichlet(np.ones(6))
        states = t.states()[letters]
        merged = mutual_information_bits(
            w, np.clip(states @ tri.effects.T, 0.0, 1.0)
        )
        trace = caratheodory_reduce(t, states, w, tri)
        info = trace_information(trace, t, tri)
        best = info["per_stage"][trace.selected]
        worst = max(worst, merged - best)
        assert best >= merged - 1e-9
        assert len(trace.stages[trace.selected][1]) <= 3
    assert worst < 1e-9


def test_chain_rule_accounting():
    rng = np.random.default_rng(37)
    t = Theory(9)
    m = t.measurement((0, 3, 6))
    w = rng.dirichlet(np.ones(9))
    trace = caratheodory_reduce(t, t.states(), w, m)
    info = trace_information(trace, t, m)
    # stage label carries no information: every stage shares one barycenter
    assert abs(info["stage"]) < 1e-10
    assert abs(info["joint"] - info["stage"] - info["conditional"]) < 1e-10
    assert info["per_stage"][trace.selected] >= max(info["per_stage"]) - 1e-12


def test_reduce_input_validation():
    t = Theory(5)
    m = t.measurement((0, 1, 3))
    with pytest.raises(ValueError):
        caratheodory_reduce(t, t.states()[:2], [0.5, 0.6], m)
    with pytest.raises(ValueError):
        caratheodory_reduce(t, t.states()[:2], [1.0, 0.0], m)
