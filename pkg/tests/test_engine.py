"""Batched plane engine against the reference runner and hand-checkable cases."""

import numpy as np
import pytest

from hetqram.circuits import build_bb_hetero, build_ft_hetero, build_uniform_bb, build_walker
from hetqram.engine import PlaneEngine, _distinct_indices, _pack_bits_lsb
from hetqram.harness import infidelity_stats, run_fidelities, run_trajectory
from hetqram.noise import (
    DistanceProfile,
    NoiseModel,
    PauliEvent,
    SurfaceParams,
    trajectory_rng,
)

PARAMS = SurfaceParams(0.03, 0.2)


def test_pack_bits_lsb_roundtrip():
    rng = np.random.default_rng(0)
    bits = rng.integers(0, 2, size=130).astype(bool)
    words = _pack_bits_lsb(bits)
    assert words.shape == (3,)
    for i, b in enumerate(bits):
        assert ((int(words[i // 64]) >> (i % 64)) & 1) == int(b)


def test_distinct_indices_exact_and_unique():
    rng = np.random.default_rng(1)
    idx = _distinct_indices(rng, 50, 12)
    assert len(np.unique(idx)) == 12
    assert idx.min() >= 0 and idx.max() < 50
    assert len(_distinct_indices(rng, 5, 9)) == 5  # clamps to the population


def test_noiseless_fidelity_is_one():
    for arch_build in (
        lambda: build_bb_hetero(3, "qutrit", [0, 1] * 4),
        lambda: build_uniform_bb(3, "qubit", [1] * 8, distance=3),
        lambda: build_walker(2, [1, 0, 0, 1]),
    ):
        sched = arch_build()
        eng = PlaneEngine(sched, None)
        fids = eng.run(trajectory_rng(0, 0), 9)
        assert np.all(fids == 1.0)


def test_forced_leaf_flip_kills_exactly_one_branch():
    sched = build_bb_hetero(3, "qutrit", [1, 0, 0, 1, 1, 1, 0, 1])
    eng = PlaneEngine(sched, None)
    leaf_value_bit = sched.output_mask(5)[-2]
    forced = {len(sched.layers) - 1: [PauliEvent(leaf_value_bit, "X")]}
    fids = eng.run(trajectory_rng(0, 0), 4, forced_events=forced)
    assert np.allclose(fids, (7 / 8) ** 2)


def test_forced_z_on_root_direction_halves_overlap_to_zero():
    sched = build_bb_hetero(3, "qutrit", [0] * 8)
    root_r = next(
        q
        for q in range(sched.qubit_count)
        if sched.roles[q] == "router_direction" and sched.levels[q] == 0
    )
    eng = PlaneEngine(sched, None)
    forced = {len(sched.layers) - 1: [PauliEvent(root_r, "Z")]}
    fids = eng.run(trajectory_rng(0, 0), 2, forced_events=forced)
    # half the branches flip sign: overlap (4 - 4)/8 = 0
    assert np.allclose(fids, 0.0)


def test_forced_events_match_reference_engine_exactly():
    sched = build_ft_hetero(2, "qutrit", [1, 1, 0, 1])
    mask_bits = {q for a in range(4) for q in sched.output_mask(a)}
    some_rail = next(
        q for q in range(sched.qubit_count) if q not in mask_bits and sched.levels[q] == 1
    )
    for events in (
        [PauliEvent(some_rail, "X")],
        [PauliEvent(sorted(mask_bits)[0], "X"), PauliEvent(sorted(mask_bits)[2], "Z")],
    ):
        for layer_idx in (0, len(sched.layers) // 2, len(sched.layers) - 1):
            eng = PlaneEngine(sched, None)
            batch = eng.run(trajectory_rng(0, 0), 3, forced_events={layer_idx: events})
            ref = _reference_with_forced(sched, {layer_idx: events})
            assert batch == pytest.approx([ref] * 3, abs=1e-12)


def _reference_with_forced(sched, forced):
    """Reference branch evolution with deterministic events after a layer."""
    starts = sched.initial_branches("superposition")
    words = [w for w, _ in starts]
    amps = [a for _, a in starts]
    signs = [1] * len(words)
    for li, layer in enumerate(sched.layers):
        for g in layer.gates:
            words = [g.apply_to_word(w) for w in words]
        for ev in forced.get(li, ()):
            bit = 1 << ev.qubit
            if ev.kind == "X":
                words = [w ^ bit for w in words]
            else:
                signs = [-s if w & bit else s for s, w in zip(signs, words)]
    overlap = 0.0
    for b, (w, a, s) in enumerate(zip(words, amps, signs)):
        ideal = sched.ideal_word(b)
        good = all(((w >> q) & 1) == ((ideal >> q) & 1) for q in sched.output_mask(b))
        overlap += a * a * s * good
    return overlap**2


@pytest.mark.parametrize(
    "build",
    [
        lambda: build_bb_hetero(2, "qutrit", [1, 0, 1, 1]),
        lambda: build_bb_hetero(2, "qubit", [1, 0, 1, 1]),
        lambda: build_uniform_bb(2, "qutrit", [0, 1, 1, 0], distance=2, round_trip=True),
        lambda: build_walker(2, [1, 1, 0, 0]),
    ],
)
def test_batch_and_reference_agree_statistically(build):
    """Same noise model, independent streams: means agree within 3 sigma."""
    sched = build()
    noise = NoiseModel(PARAMS, sched.profile, mode="aggregate")
    trials = 3000
    batch = 1.0 - run_fidelities(sched, noise, trials, seed=5, batch_size=256)
    ref = np.array(
        [
            1.0 - run_trajectory(sched, noise, trajectory_rng(99, i)).fidelity
            for i in range(trials)
        ]
    )
    se = np.sqrt(batch.var(ddof=1) / trials + ref.var(ddof=1) / trials)
    assert abs(batch.mean() - ref.mean()) < 3 * se


def test_batch_sizes_partition_but_preserve_determinism():
    sched = build_bb_hetero(2, "qutrit", [0, 1, 0, 0])
    noise = NoiseModel(PARAMS, sched.profile, mode="aggregate")
    a = run_fidelities(sched, noise, 700, seed=3, batch_size=512)
    b = run_fidelities(sched, noise, 700, seed=3, batch_size=512)
    assert np.array_equal(a, b)


def test_small_branch_counts_unaligned_words():
    # n=2 gives 4 branches: trial spans are sub-word; exercise that path
    sched = build_bb_hetero(2, "qutrit", [1, 1, 1, 1])
    noise = NoiseModel(SurfaceParams(0.03, 0.4), sched.profile, mode="aggregate")
    fids = run_fidelities(sched, noise, 333, seed=8, batch_size=50)
    assert fids.shape == (333,)
    assert np.all((0.0 <= fids) & (fids <= 1.0))


def test_basis_mode_single_branch():
    sched = build_bb_hetero(3, "qutrit", [0, 1] * 4)
    eng = PlaneEngine(sched, None, address_mode="basis", address=5)
    fids = eng.run(trajectory_rng(1, 0), 5)
    assert np.all(fids == 1.0)


def test_sampled_basis_mode():
    """Omitting the address samples a fresh one per trial (the mode used
    past the superposition ceiling; phase errors are undercounted)."""
    sched = build_bb_hetero(3, "qutrit", [0, 1] * 4)
    eng = PlaneEngine(sched, None, address_mode="basis")
    assert np.all(eng.run(trajectory_rng(1, 0), 17) == 1.0)
    noise = NoiseModel(SurfaceParams(0.03, 0.3), sched.profile, mode="aggregate")
    noisy = PlaneEngine(sched, noise, address_mode="basis")
    fids = noisy.run(trajectory_rng(1, 0), 400)
    assert set(np.unique(fids)) <= {0.0, 1.0}
    assert 0.0 < fids.mean() < 1.0
    again = PlaneEngine(sched, noise, address_mode="basis").run(trajectory_rng(1, 0), 400)
    assert np.array_equal(fids, again)


def test_sampled_basis_past_superposition_ceiling():
    sched = build_bb_hetero(11, "qubit", [0, 1] * 1024)
    noise = NoiseModel(SurfaceParams(0.03, 0.1), sched.profile, mode="aggregate")
    fids = run_fidelities(
        sched, noise, 64, seed=2, address_mode="basis", batch_size=64
    )
    assert fids.shape == (64,)
    assert np.all((fids == 0.0) | (fids == 1.0))
