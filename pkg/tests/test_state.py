"""Branch-state gate semantics, checked against hand values and a dense oracle."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hetqram.state import BranchState, inner_product, word_from_bits, word_to_bits

from dense_oracle import (
    apply_program,
    apply_program_sparse,
    basis_vector,
    random_program,
    sparse_to_dense,
)


def test_word_packing_roundtrip():
    assert word_from_bits("0110") == 0b0110
    assert word_to_bits(word_from_bits("10011"), 5) == "10011"


def test_basis_single_branch():
    s = BranchState.basis("000")
    assert s.branches == {0: 1.0 + 0.0j}
    s = BranchState.basis("101")
    assert s.amplitude("101") == 1.0
    assert s.norm() == pytest.approx(1.0)


def test_basis_rejects_zero_width():
    with pytest.raises(ValueError):
        BranchState.basis("")


def test_superposition_normalizes():
    s = BranchState.superposition([("00", 1.0), ("01", 1.0)])
    assert s.amplitude("00") == pytest.approx(1 / math.sqrt(2))
    assert s.amplitude("01") == pytest.approx(1 / math.sqrt(2))


def test_superposition_3_4_5():
    s = BranchState.superposition([("0", 3.0), ("1", 4.0)])
    assert s.amplitude("0") == pytest.approx(0.6)
    assert s.amplitude("1") == pytest.approx(0.8)


@pytest.mark.parametrize("n", [1, 2, 4])
def test_superposition_uniform(n):
    entries = [(word_to_bits(w, n), 1.0) for w in range(1 << n)]
    s = BranchState.superposition(entries)
    for w in range(1 << n):
        assert abs(s.amplitude(w)) ** 2 == pytest.approx(2.0**-n)


def test_superposition_rejects_duplicates_and_zero():
    with pytest.raises(ValueError):
        BranchState.superposition([("0", 1.0), ("0", 1.0)])
    with pytest.raises(ValueError):
        BranchState.superposition([("0", 0.0), ("1", 0.0)])
    with pytest.raises(ValueError):
        BranchState.superposition([])


def test_swap_moves_bit():
    s = BranchState.basis("10").swap(0, 1)
    assert s.branches == {word_from_bits("01"): 1.0 + 0.0j}


def test_swap_fixed_point():
    s = BranchState.basis("11").swap(0, 1)
    assert s.branches == {word_from_bits("11"): 1.0 + 0.0j}


def test_swap_involution_on_superposition():
    s = BranchState.superposition([("100", 1.0), ("011", 0.5), ("110", -0.25)])
    before = dict(s.branches)
    s.swap(0, 2).swap(0, 2)
    assert s.branches == before


def test_swap_validates_operands():
    s = BranchState.basis("01")
    with pytest.raises(ValueError):
        s.swap(0, 2)
    with pytest.raises(ValueError):
        s.swap(1, 1)


def test_cswap_control_satisfied():
    s = BranchState.basis("110").cswap([(0, 1)], 1, 2)
    assert s.branches == {word_from_bits("101"): 1.0 + 0.0j}


def test_cswap_control_unsatisfied():
    s = BranchState.basis("010").cswap([(0, 1)], 1, 2)
    assert s.branches == {word_from_bits("010"): 1.0 + 0.0j}


def test_cswap_negative_polarity_and_double_control():
    s = BranchState.basis("0010")
    s.cswap([(0, 0), (1, 0)], 2, 3)
    assert s.branches == {word_from_bits("0001"): 1.0 + 0.0j}
    s = BranchState.basis("0110").cswap([(0, 0), (1, 1)], 2, 3)
    assert s.branches == {word_from_bits("0101"): 1.0 + 0.0j}


def test_cswap_preserves_amplitude_multiset():
    amps = [0.5, 0.5j, -0.5, 0.5]
    words = ["000", "100", "110", "111"]
    s = BranchState.superposition(list(zip(words, amps)))
    expect = sorted(abs(a) for a in s.branches.values())
    s.cswap([(0, 1)], 1, 2)
    assert sorted(abs(a) for a in s.branches.values()) == pytest.approx(expect)
    assert len(s.branches) == 4


def test_cswap_rejects_overlap():
    s = BranchState.basis("000")
    with pytest.raises(ValueError):
        s.cswap([(1, 1)], 1, 2)
    with pytest.raises(ValueError):
        s.cswap([], 0, 1)


def test_x_flip_and_involution():
    s = BranchState.basis("0").x(0)
    assert s.branches == {1: 1.0 + 0.0j}
    s.x(0)
    assert s.branches == {0: 1.0 + 0.0j}
    assert s.norm() == pytest.approx(1.0)


def test_z_phases():
    s = BranchState.basis("1").z(0)
    assert s.amplitude("1") == -1.0
    s = BranchState.basis("0").z(0)
    assert s.amplitude("0") == 1.0


def test_z_makes_plus_minus_orthogonal():
    plus = BranchState.superposition([("0", 1.0), ("1", 1.0)])
    minus = plus.copy().z(0)
    assert abs(inner_product(plus, minus)) == pytest.approx(0.0, abs=1e-12)


def test_classical_cx():
    s = BranchState.basis("0")
    s.classical_cx(0, 0)
    assert s.branches == {0: 1.0 + 0.0j}
    s.classical_cx(1, 0)
    assert s.branches == {1: 1.0 + 0.0j}
    s.classical_cx(1, 0).classical_cx(1, 0)
    assert s.branches == {1: 1.0 + 0.0j}


def test_inner_product_basics():
    psi = BranchState.superposition([("00", 1.0), ("11", 1.0j)])
    assert psi.inner(psi) == pytest.approx(1.0)
    a = BranchState.basis("01")
    b = BranchState.basis("10")
    assert a.inner(b) == 0.0
    with pytest.raises(ValueError):
        a.inner(BranchState.basis("0"))


def test_inner_product_conjugation_order():
    a = BranchState.superposition([("0", 1.0), ("1", 1.0j)])
    b = BranchState.basis("1")
    assert a.inner(b) == pytest.approx(-1j / math.sqrt(2))
    assert b.inner(a) == pytest.approx(1j / math.sqrt(2))


@given(st.integers(min_value=0, max_value=7), st.integers(min_value=0, max_value=20))
@settings(max_examples=60, deadline=None)
def test_random_programs_match_dense_oracle(word, seed):
    """Gate sequences agree with the independent dense simulator to 1e-9."""
    rng = np.random.default_rng(seed)
    program = random_program(rng, 3, int(rng.integers(0, 21)))
    sparse = apply_program_sparse(BranchState.basis(word, width=3), program)
    dense = apply_program(basis_vector(word, 3), 3, program)
    assert np.allclose(sparse_to_dense(sparse), dense, atol=1e-9)


@given(st.integers(min_value=0, max_value=10_000))
@settings(max_examples=40, deadline=None)
def test_permutation_gates_preserve_norm_and_branch_count(seed):
    rng = np.random.default_rng(seed)
    words = rng.choice(8, size=int(rng.integers(1, 9)), replace=False)
    amps = rng.normal(size=len(words)) + 1j * rng.normal(size=len(words))
    s = BranchState.superposition(
        [(int(w), complex(a)) for w, a in zip(words, amps)], width=3
    )
    n_before = len(s.branches)
    program = random_program(rng, 3, 12)
    apply_program_sparse(s, program)
    assert len(s.branches) == n_before
    assert s.norm() == pytest.approx(1.0, abs=1e-9)


def test_z_changes_no_words():
    s = BranchState.superposition([("010", 1.0), ("111", 1.0)])
    words_before = set(s.branches)
    s.z(1).z(2)
    assert set(s.branches) == words_before


@given(st.integers(min_value=0, max_value=10_000))
@settings(max_examples=40, deadline=None)
def test_inner_product_cauchy_schwarz(seed):
    rng = np.random.default_rng(seed)

    def rand_state():
        words = rng.choice(8, size=int(rng.integers(1, 9)), replace=False)
        amps = rng.normal(size=len(words)) + 1j * rng.normal(size=len(words))
        return BranchState.superposition(
            [(int(w), complex(a)) for w, a in zip(words, amps)], width=3
        )

    assert abs(rand_state().inner(rand_state())) <= 1.0 + 1e-12


def test_normalize_prunes_negligible_branches():
    s = BranchState(2, {0: 1.0 + 0.0j, 3: 1e-13 + 0.0j})
    s.normalize()
    assert set(s.branches) == {0}
    with pytest.raises(ValueError):
        BranchState(1, {}).normalize()
