from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from fixtures import gamma0_action, gamma1_action
from gsa.congruence import subgroup_index_mod
from gsa.modular import (
    MOVE_MATRIX, ConsistencyError, IDENTITY, MINUS_I, S, T, mat_inv, mat_mul, mat_transpose,
    matrix_to_word, perm_power_word, signature_from_action, stabilizer_matrices_from_action,
    word_matrix,
)

words = st.lists(st.sampled_from(["U", "V", "U_inv", "V_inv"]), max_size=30)


def test_move_matrices():
    assert MOVE_MATRIX["U"] == T == ((1, 1), (0, 1))
    assert MOVE_MATRIX["V"] == mat_inv(S) == ((0, -1), (1, 0))
    assert word_matrix(["V", "V"]) == MINUS_I
    assert word_matrix(["U_inv", "V_inv"] * 3) == MINUS_I
    assert word_matrix(["U_inv", "V_inv"]) == mat_mul(mat_inv(T), S)


@given(words)
def test_matrix_to_word_round_trip(w):
    M = word_matrix(w)
    assert word_matrix(matrix_to_word(M)) == M


def test_matrix_to_word_rejects_det():
    with pytest.raises(ValueError):
        matrix_to_word(((2, 0), (0, 1)))


@pytest.mark.parametrize("N", range(2, 21))
def test_gamma0_signature(N):
    su, sv = gamma0_action(N)
    sig = signature_from_action(su, sv)
    e2, e3 = oracles.gamma0_elliptic(N)
    assert sig.minus_i
    assert sig.d == sig.d_bar == oracles.gamma0_index(N)
    assert (sig.c2, sig.c3) == (e2, e3)
    assert len(sig.cusp_widths) == oracles.gamma0_cusps(N)
    assert sig.genus == oracles.gamma0_genus(N)
    assert sig.level == N


@pytest.mark.parametrize("N", range(5, 13))
def test_gamma1_signature(N):
    su, sv = gamma1_action(N)
    sig = signature_from_action(su, sv)
    index = N * N
    for p in {p for p in range(2, N + 1) if N % p == 0 and oracles.gamma0_index(p) == p + 1}:
        index = index * (p * p - 1) // (p * p)
    cusps = sum(oracles._phi(d) * oracles._phi(N // d) for d in range(1, N + 1) if N % d == 0) // 2
    assert not sig.minus_i
    assert sig.d == index and sig.d_bar == index // 2
    assert (sig.c2, sig.c3) == (0, 0)
    assert len(sig.cusp_widths) == cusps
    g = 1 + Fraction(sig.d_bar, 12) - Fraction(cusps, 2)
    assert sig.genus == g


def test_gamma1_4():
    sig = signature_from_action(*gamma1_action(4))
    assert (sig.d, sig.d_bar, sig.c2, sig.c3, sig.genus) == (12, 6, 0, 0, 0)
    assert sorted(sig.cusp_widths) == [1, 1, 4]


def test_trivial_action():
    sig = signature_from_action(np.array([0]), np.array([0]))
    assert (sig.d, sig.minus_i, sig.c2, sig.c3, sig.cusp_widths, sig.genus, sig.level) == \
        (1, True, 1, 1, (1,), 0, 1)
    assert stabilizer_matrices_from_action([0], [0]) == [MOVE_MATRIX["U"], MOVE_MATRIX["V"]]


def test_inconsistent_action_aborts():
    # U a 3-cycle, V a transposition: V^2 = id but (U^-1 V^-1)^3 is not
    su = np.array([1, 2, 0])
    sv = np.array([1, 0, 2])
    with pytest.raises(ConsistencyError):
        signature_from_action(su, sv)


@pytest.mark.parametrize("N", [2, 3, 4, 6, 7, 9, 12])
def test_stabilizer_matrices(N):
    su, sv = gamma0_action(N)
    mats = stabilizer_matrices_from_action(su, sv)
    d = len(su)
    for M in mats:
        assert M[0][0] * M[1][1] - M[0][1] * M[1][0] == 1
        assert M[1][0] % N == 0           # lies in Gamma_0(N)
        w = matrix_to_word(M)
        assert int(perm_power_word(su, sv, w, np.array([0]))[0]) == 0
    # they generate a subgroup of index d, seen mod 2l
    assert subgroup_index_mod(mats, 2 * N) == d


@pytest.mark.parametrize("N", [3, 5, 8])
def test_mirror_convention(N):
    su, sv = gamma1_action(N)
    mats = stabilizer_matrices_from_action(su, sv)
    mirror = stabilizer_matrices_from_action(su, sv, transpose=True)
    assert mirror == [mat_transpose(M) for M in mats]
    for n in (N, 2 * N):
        assert subgroup_index_mod(mats, n) == subgroup_index_mod(mirror, n)
    # mirror action: conjugation by diag(1, -1) sends T, S to their inverses
    sig = signature_from_action(su, sv)
    sig_m = signature_from_action(np.argsort(su), np.argsort(sv))
    assert sig.as_tuple() == sig_m.as_tuple()


def test_mat_helpers():
    assert mat_mul(T, mat_inv(T)) == IDENTITY
    with pytest.raises(ValueError):
        mat_inv(((2, 0), (0, 1)))
    assert math.prod([1]) == 1
