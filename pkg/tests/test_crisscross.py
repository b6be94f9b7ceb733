"""Crisscross weight, correction guarantees, and erasure/error decoding."""

import numpy as np
import pytest

from rankloc.codes import rank_distance_bound
from rankloc.crisscross import (
    AmbiguousErasureError,
    Cover,
    correctable,
    crisscross_weight,
    decode_erasures,
    decode_erasures_batch,
    decode_min_distance,
    locally_correctable,
    min_cover_exhaustive,
    validate_patterns,
)
from rankloc.gf import gfq_rank, gfq_row_reduce
from rankloc.rng import SplitMix64

from helpers import cover_oracle, rand_matrix, rand_nonzero_message


def fig_rows_pattern():
    # two full rows in a 4x4 grid: covered by those rows, weight 2
    pat = np.zeros((4, 4), dtype=np.uint8)
    pat[0, :] = 1
    pat[2, :] = 1
    return pat


def reference_erasures():
    # mixed scenario on the 9x9 reference code: a six-cell row run, a
    # 2x4 block, one full column, and a three-cell run in the last rack
    mask = np.zeros((9, 9), dtype=np.uint8)
    mask[0, 0:6] = 1
    mask[1, 0:4] = 1
    mask[2, 0:4] = 1
    mask[:, 3] = 1
    mask[8, 6:9] = 1
    return mask


# ---------------------------------------------------------------------------
# weight


def test_weight_golden_rows():
    pat = fig_rows_pattern()
    w, cov = crisscross_weight(pat)
    assert w == 2
    assert sorted(cov.rows) == [0, 2] and not cov.cols
    assert cov.size == 2 and cov.covers(pat)
    # the same cells have rank 1: weight and rank are different measures
    assert gfq_rank(pat, 2) == 1


def test_weight_small_cases():
    assert crisscross_weight(np.zeros((3, 5), dtype=np.uint8))[0] == 0
    assert crisscross_weight(np.eye(4, dtype=np.uint8))[0] == 4
    one = np.zeros((2, 2), dtype=np.uint8)
    one[1, 0] = 1
    assert crisscross_weight(one)[0] == 1
    full = np.ones((3, 4), dtype=np.uint8)
    assert crisscross_weight(full)[0] == 3  # min(m, n)


def test_weight_matches_subset_oracle():
    rng = SplitMix64(401)
    for _ in range(150):
        pat = rand_matrix(rng, 2 + rng.randbelow(3), 2 + rng.randbelow(3), 2)
        w, cov = crisscross_weight(pat)
        assert w == cover_oracle(pat)
        assert cov.size == w and cov.covers(pat)


def test_weight_matches_bitboard_exhaustive():
    rng = SplitMix64(409)
    for _ in range(400):
        pat = rand_matrix(rng, 2 + rng.randbelow(5), 2 + rng.randbelow(5), 2)
        w, cov = crisscross_weight(pat)
        assert w == min_cover_exhaustive(pat)
        assert cov.size == w and cov.covers(pat)


def test_weight_dominates_rank_and_is_monotone():
    rng = SplitMix64(419)
    for _ in range(300):
        pat = rand_matrix(rng, 5, 5, 2)
        w = crisscross_weight(pat)[0]
        assert w >= gfq_rank(pat, 2)  # cover weight bounds rank
        grown = pat.copy()
        grown[rng.randbelow(5), rng.randbelow(5)] = 1
        assert crisscross_weight(grown)[0] >= w


def test_cover_rejects_non_cover():
    pat = fig_rows_pattern()
    assert not Cover(frozenset({0}), frozenset()).covers(pat)
    assert Cover(frozenset({0, 2}), frozenset()).covers(pat)


# ---------------------------------------------------------------------------
# pattern validation


def test_validate_patterns(example2_code):
    mask = np.zeros((9, 9), dtype=np.uint8)
    mask[1, 1] = 1
    err = np.zeros((9, 9), dtype=np.uint8)
    err[1, 1] = 1
    with pytest.raises(ValueError, match="vanish on erased"):
        validate_patterns(mask, err, 2)
    err[1, 1] = 0
    err[2, 2] = 3
    with pytest.raises(ValueError, match="out of range"):
        validate_patterns(mask, err, 2)
    with pytest.raises(ValueError, match="shape"):
        validate_patterns(mask, np.zeros((3, 3), dtype=np.uint8), 2)


# ---------------------------------------------------------------------------
# guarantees


def test_locally_correctable_cases(example2_code):
    code = example2_code
    zero = np.zeros((9, 9), dtype=np.uint8)
    one_cell = zero.copy()
    one_cell[4, 0] = 1
    assert locally_correctable(code, one_cell, None, 1)
    assert locally_correctable(code, zero, None, 2)
    # rank-1 error inside rack 1: 2*1 + 0 = 2 > delta - 1 = 1
    err = zero.copy()
    err[0, 0:3] = 1
    assert not locally_correctable(code, zero, err, 1)
    mask = reference_erasures()
    assert [locally_correctable(code, mask, None, j) for j in (1, 2, 3)] == [
        False,
        False,
        True,
    ]


def test_correctable_reference_scenario(example2_code):
    mask = reference_erasures()
    assert crisscross_weight(mask)[0] == 5  # above d - 1 = 4 before discounting
    rep = correctable(example2_code, mask)
    assert rep.verdict == "GLOBAL"
    assert rep.local_racks == (3,)
    assert rep.residual_racks == (1, 2)
    assert rep.discounted_weight == 4
    assert rep.distance == 5


def test_correctable_verdicts(example2_code, tiny_code):
    zero = np.zeros((9, 9), dtype=np.uint8)
    assert correctable(example2_code, zero).verdict == "LOCAL"
    # one erased cell per rack: every rack fixes its own
    sprinkle = zero.copy()
    sprinkle[0, 0] = sprinkle[3, 4] = sprinkle[7, 7] = 1
    rep = correctable(example2_code, sprinkle)
    assert rep.verdict == "LOCAL" and rep.local_racks == (1, 2, 3)
    # whole matrix erased: nothing to salvage
    assert correctable(example2_code, np.ones((9, 9), np.uint8)).verdict == "NO_GUARANTEE"
    row = np.zeros((6, 6), dtype=np.uint8)
    row[0, :] = 1
    rep = correctable(tiny_code, row)
    assert rep.verdict == "LOCAL" and rep.local_racks == (1, 2, 3)


def test_correctable_verdicts_are_sound(tiny_code):
    # the report is a sufficient condition: every pattern it certifies
    # (LOCAL or GLOBAL) must decode exactly, for every codeword.  (It is
    # not monotone under pattern growth: a new cell inside a quiet rack
    # can be absorbed by the existing cover while adding a discountable
    # local share, so verdicts may climb.  Soundness is the contract.)
    code = tiny_code
    mats = code.codeword_matrices()
    rng = SplitMix64(431)
    certified = 0
    for _ in range(120):
        mask = rand_matrix(rng, 6, 6, 2) & rand_matrix(rng, 6, 6, 2)
        if correctable(code, mask).verdict == "NO_GUARANTEE":
            continue
        certified += 1
        received = np.where(mask, 0, mats).astype(np.uint8)
        batch = decode_erasures_batch(code, received, mask)
        assert (batch.matrices == mats).all()
    assert certified > 30  # the sweep actually exercised the certificate


# ---------------------------------------------------------------------------
# erasure decoding


def test_decode_local_only_restores_rack(example2_code):
    code = example2_code
    f = code.field
    msg = [f.omega_pow(e) for e in (1, 2, 4, 8)]
    golden = code.encode_matrix(msg)
    mask = np.zeros((9, 9), dtype=np.uint8)
    mask[8, 6:9] = 1
    res = decode_erasures(code, np.where(mask, 0, golden).astype(np.uint8), mask)
    assert (res.matrix == golden).all()
    assert res.local_racks == (3,) and not res.used_global
    assert res.verdict_lines() == ["LOCAL j=3"]
    restored = f.from_matrix(res.matrix[:, 6:9])
    assert [f.log_omega(c) for c in restored] == [236, 132, 399]


def test_decode_reference_scenario(example2_code):
    code = example2_code
    f = code.field
    golden = code.encode_matrix([f.omega_pow(e) for e in (1, 2, 4, 8)])
    mask = reference_erasures()
    res = decode_erasures(code, np.where(mask, 0, golden).astype(np.uint8), mask)
    assert (res.matrix == golden).all()
    assert res.local_racks == (3,) and res.used_global
    assert res.verdict_lines() == ["LOCAL j=3", "GLOBAL"]


def test_decode_no_erasures_is_identity(tiny_code):
    rng = SplitMix64(433)
    msg = rand_nonzero_message(rng, tiny_code.field, 2)
    golden = tiny_code.encode_matrix(msg)
    res = decode_erasures(tiny_code, golden, np.zeros((6, 6), dtype=np.uint8))
    assert (res.matrix == golden).all()
    assert res.local_racks == () and not res.used_global
    assert res.verdict_lines() == ["GLOBAL"]  # nothing solved locally


def test_decode_batch_matches_single(tiny_code):
    mats = tiny_code.codeword_matrices()
    mask = np.zeros((6, 6), dtype=np.uint8)
    mask[0, :] = 1
    mask[3, 2] = 1
    received = np.where(mask, 0, mats).astype(np.uint8)
    batch = decode_erasures_batch(tiny_code, received, mask)
    assert (batch.matrices == mats).all()
    single = decode_erasures(tiny_code, received[17], mask)
    assert (single.matrix == mats[17]).all()
    assert single.local_racks == batch.local_racks


def test_decode_random_patterns_under_bound(tiny_code):
    # any erasure pattern of weight <= d - 1 must decode exactly
    code = tiny_code
    d = rank_distance_bound(6, 2, 1, 2)
    rng = SplitMix64(439)
    done = 0
    while done < 60:
        mask = rand_matrix(rng, 6, 6, 2) & rand_matrix(rng, 6, 6, 2)
        if crisscross_weight(mask)[0] > d - 1:
            continue
        msg = rand_nonzero_message(rng, code.field, 2)
        golden = code.encode_matrix(msg)
        res = decode_erasures(code, np.where(mask, 0, golden).astype(np.uint8), mask)
        assert (res.matrix == golden).all()
        done += 1


def test_decode_rejects_inconsistent_input(tiny_code):
    code = tiny_code
    golden = code.encode_matrix([code.field.omega_pow(5), code.field.omega_pow(40)])
    mask = np.zeros((6, 6), dtype=np.uint8)
    mask[0, :] = 1
    bad = np.where(mask, 0, golden).astype(np.uint8)
    bad[3, 0] ^= 1
    with pytest.raises(ValueError, match="not a codeword restriction"):
        decode_erasures(code, bad, mask)


def test_decode_ambiguous_pattern_raises(tiny_code):
    code = tiny_code
    golden = code.encode_matrix([code.field.omega_pow(5), code.field.omega_pow(40)])
    heavy = np.zeros((6, 6), dtype=np.uint8)
    heavy[0:5, :] = 1  # weight 5 > d - 1
    with pytest.raises(AmbiguousErasureError, match="exceeds guarantee"):
        decode_erasures(code, np.where(heavy, 0, golden).astype(np.uint8), heavy)


def test_decode_certified_pattern_with_undercounted_residual(tiny_code):
    # regression: the discounting step certifies this pattern at weight 3
    # although the post-local residual spans a 4x4 block of weight 4; the
    # decode must still be exact (no codeword is supported inside the block)
    code = tiny_code
    corner = np.zeros((6, 6), dtype=np.uint8)
    corner[0, :] = 1
    corner[1:4, 2:6] = 1
    rep = correctable(code, corner)
    assert rep.verdict == "GLOBAL" and rep.discounted_weight == 3
    mats = code.codeword_matrices()
    sub = mats[1:].copy()
    sub[:, 0:4, 2:6] = 0
    assert sub.reshape(sub.shape[0], -1).any(axis=1).all()  # none vanish outside
    batch = decode_erasures_batch(code, np.where(corner, 0, mats).astype(np.uint8), corner)
    assert (batch.matrices == mats).all()


# ---------------------------------------------------------------------------
# nearest-codeword decoding


def test_min_distance_decode_exact_and_rank1(tiny_code):
    code = tiny_code
    golden = code.encode_matrix([code.field.omega_pow(5), code.field.omega_pow(40)])
    hit = decode_min_distance(code, golden)
    assert hit.distance == 0 and not hit.is_tie
    assert (hit.codeword == golden).all()
    err = np.zeros((6, 6), dtype=np.uint8)
    err[2, :] = 1
    near = decode_min_distance(code, golden ^ err)
    assert near.distance == 1 and not near.is_tie
    assert (near.codeword == golden).all()


def test_min_distance_decode_reports_ties(tiny_code):
    # split a minimum-rank codeword c into rank-2 halves E1 + E2; the word
    # E1 then sits at distance 2 from both 0 and c
    code = tiny_code
    mats = code.codeword_matrices()
    from rankloc.gf import gfq_rank_batch

    ranks = gfq_rank_batch(mats, 2)
    idx = int(np.nonzero(ranks == 4)[0][0])
    c = mats[idx]
    reduced, pivots = gfq_row_reduce(c.copy(), 2)
    rows = reduced[:4]
    coeff = c[:, [int(p) for p in pivots]]  # RREF pivot columns read off weights
    e1 = (coeff[:, :2] @ rows[:2]) % 2
    e2 = (coeff[:, 2:] @ rows[2:]) % 2
    assert ((e1 ^ e2) == c).all()
    assert gfq_rank(e1, 2) == 2 and gfq_rank(e2, 2) == 2
    near = decode_min_distance(code, e1.astype(np.uint8))
    assert near.distance == 2 and near.is_tie
    assert 0 in near.indices and idx in near.indices
    with pytest.raises(ValueError, match="tie"):
        near.codeword
