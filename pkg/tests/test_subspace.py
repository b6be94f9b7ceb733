"""Subspace lifting: canonical bases, the metric, and block locality."""

import numpy as np
import pytest

from rankloc.gf import base_tables, gfq_rank
from rankloc.rng import SplitMix64
from rankloc.subspace import (
    LiftedCode,
    Subspace,
    lift,
    min_subspace_distance,
    rcef,
    subspace_distance,
    verify_subspace_locality,
)

from helpers import rand_matrix


# ---------------------------------------------------------------------------
# canonical column form


def test_rcef_fixed_points():
    eye = np.eye(4, dtype=np.uint8)
    assert (rcef(eye) == eye).all()
    assert rcef(np.zeros((4, 2), dtype=np.uint8)).shape == (4, 0)


def test_rcef_is_canonical_and_idempotent():
    # bases differing by an invertible column transform share one RCEF
    rng = SplitMix64(501)
    for _ in range(80):
        h = rand_matrix(rng, 5, 3, 2)
        while True:
            g = rand_matrix(rng, 3, 3, 2)
            if gfq_rank(g.copy(), 2) == 3:
                break
        hg = (h.astype(int) @ g.astype(int) % 2).astype(np.uint8)
        canon = rcef(h)
        assert (canon == rcef(hg)).all()
        assert (rcef(canon) == canon).all()
        assert gfq_rank(canon.copy(), 2) == canon.shape[1]


def test_rcef_odd_characteristic():
    rng = SplitMix64(503)
    for _ in range(60):
        h = rand_matrix(rng, 4, 2, 3)
        canon = rcef(h, 3)
        assert (rcef(canon, 3) == canon).all()
        # same column space: ranks of stacked pairs collapse
        both = np.hstack([h, canon])
        assert gfq_rank(both, 3) == gfq_rank(h.copy(), 3)


def test_subspace_identity_and_hash():
    u1 = Subspace.from_matrix(np.array([[1, 0], [0, 1], [1, 1]], dtype=np.uint8))
    u2 = Subspace.from_matrix(np.array([[1, 1], [0, 1], [1, 0]], dtype=np.uint8))
    assert u1 == u2 and hash(u1) == hash(u2)
    assert u1.ambient == 3 and u1.dim == 2


# ---------------------------------------------------------------------------
# metric


def test_subspace_distance_small_cases():
    u = Subspace.from_matrix(np.array([[1], [0]], dtype=np.uint8))
    v = Subspace.from_matrix(np.array([[0], [1]], dtype=np.uint8))
    w = Subspace.from_matrix(np.eye(2, dtype=np.uint8))
    assert subspace_distance(u, u) == 0
    assert subspace_distance(u, v) == 2  # complementary lines
    assert subspace_distance(u, w) == 1  # line inside the plane
    with pytest.raises(ValueError, match="ambient"):
        subspace_distance(u, Subspace.from_matrix(np.eye(3, dtype=np.uint8)))


def test_subspace_metric_axioms():
    rng = SplitMix64(509)
    spaces = []
    while len(spaces) < 24:
        cand = Subspace.from_matrix(rand_matrix(rng, 5, 1 + rng.randbelow(3), 2))
        spaces.append(cand)
    for _ in range(1000):
        u = spaces[rng.randbelow(len(spaces))]
        v = spaces[rng.randbelow(len(spaces))]
        w = spaces[rng.randbelow(len(spaces))]
        duv = subspace_distance(u, v)
        assert duv == subspace_distance(v, u)
        assert (duv == 0) == (u == v)
        assert duv <= subspace_distance(u, w) + subspace_distance(w, v)


# ---------------------------------------------------------------------------
# lifting


def test_lift_shape_and_canonical(tiny_code):
    mats = tiny_code.codeword_matrices()
    sp = lift(mats[123])
    assert sp.ambient == 12 and sp.dim == 6
    assert (sp.basis[:6] == np.eye(6, dtype=np.uint8)).all()
    assert (rcef(sp.basis) == sp.basis).all()


def test_lift_is_injective(tiny_code):
    mats = tiny_code.codeword_matrices()
    seen = {lift(mats[i]).basis.tobytes() for i in range(mats.shape[0])}
    assert len(seen) == 4096


def test_lift_doubles_rank_distance(tiny_code):
    # pairwise: the lifted distance is exactly twice the rank distance
    mats = tiny_code.codeword_matrices()
    t = base_tables(2)
    rng = SplitMix64(521)
    for _ in range(1000):
        i = rng.randbelow(mats.shape[0])
        j = rng.randbelow(mats.shape[0])
        ds = subspace_distance(lift(mats[i]), lift(mats[j]))
        dr = gfq_rank(t.sub[mats[i], mats[j]], 2)
        assert ds == 2 * dr


def test_lifted_code_enumeration(tiny_code):
    lifted = LiftedCode(tiny_code)
    assert lifted.q == 2
    assert lifted.ambient == 12 and lifted.codeword_dim == 6
    assert lifted.codeword_count == 4096
    bases = lifted.bases()
    assert bases.shape == (4096, 12, 6)
    subs = lifted.subspaces()
    assert len({s.basis.tobytes() for s in subs}) == 4096


def test_min_subspace_distance_tiny(tiny_code):
    lifted = LiftedCode(tiny_code)
    assert min_subspace_distance(lifted) == 8  # == 2 * min rank distance 4


def test_min_subspace_distance_degenerate(tiny_code):
    from rankloc.subspace import _pairwise_min_distance

    with pytest.raises(ValueError, match="degenerate"):
        _pairwise_min_distance(np.zeros((1, 12, 6), np.uint8), 2, None, 0)


# ---------------------------------------------------------------------------
# locality of the lifted code


def test_locality_tiny_exact(tiny_code):
    report = verify_subspace_locality(LiftedCode(tiny_code))
    assert report.r == 1 and report.delta == 2
    assert report.subspace_delta == 4
    assert report.passed and report.exact
    assert report.summary() == "subspace-locality (1,4): PASS"
    assert len(report.blocks) == 3
    for b in report.blocks:
        assert b.size_ok and b.dim_ok and b.exact
        assert b.projected_distance == 4
        assert b.required_distance == 4
        assert b.passed


def test_locality_projection_is_the_local_code(tiny_code):
    # block 1 projections of the full code coincide with the local code
    code = tiny_code
    mats = code.codeword_matrices()
    cols = code.rack_columns(1)
    proj = {mats[i][:, cols.start : cols.stop].tobytes() for i in range(mats.shape[0])}
    loc = code.local_code(1).codeword_matrices()
    locset = {loc[i].tobytes() for i in range(loc.shape[0])}
    assert proj == locset
    assert len(proj) == 64


def test_locality_sampled_mode(example2_code):
    # the 2^36-codeword instance only admits the sampled check
    report = verify_subspace_locality(
        LiftedCode(example2_code), max_pairs=50_000, sample_pairs=300, seed=3
    )
    assert report.r == 2 and report.subspace_delta == 4
    assert report.passed and not report.exact
    assert report.summary() == "subspace-locality (2,4): PASS (sampled)"
    for b in report.blocks:
        assert b.size_ok and b.dim_ok
        assert b.projected_distance >= b.required_distance


def test_locality_rejects_plain_codes(tiny_code):
    with pytest.raises(TypeError):
        verify_subspace_locality(LiftedCode(tiny_code.local_code(1)))


def test_projection_membership_sampled(example2_code):
    # sampled projections of full codewords always land in the local code
    code = example2_code
    f = code.field
    rng = SplitMix64(523)
    gsub = code.local_code(2).generator_gfq()
    base_rank = gfq_rank(gsub.copy(), 2)
    for _ in range(200):
        msg = [rng.randbelow(f.order) for _ in range(4)]
        block = code.encode_matrix(msg)[:, 3:6].flatten(order="F").astype(np.uint8)
        stacked = np.vstack([gsub, block[None, :]])
        assert gfq_rank(stacked, 2) == base_rank
