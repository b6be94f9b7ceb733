"""Constant-dimension subspace codes obtained by lifting rank-metric codes.

A subspace of GF(q)^M is stored as a matrix whose columns form its
canonical ordered basis (reduced column echelon form), so equality of
subspaces is equality of arrays.  Lifting glues an identity block on top
of a codeword array; the resulting family inherits twice the rank
distance, and a code with column-block rank-locality lifts to one whose
basis vectors can be checked locally per block.

Distance computations deliberately run on two routes, the pairwise
subspace-distance definition and the doubled rank distance of the source
code, and the two are compared rather than merged.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .codes import (
    DEFAULT_ORACLE_BUDGET,
    LocalRankCode,
    OracleBudgetError,
    _EvaluationCode,
    min_rank_distance,
)
from .gf import base_tables, gfq_rank, gfq_rank_batch, gfq_row_reduce
from .rng import SplitMix64


def rcef(mat: np.ndarray, q: int = 2) -> np.ndarray:
    """Reduced column echelon form with dependent columns dropped.

    Computed as the transpose of the reduced row echelon form of the
    transpose; the result is the canonical basis matrix of the column
    span, and the map is idempotent.
    """
    mat = np.asarray(mat, dtype=np.uint8)
    if mat.ndim != 2:
        raise ValueError("expected a matrix")
    reduced, pivots = gfq_row_reduce(np.ascontiguousarray(mat.T), q, mat.shape[0])
    return np.ascontiguousarray(reduced[: len(pivots)].T)


@dataclass(frozen=True)
class Subspace:
    """A subspace of GF(q)^M, canonically represented."""

    q: int
    basis: np.ndarray  # M x dim, RCEF, read-only

    @classmethod
    def from_matrix(cls, mat: np.ndarray, q: int = 2) -> "Subspace":
        canon = rcef(mat, q)
        canon.setflags(write=False)
        return cls(q=q, basis=canon)

    @property
    def ambient(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.q == other.q
            and self.basis.shape == other.basis.shape
            and bool((self.basis == other.basis).all())
        )

    def __hash__(self) -> int:
        return hash((self.q, self.basis.shape, self.basis.tobytes()))


def subspace_distance(u: Subspace, v: Subspace) -> int:
    """dim U + dim V - 2 dim(U cap V), via the rank of the stacked bases."""
    if u.ambient != v.ambient or u.q != v.q:
        raise ValueError("ambient dimension mismatch")
    joint = np.hstack([u.basis, v.basis])
    return 2 * gfq_rank(np.ascontiguousarray(joint.T), u.q) - u.dim - v.dim


def lift(mat: np.ndarray, q: int = 2) -> Subspace:
    """The n-dimensional subspace of GF(q)^(m+n) spanned by [I; X] columns.

    The identity block sits on the rows indexing the basis vectors, so the
    matrix is already in reduced column echelon form and the map is
    injective.
    """
    mat = np.asarray(mat, dtype=np.uint8)
    m, n = mat.shape
    basis = np.vstack([np.eye(n, dtype=np.uint8), mat])
    basis.setflags(write=False)
    return Subspace(q=q, basis=basis)


def _lift_batch(mats: np.ndarray) -> np.ndarray:
    """(B, m, n) codeword arrays -> (B, m+n, n) lifted bases."""
    b, m, n = mats.shape
    eye = np.broadcast_to(np.eye(n, dtype=np.uint8), (b, n, n))
    return np.concatenate([eye, mats], axis=1)


@dataclass(frozen=True)
class LiftedCode:
    """Lifting of every codeword of a rank-metric evaluation code."""

    source: _EvaluationCode

    @property
    def q(self) -> int:
        return self.source.field.q

    @property
    def ambient(self) -> int:
        return self.source.field.m + self.source.n

    @property
    def codeword_dim(self) -> int:
        return self.source.n

    @property
    def codeword_count(self) -> int:
        return self.source.codeword_count

    def bases(self, budget: int = DEFAULT_ORACLE_BUDGET) -> np.ndarray:
        """All lifted bases as a (B, m+n, n) array, gated by the budget."""
        return _lift_batch(self.source.codeword_matrices(budget))

    def subspaces(self, budget: int = DEFAULT_ORACLE_BUDGET) -> Iterator[Subspace]:
        for word in self.bases(budget):
            word = word.copy()
            word.setflags(write=False)
            yield Subspace(q=self.q, basis=word)


def _pairwise_min_distance(
    bases: np.ndarray, q: int, sample_pairs: int | None, seed: int
) -> int:
    """Minimum pairwise subspace distance of equal-dimension bases.

    Exhaustive when sample_pairs is None, otherwise over sampled pairs
    (an upper bound on the true minimum).
    """
    count, _, dim = bases.shape
    if count < 2:
        raise ValueError("degenerate")
    if sample_pairs is None:
        pairs = [(i, j) for i in range(count) for j in range(i + 1, count)]
    else:
        rng = SplitMix64(seed)
        pairs = []
        for _ in range(sample_pairs):
            i = rng.randbelow(count)
            j = rng.randbelow(count - 1)
            if j >= i:
                j += 1
            pairs.append((i, j))
    stacked = np.empty((len(pairs), 2 * dim, bases.shape[1]), dtype=np.uint8)
    for t, (i, j) in enumerate(pairs):
        stacked[t, :dim] = bases[i].T
        stacked[t, dim:] = bases[j].T
    ranks = gfq_rank_batch(stacked, q)
    return int(2 * ranks.min() - 2 * dim)


def min_subspace_distance(
    lifted: LiftedCode,
    budget: int = DEFAULT_ORACLE_BUDGET,
    cross_check_pairs: int = 64,
    seed: int = 0,
) -> int:
    """Minimum subspace distance of a lifted code.

    Primary route: twice the source's minimum rank distance (linearity).
    Cross-checks, never collapsed into the primary route: sampled pairs
    must satisfy the per-pair identity d_S = 2 d_R, and the pairwise
    distances from the all-zero codeword must reproduce the minimum.
    """
    if lifted.codeword_count < 2:
        raise ValueError("degenerate")
    primary = 2 * min_rank_distance(lifted.source, budget)

    mats = lifted.source.codeword_matrices(budget)
    bases = _lift_batch(mats)
    rng = SplitMix64(seed)
    t = base_tables(lifted.q)
    for _ in range(cross_check_pairs):
        i = rng.randbelow(len(bases))
        j = rng.randbelow(len(bases) - 1)
        if j >= i:
            j += 1
        ds = subspace_distance(
            Subspace(q=lifted.q, basis=bases[i]), Subspace(q=lifted.q, basis=bases[j])
        )
        dr = gfq_rank(t.sub[mats[i], mats[j]], lifted.q)
        if ds != 2 * dr:
            raise RuntimeError("distance cross-check failed")
    # zero is a codeword of any linear source, so distances from it alone
    # already reach the code minimum
    dim = lifted.codeword_dim
    stacked = np.empty((len(bases) - 1, 2 * dim, lifted.ambient), dtype=np.uint8)
    zero_t = bases[0].T
    for t_idx in range(1, len(bases)):
        stacked[t_idx - 1, :dim] = zero_t
        stacked[t_idx - 1, dim:] = bases[t_idx].T
    ranks = gfq_rank_batch(stacked, lifted.q)
    from_zero = int(2 * ranks.min() - 2 * dim)
    if from_zero != primary:
        raise RuntimeError("distance cross-check failed")
    return primary


@dataclass(frozen=True)
class BlockLocality:
    """Locality verdict for one column block of basis vectors."""

    block: int                 # 1-based block index
    columns: tuple[int, ...]   # 0-based basis-vector indices
    size_ok: bool
    dim_ok: bool
    projected_distance: int
    required_distance: int
    exact: bool                # exhaustive pair scan vs sampled

    @property
    def distance_ok(self) -> bool:
        return self.projected_distance >= self.required_distance

    @property
    def passed(self) -> bool:
        return self.size_ok and self.dim_ok and self.distance_ok


@dataclass(frozen=True)
class LocalityReport:
    r: int
    delta: int                 # rank-locality delta of the source
    blocks: tuple[BlockLocality, ...]

    @property
    def subspace_delta(self) -> int:
        return 2 * self.delta

    @property
    def passed(self) -> bool:
        return all(b.passed for b in self.blocks)

    @property
    def exact(self) -> bool:
        return all(b.exact for b in self.blocks)

    def summary(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        if not self.exact:
            verdict += " (sampled)"
        return f"subspace-locality ({self.r},{self.subspace_delta}): {verdict}"


def verify_subspace_locality(
    lifted: LiftedCode,
    budget: int = DEFAULT_ORACLE_BUDGET,
    max_pairs: int = 200_000,
    sample_pairs: int = 2000,
    seed: int = 0,
) -> LocalityReport:
    """Check that lifting kept the source's locality, block by block.

    For each column block of the source code the report verifies the
    block is no wider than r+delta-1 basis vectors, every projected
    codeword keeps full dimension, and the projected family's minimum
    subspace distance reaches twice the source's local distance
    guarantee.  The projected family is enumerated through the block's
    local code; when the pair count exceeds ``max_pairs`` the distance
    scan falls back to sampling and the report says so.
    """
    src = lifted.source
    if not isinstance(src, LocalRankCode):
        raise TypeError("locality verification needs a column-block local code")
    p = src.params
    eye = np.eye(p.n, dtype=np.uint8)
    blocks = []
    for j in range(1, p.mu + 1):
        cols = src.rack_columns(j)
        width = cols.stop - cols.start
        size_ok = width <= p.r + p.delta - 1
        local = src.local_code(j)
        try:
            local_mats = local.codeword_matrices(budget)
            enumerated = True
        except OracleBudgetError:
            rng = SplitMix64(seed * 7919 + j)
            msgs = np.array(
                [
                    [rng.randbelow(src.field.order) for _ in range(local.k)]
                    for _ in range(sample_pairs)
                ],
                dtype=np.int64,
            )
            local_mats = local.field.matrix_batch(local.encode_batch(msgs))
            enumerated = False
        # projection of a lifted basis onto the block: partial identity on
        # top of the block's local codeword
        id_block = np.broadcast_to(
            eye[:, cols.start : cols.stop], (len(local_mats), p.n, width)
        )
        local_bases = np.concatenate([id_block, local_mats], axis=1)
        dims = gfq_rank_batch(
            np.ascontiguousarray(local_bases.transpose(0, 2, 1)), p.q
        )
        dim_ok = bool((dims == width).all())
        n_pairs = len(local_bases) * (len(local_bases) - 1) // 2
        exact = enumerated and n_pairs <= max_pairs
        dist = _pairwise_min_distance(
            local_bases, p.q, None if exact else sample_pairs, seed + j
        )
        blocks.append(
            BlockLocality(
                block=j,
                columns=tuple(range(cols.start, cols.stop)),
                size_ok=size_ok,
                dim_ok=dim_ok,
                projected_distance=dist,
                required_distance=2 * p.delta,
                exact=exact,
            )
        )
    return LocalityReport(r=p.r, delta=p.delta, blocks=tuple(blocks))
