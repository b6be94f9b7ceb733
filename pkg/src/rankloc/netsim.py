"""Download-from-a-rack simulator over a random-linear-coded noisy network.

Each server in a rack emits one packet: the unit vector marking its global
column index followed by the column it stores, so the rack's packets span
the block projection of the lifted codeword.  The network is abstracted to
its end-to-end effect Y = A X + B Z: a random collection matrix A whose
rank deficiency models packet erasures, and up to t_max injected error
packets Z mixed in through B.  The receiver decodes by minimum subspace
distance over the rack's lifted local code.

Every trial draws its own generator stream from (seed, trial index), so
runs are reproducible and order independent; reports compare equal across
reruns (wall time excluded).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .codes import DEFAULT_ORACLE_BUDGET, LocalRankCode
from .gf import base_tables, gfq_matmul, gfq_rank, gfq_rank_batch
from .rng import SplitMix64
from .subspace import rcef

_MAX_REJECTIONS = 10_000


@dataclass(frozen=True)
class ChannelConfig:
    """Operator-channel parameters for one download session."""

    packets_per_rack: int  # servers per rack, r+delta-1
    n_collect: int         # packets gathered by the receiver
    rho_max: int           # erasure budget: rank(A) >= packets_per_rack - rho_max
    t_max: int             # most error packets the network may inject
    links: int             # network links, each a potential injection point
    seed: int = 0

    def __post_init__(self):
        if self.packets_per_rack < 1 or self.n_collect < 1 or self.links < 1:
            raise ValueError("channel dimensions must be positive")
        if self.rho_max < 0 or self.t_max < 0:
            raise ValueError("noise budgets must be non-negative")
        if self.links < self.t_max:
            raise ValueError("links must accommodate the error packets")
        if not 0 <= self.seed < 1 << 64:
            raise ValueError("seed must fit in 64 bits")


def transmit_matrix(code: LocalRankCode, codeword: np.ndarray, j: int) -> np.ndarray:
    """Stack rack j's packets: row i = [unit vector of global column | column]."""
    p = code.params
    codeword = np.asarray(codeword, dtype=np.uint8)
    if codeword.shape != (p.m, p.n):
        raise ValueError("codeword shape mismatch")
    cols = code.rack_columns(j)
    x = np.zeros((p.s, p.n + p.m), dtype=np.uint8)
    for i, c in enumerate(range(cols.start, cols.stop)):
        x[i, c] = 1
        x[i, p.n :] = codeword[:, c]
    return x


@dataclass(frozen=True)
class ChannelOutput:
    received: np.ndarray  # N x M
    rho: int              # realized rank deficiency of A
    t: int                # realized injected error packets


def _uniform_matrix(rng: SplitMix64, rows: int, cols: int, q: int) -> np.ndarray:
    return np.array(
        [[rng.randbelow(q) for _ in range(cols)] for _ in range(rows)], dtype=np.uint8
    )


def channel_apply(x: np.ndarray, config: ChannelConfig, rng: SplitMix64, q: int = 2) -> ChannelOutput:
    """One pass through the network: Y = A X + B Z with realized (rho, t).

    A is uniform among N x s matrices of rank at least s - rho_max, found
    by rejection; exhausting the rejection budget means the floor is
    unreachable (e.g. too few collected packets) and the config is at
    fault.  Z carries exactly t <= t_max nonzero rows on distinct links.
    """
    x = np.asarray(x, dtype=np.uint8)
    s, width = x.shape
    if s != config.packets_per_rack:
        raise ValueError("config packet count mismatch")
    n_col = config.n_collect
    floor = s - config.rho_max
    for _ in range(_MAX_REJECTIONS):
        a = _uniform_matrix(rng, n_col, s, q)
        rank_a = gfq_rank(a.copy(), q)
        if rank_a >= floor:
            break
    else:
        raise RuntimeError("cannot realize rank constraint")

    t = rng.randbelow(config.t_max + 1)
    z = np.zeros((config.links, width), dtype=np.uint8)
    for row in rng.sample_indices(config.links, t):
        while True:
            packet = [rng.randbelow(q) for _ in range(width)]
            if any(packet):
                break
        z[row] = packet
    b = _uniform_matrix(rng, n_col, config.links, q)

    tables = base_tables(q)
    y = gfq_matmul(a, x, q)
    if t:
        y = tables.add[y, gfq_matmul(b, z, q)]
    return ChannelOutput(received=y, rho=s - rank_a, t=t)


def local_candidates(
    code: LocalRankCode, j: int, budget: int = DEFAULT_ORACLE_BUDGET
) -> tuple[np.ndarray, np.ndarray]:
    """Lifted bases of rack j's local code in the full packet ambient.

    Returns (bases, mats): bases[i] is the (n+m) x s basis whose columns
    are the packets for local codeword mats[i].
    """
    p = code.params
    mats = code.local_code(j).codeword_matrices(budget)
    cols = code.rack_columns(j)
    eye = np.eye(p.n, dtype=np.uint8)[:, cols.start : cols.stop]
    id_block = np.broadcast_to(eye, (len(mats), p.n, p.s))
    return np.concatenate([id_block, mats], axis=1), mats


@dataclass(frozen=True)
class DownloadDecodeResult:
    index: int             # candidate index of the minimizer
    distance: int
    is_tie: bool
    local_matrix: np.ndarray


def decode_subspace_min(
    bases: np.ndarray, mats: np.ndarray, received: np.ndarray, q: int = 2
) -> DownloadDecodeResult:
    """Minimum-subspace-distance decoding over an enumerated candidate family.

    The received matrix is reduced to a basis of its row space; distances
    are computed batch-wise from the ranks of stacked bases.  A shared
    minimum is a tie, which callers count as failure.
    """
    count, ambient, dim = bases.shape
    y_basis = rcef(np.ascontiguousarray(np.asarray(received, dtype=np.uint8).T), q)
    y_dim = y_basis.shape[1]
    stacked = np.empty((count, dim + y_dim, ambient), dtype=np.uint8)
    stacked[:, :dim] = bases.transpose(0, 2, 1)
    stacked[:, dim:] = np.broadcast_to(y_basis.T, (count, y_dim, ambient))
    ranks = gfq_rank_batch(stacked, q)
    dists = 2 * ranks.astype(int) - dim - y_dim
    best = int(dists.argmin())
    dmin = int(dists[best])
    ties = int((dists == dmin).sum())
    return DownloadDecodeResult(
        index=best,
        distance=dmin,
        is_tie=ties > 1,
        local_matrix=mats[best],
    )


@dataclass(frozen=True)
class TrialReport:
    rack: int
    config: ChannelConfig
    trials: int
    successes: int
    histogram: tuple[tuple[tuple[int, int], int], ...]  # ((rho, t), count) sorted
    wall_time: float = field(compare=False)

    @property
    def success_rate(self) -> float:
        return self.successes / self.trials if self.trials else 0.0

    def to_kv(self) -> list[str]:
        lines = [
            f"rack={self.rack}",
            f"seed={self.config.seed}",
            f"trials={self.trials}",
            f"successes={self.successes}",
            f"success_rate={self.success_rate:.6f}",
        ]
        lines.extend(
            f"count_rho{rho}_t{t}={count}" for (rho, t), count in self.histogram
        )
        return lines


def run_trials(
    code: LocalRankCode,
    j: int,
    config: ChannelConfig,
    trials: int,
    budget: int = DEFAULT_ORACLE_BUDGET,
) -> TrialReport:
    """Monte Carlo download sessions against rack j.

    Success means the unique nearest candidate is the transmitted local
    codeword.  The realized (rho, t) pairs are tallied so guarantee
    sweeps can see which noise levels actually occurred.
    """
    p = code.params
    if config.packets_per_rack != p.s:
        raise ValueError("config packet count mismatch")
    if config.n_collect < p.r:
        raise ValueError("collector must gather at least r packets")
    bases, mats = local_candidates(code, j, budget)
    root = SplitMix64(config.seed)
    hist: dict[tuple[int, int], int] = {}
    successes = 0
    start = time.perf_counter()
    for trial in range(trials):
        rng = root.spawn(trial)
        message = [rng.randbelow(code.field.order) for _ in range(p.k)]
        codeword = code.encode_matrix(message)
        x = transmit_matrix(code, codeword, j)
        out = channel_apply(x, config, rng, p.q)
        result = decode_subspace_min(bases, mats, out.received, p.q)
        cols = code.rack_columns(j)
        sent = codeword[:, cols.start : cols.stop]
        if not result.is_tie and (result.local_matrix == sent).all():
            successes += 1
        key = (out.rho, out.t)
        hist[key] = hist.get(key, 0) + 1
    wall = time.perf_counter() - start
    return TrialReport(
        rack=j,
        config=config,
        trials=trials,
        successes=successes,
        histogram=tuple(sorted(hist.items())),
        wall_time=wall,
    )
