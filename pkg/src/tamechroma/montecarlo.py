"""Monte Carlo estimates of colouring counts in G(n, p) and G(n, m).

Samples are drawn in batches; batch b uses the seed ``seed ^ b`` so the
result does not depend on how batches are spread over threads. The thread
count comes from the TAMECHROMA_THREADS environment variable (default 1).
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from statistics import NormalDist

import numpy as np

from .colouring import partition_masks
from .constants import DEFAULTS
from .errors import DomainError
from .graphs import rng_for
from .iset import GraphParams
from .numeric import Interval, LogReal
from .profiles import Profile, p_count_exact

MC_MAX_N = 20
MAX_PARTITIONS = 2_000_000


@dataclass(frozen=True)
class MCResult:
    mean: LogReal
    ci: Interval
    std: float
    samples: int
    level: float
    histogram: dict[int, int]


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("TAMECHROMA_THREADS", "1")))
    except ValueError:
        return 1


def _internal_matrix(n: int, pr: Profile) -> np.ndarray:
    masks = partition_masks(n, pr.items)
    N = n * (n - 1) // 2
    out = np.zeros((len(masks), N), dtype=np.float32)
    for row, m in enumerate(masks):
        idx = [i for i in range(N) if m >> i & 1]
        out[row, idx] = 1.0
    return out


def sample_edge_batch(n: int, size: int, seed: int, model: str, p: float, m: int) -> np.ndarray:
    """Boolean (size, N) edge indicators of ``size`` independent graphs."""
    N = n * (n - 1) // 2
    rng = rng_for(seed)
    if model == "gnp":
        return rng.random((size, N)) < p
    idx = np.tile(np.arange(N), (size, 1))
    rows = np.arange(size)
    for i in range(m):
        j = rng.integers(i, N, size=size)
        a, b = idx[rows, i].copy(), idx[rows, j]
        idx[rows, i] = b
        idx[rows, j] = a
    edges = np.zeros((size, N), dtype=bool)
    edges[rows[:, None], idx[:, :m]] = True
    return edges


def mc_expectation(params: GraphParams, pr: Profile, samples: int, seed: int,
                   model: str = "gnp", ordered: bool = True, level: float = 0.95,
                   batch_size: int | None = None) -> MCResult:
    """Sample mean of the colouring count with a normal-approximation CI."""
    if samples <= 0:
        raise DomainError("samples must be positive")
    if model not in ("gnp", "gnm"):
        raise DomainError(f"model must be 'gnp' or 'gnm', got {model!r}")
    n = params.n
    if n > MC_MAX_N:
        raise DomainError(f"Monte Carlo counting is limited to n <= {MC_MAX_N}")
    if pr.n != n:
        raise DomainError(f"profile has n={pr.n} but params have n={n}")
    if not 0 < level < 1:
        raise DomainError("level must lie in (0, 1)")
    batch_size = batch_size or int(DEFAULTS["mc_batch_size"])
    if p_count_exact(pr) > MAX_PARTITIONS * math.prod(math.factorial(k) for _, k in pr.items):
        raise DomainError("too many partitions for this profile")
    internal = _internal_matrix(n, pr)
    factor = math.prod(math.factorial(k) for _, k in pr.items) if ordered else 1
    sizes = [min(batch_size, samples - s) for s in range(0, samples, batch_size)]

    def run(b: int) -> np.ndarray:
        edges = sample_edge_batch(n, sizes[b], seed ^ b, model, params.p, params.m)
        conflicts = edges.astype(np.float32) @ internal.T
        return (conflicts == 0).sum(axis=1).astype(np.int64)

    threads = _threads()
    if threads > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(threads) as pool:
            parts = list(pool.map(run, range(len(sizes))))
    else:
        parts = [run(b) for b in range(len(sizes))]
    counts = np.concatenate(parts) * factor
    mean = float(counts.mean())
    std = float(counts.std(ddof=1)) if samples > 1 else 0.0
    half = NormalDist().inv_cdf((1 + level) / 2) * std / math.sqrt(samples)
    values, freq = np.unique(counts, return_counts=True)
    hist = {int(v): int(f) for v, f in zip(values, freq)}
    return MCResult(LogReal.from_float(mean), Interval(mean - half, mean + half), std,
                    samples, level, hist)
