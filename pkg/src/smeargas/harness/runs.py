"""Detector-size sweeps and paired-detector ratio experiments.

Every repeat ``r`` samples one cloud with seed ``base_seed + r`` and reuses
it for every detector size, so curves and ratios are paired per seed.
Repeats may run on a thread pool; results are always assembled in
canonical (size, repeat) order, so output does not depend on the worker
count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from smeargas.errors import DomainError, NumericError, RatioUndefinedError
from smeargas.gascloud import sample_cloud
from smeargas.transmittance import transmittance


@dataclass(frozen=True)
class SweepRow:
    size_m: float
    repeat: int
    seed: int
    tr: float
    n_inside: int
    cloud_hash: str
    underflow: bool = False


@dataclass(frozen=True)
class SweepAggregate:
    size_m: float
    mean_tr: float
    stdev_tr: float
    mean_n_inside: float


@dataclass(frozen=True)
class SweepTable:
    rows: tuple
    aggregates: tuple

    def tr_matrix(self):
        """TR values as an array of shape (n_sizes, n_repeats)."""
        sizes = sorted({r.size_m for r in self.rows})
        repeats = sorted({r.repeat for r in self.rows})
        m = np.full((len(sizes), len(repeats)), np.nan)
        for r in self.rows:
            m[sizes.index(r.size_m), repeats.index(r.repeat)] = r.tr
        return m


@dataclass(frozen=True)
class Stats:
    mean: float
    stdev: float


@dataclass(frozen=True)
class RatioReport:
    small_m: float
    large_m: float
    base_seed: int
    seeds: tuple
    tr_small_values: tuple
    tr_large_values: tuple
    ratio_values: tuple
    tr_small: Stats
    tr_large: Stats
    ratio: Stats
    z_score: float | None
    degenerate: bool


def sample_stats(values) -> Stats:
    """Mean and sample (N-1) standard deviation; stdev is NaN for a single value."""
    x = np.asarray(values, dtype=float)
    if x.size == 0:
        raise DomainError("no values")
    mean = float(np.mean(x))
    stdev = float(np.std(x, ddof=1)) if x.size > 1 else math.nan
    return Stats(mean, stdev)


def _seed(base_seed, r):
    s = int(base_seed) + r
    if not 0 <= s < 2 ** 64:
        raise DomainError(f"seed {s} leaves the unsigned 64-bit range")
    return s


def _with_context(exc, where):
    return type(exc)(f"{where}: {exc}")


def _repeat(config, params, sizes, r, base_seed):
    seed = _seed(base_seed, r)
    try:
        cloud = sample_cloud(config.cloud_spec(seed))
    except (DomainError, NumericError) as exc:
        raise _with_context(exc, f"repeat {r} (seed {seed})") from exc
    digest = cloud.digest()
    out = []
    for size in sizes:
        try:
            res = transmittance(cloud, config.setup_for_size(size), params,
                                config.method, config.quad_tol)
        except (DomainError, NumericError) as exc:
            raise _with_context(exc, f"size {size!r}, repeat {r}") from exc
        out.append(SweepRow(size, r, seed, res.tr, res.n_inside_tunnel, digest, res.underflow))
    return out


def _map_repeats(fn, repeats, workers):
    if workers is None or workers <= 1:
        return [fn(r) for r in range(repeats)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(repeats)))


def run_sweep(config, sizes=None, repeats=None, base_seed=None, workers=1) -> SweepTable:
    """Transmittance versus detector size.

    ``sizes`` are circumscribed half-sides (disk radii), strictly increasing;
    they default to the config's sweep settings, as do ``repeats`` and
    ``base_seed``.
    """
    sizes = tuple(float(s) for s in (config.sweep_sizes if sizes is None else sizes))
    repeats = config.sweep_repeats if repeats is None else int(repeats)
    base_seed = config.seed if base_seed is None else int(base_seed)
    if not sizes or any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise DomainError("sizes must be non-empty and strictly increasing")
    if repeats < 1:
        raise DomainError("repeats must be >= 1")
    params = config.scatter_params()
    per_repeat = _map_repeats(lambda r: _repeat(config, params, sizes, r, base_seed),
                              repeats, workers)
    rows = []
    aggregates = []
    for i, size in enumerate(sizes):
        size_rows = [per_repeat[r][i] for r in range(repeats)]
        rows.extend(size_rows)
        st = sample_stats([row.tr for row in size_rows])
        n_in = float(np.mean([row.n_inside for row in size_rows]))
        aggregates.append(SweepAggregate(size, st.mean, st.stdev, n_in))
    return SweepTable(tuple(rows), tuple(aggregates))


def run_ratio(config, small=None, large=None, repeats=None, base_seed=None,
              workers=1) -> RatioReport:
    """Paired TR(small) / TR(large) over ``repeats`` seeded clouds.

    ``z_score = (mean(ratio) - 1) / (stdev(ratio) / sqrt(repeats))``. It is
    ``None`` for a single repeat, and ``None`` with ``degenerate=True`` when
    every ratio is identical (zero spread).
    """
    small = config.ratio_small if small is None else float(small)
    large = config.ratio_large if large is None else float(large)
    repeats = config.ratio_repeats if repeats is None else int(repeats)
    base_seed = config.seed if base_seed is None else int(base_seed)
    if not small <= large:
        raise DomainError("small detector must not exceed the large one")
    if repeats < 1:
        raise DomainError("repeats must be >= 1")
    params = config.scatter_params()
    sizes = (small,) if small == large else (small, large)
    per_repeat = _map_repeats(lambda r: _repeat(config, params, sizes, r, base_seed),
                              repeats, workers)
    seeds, trs, trl, ratios = [], [], [], []
    for r, rows in enumerate(per_repeat):
        a, b = rows[0], rows[-1]
        if b.tr == 0.0:
            raise RatioUndefinedError(
                f"ratio undefined: TR(large={large!r}) underflowed for repeat {r} (seed {b.seed})"
            )
        seeds.append(a.seed)
        trs.append(a.tr)
        trl.append(b.tr)
        ratios.append(a.tr / b.tr)
    ratio_stats = sample_stats(ratios)
    z = None
    degenerate = False
    if repeats >= 2:
        if ratio_stats.stdev == 0.0:
            degenerate = True
        else:
            z = (ratio_stats.mean - 1.0) / (ratio_stats.stdev / math.sqrt(repeats))
    return RatioReport(
        small_m=small,
        large_m=large,
        base_seed=base_seed,
        seeds=tuple(seeds),
        tr_small_values=tuple(trs),
        tr_large_values=tuple(trl),
        ratio_values=tuple(ratios),
        tr_small=sample_stats(trs),
        tr_large=sample_stats(trl),
        ratio=ratio_stats,
        z_score=z,
        degenerate=degenerate,
    )
