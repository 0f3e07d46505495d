"""Random generation: marks, height factors, record traces and limits.

Three simulators produce the chain-record count by different mechanisms
and must agree in distribution:

* ``simulate_direct``   -- detect records on n sampled marks, cost O(n*d);
* ``simulate_sojourn``  -- stick-break the record heights and draw the
  geometric sojourns between records, cost O(log(n)/d) records;
* ``simulate_insertion``-- screen a uniform sequence and replace first
  hits below the current height, the partition-style counting oracle.

Scalar functions take a generator from :func:`chainrec.rng.make_stream`
and are pure given that stream.  The ``sample_*`` batch drivers produce
many replicates with a fixed chunked stream layout (chunk i of a task
uses substream i), so their output is bit-identical for any worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from chainrec.rng import make_stream, stream_id

_CHUNK_BUDGET = 1 << 24  # doubles per generated block in batch drivers


# ---------------------------------------------------------------------------
# trace types


@dataclass(frozen=True)
class HeightSequence:
    """Decreasing stick-breaking heights with their factor dimension."""

    heights: tuple[float, ...]
    dim: int


@dataclass(frozen=True)
class ChainRecordTrace:
    """Chain-record times and heights of one replicate up to ``horizon``."""

    record_times: tuple[int, ...]
    heights: tuple[float, ...]
    horizon: int
    dim: int

    @property
    def count(self) -> int:
        return len(self.record_times)


@dataclass(frozen=True)
class PoissonPacedPath:
    """Piecewise-constant record-height path under Poisson pacing.

    The state holds for an exponential time with rate equal to its value,
    then jumps multiplicatively by a fresh height factor.
    """

    jump_times: tuple[float, ...]
    heights_after_jump: tuple[float, ...]
    horizon: float
    initial_state: float

    @property
    def count(self) -> int:
        return len(self.jump_times)

    def count_at(self, t: float) -> int:
        return sum(1 for s in self.jump_times if s <= t)

    def state_at(self, t: float) -> float:
        state = self.initial_state
        for s, h in zip(self.jump_times, self.heights_after_jump):
            if s > t:
                break
            state = h
        return state

    def height_integral(self, upto: float | None = None) -> float:
        """Integral of the path from 0 to ``upto`` (default: the horizon)."""
        end = self.horizon if upto is None else upto
        total = 0.0
        prev = 0.0
        state = self.initial_state
        for s, h in zip(self.jump_times, self.heights_after_jump):
            if s > end:
                break
            total += state * (s - prev)
            prev = s
            state = h
        return total + state * (end - prev)

    def after(self, t0: float) -> "PoissonPacedPath":
        """Re-based path with the prefix [0, t0) discarded (burn-in)."""
        if not 0 <= t0 <= self.horizon:
            raise ValueError("t0 must lie in [0, horizon]")
        jumps = [(s - t0, h) for s, h in zip(self.jump_times, self.heights_after_jump) if s > t0]
        return PoissonPacedPath(
            tuple(s for s, _ in jumps),
            tuple(h for _, h in jumps),
            self.horizon - t0,
            self.state_at(t0),
        )


@dataclass(frozen=True)
class LimitProcessWindow:
    """Points (height, arrival time) of the scaling-limit process in a window."""

    points: tuple[tuple[float, float], ...]
    window: tuple[float, float, float]  # (s_lo, s_hi, t_hi)
    truncation_tol: float

    @property
    def count(self) -> int:
        return len(self.points)


# ---------------------------------------------------------------------------
# scalar samplers


def sample_marks(rng: np.random.Generator, d: int, n: int) -> np.ndarray:
    """n uniform marks in the d-cube, row per mark.

    Draws exactly the uniforms that :func:`simulate_direct` consumes from
    the same stream, in the same order.
    """
    return rng.random((n, d))


def sample_height_factor(rng: np.random.Generator, d: int) -> float:
    """One height factor: the product of d independent uniforms."""
    return float(rng.random(d).prod())


def sample_height_sequence(rng: np.random.Generator, d: int, floor: float) -> HeightSequence:
    """Stick-breaking heights extended until the sequence drops to ``floor``."""
    if not 0 < floor < 1:
        raise ValueError("floor must lie in (0, 1)")
    heights = []
    log_h = 0.0
    while True:
        log_h += float(np.log(rng.random(d)).sum())
        h = math.exp(log_h)
        heights.append(h)
        if h <= floor:
            return HeightSequence(tuple(heights), d)


def _direct_scan(rng, d, n, block_size):
    times: list[int] = []
    heights: list[float] = []
    rec = None
    produced = 0
    while produced < n:
        m = min(block_size, n - produced)
        block = rng.random((m, d))
        i = 0
        if rec is None:
            rec = block[0].copy()
            times.append(1)
            heights.append(float(rec.prod()))
            i = 1
        while i < m:
            sub = block[i:]
            mask = (sub <= rec).all(axis=1) & (sub < rec).any(axis=1)
            if not mask.any():
                break
            j = int(mask.argmax())
            rec = sub[j].copy()
            times.append(produced + i + j + 1)
            heights.append(float(rec.prod()))
            i += j + 1
        produced += m
    return times, heights


def simulate_direct(
    rng: np.random.Generator, d: int, n: int, *, block_size: int = 1 << 16
) -> ChainRecordTrace:
    """Chain-record trace of n uniform marks by direct detection, O(n*d).

    Consumes exactly n*d uniforms in mark order.
    """
    if d < 1 or n < 1:
        raise ValueError("need d >= 1 and n >= 1")
    times, heights = _direct_scan(rng, d, n, block_size)
    return ChainRecordTrace(tuple(times), tuple(heights), n, d)


def simulate_direct_until(
    rng: np.random.Generator,
    d: int,
    num_records: int,
    *,
    max_marks: int = 10**8,
    block_size: int = 1 << 16,
) -> ChainRecordTrace:
    """Direct detection run until ``num_records`` chain records appear.

    Record waiting times are heavy tailed, so a ``max_marks`` cap bounds
    the run; a returned trace may then hold fewer records (callers decide
    whether to discard such replicates).
    """
    if d < 1 or num_records < 1:
        raise ValueError("need d >= 1 and num_records >= 1")
    times: list[int] = []
    heights: list[float] = []
    rec = None
    produced = 0
    grow = 1024  # blocks grow geometrically: waiting times are heavy tailed
    while produced < max_marks and len(times) < num_records:
        m = min(grow, block_size, max_marks - produced)
        grow *= 2
        block = rng.random((m, d))
        i = 0
        if rec is None:
            rec = block[0].copy()
            times.append(1)
            heights.append(float(rec.prod()))
            i = 1
        while i < m and len(times) < num_records:
            sub = block[i:]
            mask = (sub <= rec).all(axis=1) & (sub < rec).any(axis=1)
            if not mask.any():
                break
            j = int(mask.argmax())
            rec = sub[j].copy()
            times.append(produced + i + j + 1)
            heights.append(float(rec.prod()))
            i += j + 1
        produced += m
    return ChainRecordTrace(tuple(times), tuple(heights), produced, d)


def simulate_sojourn(rng: np.random.Generator, d: int, n: int) -> ChainRecordTrace:
    """Chain-record trace equal in law to the direct one, in O(log(n)/d).

    Heights are stick-breaking products carried in log space; the sojourn
    to the next record is geometric on {1,2,...} with success probability
    equal to the current height, drawn by inverse CDF
    ceil(log(1-V)/log1p(-h)) so that heights near underflow stay safe.
    """
    if d < 1 or n < 1:
        raise ValueError("need d >= 1 and n >= 1")
    log_h = float(np.log(rng.random(d)).sum())
    times = [1]
    heights = [math.exp(log_h)]
    t = 1
    while True:
        h = heights[-1]
        v = float(rng.random())
        denom = math.log1p(-h)
        if denom == 0.0:
            # height underflowed: the next sojourn exceeds any feasible horizon
            break
        gap = max(1, math.ceil(math.log1p(-v) / denom))
        t += gap
        if t > n:
            break
        log_h += float(np.log(rng.random(d)).sum())
        times.append(t)
        heights.append(math.exp(log_h))
    return ChainRecordTrace(tuple(times), tuple(heights), n, d)


def simulate_insertion(rng: np.random.Generator, d: int, n: int) -> int:
    """Chain-record count by the screening/insertion construction.

    Screens n uniforms; the first term is always replaced by the first
    stick-breaking height, and afterwards every first hit below the
    current height is replaced by the next one.  The number of replaced
    terms equals the chain-record count in law.
    """
    if d < 1 or n < 1:
        raise ValueError("need d >= 1 and n >= 1")
    u = rng.random(n)
    count = 1
    log_h = float(np.log(rng.random(d)).sum())
    h = math.exp(log_h)
    for j in range(1, n):
        if u[j] < h:
            count += 1
            log_h += float(np.log(rng.random(d)).sum())
            h = math.exp(log_h)
    return count


def insertion_with_renewal(
    rng: np.random.Generator, d: int, n: int
) -> tuple[int, int, int]:
    """Insertion count coupled with its renewal count and sub-1/n uniforms.

    Returns ``(count, renewal, below)`` where ``renewal`` counts the
    heights of the same stick-breaking sequence above 1/n and ``below``
    counts the screened uniforms under 1/n.  Diagnostic for the sandwich
    count <= renewal + below, which should hold with probability near 1.
    """
    if d < 1 or n < 1:
        raise ValueError("need d >= 1 and n >= 1")
    u = rng.random(n)
    count = 1
    log_h = float(np.log(rng.random(d)).sum())
    heights = [math.exp(log_h)]
    for j in range(1, n):
        if u[j] < heights[-1]:
            count += 1
            log_h += float(np.log(rng.random(d)).sum())
            heights.append(math.exp(log_h))
    floor = 1.0 / n
    while heights[-1] > floor:
        log_h += float(np.log(rng.random(d)).sum())
        heights.append(math.exp(log_h))
    renewal = sum(1 for h in heights if h > floor)
    below = int((u < floor).sum())
    return count, renewal, below


def renewal_count(heights, n: int) -> int:
    """Number of heights above 1/n in a decreasing height sequence.

    Accepts a :class:`HeightSequence`, a :class:`ChainRecordTrace` or a
    plain sequence; the heights must already extend below 1/n.
    """
    hs = getattr(heights, "heights", heights)
    if n < 1:
        raise ValueError("n must be >= 1")
    floor = 1.0 / n
    if not hs or hs[-1] > floor:
        raise ValueError("height sequence does not extend below 1/n; extend the stick-breaking")
    return sum(1 for h in hs if h > floor)


def simulate_poisson_paced(
    rng: np.random.Generator, d: int, t_horizon: float, b0: float = 1.0
) -> PoissonPacedPath:
    """Path of the Poisson-paced height process up to ``t_horizon``.

    From state b the process waits an exponential time with rate b, then
    jumps to b times a fresh height factor.
    """
    if d < 1 or t_horizon <= 0 or b0 <= 0:
        raise ValueError("need d >= 1, t_horizon > 0 and b0 > 0")
    jumps: list[float] = []
    states: list[float] = []
    b = b0
    t = 0.0
    while True:
        t += rng.exponential(1.0 / b)
        if t > t_horizon:
            break
        b *= sample_height_factor(rng, d)
        jumps.append(t)
        states.append(b)
    return PoissonPacedPath(tuple(jumps), tuple(states), t_horizon, b0)


def sample_stationary_height_factor(rng: np.random.Generator, d: int) -> float:
    """Draw from the stationary law of the height stick-breaking chain.

    Its negative log is Gamma(k, 1) with k uniform on {1..d}; the change
    of variables gives exactly the density CDF(s)/(s*d) of the height
    factor's equilibrium distribution.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    k = int(rng.integers(1, d + 1))
    return math.exp(-float(rng.gamma(k)))


def sample_limit_variable(
    rng: np.random.Generator, d: int, tolerance: float = 1e-6
) -> float:
    """One draw of the scaled record-height limit variable.

    The variable is the series sum_k E_k * P_k with independent standard
    exponentials E_k and P_k the running product of one stationary factor
    followed by ordinary height factors.  The series stops once the
    expected remainder P_k/(2^d - 1) drops below ``tolerance``.
    """
    value, _ = _limit_variable_scalar(rng, d, tolerance)
    return value


def sample_limit_variable_with_depth(
    rng: np.random.Generator, d: int, tolerance: float = 1e-6
) -> tuple[float, int]:
    """Like :func:`sample_limit_variable` but also reports the stop index."""
    return _limit_variable_scalar(rng, d, tolerance)


def _limit_variable_scalar(rng, d, tolerance):
    if d < 1:
        raise ValueError("d must be >= 1")
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    tail_ratio = 1.0 / (2**d - 1)  # expected series remainder per unit of product
    p = sample_stationary_height_factor(rng, d)
    y = float(rng.exponential()) * p
    depth = 0
    while p * tail_ratio >= tolerance:
        p *= sample_height_factor(rng, d)
        y += float(rng.exponential()) * p
        depth += 1
    return y, depth


def sample_stationary_height_pair(rng: np.random.Generator, d: int) -> tuple[float, float]:
    """Heights straddling level 1 of the stationary multiplicative renewal grid.

    The step across the unit level is length biased (Gamma(d+1, 1) in log
    space) and split uniformly, which reproduces the equilibrium law on
    both sides; returns ``(above, at_or_below)`` with above > 1 and
    at_or_below in (0, 1].
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    straddle = float(rng.gamma(d + 1))
    v = float(rng.random())
    x0 = v * straddle
    return math.exp(straddle - x0), math.exp(-x0)


def sample_limit_process(
    rng: np.random.Generator,
    d: int,
    window: tuple[float, float, float],
    truncation_tol: float = 1e-9,
) -> LimitProcessWindow:
    """One draw of the scaling-limit point process inside a window.

    ``window = (s_lo, s_hi, t_hi)`` is the rectangle [s_lo, s_hi] x
    [0, t_hi] in the (height, time) plane.  Heights form the stationary
    multiplicative renewal grid; each arrival time is the backward sum of
    exponentials over inverse heights, truncated when its expected
    remainder bound (1/height)/(e^d - 1) -- a typical-growth
    approximation using realized heights -- falls below
    ``truncation_tol``.
    """
    s_lo, s_hi, t_hi = window
    if not 0 < s_lo < s_hi or t_hi <= 0:
        raise ValueError("window must satisfy 0 < s_lo < s_hi and t_hi > 0")
    if truncation_tol <= 0:
        raise ValueError("truncation tolerance must be positive")
    straddle = float(rng.gamma(d + 1))
    v = float(rng.random())
    x0 = v * straddle
    # ascending -log(height); grid[0] is the deepest backward point
    grid = [x0 - straddle, x0]
    tail_const = 1.0 / math.expm1(d)
    while True:
        top = math.exp(-grid[0])  # largest height collected so far
        if top > s_hi and tail_const / top < truncation_tol:
            break
        grid.insert(0, grid[0] - float(rng.gamma(d)))

    points: list[tuple[float, float]] = []
    sigma = 0.0  # neglected tail below the truncation index counts as zero
    for x in grid:
        xi = math.exp(-x)
        sigma += float(rng.exponential()) / xi
        if s_lo <= xi <= s_hi and sigma <= t_hi:
            points.append((xi, sigma))
    x = grid[-1]
    while sigma <= t_hi:
        x += float(rng.gamma(d))
        xi = math.exp(-x)
        sigma += float(rng.exponential()) / xi
        if xi < s_lo:
            break
        if xi <= s_hi and sigma <= t_hi:
            points.append((xi, sigma))
    return LimitProcessWindow(tuple(points), (s_lo, s_hi, t_hi), truncation_tol)


# ---------------------------------------------------------------------------
# chunked batch drivers
#
# Chunk i of a task draws from make_stream(seed, stream_id(label), i); the
# chunk layout depends only on the parameters, so any worker count yields
# identical results.


def _run_chunked(chunk_fn, total, seed, label, chunk_size, workers):
    sid = stream_id(label)
    sizes = [chunk_size] * (total // chunk_size)
    if total % chunk_size:
        sizes.append(total % chunk_size)

    def one(i_m):
        i, m = i_m
        return chunk_fn(make_stream(seed, sid, i), m)

    tasks = list(enumerate(sizes))
    if workers <= 1:
        return [one(t) for t in tasks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, tasks))


def _height_factor_column(gen, d, m):
    return np.exp(np.log(gen.random((m, d))).sum(axis=1))


def _direct_counts_chunk(gen, d, n, m):
    u = gen.random((m, n, d))
    rec = u[:, 0, :].copy()
    counts = np.ones(m, dtype=np.int64)
    for j in range(1, n):
        x = u[:, j, :]
        beat = (x <= rec).all(axis=1) & (x < rec).any(axis=1)
        counts[beat] += 1
        rec[beat] = x[beat]
    return counts


def _direct_counts_rowwise_chunk(gen, d, n, m, block_size=1 << 16):
    counts = np.empty(m, dtype=np.int64)
    for r in range(m):
        times, _ = _direct_scan(gen, d, n, block_size)
        counts[r] = len(times)
    return counts


def _direct_flag_totals_chunk(gen, d, n, m):
    u = gen.random((m, n, d))
    rec = u[:, 0, :].copy()
    totals = np.zeros(n, dtype=np.int64)
    totals[0] = m
    for j in range(1, n):
        x = u[:, j, :]
        beat = (x <= rec).all(axis=1) & (x < rec).any(axis=1)
        totals[j] = int(beat.sum())
        rec[beat] = x[beat]
    return totals


def _sojourn_counts_chunk(gen, d, n, m):
    counts = np.ones(m, dtype=np.int64)
    t = np.ones(m, dtype=np.int64)
    log_h = np.log(gen.random((m, d))).sum(axis=1)
    active = np.ones(m, dtype=bool)
    beyond = float(n + 1)
    while active.any():
        h = np.exp(log_h)
        v = gen.random(m)
        with np.errstate(divide="ignore", invalid="ignore"):
            gap = np.ceil(np.log1p(-v) / np.log1p(-h))
        gap = np.where(np.isfinite(gap), gap, beyond)
        gap = np.minimum(np.maximum(gap, 1.0), beyond).astype(np.int64)
        t_new = t + gap
        landed = active & (t_new <= n)
        counts[landed] += 1
        t = np.where(active, t_new, t)
        active = landed
        log_h += np.log(gen.random((m, d))).sum(axis=1)
    return counts


def _insertion_counts_chunk(gen, d, n, m):
    u = gen.random((m, n))
    thresh = _height_factor_column(gen, d, m)
    counts = np.ones(m, dtype=np.int64)
    applied = np.zeros(m, dtype=np.int64)  # factors consumed per row so far
    factors: list[np.ndarray] = []
    for j in range(1, n):
        hit = u[:, j] < thresh
        if not hit.any():
            continue
        counts[hit] += 1
        while len(factors) <= int(applied[hit].max()):
            factors.append(_height_factor_column(gen, d, m))
        for k in np.unique(applied[hit]):
            sel = hit & (applied == k)
            thresh[sel] *= factors[k][sel]
        applied[hit] += 1
    return counts


def _renewal_counts_chunk(gen, d, n, m):
    log_n = math.log(n)
    x = -np.log(gen.random((m, d))).sum(axis=1)
    counts = np.zeros(m, dtype=np.int64)
    while True:
        above = x < log_n
        if not above.any():
            return counts
        counts[above] += 1
        x -= np.log(gen.random((m, d))).sum(axis=1)


def _poisson_paced_chunk(gen, d, t_end, b0, m):
    b = np.full(m, float(b0))
    tcur = np.zeros(m)
    integral = np.zeros(m)
    counts = np.zeros(m, dtype=np.int64)
    active = np.ones(m, dtype=bool)
    while active.any():
        hold = gen.exponential(size=m) / b
        t_new = tcur + hold
        finish = active & (t_new > t_end)
        integral[finish] += b[finish] * (t_end - tcur[finish])
        cont = active & ~finish
        integral[cont] += b[cont] * hold[cont]
        counts[cont] += 1
        tcur = np.where(cont, t_new, tcur)
        w = _height_factor_column(gen, d, m)
        b = np.where(cont, b * w, b)
        active = cont
    return counts, integral, b


def _limit_variable_chunk(gen, d, tolerance, m):
    tail_ratio = 1.0 / (2**d - 1)
    shapes = gen.integers(1, d + 1, size=m)
    p = np.exp(-gen.gamma(shapes))
    y = gen.exponential(size=m) * p
    depth = np.zeros(m, dtype=np.int64)
    active = p * tail_ratio >= tolerance
    while active.any():
        p = p * _height_factor_column(gen, d, m)
        e = gen.exponential(size=m)
        y[active] += e[active] * p[active]
        depth[active] += 1
        active &= p * tail_ratio >= tolerance
    return y, depth


def _window_counts_chunk(gen, d, window, tol, m):
    counts = np.empty(m, dtype=np.int64)
    for r in range(m):
        counts[r] = sample_limit_process(gen, d, window, tol).count
    return counts


def _insertion_renewal_chunk(gen, d, n, m):
    out = np.empty((m, 3), dtype=np.int64)
    for r in range(m):
        out[r] = insertion_with_renewal(gen, d, n)
    return out


def _clamped_chunk(chunk_size, doubles_per_item):
    return max(1, min(chunk_size, _CHUNK_BUDGET // max(1, doubles_per_item)))


def sample_chain_counts(
    method: str,
    d: int,
    n: int,
    replicates: int,
    *,
    seed: int,
    label: str | None = None,
    chunk_size: int = 8192,
    workers: int = 1,
) -> np.ndarray:
    """Chain-record counts at horizon n from one of the three simulators.

    ``method`` is ``"direct"``, ``"sojourn"`` or ``"insertion"``.  The
    three outputs are equal in distribution; pairwise tests over them are
    the core cross-validation of the whole package.
    """
    if method not in ("direct", "sojourn", "insertion"):
        raise ValueError(f"unknown method {method!r}")
    if replicates < 1:
        raise ValueError("replicates must be >= 1")
    label = label or f"chain-counts:{method}:d={d}:n={n}"
    if method == "direct":
        if n <= 4096:
            m = _clamped_chunk(chunk_size, n * d)
            fn = lambda gen, k: _direct_counts_chunk(gen, d, n, k)
        else:
            m = chunk_size
            fn = lambda gen, k: _direct_counts_rowwise_chunk(gen, d, n, k)
    elif method == "sojourn":
        m = chunk_size
        fn = lambda gen, k: _sojourn_counts_chunk(gen, d, n, k)
    else:
        m = _clamped_chunk(chunk_size, n)
        fn = lambda gen, k: _insertion_counts_chunk(gen, d, n, k)
    parts = _run_chunked(fn, replicates, seed, label, m, workers)
    return np.concatenate(parts)


def sample_chain_flag_totals(
    d: int,
    n: int,
    replicates: int,
    *,
    seed: int,
    label: str | None = None,
    chunk_size: int = 8192,
    workers: int = 1,
) -> np.ndarray:
    """Per-index chain-record totals over replicates of direct detection.

    Entry j is the number of replicates whose mark at index j+1 was a
    chain record; dividing by ``replicates`` estimates the per-index
    probability.
    """
    label = label or f"chain-flags:d={d}:n={n}"
    m = _clamped_chunk(chunk_size, n * d)
    parts = _run_chunked(
        lambda gen, k: _direct_flag_totals_chunk(gen, d, n, k),
        replicates,
        seed,
        label,
        m,
        workers,
    )
    return np.sum(parts, axis=0)


def sample_renewal_counts(
    d: int,
    n: int,
    replicates: int,
    *,
    seed: int,
    label: str | None = None,
    chunk_size: int = 8192,
    workers: int = 1,
) -> np.ndarray:
    """Renewal counts: stick-breaking heights above 1/n, per replicate."""
    label = label or f"renewal-counts:d={d}:n={n}"
    parts = _run_chunked(
        lambda gen, k: _renewal_counts_chunk(gen, d, n, k),
        replicates,
        seed,
        label,
        chunk_size,
        workers,
    )
    return np.concatenate(parts)


def sample_poisson_paced_terminals(
    d: int,
    t_horizon: float,
    replicates: int,
    *,
    b0: float = 1.0,
    seed: int,
    label: str | None = None,
    chunk_size: int = 8192,
    workers: int = 1,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Jump counts, path integrals and terminal states of the paced process."""
    label = label or f"poisson-paced:d={d}:t={t_horizon}:b0={b0}"
    parts = _run_chunked(
        lambda gen, k: _poisson_paced_chunk(gen, d, t_horizon, b0, k),
        replicates,
        seed,
        label,
        chunk_size,
        workers,
    )
    counts = np.concatenate([p[0] for p in parts])
    integrals = np.concatenate([p[1] for p in parts])
    states = np.concatenate([p[2] for p in parts])
    return counts, integrals, states


def sample_limit_variables(
    d: int,
    replicates: int,
    *,
    tolerance: float = 1e-6,
    seed: int,
    label: str | None = None,
    chunk_size: int = 8192,
    workers: int = 1,
) -> tuple[np.ndarray, np.ndarray]:
    """Limit-variable draws plus the series stop index of each draw."""
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    label = label or f"limit-variable:d={d}:tol={tolerance}"
    parts = _run_chunked(
        lambda gen, k: _limit_variable_chunk(gen, d, tolerance, k),
        replicates,
        seed,
        label,
        chunk_size,
        workers,
    )
    values = np.concatenate([p[0] for p in parts])
    depths = np.concatenate([p[1] for p in parts])
    return values, depths


def sample_window_counts(
    d: int,
    window: tuple[float, float, float],
    replicates: int,
    *,
    truncation_tol: float = 1e-9,
    seed: int,
    label: str | None = None,
    chunk_size: int = 1024,
    workers: int = 1,
) -> np.ndarray:
    """Point counts of independent limit-process draws in a fixed window."""
    label = label or f"window-counts:d={d}:window={window}:tol={truncation_tol}"
    parts = _run_chunked(
        lambda gen, k: _window_counts_chunk(gen, d, window, truncation_tol, k),
        replicates,
        seed,
        label,
        chunk_size,
        workers,
    )
    return np.concatenate(parts)


def sample_insertion_renewal_diagnostics(
    d: int,
    n: int,
    replicates: int,
    *,
    seed: int,
    label: str | None = None,
    chunk_size: int = 4096,
    workers: int = 1,
) -> np.ndarray:
    """Coupled (count, renewal, below-1/n) triples from insertion runs."""
    label = label or f"insertion-renewal:d={d}:n={n}"
    parts = _run_chunked(
        lambda gen, k: _insertion_renewal_chunk(gen, d, n, k),
        replicates,
        seed,
        label,
        chunk_size,
        workers,
    )
    return np.concatenate(parts)
