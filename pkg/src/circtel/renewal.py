"""Vectorised alternating-renewal simulator.

A two-state velocity process (state ``+1`` with speed ``speeds[0]``, state
``-1`` with speed ``-speeds[1]``) switches after random holding times drawn
by ``gap_sampler(states, rng)``, which receives an array of current states
and returns one holding time per entry.  Paths are advanced in blocks of
``width`` holding times at once, so the cost is one numpy pass per block
rather than one Python step per switch.
"""

from __future__ import annotations

import numpy as np

__all__ = ["simulate_renewal", "exponential_gaps", "pareto_gaps"]


def exponential_gaps(rate_plus: float, rate_minus: float):
    """Holding-time sampler with state-dependent exponential clocks."""

    def sampler(states, rng):
        rates = np.where(states > 0, rate_plus, rate_minus)
        return rng.standard_exponential(states.shape) / rates

    sampler.mean_gap = 0.5 * (1.0 / rate_plus + 1.0 / rate_minus)
    return sampler


def pareto_gaps(alpha: float, scale: float = 1.0):
    """Pareto holding times with ``P(D > x) = (x/scale)^(-alpha)``, ``x >= scale``."""

    def sampler(states, rng):
        u = 1.0 - rng.random(states.shape)  # in (0, 1]
        return scale * u ** (-1.0 / alpha)

    sampler.mean_gap = alpha * scale / (alpha - 1.0) if alpha > 1 else None
    return sampler


def _block_width(sampler, horizon, size):
    mean = getattr(sampler, "mean_gap", None)
    if mean is None:
        width = 64
    else:
        expected = horizon / mean
        width = int(expected + 4.0 * np.sqrt(expected) + 8)
    width = max(8, min(width, 4096))
    rows = max(1, min(size, 2_000_000 // width))
    return width, rows


def simulate_renewal(times, size, gap_sampler, speeds=(1.0, 1.0), rng=None, initial=None):
    """Positions, states and switch counts at the query ``times``.

    Parameters
    ----------
    times : array_like
        Nonnegative query times.
    size : int
        Number of independent paths.
    gap_sampler : callable
        ``gap_sampler(states, rng)`` returning holding times.
    initial : None, int or array
        Initial states; uniform on ``{+1, -1}`` when ``None``.

    Returns
    -------
    x, v, n : ndarrays of shape ``(size, len(times))``
        ``v`` holds the state sign (``+1``/``-1``), not the signed speed.
    """
    rng = np.random.default_rng(rng) if not isinstance(rng, np.random.Generator) else rng
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if np.any(times < 0):
        raise ValueError("query times must be nonnegative")
    order = np.argsort(times)
    sorted_t = times[order]
    horizon = float(sorted_t[-1]) if len(sorted_t) else 0.0
    up, down = float(speeds[0]), float(speeds[1])

    if initial is None:
        state0 = np.where(rng.random(size) < 0.5, 1, -1)
    else:
        state0 = np.broadcast_to(np.asarray(initial, dtype=int), (size,)).copy()
    if np.any(np.abs(state0) != 1):
        raise ValueError("initial states must be +1 or -1")

    nq = len(sorted_t)
    xs = np.empty((size, nq))
    vs = np.empty((size, nq), dtype=int)
    ns = np.empty((size, nq), dtype=np.int64)
    width, rows = _block_width(gap_sampler, horizon, size)
    parity = np.where(np.arange(width) % 2 == 0, 1, -1)

    for lo in range(0, size, rows):
        hi = min(size, lo + rows)
        m = hi - lo
        t_last = np.zeros(m)          # time of last switch
        x_last = np.zeros(m)          # position at that time
        state = state0[lo:hi].copy()  # state after it
        count = np.zeros(m, dtype=np.int64)
        next_q = np.zeros(m, dtype=np.int64)  # first unanswered query index
        active = np.arange(m)
        while active.size:
            st = state[active][:, None] * parity[None, :]
            gaps = gap_sampler(st, rng)
            ends = t_last[active][:, None] + np.cumsum(gaps, axis=1)
            vel = np.where(st > 0, up, -down)
            disp = x_last[active][:, None] + np.cumsum(vel * gaps, axis=1)
            block_end = ends[:, -1]
            for qi in range(nq):
                q = sorted_t[qi]
                sel = (next_q[active] == qi) & (block_end > q)
                if not np.any(sel):
                    continue
                rows_sel = np.nonzero(sel)[0]
                e = ends[rows_sel]
                k = np.sum(e <= q, axis=1)  # switches inside this block before q
                r = np.arange(rows_sel.size)
                prev_t = np.where(k > 0, e[r, np.maximum(k - 1, 0)], t_last[active[rows_sel]])
                prev_x = np.where(
                    k > 0, disp[rows_sel][r, np.maximum(k - 1, 0)], x_last[active[rows_sel]]
                )
                seg_v = vel[rows_sel][r, k]
                idx = lo + active[rows_sel]
                xs[idx, qi] = prev_x + seg_v * (q - prev_t)
                vs[idx, qi] = st[rows_sel][r, k]
                ns[idx, qi] = count[active[rows_sel]] + k
                next_q[active[rows_sel]] = qi + 1
            t_last[active] = block_end
            x_last[active] = disp[:, -1]
            state[active] = state[active] * (1 if width % 2 == 0 else -1)
            count[active] += width
            active = active[next_q[active] < nq]

    inv = np.empty(nq, dtype=int)
    inv[order] = np.arange(nq)
    return xs[:, inv], vs[:, inv], ns[:, inv]
