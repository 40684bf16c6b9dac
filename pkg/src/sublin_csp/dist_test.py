"""Poissonized collision statistic for the degree-weighted l2 distance
||(p - q) D^{-1/2}||^2 between two sampleable distributions, and the
median-amplified closeness test built on it."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, SamplingError
from .graph import Decision, Verdict

ABORT_CAP = 1000


@dataclass
class CollisionStatistic:
    z: float
    k_drawn: int  # larger of the two Poisson sample sizes
    aborted: bool
    estimate: float
    k_p: int = 0
    k_q: int = 0


def l2_difference_statistic(sampler_p, sampler_q, oracle, r, rng):
    """One run of the statistic.

    ``sampler_p(k)`` / ``sampler_q(k)`` return k i.i.d. vertices.  Each side
    gets its own Poisson(r) sample size, which makes the per-vertex counts
    independent Poisson variables and the estimate exactly unbiased.
    """
    if r <= 0:
        raise ParameterError("r must be positive")
    k_p, k_q = (int(x) for x in rng.poisson(r, size=2))
    k = max(k_p, k_q)
    if k > 8 * r:
        return CollisionStatistic(math.nan, k, True, math.nan, k_p, k_q)
    xs = np.asarray(sampler_p(k_p), dtype=np.int64)
    ys = np.asarray(sampler_q(k_q), dtype=np.int64)
    verts, inv = np.unique(np.concatenate([xs, ys]), return_inverse=True)
    cx = np.bincount(inv[:k_p], minlength=len(verts)).astype(np.float64)
    cy = np.bincount(inv[k_p:], minlength=len(verts)).astype(np.float64)
    deg = oracle.degrees(verts).astype(np.float64)  # one query per distinct vertex
    z = float(np.sum(((cx - cy) ** 2 - cx - cy) / deg))
    return CollisionStatistic(z, k, False, z / (r * r), k_p, k_q)


def sample_size(b_bound, xi, c_dist):
    return max(1, math.ceil(c_dist * math.sqrt(b_bound) / xi))


def repetitions(delta, c_rep):
    reps = max(1, math.ceil(c_rep * math.log(1.0 / delta)))
    return reps if reps % 2 else reps + 1


def l2_difference_test(sampler_p, sampler_q, oracle, xi, delta, b_bound, rng,
                       c_dist=16.0, c_rep=12.0, early_stop=True):
    """Accept iff the median of the repeated estimates is <= 2*xi.

    The repetition count is odd, so stopping once one side holds a strict
    majority gives the same verdict as computing the full median.
    """
    if not xi > 0:
        raise ParameterError("xi must be positive")
    if not 0 < delta < 1:
        raise ParameterError("delta must lie in (0, 1)")
    if not b_bound > 0:
        raise ParameterError("b_bound must be positive")
    r = sample_size(b_bound, xi, c_dist)
    reps = repetitions(delta, c_rep)
    threshold = 2 * xi
    estimates = []
    aborts = 0
    below = above = 0
    need = reps // 2 + 1
    while len(estimates) < reps:
        stat = l2_difference_statistic(sampler_p, sampler_q, oracle, r, rng)
        if stat.aborted:
            aborts += 1
            if aborts > ABORT_CAP:
                raise SamplingError("too many aborted runs")
            continue
        estimates.append(stat.estimate)
        if stat.estimate <= threshold:
            below += 1
        else:
            above += 1
        if early_stop and (below >= need or above >= need):
            break
    accept = below >= need if early_stop else float(np.median(estimates)) <= threshold
    diag = {
        "r": r,
        "repetitions": reps,
        "runs": len(estimates),
        "aborts": aborts,
        "xi": xi,
        "threshold": threshold,
        "median_estimate": float(np.median(estimates)),
        "estimates": [float(e) for e in estimates],
        "queries": oracle.query_count,
    }
    return Verdict(Decision.ACCEPT if accept else Decision.REJECT, diag)
