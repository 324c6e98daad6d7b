"""Analytical request-time model and the balance-vs-cut tradeoff inequality.

A request centered on a node costs compute time proportional to its host
partition's size plus one network fetch per remote partition intersecting the
request's hop neighborhood. On the vicious four-cluster graph this yields
closed forms for the expected request time under the balanced bisection and
under the minimum-cut bisection, and a reduced inequality deciding which
strategy is faster.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class CostParams:
    """Model constants.

    chi: processing supply per time unit; lam: network fetch latency;
    phi: CPU demand per request; ell: request locality in hops;
    mu: memory supply (used only by the centralized model).
    """

    chi: float
    lam: float
    phi: float
    ell: int
    mu: float = 1.0

    def __post_init__(self):
        if self.chi <= 0 or self.lam <= 0 or self.phi <= 0 or self.mu <= 0:
            raise ValueError("chi, lam, phi, mu must be strictly positive")
        if self.ell < 0 or not isinstance(self.ell, int):
            raise ValueError("ell must be a nonnegative integer")


@dataclass(frozen=True)
class ViciousCostInstance:
    big: int
    small: int
    c_links: int
    params: CostParams

    def __post_init__(self):
        if not (self.big > self.small and self.small > self.c_links > 1):
            raise ValueError("need big > small > c_links > 1")


def centralized_time(n_requests: int, memory: float, cpu: float, params: CostParams) -> float:
    """Single-machine congestion model: the system splits its memory and CPU
    supply evenly over the concurrent requests."""
    return n_requests * (memory / params.mu + cpu / params.chi)


def request_time(params: CostParams, partition_size: int, remote_partitions: int) -> float:
    """Distributed request time: compute term plus serial remote fetches."""
    if partition_size < 1:
        raise ValueError("partition_size must be >= 1")
    if remote_partitions < 0:
        raise ValueError("remote_partitions must be >= 0")
    return params.phi * partition_size / params.chi + params.lam * remote_partitions


def expected_time_wb(inst: ViciousCostInstance) -> float:
    """Expected request time when the balanced bisection is preferred.

    Both servers hold n+N nodes; the boundary crossed by a fetch carries the
    2C parallel links, so a uniformly chosen center is a boundary node with
    probability 2C/(n+N).
    """
    p = inst.params
    n, N, C = inst.small, inst.big, inst.c_links
    return p.phi * (n + N) / p.chi + p.lam * p.ell * (2 * C) / (n + N)


def expected_time_mc(inst: ViciousCostInstance) -> float:
    """Expected request time when the minimum-cut bisection is preferred.

    Servers hold 2N and 2n nodes; only the two single links remain on the
    boundary.
    """
    p = inst.params
    n, N = inst.small, inst.big
    return 2 * p.phi * (n * n + N * N) / (p.chi * (n + N)) + p.lam * p.ell * 2 / (n + N)


def wb_preferred(inst: ViciousCostInstance) -> bool:
    """True when the balanced bisection is at least as fast as the min cut.

    Uses the reduced form 2*ell*lam*chi/phi <= (n-N)^2 / (C-1), which is
    algebraically equivalent to comparing the two expectations. The reduction
    divides by C-1, so C == 1 would fall back to the direct comparison; the
    instance invariant keeps C > 1 but the guard stays for safety.
    """
    p = inst.params
    n, N, C = inst.small, inst.big, inst.c_links
    if C == 1:
        return expected_time_wb(inst) <= expected_time_mc(inst)
    return 2 * p.ell * p.lam * p.chi / p.phi <= (n - N) ** 2 / (C - 1)


def expected_walk_locality(alpha: float) -> int:
    """Expected hop locality of a damping random walk: ceil(-1/ln(alpha)).

    Natural logarithm; at alpha=0.9 this gives 10.
    """
    if not 0 < alpha < 1:
        raise ValueError("alpha must be in (0,1)")
    return math.ceil(-1.0 / math.log(alpha))
