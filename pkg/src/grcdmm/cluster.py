"""A simulated cluster of N workers with stragglers.

Each worker has a latency of ``base_latency + Exp(jitter)`` and never answers
with probability ``failure_prob``.  Latencies are simulated, not slept: the
stream of responses is produced in (latency, worker id) order and each
worker's product is only computed when the master actually pulls it, so a
decoder that stops after R answers leaves the slow workers idle.

Every task and response goes through the byte format of :mod:`grcdmm.wire`
and the element words are tallied into a :class:`~grcdmm.metrics.Metrics`.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import wire
from .ep import worker_multiply


@dataclass
class Cluster:
    N: int
    base_latency: float = 1.0
    jitter: float = 0.0
    failure_prob: float = 0.0
    seed: int = 0
    forced_failures: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if not 0 <= self.failure_prob < 1:
            raise ValueError("failure_prob must lie in [0, 1)")
        if self.jitter < 0 or self.base_latency < 0:
            raise ValueError("latencies must be non-negative")
        self.forced_failures = frozenset(self.forced_failures)

    def sample(self):
        """Latency per worker and the set of workers that never answer."""
        rng = np.random.default_rng(self.seed)
        jitter = rng.exponential(self.jitter, self.N) if self.jitter > 0 else np.zeros(self.N)
        failed = rng.random(self.N) < self.failure_prob
        latencies = self.base_latency + jitter
        dead = {k for k in range(self.N) if failed[k]} | set(self.forced_failures)
        return latencies, dead


def simulate(tasks, cluster, metrics=None):
    """Yield WorkerResponses in arrival order; failed workers never appear."""
    if len(tasks) != cluster.N:
        raise ValueError(f"{len(tasks)} tasks for a cluster of {cluster.N}")
    latencies, dead = cluster.sample()
    inbox = {}
    for task in tasks:
        data = wire.task_to_bytes(task)
        if metrics is not None:
            metrics.add_upload(wire.payload_words(data, 2), task.ring)
        inbox[task.worker_id] = (task.ring, data)
    order = sorted((float(latencies[k]), k) for k in inbox if k not in dead)
    return _stream(order, inbox, metrics)


def _stream(order, inbox, metrics):
    for latency, k in order:
        ring, data = inbox[k]
        task = wire.task_from_bytes(ring, data)
        start = time.perf_counter()
        response = worker_multiply(task)
        elapsed = time.perf_counter() - start
        reply = wire.response_to_bytes(ring, response)
        if metrics is not None:
            metrics.per_worker_durations[k] = elapsed
            metrics.add_download(wire.payload_words(reply, 1), ring)
            metrics.responding_workers.append(k)
        yield wire.response_from_bytes(ring, reply, latency)


def gather(stream, count):
    """The first ``count`` responses of a stream (fewer if it runs dry)."""
    out = []
    for response in stream:
        out.append(response)
        if len(out) == count:
            break
    return out
