"""Per-run measurements: wire counts in base-ring units plus phase timings."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from fractions import Fraction

SCHEMA_VERSION = 1
TIMING_FIELDS = ("encode_duration", "decode_duration", "per_worker_durations")


@dataclass
class Metrics:
    """Counts are GR(p^e, d) elements: one element of a degree-m extension counts m."""

    scheme: str = ""
    config: dict = field(default_factory=dict)
    upload_base_elements: int = 0
    download_base_elements: int = 0
    encode_duration: float = 0.0
    decode_duration: float = 0.0
    per_worker_durations: dict = field(default_factory=dict)
    recovery_threshold: int = 0
    responding_workers: list = field(default_factory=list)
    worker_product_dims: tuple = ()
    schema: int = SCHEMA_VERSION

    def add_upload(self, words, ring):
        self.upload_base_elements += _base_units(words, ring)

    def add_download(self, words, ring):
        self.download_base_elements += _base_units(words, ring)

    def merge(self, other):
        """Fold in another session of the same run (used when a batch spans sessions)."""
        self.upload_base_elements += other.upload_base_elements
        self.download_base_elements += other.download_base_elements
        self.encode_duration += other.encode_duration
        self.decode_duration += other.decode_duration
        for k, dt in other.per_worker_durations.items():
            self.per_worker_durations[k] = self.per_worker_durations.get(k, 0.0) + dt
        self.recovery_threshold = other.recovery_threshold
        self.responding_workers = sorted(set(self.responding_workers) | set(other.responding_workers))
        self.worker_product_dims = other.worker_product_dims

    def to_dict(self):
        out = asdict(self)
        out["per_worker_durations"] = {str(k): v for k, v in sorted(self.per_worker_durations.items())}
        out["worker_product_dims"] = list(self.worker_product_dims)
        return out


def _base_units(words, ring):
    d = ring.root.d
    if words % d:
        raise AssertionError(f"{words} words is not a whole number of base elements")
    return words // d


def amortized_report(metrics, n):
    """Totals divided by the number of multiplications, as exact fractions."""
    return {
        "multiplications": n,
        "upload_base_elements": Fraction(metrics.upload_base_elements, n),
        "download_base_elements": Fraction(metrics.download_base_elements, n),
        "encode_duration": metrics.encode_duration / n,
        "decode_duration": metrics.decode_duration / n,
    }


def average(runs):
    """Arithmetic mean of timings over repeats; counts must agree across repeats."""
    first = runs[0]
    out = Metrics(**{k: getattr(first, k) for k in first.__dataclass_fields__})
    k = len(runs)
    out.encode_duration = sum(r.encode_duration for r in runs) / k
    out.decode_duration = sum(r.decode_duration for r in runs) / k
    durations = {}
    for r in runs:
        for wid, dt in r.per_worker_durations.items():
            durations.setdefault(wid, []).append(dt)
    out.per_worker_durations = {wid: sum(v) / len(v) for wid, v in sorted(durations.items())}
    return out
