"""Wall-clock timing for sweep points and solver runs."""

import time
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Dict, Iterator, List


@dataclass
class Timing:
    """Result slot filled when a ``measure`` block exits."""
    seconds: float = 0.0


class PerformanceMonitor:
    """Keeps the most recent timing samples per component."""

    def __init__(self, max_samples: int = 1000):
        """Initialize the performance monitor.

        Args:
            max_samples: Samples kept per component
        """
        self.samples: Dict[str, List[float]] = {}
        self.max_samples = max_samples

    @contextmanager
    def measure(self, component_name: str) -> Iterator[Timing]:
        """Context manager timing the enclosed block under ``component_name``."""
        timing = Timing()
        start = time.perf_counter()
        try:
            yield timing
        finally:
            timing.seconds = time.perf_counter() - start
            self.record(component_name, timing.seconds)

    def record(self, component_name: str, seconds: float) -> None:
        """Store an externally measured sample."""
        times = self.samples.setdefault(component_name, [])
        times.append(seconds)
        if len(times) > self.max_samples:
            times.pop(0)

    def get_component_time(self, component_name: str) -> float:
        """Get the mean time for a component (0.0 when never measured)."""
        times = self.samples.get(component_name)
        if not times:
            return 0.0
        return sum(times) / len(times)

    def get_total_time(self, component_name: str) -> float:
        """Get the summed time for a component."""
        return sum(self.samples.get(component_name, []))

    def get_report(self) -> str:
        """Get a multi-line report of mean and total time per component."""
        lines = []
        for component in sorted(self.samples):
            times = self.samples[component]
            if times:
                mean = sum(times) / len(times)
                lines.append(
                    f"{component}: n={len(times)} mean={mean*1000:.1f}ms "
                    f"total={sum(times):.2f}s"
                )
        return "\n".join(lines)
