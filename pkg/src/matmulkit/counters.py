"""Deterministic operation and buffer accounting for the multiplication kernels.

The counts model the algorithm, not the language runtime: a "buffer" is a
temporary matrix the algorithm's schedule calls for, and ``peak_live_elements``
is the high-water mark of auxiliary scalar elements under the sequential
execution model with buffers freed at call exit.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class OpCounter:
    """Tally of scalar multiplications, additions/subtractions, and buffers.

    ``temp_buffers`` counts allocation events; ``peak_live_elements`` tracks
    the maximum number of auxiliary scalar elements live at any point. A
    fresh counter is all-zero.
    """

    mults: int = 0
    adds: int = 0
    temp_buffers: int = 0
    peak_live_elements: int = 0
    _live: int = field(default=0, repr=False)

    def alloc(self, elements: int) -> None:
        """Record one temporary-buffer allocation of ``elements`` scalars."""
        self.temp_buffers += 1
        self._live += elements
        if self._live > self.peak_live_elements:
            self.peak_live_elements = self._live

    def free(self, elements: int) -> None:
        """Release ``elements`` scalars of live auxiliary storage."""
        self._live -= elements

    def absorb(self, mults: int, adds: int, buffers: int, peak: int) -> None:
        """Fold in the modeled cost of a subtree executed by a fast path.

        ``peak`` is the subtree's own auxiliary high-water mark; it stacks on
        top of whatever is currently live in the enclosing calls.
        """
        self.mults += mults
        self.adds += adds
        self.temp_buffers += buffers
        if self._live + peak > self.peak_live_elements:
            self.peak_live_elements = self._live + peak

    def snapshot(self) -> tuple[int, int, int, int]:
        return (self.mults, self.adds, self.temp_buffers, self.peak_live_elements)
