"""Cooperative timeouts: solvers poll a monotonic deadline."""

from __future__ import annotations

import time


class SolverTimeout(Exception):
    def __init__(self, lower_bound: int | None = None, best: object = None) -> None:
        super().__init__("deadline expired")
        self.lower_bound = lower_bound
        self.best = best


def deadline_after(seconds: float | None) -> float | None:
    return None if seconds is None else time.monotonic() + seconds


def check(deadline: float | None, lower_bound: int | None = None) -> None:
    if deadline is not None and time.monotonic() > deadline:
        raise SolverTimeout(lower_bound)
