"""Structured training metrics."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field


@dataclass
class TrainReport:
    loss: str
    r: int = 0
    n_classes: int = 0
    seed: int = 0
    # objective after initialization and after every half-step (W pass, B pass, ...)
    objective: list[float] = field(default_factory=list)
    # objective after each full alternation, starting with the initial value
    alternation_objective: list[float] = field(default_factory=list)
    # per-bit objective values within each pass: [{"phase": "W"|"B", "values": [...]}, ...]
    bit_trace: list[dict] = field(default_factory=list)
    n_alternations: int = 0
    converged: bool = False
    timings: dict[str, float] = field(default_factory=dict)
    train_accuracy: float | None = None
    test_accuracy: float | None = None
    p_bytes: int = 0
    w_bytes: int = 0

    def record(self, value: float) -> None:
        if not math.isfinite(value):
            raise FloatingPointError(f"objective became non-finite: {value}")
        self.objective.append(float(value))

    def to_dict(self, include_bit_trace: bool = True) -> dict:
        out = asdict(self)
        if not include_bit_trace:
            out.pop("bit_trace")
        return out
