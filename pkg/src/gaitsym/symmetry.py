"""Left/right gait symmetry metrics.

Two measures are provided:

* **Quarter-cycle shift correlation.** The left ankle speed is delayed by
  a quarter gait cycle and the right one advanced by a quarter cycle.
  Opposite limbs of a symmetric walker are half a cycle apart, so after the
  two shifts they line up and their correlation approaches 1.

* **Cross-convolution dissimilarity.** Each side is treated as an LTI
  system from ankle speed (input) to wrist speed (output). With right
  input/output ``a, b`` and left input/output ``x, y``, equal transfer
  functions mean ``A(z) Y(z) = X(z) B(z)``, i.e. ``a * y == x * b`` under
  linear convolution. The dissimilarity

      Dis = ||u - v||^2 / (||u|| ||v||),   u = a * y,  v = x * b

  is 0 for identical coordination and grows as the sides diverge. No
  transfer function is ever divided out.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import (
    AmbiguousCycleError,
    DegenerateSystemError,
    InsufficientRecordError,
    InvalidInputError,
    MissingDataError,
)
from .ingest import JointId, JointTrajectory
from .signal import (
    CycleEstimate,
    SpeedMode,
    SpeedSeries,
    estimate_cycle,
    fractional_circular_shift,
    linear_convolution,
    pearson,
    speed_series,
)

DEFAULT_DIS_THRESHOLD = 1.0
# relative spread of the two per-side cycle estimates beyond which they are
# not merged
MAX_CYCLE_DIVERGENCE = 0.25


# ── Quarter-cycle shift correlation ────────────────────────────────


@dataclass(frozen=True, eq=False)
class ShiftCorrelationResult:
    rho: float
    cycle_frames: int
    left_shift: float
    right_shift: float
    analyzed_length: int
    left_shifted: np.ndarray = field(repr=False)
    right_shifted: np.ndarray = field(repr=False)


def quarter_shift_correlation(left, right, cycle: CycleEstimate | int) -> ShiftCorrelationResult:
    """Correlate left and right speeds after opposite quarter-cycle shifts.

    Both series are trimmed to whole cycles, ``L = (M // T) * T``, so the
    circular shift sees a periodic record.
    """
    left = np.asarray(left, dtype=float)
    right = np.asarray(right, dtype=float)
    T = cycle.period_frames if isinstance(cycle, CycleEstimate) else int(cycle)
    M = left.size
    if right.size != M:
        raise InvalidInputError(f"left and right series differ in length ({M} vs {right.size})")
    if T < 1 or T > M / 2:
        raise InsufficientRecordError(
            f"cycle of {T} frames needs a record of at least {2 * T} samples, got {M}"
        )
    L = (M // T) * T
    quarter = T / 4.0
    ls = fractional_circular_shift(left[:L], +quarter)
    rs = fractional_circular_shift(right[:L], -quarter)
    return ShiftCorrelationResult(pearson(ls, rs), T, +quarter, -quarter, L, ls, rs)


# ── Cross-convolution dissimilarity ────────────────────────────────


class CouplingCase(str, enum.Enum):
    """Ankle (input) and wrist (output) speed components, H or V."""

    HV = "HV"
    VH = "VH"
    HH = "HH"
    VV = "VV"

    @property
    def input_mode(self) -> SpeedMode:
        return SpeedMode.HORIZONTAL if self.value[0] == "H" else SpeedMode.VERTICAL

    @property
    def output_mode(self) -> SpeedMode:
        return SpeedMode.HORIZONTAL if self.value[1] == "H" else SpeedMode.VERTICAL

    def __str__(self):
        return self.value


CASE_ORDER = (CouplingCase.HV, CouplingCase.VH, CouplingCase.HH, CouplingCase.VV)
REQUIRED_JOINTS = (JointId.RAnkle, JointId.RWrist, JointId.LAnkle, JointId.LWrist)


class Classification(str, enum.Enum):
    SYMMETRIC = "Symmetric"
    ASYMMETRIC = "Asymmetric"
    DEGENERATE = "Degenerate"

    def __str__(self):
        return self.value


@dataclass(frozen=True, eq=False)
class ConvolutionPair:
    u: np.ndarray  # right input * left output
    v: np.ndarray  # left input * right output


def case_series(trajectories: Mapping[JointId, JointTrajectory], case: CouplingCase):
    """Return ``(a, b, x, y)``: right ankle, right wrist, left ankle, left
    wrist speeds in the components selected by ``case``."""
    case = CouplingCase(case)
    for j in REQUIRED_JOINTS:
        if j not in trajectories:
            raise MissingDataError(f"missing data: no trajectory for {j}")
    lengths = {len(trajectories[j]) for j in REQUIRED_JOINTS}
    if len(lengths) != 1:
        raise InvalidInputError(f"ankle/wrist trajectories differ in length: {sorted(lengths)}")
    a = speed_series(trajectories[JointId.RAnkle], case.input_mode)
    b = speed_series(trajectories[JointId.RWrist], case.output_mode)
    x = speed_series(trajectories[JointId.LAnkle], case.input_mode)
    y = speed_series(trajectories[JointId.LWrist], case.output_mode)
    return a, b, x, y


def _values(s) -> np.ndarray:
    return np.asarray(s.values if isinstance(s, SpeedSeries) else s, dtype=float)


def dissimilarity(a, b, x, y, demean: bool = False) -> tuple[float, ConvolutionPair]:
    """Dis((a, b), (x, y)) for right system a -> b and left system x -> y."""
    a, b, x, y = (_values(s) for s in (a, b, x, y))
    n = a.size
    if not (b.size == x.size == y.size == n):
        raise InvalidInputError("dissimilarity needs four series of equal length")
    if n < 2:
        raise InvalidInputError(f"dissimilarity needs at least 2 samples, got {n}")
    if demean:
        a, b, x, y = (s - s.mean() for s in (a, b, x, y))
    u = linear_convolution(a, y)
    v = linear_convolution(x, b)
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        side = "right input / left output" if nu == 0.0 else "left input / right output"
        raise DegenerateSystemError(f"cross convolution ({side}) is identically zero; motionless limb?")
    diff = u - v
    return float(diff @ diff) / (nu * nv), ConvolutionPair(u, v)


@dataclass(frozen=True, eq=False)
class CaseResult:
    case: CouplingCase
    dis: float
    classification: Classification
    pair: ConvolutionPair | None = None
    error: str | None = None
    series: tuple | None = field(default=None, repr=False)  # (a, b, x, y)


@dataclass(frozen=True, eq=False)
class DissimilarityReport:
    cases: dict[CouplingCase, CaseResult]
    threshold: float

    def __getitem__(self, case) -> CaseResult:
        return self.cases[CouplingCase(case)]

    def dis(self, case) -> float:
        return self[case].dis

    @property
    def asymmetric_cases(self) -> set[CouplingCase]:
        return {c for c, r in self.cases.items() if r.classification is Classification.ASYMMETRIC}


def classify(dis: float, threshold: float = DEFAULT_DIS_THRESHOLD) -> Classification:
    return Classification.SYMMETRIC if dis < threshold else Classification.ASYMMETRIC


def evaluate_all_cases(
    trajectories: Mapping[JointId, JointTrajectory],
    threshold: float = DEFAULT_DIS_THRESHOLD,
    demean: bool = False,
) -> DissimilarityReport:
    """Dissimilarity for HV, VH, HH, VV. A degenerate case is recorded with
    ``dis = nan`` and does not stop the others; missing joints still raise."""
    for j in REQUIRED_JOINTS:
        if j not in trajectories:
            raise MissingDataError(f"missing data: no trajectory for {j}")
    results = {}
    for case in CASE_ORDER:
        series = case_series(trajectories, case)
        try:
            dis, pair = dissimilarity(*series, demean=demean)
        except DegenerateSystemError as exc:
            results[case] = CaseResult(case, math.nan, Classification.DEGENERATE, error=str(exc), series=series)
            continue
        results[case] = CaseResult(case, dis, classify(dis, threshold), pair, series=series)
    return DissimilarityReport(results, float(threshold))


# ── Cycle from both ankles ─────────────────────────────────────────


def _round_half_up(v: float) -> int:
    return int(math.floor(v + 0.5))


def merge_cycles(left: CycleEstimate, right: CycleEstimate) -> CycleEstimate:
    mean = (left.period_frames + right.period_frames) / 2.0
    if abs(left.period_frames - right.period_frames) > MAX_CYCLE_DIVERGENCE * mean:
        raise AmbiguousCycleError(
            f"left ({left.period_frames}) and right ({right.period_frames}) cycle estimates "
            f"differ by more than {MAX_CYCLE_DIVERGENCE:.0%} of their mean"
        )
    lo = max(left.search_range[0], right.search_range[0])
    hi = min(left.search_range[1], right.search_range[1])
    return CycleEstimate(_round_half_up(mean), (left.peak_acf + right.peak_acf) / 2.0, (lo, hi))


def combined_cycle(
    left_ankle,
    right_ankle,
    min_lag: int = 15,
    max_lag: int | None = None,
    min_peak: float = 0.2,
) -> CycleEstimate:
    """Gait cycle from both ankle speed series (rounded mean of the two)."""
    left = estimate_cycle(_values(left_ankle), min_lag, max_lag, min_peak)
    right = estimate_cycle(_values(right_ankle), min_lag, max_lag, min_peak)
    return merge_cycles(left, right)

