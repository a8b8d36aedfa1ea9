"""End-to-end analysis of one subject's keypoint record."""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .errors import GaitSymError, MissingDataError
from .ingest import (
    DEFAULT_CONFIDENCE_THRESHOLD,
    DEFAULT_SMOOTH_WINDOW,
    JointId,
    JointTrajectory,
    KeypointFrame,
    preprocess,
)
from .signal import CycleEstimate, SpeedMode, SpeedSeries, estimate_cycle, speed_series
from .symmetry import (
    CASE_ORDER,
    DEFAULT_DIS_THRESHOLD,
    DissimilarityReport,
    ShiftCorrelationResult,
    evaluate_all_cases,
    merge_cycles,
    quarter_shift_correlation,
)


@dataclass
class AnalysisConfig:
    input_path: Path | str | None = None
    input_format: str | None = None  # "csv", "openpose-dir" or None to guess
    confidence_threshold: float = DEFAULT_CONFIDENCE_THRESHOLD
    smooth_window: int = DEFAULT_SMOOTH_WINDOW
    speed_mode: SpeedMode = SpeedMode.ABS_SUM
    min_lag: int = 15
    max_lag: int | None = None
    min_peak: float = 0.2
    dis_threshold: float = DEFAULT_DIS_THRESHOLD
    demean: bool = False
    out_dir: Path | str = "."
    subject: str | None = None
    json: bool = False


@contextmanager
def stage(name: str):
    """Prefix any package error raised inside the block with ``name``."""
    try:
        yield
    except GaitSymError as exc:
        msg = str(exc)
        if msg.startswith(name + ":"):
            raise
        raise type(exc)(f"{name}: {msg}") from exc


@dataclass(frozen=True, eq=False)
class CycleReport:
    left: CycleEstimate
    right: CycleEstimate
    combined: CycleEstimate
    left_series: SpeedSeries = field(repr=False)
    right_series: SpeedSeries = field(repr=False)


@dataclass(frozen=True, eq=False)
class AnalysisResult:
    subject: str
    n_frames: int
    cycle: CycleReport
    shift: ShiftCorrelationResult
    dissimilarity: DissimilarityReport
    trajectories: dict = field(repr=False)

    def summary_row(self) -> dict:
        """Full-precision values keyed by the summary.csv column names."""
        T = self.cycle.combined.period_frames
        row = {
            "subject": self.subject,
            "frames": self.n_frames,
            "whole_cycles": self.n_frames // T,
            "cycle": T,
            "cycle_left": self.cycle.left.period_frames,
            "cycle_right": self.cycle.right.period_frames,
            "peak_acf": self.cycle.combined.peak_acf,
            "rho": self.shift.rho,
        }
        for case in CASE_ORDER:
            row[f"dis_{case}"] = self.dissimilarity[case].dis
        for case in CASE_ORDER:
            row[f"class_{case}"] = str(self.dissimilarity[case].classification)
        row["dis_threshold"] = self.dissimilarity.threshold
        return row


SUMMARY_COLUMNS = (
    ["subject", "frames", "whole_cycles", "cycle", "cycle_left", "cycle_right", "peak_acf", "rho"]
    + [f"dis_{c}" for c in CASE_ORDER]
    + [f"class_{c}" for c in CASE_ORDER]
    + ["dis_threshold"]
)


def format_value(v) -> str:
    """Two-decimal rendering used by summary.csv."""
    if isinstance(v, bool) or isinstance(v, str):
        return str(v)
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float) and math.isnan(v):
        return "nan"
    out = f"{v:.2f}"
    return "0.00" if out == "-0.00" else out


def clean_trajectories(frames: Sequence[KeypointFrame], config: AnalysisConfig) -> dict[JointId, JointTrajectory]:
    with stage("preprocessing"):
        return preprocess(frames, tuple(JointId), config.confidence_threshold, config.smooth_window)


def ankle_cycles(trajectories, config: AnalysisConfig) -> CycleReport:
    with stage("speed"):
        if JointId.LAnkle not in trajectories or JointId.RAnkle not in trajectories:
            missing = [str(j) for j in (JointId.LAnkle, JointId.RAnkle) if j not in trajectories]
            raise MissingDataError(f"missing data: no trajectory for {', '.join(missing)}")
        left = speed_series(trajectories[JointId.LAnkle], config.speed_mode)
        right = speed_series(trajectories[JointId.RAnkle], config.speed_mode)
    with stage("cycle estimation (LAnkle)"):
        lc = estimate_cycle(left.values, config.min_lag, config.max_lag, config.min_peak)
    with stage("cycle estimation (RAnkle)"):
        rc = estimate_cycle(right.values, config.min_lag, config.max_lag, config.min_peak)
    with stage("cycle estimation"):
        combined = merge_cycles(lc, rc)
    return CycleReport(lc, rc, combined, left, right)


def shift_correlation(cycles: CycleReport) -> ShiftCorrelationResult:
    with stage("quarter-shift correlation"):
        return quarter_shift_correlation(cycles.left_series.values, cycles.right_series.values, cycles.combined)


def dissimilarities(trajectories, config: AnalysisConfig) -> DissimilarityReport:
    with stage("dissimilarity"):
        return evaluate_all_cases(trajectories, config.dis_threshold, config.demean)


def analyze(frames: Sequence[KeypointFrame], config: AnalysisConfig | None = None, subject: str | None = None) -> AnalysisResult:
    """Run preprocessing, cycle estimation and both symmetry metrics."""
    config = config or AnalysisConfig()
    subject = subject or config.subject or (Path(config.input_path).stem if config.input_path else "subject")
    traj = clean_trajectories(frames, config)
    cycles = ankle_cycles(traj, config)
    shift = shift_correlation(cycles)
    report = dissimilarities(traj, config)
    return AnalysisResult(subject, len(frames), cycles, shift, report, traj)
