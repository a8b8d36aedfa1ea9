"""Synthetic gait with controllable left/right symmetry.

Each side of the body is driven by a train of swing bursts, one per gait
cycle: a raised-cosine speed pulse of width ``swing_fraction * T``. Every
joint speed component on that side is a short FIR kernel applied to the
side's burst train (forward progression, foot lift, arm swing, arm bob).
The left train is the right one delayed by half a cycle, evaluated in
continuous time, so odd cycle lengths are fine.

Because both sides share the same kernels, left and right ankle-to-wrist
couplings have the same transfer function and the cross-convolution
dissimilarity is zero up to rounding. The asymmetry knobs break that in
targeted ways:

``left_amp_ratio``
    scales the left ankle's vertical lift (reduced foot clearance);
    affects cases VH and VV.
``left_phase_jitter``
    delays the left side's horizontal components (ankle progression and
    arm swing) by ``jitter / (2 pi)`` of a cycle relative to its vertical
    ones; affects HV and VH.
``waveform_distortion``
    blends a third-harmonic pulse into the left ankle's lift profile;
    affects VH and VV.

This is a signal oracle, not a kinematic model.
"""

from __future__ import annotations

import io
import math
from dataclasses import asdict, dataclass, replace

import numpy as np

from .errors import InvalidParameterError
from .ingest import JointId, KeypointFrame, write_keypoint_csv
from .symmetry import CouplingCase

CONFIDENCE = 0.9
DROPOUT_CONFIDENCE = 0.2

# Pixel positions of each joint at frame 0 (image y grows downward).
_ORIGIN = {
    "Shoulder": (120.0, 200.0),
    "Wrist": (125.0, 320.0),
    "Hip": (118.0, 350.0),
    "Knee": (122.0, 450.0),
    "Ankle": (115.0, 545.0),
}
_SIDE_OFFSET = {"R": 4.0, "L": -4.0}

# FIR kernels on the unit-peak burst train, in units of the matching
# amplitude parameter. Each sums to zero so there is no net drift.
_LIFT_KERNEL = np.array([-0.5, 0.0, 0.5])  # foot rises then lands
_ARM_SWING_KERNEL = np.array([0.5, 0.0, -0.5])  # wrist goes back then forward
_ARM_BOB_KERNEL = np.array([-0.5, 0.5, 0.5, -0.5])
_KERNEL_SPAN = 4  # longest kernel length


@dataclass(frozen=True)
class GaitParams:
    cycle_frames: int = 33
    n_strides: int = 3
    fps: int = 30
    ankle_amp: float = 20.0  # peak foot lift, px
    wrist_amp: float = 15.0  # arm swing excursion, px
    forward_speed: float = 4.0  # mean progression, px/frame
    left_amp_ratio: float = 1.0
    left_phase_jitter: float = 0.0  # radians
    waveform_distortion: float = 0.0
    noise_std: float = 0.0
    seed: int = 0
    dropout_fraction: float = 0.0
    swing_fraction: float = 0.25
    wrist_bob: float = 8.0  # vertical arm excursion, px

    def __post_init__(self):
        problems = []
        for name in ("cycle_frames", "n_strides", "fps", "seed"):
            v = getattr(self, name)
            if isinstance(v, bool) or int(v) != v:
                problems.append(f"{name} must be an integer, got {v!r}")
        if self.cycle_frames < 8:
            problems.append(f"cycle_frames must be >= 8, got {self.cycle_frames}")
        if self.n_strides < 1:
            problems.append(f"n_strides must be >= 1, got {self.n_strides}")
        if self.fps < 1:
            problems.append(f"fps must be >= 1, got {self.fps}")
        if not self.left_amp_ratio > 0:
            problems.append(f"left_amp_ratio must be > 0, got {self.left_amp_ratio}")
        if not 0.0 <= self.waveform_distortion < 1.0:
            problems.append(f"waveform_distortion must be in [0, 1), got {self.waveform_distortion}")
        if not self.noise_std >= 0:
            problems.append(f"noise_std must be >= 0, got {self.noise_std}")
        if not 0.0 <= self.dropout_fraction < 1.0:
            problems.append(f"dropout_fraction must be in [0, 1), got {self.dropout_fraction}")
        if not 0.0 < self.swing_fraction < 0.5:
            problems.append(f"swing_fraction must be in (0, 0.5), got {self.swing_fraction}")
        for name in ("ankle_amp", "wrist_amp", "forward_speed", "wrist_bob", "left_phase_jitter"):
            if not math.isfinite(getattr(self, name)):
                problems.append(f"{name} must be finite")
        if problems:
            raise InvalidParameterError("; ".join(problems))

    @property
    def total_frames(self) -> int:
        return self.n_strides * self.cycle_frames

    @property
    def is_symmetric(self) -> bool:
        return self.left_amp_ratio == 1.0 and self.left_phase_jitter == 0.0 and self.waveform_distortion == 0.0

    def to_dict(self) -> dict:
        return asdict(self)


def _pulse(tau: np.ndarray, width: float, distortion: float = 0.0) -> np.ndarray:
    """Raised-cosine pulse on [0, width) with unit peak, optionally blended
    with its third harmonic (three humps over the same support)."""
    inside = (tau >= 0) & (tau < width)
    ph = np.pi * np.clip(tau, 0.0, width) / width
    p = (1.0 - distortion) * np.sin(ph) ** 2 + distortion * np.sin(3 * ph) ** 2
    return np.where(inside, p, 0.0)


def _burst_train(n: np.ndarray, T: int, onset: float, width: float, distortion: float = 0.0) -> np.ndarray:
    """Sum of pulses starting at ``onset + i*T`` for every i touching ``n``."""
    out = np.zeros(n.shape)
    first = math.floor((n[0] - onset - width) / T)
    last = math.ceil((n[-1] - onset) / T)
    for i in range(first, last + 1):
        out += _pulse(n - (onset + i * T), width, distortion)
    return out


def _filtered(kernel: np.ndarray, train: np.ndarray, pad: int) -> np.ndarray:
    """Causal FIR on a train sampled from index -pad; returns samples 0..end."""
    return np.convolve(train, kernel)[pad : len(train)]


def joint_speeds(params: GaitParams) -> dict[JointId, tuple[np.ndarray, np.ndarray]]:
    """Noise-free per-frame displacements (dx, dy) of every tracked joint."""
    T = params.cycle_frames
    M = params.total_frames
    width = params.swing_fraction * T
    onset = 2.0  # leaves the first frames at rest so the smoother sees flat edges
    pad = _KERNEL_SPAN
    n = np.arange(-pad, M - 1, dtype=float)

    stride = params.forward_speed * T
    area = width / 2.0  # integral of the unit-peak raised cosine
    lag = params.left_phase_jitter / (2 * np.pi) * T

    right = _burst_train(n, T, onset, width)
    left = _burst_train(n, T, onset + T / 2.0, width)
    left_h = _burst_train(n, T, onset + T / 2.0 + lag, width)
    left_lift = _burst_train(n, T, onset + T / 2.0, width, params.waveform_distortion)

    def side(h_train, v_train, lift_train, lift_scale):
        progress = (stride / area) * h_train[pad:]
        swing = params.wrist_amp * _filtered(_ARM_SWING_KERNEL, h_train, pad)
        ankle_dy = lift_scale * params.ankle_amp * _filtered(_LIFT_KERNEL, lift_train, pad)
        wrist_dy = params.wrist_bob * _filtered(_ARM_BOB_KERNEL, v_train, pad)
        return {
            "Ankle": (progress, ankle_dy),
            "Knee": (progress, 0.5 * ankle_dy),
            "Wrist": (progress + swing, wrist_dy),
        }

    sides = {
        "R": side(right, right, right, 1.0),
        "L": side(left_h, left, left_lift, params.left_amp_ratio),
    }
    # trunk joints ride on the mean progression of both legs
    trunk_dx = 0.5 * (sides["R"]["Ankle"][0] + sides["L"]["Ankle"][0])
    trunk_dy = np.zeros(M - 1)
    out = {}
    for s in ("R", "L"):
        for part, (dx, dy) in sides[s].items():
            out[JointId(s + part)] = (dx, dy)
        for part in ("Hip", "Shoulder"):
            out[JointId(s + part)] = (trunk_dx, trunk_dy)
    return out


def generate_gait(params: GaitParams | None = None, **overrides) -> list[KeypointFrame]:
    """Keypoint frames for ``params.n_strides`` gait cycles.

    Deterministic for a given ``params`` (seed included).
    """
    if params is None:
        params = GaitParams(**overrides)
    elif overrides:
        params = replace(params, **overrides)
    M = params.total_frames
    speeds = joint_speeds(params)
    rng = np.random.default_rng(params.seed)

    coords = {}
    for j in JointId:
        x0, y0 = _ORIGIN[j.value[1:]]
        x0 += _SIDE_OFFSET[j.value[0]]
        dx, dy = speeds[j]
        x = x0 + np.concatenate(([0.0], np.cumsum(dx)))
        y = y0 + np.concatenate(([0.0], np.cumsum(dy)))
        coords[j] = [x, y, np.full(M, CONFIDENCE)]
    if params.noise_std > 0:
        for j in JointId:
            coords[j][0] = coords[j][0] + rng.normal(0.0, params.noise_std, M)
            coords[j][1] = coords[j][1] + rng.normal(0.0, params.noise_std, M)
    if params.dropout_fraction > 0:
        for j in JointId:
            drop = rng.random(M) < params.dropout_fraction
            # keep at least one confident sample so the joint is recoverable
            if drop.all():
                drop[0] = False
            coords[j][0] = np.where(drop, 0.0, coords[j][0])
            coords[j][1] = np.where(drop, 0.0, coords[j][1])
            coords[j][2] = np.where(drop, DROPOUT_CONFIDENCE, coords[j][2])

    frames = []
    for f in range(M):
        frames.append(
            KeypointFrame(
                f,
                {j: (float(coords[j][0][f]), float(coords[j][1][f]), float(coords[j][2][f])) for j in JointId},
            )
        )
    return frames


def gait_csv(params: GaitParams | None = None, **overrides) -> str:
    buf = io.StringIO()
    write_keypoint_csv(generate_gait(params, **overrides), buf)
    return buf.getvalue()


# Knob settings beyond which each knob is documented to move its cases.
AMP_RATIO_TOLERANCE = 0.05
PHASE_JITTER_TOLERANCE = 0.05  # radians
DISTORTION_TOLERANCE = 0.05
# Largest horizontal lag (radians) that keeps the quarter-shift rho >= 0.95
# at default geometry; lift amplitude and distortion barely move it.
METHOD1_JITTER_LIMIT = 0.15


@dataclass(frozen=True)
class ExpectedVerdict:
    method1_high_rho: bool
    asymmetric_cases: frozenset


def expected_verdict(params: GaitParams) -> ExpectedVerdict:
    """Which metrics the asymmetry knobs in ``params`` should move.

    ``asymmetric_cases`` lists the coupling cases whose dissimilarity rises
    above the symmetric baseline (not necessarily above the classification
    threshold); ``method1_high_rho`` says whether the quarter-shift
    correlation should stay in the symmetric band (rho >= 0.95).
    """
    cases = set()
    if abs(params.left_amp_ratio - 1.0) > AMP_RATIO_TOLERANCE:
        cases |= {CouplingCase.VH, CouplingCase.VV}
    if abs(params.left_phase_jitter) > PHASE_JITTER_TOLERANCE:
        cases |= {CouplingCase.HV, CouplingCase.VH}
    if params.waveform_distortion > DISTORTION_TOLERANCE:
        cases |= {CouplingCase.VH, CouplingCase.VV}
    return ExpectedVerdict(abs(params.left_phase_jitter) <= METHOD1_JITTER_LIMIT, frozenset(cases))
