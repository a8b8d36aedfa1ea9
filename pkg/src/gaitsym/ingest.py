"""Keypoint ingestion and preprocessing.

Reads pose-estimation output (OpenPose BODY_25 per-frame JSON, or a flat
``frame,joint,x,y,confidence`` CSV), assembles per-joint trajectories and
runs the fixed cleaning chain::

    gate (confidence <= threshold) -> linear interpolation -> moving average

Only the ten joints used by the symmetry metrics are kept.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence, TextIO

import numpy as np

from .errors import (
    AllOccludedError,
    InsufficientDataError,
    InvalidParameterError,
    ParseError,
)

logger = logging.getLogger(__name__)

DEFAULT_CONFIDENCE_THRESHOLD = 0.5
DEFAULT_SMOOTH_WINDOW = 3


class JointId(str, enum.Enum):
    RAnkle = "RAnkle"
    LAnkle = "LAnkle"
    RKnee = "RKnee"
    LKnee = "LKnee"
    RHip = "RHip"
    LHip = "LHip"
    RWrist = "RWrist"
    LWrist = "LWrist"
    RShoulder = "RShoulder"
    LShoulder = "LShoulder"

    @property
    def mirror(self) -> "JointId":
        side = "L" if self.value[0] == "R" else "R"
        return JointId(side + self.value[1:])

    @property
    def is_right(self) -> bool:
        return self.value[0] == "R"

    @property
    def body25_index(self) -> int:
        return BODY25_INDEX[self]

    def __str__(self):
        return self.value


BODY25_INDEX = {
    JointId.RShoulder: 2,
    JointId.RWrist: 4,
    JointId.LShoulder: 5,
    JointId.LWrist: 7,
    JointId.RHip: 9,
    JointId.RKnee: 10,
    JointId.RAnkle: 11,
    JointId.LHip: 12,
    JointId.LKnee: 13,
    JointId.LAnkle: 14,
}
BODY25_SIZE = 25

Reading = tuple  # (x, y, confidence)
MISSING: Reading = (0.0, 0.0, 0.0)


@dataclass(frozen=True)
class KeypointFrame:
    """Raw (x, y, confidence) readings for the tracked joints in one frame."""

    frame_index: int
    joints: Mapping[JointId, Reading]

    def __post_init__(self):
        if self.frame_index < 0:
            raise ParseError(f"negative frame index {self.frame_index}")
        for joint, (_, _, c) in self.joints.items():
            if not 0.0 <= c <= 1.0:
                raise ParseError(f"frame {self.frame_index}: {joint} confidence {c} outside [0, 1]")


@dataclass(frozen=True, eq=False)
class JointTrajectory:
    """One joint's coordinates over M frames.

    ``gap_mask`` marks samples that were filled in rather than observed.
    ``threshold`` is the confidence gate that :func:`interpolate_gaps`
    applied, or ``None`` while the trajectory is still raw.
    """

    joint: JointId
    x: np.ndarray
    y: np.ndarray
    confidence: np.ndarray
    gap_mask: np.ndarray
    threshold: float | None = None

    def __post_init__(self):
        n = len(self.x)
        if not (len(self.y) == len(self.confidence) == len(self.gap_mask) == n):
            raise InvalidParameterError(f"{self.joint}: trajectory fields differ in length")
        if n < 2:
            raise InsufficientDataError(f"{self.joint}: trajectory needs at least 2 frames, got {n}")
        for name in ("x", "y", "confidence", "gap_mask"):
            arr = getattr(self, name)
            arr.setflags(write=False)

    def __len__(self):
        return len(self.x)

    @property
    def repaired(self) -> bool:
        return self.threshold is not None

    def __eq__(self, other):
        if not isinstance(other, JointTrajectory):
            return NotImplemented
        return (
            self.joint == other.joint
            and self.threshold == other.threshold
            and np.array_equal(self.x, other.x)
            and np.array_equal(self.y, other.y)
            and np.array_equal(self.confidence, other.confidence)
            and np.array_equal(self.gap_mask, other.gap_mask)
        )

    @classmethod
    def from_arrays(cls, joint, x, y, confidence=None, gap_mask=None, threshold=None):
        x = np.array(x, dtype=float)
        y = np.array(y, dtype=float)
        if confidence is None:
            confidence = np.ones_like(x)
        confidence = np.array(confidence, dtype=float)
        if gap_mask is None:
            gap_mask = np.zeros(len(x), dtype=bool)
        return cls(JointId(joint), x, y, confidence, np.array(gap_mask, dtype=bool), threshold)


# ── Parsing ─────────────────────────────────────────────────────────


def _select_person(people: list, path: Path) -> np.ndarray | None:
    best, best_score = None, -np.inf
    for i, person in enumerate(people):
        try:
            kp = np.asarray(person["pose_keypoints_2d"], dtype=float)
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"{path.name}: person {i} has no usable pose_keypoints_2d") from exc
        if kp.size != BODY25_SIZE * 3:
            raise ParseError(
                f"{path.name}: person {i} pose_keypoints_2d has {kp.size} values, "
                f"expected {BODY25_SIZE * 3}"
            )
        kp = kp.reshape(BODY25_SIZE, 3)
        score = kp[:, 2].sum()
        if score > best_score:
            best, best_score = kp, score
    return best


def parse_openpose_dir(path) -> list[KeypointFrame]:
    """Read a directory of OpenPose ``*_keypoints.json`` files (any ``*.json``).

    Files are ordered lexicographically and numbered from 0. When a file
    holds several people, the one with the largest summed confidence wins;
    an empty ``people`` list gives a frame with every joint at confidence 0.
    """
    path = Path(path)
    if not path.is_dir():
        raise ParseError(f"{path}: not a directory")
    files = sorted(p for p in path.iterdir() if p.suffix.lower() == ".json")
    if len(files) < 2:
        raise InsufficientDataError(
            f"{path}: insufficient data, need at least 2 frame files, found {len(files)}"
        )
    frames = []
    for index, fp in enumerate(files):
        try:
            with open(fp, encoding="utf-8") as fh:
                doc = json.load(fh)
            people = doc["people"]
        except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise ParseError(f"{fp.name}: cannot read keypoint JSON ({exc})") from exc
        except (KeyError, TypeError) as exc:
            raise ParseError(f"{fp.name}: missing 'people' list") from exc
        if not isinstance(people, list):
            raise ParseError(f"{fp.name}: 'people' is not a list")
        kp = _select_person(people, fp)
        if kp is None:
            joints = {j: MISSING for j in JointId}
        else:
            joints = {}
            for j in JointId:
                x, y, c = (float(v) for v in kp[BODY25_INDEX[j]])
                if not np.isfinite([x, y, c]).all():
                    raise ParseError(f"{fp.name}: non-finite value for {j}")
                joints[j] = (x, y, c)
        frames.append(KeypointFrame(index, joints))
    return frames


CSV_HEADER = ("frame", "joint", "x", "y", "confidence")


def parse_keypoint_csv(stream: TextIO | str) -> list[KeypointFrame]:
    """Parse the flat keypoint CSV (one row per frame and joint).

    Frames are sorted by index; joints absent from a frame are filled in
    with confidence 0. Frame indices need not start at 0 but gaps in the
    numbering are filled with all-missing frames so that the sequence is
    contiguous.
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    reader = csv.reader(stream)
    try:
        header = next(reader)
    except StopIteration:
        raise InsufficientDataError("insufficient data: empty keypoint CSV") from None
    header = tuple(h.strip().lstrip("﻿") for h in header)
    if header != CSV_HEADER:
        raise ParseError(f"row 1: expected header {','.join(CSV_HEADER)}, got {','.join(header)}")

    rows: dict[int, dict[JointId, Reading]] = {}
    for rownum, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 5:
            raise ParseError(f"row {rownum}: expected 5 fields, got {len(row)}")
        frame_s, joint_s, x_s, y_s, c_s = (cell.strip() for cell in row)
        try:
            joint = JointId(joint_s)
        except ValueError:
            raise ParseError(f"row {rownum}: unknown joint {joint_s!r}") from None
        try:
            frame = int(frame_s)
            x, y, c = float(x_s), float(y_s), float(c_s)
        except ValueError:
            raise ParseError(f"row {rownum}: non-numeric field in {row!r}") from None
        if frame < 0 or not np.isfinite([x, y, c]).all() or not 0.0 <= c <= 1.0:
            raise ParseError(f"row {rownum}: value out of range in {row!r}")
        if joint in rows.setdefault(frame, {}):
            raise ParseError(f"row {rownum}: duplicate entry for frame {frame}, joint {joint}")
        rows[frame][joint] = (x, y, c)

    if not rows:
        raise InsufficientDataError("insufficient data: keypoint CSV has no rows")
    first, last = min(rows), max(rows)
    frames = []
    for f in range(first, last + 1):
        got = rows.get(f, {})
        frames.append(KeypointFrame(f, {j: got.get(j, MISSING) for j in JointId}))
    if len(frames) < 2:
        raise InsufficientDataError(f"insufficient data: need at least 2 frames, got {len(frames)}")
    return frames


def write_keypoint_csv(frames: Iterable[KeypointFrame], stream: TextIO) -> None:
    """Inverse of :func:`parse_keypoint_csv`; floats are written with ``repr``
    so that a round trip is lossless."""
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for fr in frames:
        for j in JointId:
            if j in fr.joints:
                x, y, c = fr.joints[j]
                w.writerow([fr.frame_index, j.value, repr(float(x)), repr(float(y)), repr(float(c))])


def write_openpose_dir(frames: Sequence[KeypointFrame], path) -> list[Path]:
    """Write frames as OpenPose-style per-frame JSON files.

    Untracked BODY_25 slots are zero. Handy for fixtures and for feeding
    synthetic data through the JSON reader.
    """
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    width = max(12, len(str(len(frames))))
    out = []
    for fr in frames:
        flat = [0.0] * (BODY25_SIZE * 3)
        for j, (x, y, c) in fr.joints.items():
            i = BODY25_INDEX[j] * 3
            flat[i : i + 3] = [float(x), float(y), float(c)]
        doc = {"version": 1.3, "people": [{"person_id": [-1], "pose_keypoints_2d": flat}]}
        fp = path / f"frame_{fr.frame_index:0{width}d}_keypoints.json"
        with open(fp, "w", encoding="utf-8") as fh:
            json.dump(doc, fh)
        out.append(fp)
    return out


def load_frames(path, fmt: str | None = None) -> list[KeypointFrame]:
    """Load from a CSV file or OpenPose directory; ``fmt`` is ``"csv"``,
    ``"openpose-dir"`` or ``None`` to guess from the path."""
    path = Path(path)
    if fmt is None:
        fmt = "openpose-dir" if path.is_dir() else "csv"
    if fmt == "openpose-dir":
        return parse_openpose_dir(path)
    if fmt == "csv":
        try:
            with open(path, encoding="utf-8", newline="") as fh:
                return parse_keypoint_csv(fh)
        except OSError as exc:
            raise ParseError(f"{path}: cannot read ({exc.strerror})") from exc
    raise InvalidParameterError(f"unknown input format {fmt!r}")


# ── Trajectories and cleaning ──────────────────────────────────────


def extract_trajectory(frames: Sequence[KeypointFrame], joint: JointId) -> JointTrajectory:
    joint = JointId(joint)
    if len(frames) < 2:
        raise InsufficientDataError(f"insufficient data: need at least 2 frames, got {len(frames)}")
    data = np.array([fr.joints.get(joint, MISSING) for fr in frames], dtype=float)
    conf = data[:, 2].copy()
    return JointTrajectory(joint, data[:, 0].copy(), data[:, 1].copy(), conf, conf <= 0.0)


def interpolate_gaps(
    traj: JointTrajectory, threshold: float = DEFAULT_CONFIDENCE_THRESHOLD
) -> JointTrajectory:
    """Replace samples with confidence <= ``threshold`` by linear interpolation.

    x and y are filled independently from the nearest confident neighbours.
    Leading and trailing gaps hold the nearest confident value.
    """
    good = traj.confidence > threshold
    if not good.any():
        raise AllOccludedError(
            f"missing data: {traj.joint} has no sample with confidence > {threshold}"
        )
    idx = np.arange(len(traj))
    anchors = idx[good]
    x = np.where(good, traj.x, np.interp(idx, anchors, traj.x[good]))
    y = np.where(good, traj.y, np.interp(idx, anchors, traj.y[good]))
    gap = traj.gap_mask | ~good
    return JointTrajectory(traj.joint, x, y, traj.confidence.copy(), gap, float(threshold))


def _truncated_mean(values: np.ndarray, window: int) -> np.ndarray:
    kernel = np.ones(window)
    sums = np.convolve(values, kernel, mode="same")
    counts = np.convolve(np.ones_like(values), kernel, mode="same")
    return sums / counts


def smooth_moving_average(traj: JointTrajectory, window: int = DEFAULT_SMOOTH_WINDOW) -> JointTrajectory:
    """Centered moving average, window truncated at the record edges."""
    if isinstance(window, bool) or int(window) != window or window < 1 or window % 2 == 0:
        raise InvalidParameterError(f"smoothing window must be a positive odd integer, got {window!r}")
    window = int(window)
    if window > len(traj):
        raise InvalidParameterError(f"smoothing window {window} exceeds record length {len(traj)}")
    if window == 1:
        return traj
    return JointTrajectory(
        traj.joint,
        _truncated_mean(traj.x, window),
        _truncated_mean(traj.y, window),
        traj.confidence.copy(),
        traj.gap_mask.copy(),
        traj.threshold,
    )


def preprocess(
    frames: Sequence[KeypointFrame],
    joints: Iterable[JointId] = tuple(JointId),
    threshold: float = DEFAULT_CONFIDENCE_THRESHOLD,
    window: int = DEFAULT_SMOOTH_WINDOW,
) -> dict[JointId, JointTrajectory]:
    """Full cleaning chain for each requested joint, in a fixed order."""
    out = {}
    for j in joints:
        traj = extract_trajectory(frames, j)
        traj = interpolate_gaps(traj, threshold)
        out[JointId(j)] = smooth_moving_average(traj, window)
        n_gap = int(out[j].gap_mask.sum())
        if n_gap:
            logger.debug("%s: %d of %d samples interpolated", j, n_gap, len(traj))
    return out

