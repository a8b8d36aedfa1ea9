"""
Reading keypoints and cleaning trajectories
===========================================

Load the OpenPose fixture shipped with the tests, look at how many samples
fall below the confidence gate, then run the gate / interpolate / smooth
chain on one joint.
"""

from pathlib import Path

import numpy as np

from gaitsym.ingest import JointId, extract_trajectory, interpolate_gaps, parse_openpose_dir, smooth_moving_average

FIXTURE = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "openpose_s1"

frames = parse_openpose_dir(FIXTURE)
print(f"{len(frames)} frames read from {FIXTURE.name}")

# Frame 47 has nobody in it, so every joint there has confidence 0.
print("frame 47 LAnkle:", frames[47].joints[JointId.LAnkle])

raw = extract_trajectory(frames, JointId.LWrist)
low = raw.confidence <= 0.5
print(f"LWrist: {low.sum()} of {len(raw)} samples at or below confidence 0.5")

# Linear interpolation across the gaps, holding the ends.
filled = interpolate_gaps(raw, threshold=0.5)
print("gap samples now:", np.round(filled.x[low][:5], 2))

# Centered moving average, window 3, truncated at the edges.
smooth = smooth_moving_average(filled, 3)
print("roughness before / after:", round(float(np.std(np.diff(filled.x, 2))), 3),
      round(float(np.std(np.diff(smooth.x, 2))), 3))
