"""Command-line front end.

    gaitsym analyze   INPUT [options]   summary.csv + SVG plots
    gaitsym cycle     INPUT [options]   per-side and combined gait cycle
    gaitsym shiftcorr INPUT [options]   quarter-cycle shift correlation
    gaitsym dissim    INPUT [options]   cross-convolution dissimilarity table
    gaitsym synth     [params] -o OUT   synthetic keypoint CSV

INPUT is a keypoint CSV, an OpenPose JSON directory, or ``-`` for CSV on
stdin. Exit codes: 0 ok, 2 input/parse error, 3 degenerate signal or no
periodicity, 4 invalid parameters.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
from dataclasses import fields
from pathlib import Path

from . import __version__
from .errors import DegenerateSystemError, GaitSymError, InvalidParameterError, ParseError
from .ingest import JointId, load_frames, parse_keypoint_csv, write_openpose_dir
from .pipeline import (
    SUMMARY_COLUMNS,
    AnalysisConfig,
    AnalysisResult,
    analyze,
    ankle_cycles,
    clean_trajectories,
    dissimilarities,
    format_value,
    shift_correlation,
    stage,
)
from .plot import JOINT_COLORS, line_chart
from .signal import SpeedMode, estimate_cycle, speed_series
from .symmetry import CASE_ORDER, Classification, merge_cycles
from .synth import GaitParams, gait_csv, generate_gait

logger = logging.getLogger("gaitsym")

EXIT_OK = 0
EXIT_INVALID = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def atomic_write(path: Path, text: str) -> None:
    path = Path(path)
    tmp = path.with_name(f".{path.name}.{os.getpid()}.tmp")
    with open(tmp, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)


# ── Argument handling ──────────────────────────────────────────────


def _add_input_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("input", help="keypoint CSV, OpenPose JSON directory, or - for CSV on stdin")
    p.add_argument("--format", dest="input_format", choices=("csv", "openpose-dir"), default=None,
                   help="input format (guessed from the path by default)")
    p.add_argument("--confidence-threshold", type=float, default=0.5,
                   help="samples at or below this confidence are interpolated (default 0.5)")
    p.add_argument("--smooth-window", type=int, default=3, help="moving-average window, odd (default 3)")
    p.add_argument("--speed-mode", type=SpeedMode, default=SpeedMode.ABS_SUM,
                   choices=list(SpeedMode), help="ankle speed for cycle and shift correlation (default abs-sum)")
    p.add_argument("--min-lag", type=int, default=15, help="shortest cycle considered, frames (default 15)")
    p.add_argument("--max-lag", type=int, default=None, help="longest cycle considered (default half the record)")
    p.add_argument("--min-peak", type=float, default=0.2, help="minimum autocorrelation peak (default 0.2)")
    p.add_argument("--dis-threshold", type=float, default=1.0,
                   help="dissimilarity below this is Symmetric (default 1.0)")
    p.add_argument("--demean", action="store_true", help="remove each speed series' mean before convolving")
    p.add_argument("--out-dir", default=".", help="directory for report files (default .)")
    p.add_argument("--subject", default=None, help="subject id for summary.csv (default: input name)")
    p.add_argument("--json", action="store_true", help="also write full-precision summary.json")


_SYNTH_HELP = {
    "cycle_frames": "gait cycle length in frames",
    "n_strides": "number of cycles to generate",
    "left_amp_ratio": "left ankle lift relative to right (1 = symmetric)",
    "left_phase_jitter": "lag of left horizontal motion, radians",
    "waveform_distortion": "third-harmonic blend in the left lift, [0, 1)",
    "noise_std": "Gaussian position noise, px",
    "dropout_fraction": "fraction of low-confidence samples",
}


def _add_synth_args(p: argparse.ArgumentParser) -> None:
    for f in fields(GaitParams):
        flag = "--" + f.name.replace("_", "-")
        kind = int if isinstance(f.default, int) else float
        p.add_argument(flag, type=kind, default=f.default,
                       help=f"{_SYNTH_HELP.get(f.name, f.name.replace('_', ' '))} (default {f.default})")
    p.add_argument("-o", "--output", default="-", help="output CSV path or directory; - for stdout (default)")
    p.add_argument("--format", dest="output_format", choices=("csv", "openpose-dir"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gaitsym", description="Left/right gait symmetry from 2D keypoints.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, help_ in (
        ("analyze", "full report: summary.csv and plots"),
        ("cycle", "gait cycle from both ankles"),
        ("shiftcorr", "quarter-cycle shift correlation of ankle speeds"),
        ("dissim", "ankle-to-wrist dissimilarity for HV, VH, HH, VV"),
    ):
        _add_input_args(sub.add_parser(name, help=help_))
    _add_synth_args(sub.add_parser("synth", help="write a synthetic keypoint CSV"))
    return parser


def config_from_args(args) -> AnalysisConfig:
    cfg = AnalysisConfig(
        input_path=args.input,
        input_format=args.input_format,
        confidence_threshold=args.confidence_threshold,
        smooth_window=args.smooth_window,
        speed_mode=args.speed_mode,
        min_lag=args.min_lag,
        max_lag=args.max_lag,
        min_peak=args.min_peak,
        dis_threshold=args.dis_threshold,
        demean=args.demean,
        out_dir=args.out_dir,
        subject=args.subject,
        json=args.json,
    )
    if not 0.0 <= cfg.confidence_threshold < 1.0:
        raise InvalidParameterError(f"--confidence-threshold must be in [0, 1), got {cfg.confidence_threshold}")
    if not (math.isfinite(cfg.dis_threshold) and cfg.dis_threshold > 0):
        raise InvalidParameterError(f"--dis-threshold must be positive, got {cfg.dis_threshold}")
    return cfg


def _load(cfg: AnalysisConfig):
    with stage("input"):
        if str(cfg.input_path) == "-":
            return parse_keypoint_csv(sys.stdin)
        path = Path(cfg.input_path)
        if not path.exists():
            raise ParseError(f"{path}: no such file or directory")
        return load_frames(path, cfg.input_format)


def _subject(cfg: AnalysisConfig) -> str:
    if cfg.subject:
        return cfg.subject
    return "stdin" if str(cfg.input_path) == "-" else Path(cfg.input_path).stem


def _out_dir(cfg: AnalysisConfig) -> Path:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


# ── Report writers ─────────────────────────────────────────────────


def summary_csv(result: AnalysisResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SUMMARY_COLUMNS)
    row = result.summary_row()
    w.writerow([format_value(row[c]) for c in SUMMARY_COLUMNS])
    return buf.getvalue()


def summary_json(result: AnalysisResult) -> str:
    row = result.summary_row()
    doc = {k: (None if isinstance(v, float) and math.isnan(v) else v) for k, v in row.items()}
    doc["peak_acf_left"] = result.cycle.left.peak_acf
    doc["peak_acf_right"] = result.cycle.right.peak_acf
    doc["cycle_search_range"] = list(result.cycle.combined.search_range)
    doc["left_shift"] = result.shift.left_shift
    doc["right_shift"] = result.shift.right_shift
    doc["analyzed_length"] = result.shift.analyzed_length
    doc["errors"] = {str(c): r.error for c, r in result.dissimilarity.cases.items() if r.error}
    return json.dumps(doc, indent=2) + "\n"


def speeds_svg(case_result) -> str:
    case = case_result.case
    a, b, x, y = case_result.series
    in_c, out_c = case.input_mode.value, case.output_mode.value
    labels = (f"Right ankle ({in_c})", f"Right wrist ({out_c})", f"Left ankle ({in_c})", f"Left wrist ({out_c})")
    return line_chart(
        [(lab, col, s.values) for lab, col, s in zip(labels, JOINT_COLORS, (a, b, x, y))],
        title=f"Ankle and wrist speed, case ({case})",
        ylabel="speed [px/frame]",
    )


def convolution_svg(case_result) -> str:
    pair = case_result.pair
    return line_chart(
        [
            ("u = right ankle * left wrist", "Blue", pair.u),
            ("v = left ankle * right wrist", "Red", pair.v),
        ],
        title=f"Cross convolution, case ({case_result.case}), Dis = {case_result.dis:.2f}",
        xlabel="lag k",
    )


def shift_svg(shift) -> str:
    return line_chart(
        [
            (f"Right ankle, shifted {shift.right_shift:+.2f} frames", "Blue", shift.right_shifted),
            (f"Left ankle, shifted {shift.left_shift:+.2f} frames", "Green", shift.left_shifted),
        ],
        title=f"Ankle speed after quarter-cycle shifts (T = {shift.cycle_frames}), rho = {shift.rho:.2f}",
        ylabel="speed [px/frame]",
    )


def _write_case_plots(report, out: Path, speeds: bool = True) -> list[Path]:
    written = []
    for case in CASE_ORDER:
        r = report[case]
        if speeds and r.series is not None:
            p = out / f"speeds_{case}.svg"
            atomic_write(p, speeds_svg(r))
            written.append(p)
        if r.pair is not None:
            p = out / f"convolution_{case}.svg"
            atomic_write(p, convolution_svg(r))
            written.append(p)
        else:
            logger.warning("case %s: %s; no convolution plot", case, r.error)
    return written


def _dissim_table(report) -> str:
    lines = [f"{'case':<6}{'dis':>10}  classification"]
    for case in CASE_ORDER:
        r = report[case]
        lines.append(f"{str(case):<6}{format_value(r.dis):>10}  {r.classification}")
    lines.append(f"threshold {format_value(report.threshold)}")
    return "\n".join(lines)


# ── Subcommands ────────────────────────────────────────────────────


def cmd_analyze(cfg: AnalysisConfig) -> int:
    frames = _load(cfg)
    result = analyze(frames, cfg, subject=_subject(cfg))
    out = _out_dir(cfg)
    atomic_write(out / "summary.csv", summary_csv(result))
    if cfg.json:
        atomic_write(out / "summary.json", summary_json(result))
    _write_case_plots(result.dissimilarity, out)
    atomic_write(out / "shift_overlay.svg", shift_svg(result.shift))
    c = result.cycle.combined
    print(f"subject {result.subject}: {result.n_frames} frames, cycle {c.period_frames} frames, "
          f"rho {result.shift.rho:.2f}")
    print(_dissim_table(result.dissimilarity))
    return EXIT_OK


def cmd_cycle(cfg: AnalysisConfig) -> int:
    traj = clean_trajectories(_load(cfg), cfg)
    estimates = {}
    for side, joint in (("left", "LAnkle"), ("right", "RAnkle")):
        with stage(f"cycle estimation ({joint})"):
            s = speed_series(traj[JointId(joint)], cfg.speed_mode)
            est = estimate_cycle(s.values, cfg.min_lag, cfg.max_lag, cfg.min_peak)
        estimates[side] = est
        print(f"{side:<9}{est.period_frames:>6}  peak_acf {est.peak_acf:.2f}  "
              f"lags {est.search_range[0]}-{est.search_range[1]}")
    with stage("cycle estimation"):
        combined = merge_cycles(estimates["left"], estimates["right"])
    print(f"{'combined':<9}{combined.period_frames:>6}  peak_acf {combined.peak_acf:.2f}")
    return EXIT_OK


def cmd_shiftcorr(cfg: AnalysisConfig) -> int:
    traj = clean_trajectories(_load(cfg), cfg)
    cycles = ankle_cycles(traj, cfg)
    shift = shift_correlation(cycles)
    out = _out_dir(cfg)
    atomic_write(out / "shift_overlay.svg", shift_svg(shift))
    print(f"rho {shift.rho:.2f}  cycle {shift.cycle_frames}  left_shift {shift.left_shift:+.2f}  "
          f"right_shift {shift.right_shift:+.2f}  analyzed_length {shift.analyzed_length}")
    if cfg.json:
        print(json.dumps({"rho": shift.rho, "cycle_frames": shift.cycle_frames,
                          "left_shift": shift.left_shift, "right_shift": shift.right_shift,
                          "analyzed_length": shift.analyzed_length}))
    return EXIT_OK


def cmd_dissim(cfg: AnalysisConfig) -> int:
    traj = clean_trajectories(_load(cfg), cfg)
    report = dissimilarities(traj, cfg)
    _write_case_plots(report, _out_dir(cfg), speeds=False)
    print(_dissim_table(report))
    if cfg.json:
        print(json.dumps({str(c): (None if math.isnan(r.dis) else r.dis) for c, r in report.cases.items()}))
    degenerate = [r for r in report.cases.values() if r.classification is Classification.DEGENERATE]
    if len(degenerate) == len(CASE_ORDER):
        raise DegenerateSystemError(f"dissimilarity: every case degenerate ({degenerate[0].error})")
    return EXIT_OK


def cmd_synth(args) -> int:
    params = GaitParams(**{f.name: getattr(args, f.name) for f in fields(GaitParams)})
    if args.output_format == "openpose-dir":
        if args.output == "-":
            raise InvalidParameterError("--format openpose-dir needs an --output directory")
        write_openpose_dir(generate_gait(params), args.output)
        return EXIT_OK
    text = gait_csv(params)
    if args.output == "-":
        sys.stdout.write(text)
    else:
        atomic_write(Path(args.output), text)
    return EXIT_OK


COMMANDS = {
    "analyze": cmd_analyze,
    "cycle": cmd_cycle,
    "shiftcorr": cmd_shiftcorr,
    "dissim": cmd_dissim,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        if args.command == "synth":
            return cmd_synth(args)
        return COMMANDS[args.command](config_from_args(args))
    except GaitSymError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
