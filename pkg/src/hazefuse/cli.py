"""Batch command-line interface.

Subcommands:
  enhance   process a file or directory of images through the pipeline
  evaluate  score (clear, test) pairs from a manifest, with enhancement
            deltas, into a CSV report
  synth     degrade clear images with randomized synthetic haze
  report    summarize an evaluation CSV

Exit codes: 0 success, 1 usage error, 2 I/O error, 3 empty result. Every
command is a thin wrapper over a run_* function that is callable directly
from Python.
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace

import numpy as np

from . import config as config_mod
from .config import RunConfig
from .image import load_image, save_image
from .iqa import evaluate_pair, load_roi_mask
from .pyramid import enhance, laplacian_pyramid
from .synth import HazeParams, apply_haze
from .weights import saturation_map, texture_map, weight_maps
from .exposure import build_stack

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_EMPTY = 3

_INPUT_EXTENSIONS = {".png", ".jpg", ".jpeg", ".ppm", ".pnm"}
_WRITABLE_EXTENSIONS = {".png", ".ppm"}

EVAL_COLUMNS = ("id",
                "mse_hazy", "psnr_hazy", "ssim_hazy",
                "mse_enhanced", "psnr_enhanced", "ssim_enhanced",
                "mse_delta", "psnr_delta", "ssim_delta",
                "error")
_METRIC_COLUMNS = EVAL_COLUMNS[1:-1]


def _fmt(value) -> str:
    if value is None:
        return ""
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.6g}"


def _apply_pipeline(img, cfg: RunConfig):
    return enhance(img, cfg.gamma_schedule(), cfg.clahe_params(),
                   cfg.confidence_params(), cfg.fusion_params())


def _list_inputs(input_path: str) -> list:
    if os.path.isfile(input_path):
        return [input_path]
    names = sorted(n for n in os.listdir(input_path)
                   if os.path.splitext(n)[1].lower() in _INPUT_EXTENSIONS)
    return [os.path.join(input_path, n) for n in names]


def _output_name(in_path: str) -> str:
    stem, ext = os.path.splitext(os.path.basename(in_path))
    return stem + (ext.lower() if ext.lower() in _WRITABLE_EXTENSIONS else ".png")


def _dump_maps(img, enhanced, cfg: RunConfig, map_dir: str) -> None:
    os.makedirs(map_dir, exist_ok=True)
    stack = build_stack(img, cfg.gamma_schedule(), cfg.clahe_params())
    weights = weight_maps(stack, cfg.confidence_params())
    gray = lambda m: np.clip(np.repeat(m[:, :, None], 3, axis=2), 0.0, 1.0)
    for k, entry in enumerate(stack):
        save_image(gray(texture_map(entry, cfg.confidence_params())),
                   os.path.join(map_dir, f"texture_{k}.png"))
        save_image(gray(saturation_map(entry)),
                   os.path.join(map_dir, f"saturation_{k}.png"))
        save_image(gray(weights[k]), os.path.join(map_dir, f"weight_{k}.png"))
    pyr = laplacian_pyramid(enhanced, cfg.fusion_params())
    for i, detail in enumerate(pyr.details):
        save_image(np.clip(detail + 0.5, 0.0, 1.0),
                   os.path.join(map_dir, f"level_{i}.png"))
    save_image(pyr.residual, os.path.join(map_dir, "residual.png"))


def _enhance_one(task):
    in_path, out_path, cfg, dump_dir = task
    try:
        img = load_image(in_path)
        enhanced = _apply_pipeline(img, cfg)
    except (IOError, ValueError) as exc:
        # undecodable file, or an image the configuration cannot process
        # (smaller than the tile grid, too shallow for the pyramid depth)
        return in_path, None, str(exc)
    save_image(enhanced, out_path)
    if dump_dir is not None:
        _dump_maps(img, enhanced, cfg, dump_dir)
    return in_path, out_path, None


def run_enhance(input_path: str, output_dir: str, cfg: RunConfig,
                dump_maps: bool = False, stderr=sys.stderr) -> int:
    """Enhance every decodable image under input_path into output_dir."""
    if not os.path.exists(input_path):
        print(f"enhance: no such input: {input_path}", file=stderr)
        return EXIT_IO
    inputs = _list_inputs(input_path)
    if not inputs:
        print(f"enhance: no inputs found in {input_path}", file=stderr)
        return EXIT_EMPTY
    os.makedirs(output_dir, exist_ok=True)
    tasks = []
    for in_path in inputs:
        stem = os.path.splitext(os.path.basename(in_path))[0]
        dump_dir = os.path.join(output_dir, "maps", stem) if dump_maps else None
        tasks.append((in_path, os.path.join(output_dir, _output_name(in_path)), cfg, dump_dir))
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_enhance_one, tasks))
    else:
        results = [_enhance_one(t) for t in tasks]
    written = 0
    for in_path, out_path, error in results:
        if error is not None:
            print(f"enhance: skipping {in_path}: {error}", file=stderr)
        else:
            written += 1
    if written == 0:
        print("enhance: no decodable inputs", file=stderr)
        return EXIT_EMPTY
    return EXIT_OK


def _parse_manifest(path: str):
    """Yield (lineno, clear_path, test_path, roi_path_or_None) per pair line."""
    with open(path, "r", encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = [p.strip() for p in line.split(",")]
            if len(parts) == 2:
                yield lineno, parts[0], parts[1], None
            elif len(parts) == 3:
                yield lineno, parts[0], parts[1], parts[2] or None
            else:
                yield lineno, None, None, None


def _delta(enhanced: float, hazy: float) -> float:
    if math.isinf(enhanced) and math.isinf(hazy):
        return 0.0
    return enhanced - hazy


def _evaluate_one(task):
    lineno, clear_path, test_path, roi_path, cfg = task
    if clear_path is None:
        return {"id": f"line{lineno}", "error": "malformed manifest line"}
    row = {"id": os.path.splitext(os.path.basename(test_path))[0]}
    try:
        clear = load_image(clear_path)
        test = load_image(test_path)
        mask = load_roi_mask(roi_path) if roi_path else None
        params = cfg.ssim_params()
        hazy = evaluate_pair(clear, test, mask, params)
        enhanced_img = _apply_pipeline(test, cfg)
        enh = evaluate_pair(clear, enhanced_img, mask, params)
    except (IOError, ValueError) as exc:
        row["error"] = str(exc)
        return row
    row.update(
        mse_hazy=hazy.mse, psnr_hazy=hazy.psnr, ssim_hazy=hazy.ssim,
        mse_enhanced=enh.mse, psnr_enhanced=enh.psnr, ssim_enhanced=enh.ssim,
        mse_delta=_delta(enh.mse, hazy.mse),
        psnr_delta=_delta(enh.psnr, hazy.psnr),
        ssim_delta=_delta(enh.ssim, hazy.ssim),
    )
    return row


def _mean_row(rows: list) -> dict:
    mean = {"id": "mean"}
    for col in _METRIC_COLUMNS:
        finite = [r[col] for r in rows if col in r and math.isfinite(r[col])]
        if finite:
            mean[col] = sum(finite) / len(finite)
    return mean


def _write_eval_csv(path: str, rows: list) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(EVAL_COLUMNS)
        for row in rows:
            writer.writerow([row.get("id", "")] +
                            [_fmt(row.get(col)) for col in _METRIC_COLUMNS] +
                            [row.get("error", "")])


def run_evaluate(manifest_path: str, output_csv: str, cfg: RunConfig,
                 roi_dir=None, stderr=sys.stderr) -> int:
    """Score every manifest pair as-is and after enhancement; write a CSV
    of per-pair rows, row-level errors, and a mean row."""
    if not os.path.isfile(manifest_path):
        print(f"evaluate: no such manifest: {manifest_path}", file=stderr)
        return EXIT_IO
    tasks = []
    for lineno, clear_path, test_path, roi_path in _parse_manifest(manifest_path):
        if roi_path is None and roi_dir is not None and test_path is not None:
            candidate = os.path.join(
                roi_dir, os.path.splitext(os.path.basename(test_path))[0] + ".png")
            if os.path.isfile(candidate):
                roi_path = candidate
        tasks.append((lineno, clear_path, test_path, roi_path, cfg))
    if not tasks:
        _write_eval_csv(output_csv, [])
        print("evaluate: manifest lists no pairs", file=stderr)
        return EXIT_EMPTY
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            rows = list(pool.map(_evaluate_one, tasks))
    else:
        rows = [_evaluate_one(t) for t in tasks]
    rows.sort(key=lambda r: r["id"])
    scored = [r for r in rows if "error" not in r]
    for r in rows:
        if "error" in r:
            print(f"evaluate: {r['id']}: {r['error']}", file=stderr)
    if scored:
        rows.append(_mean_row(scored))
    _write_eval_csv(output_csv, rows)
    if not scored:
        print("evaluate: no pair could be scored", file=stderr)
        return EXIT_EMPTY
    return EXIT_OK


def run_synth(input_dir: str, output_dir: str, seed: int, cfg: RunConfig,
              stderr=sys.stderr) -> int:
    """Write a hazy variant of each clear image plus pairs.csv (consumable
    as an evaluate manifest) and params.csv recording the sampled haze."""
    if not os.path.isdir(input_dir):
        print(f"synth: no such directory: {input_dir}", file=stderr)
        return EXIT_IO
    inputs = _list_inputs(input_dir)
    if not inputs:
        print(f"synth: no inputs found in {input_dir}", file=stderr)
        return EXIT_EMPTY
    hazy_dir = os.path.join(output_dir, "hazy")
    os.makedirs(hazy_dir, exist_ok=True)
    rng = np.random.default_rng(seed)
    pair_lines = []
    param_rows = []
    for in_path in inputs:
        stem = os.path.splitext(os.path.basename(in_path))[0]
        t = float(rng.uniform(cfg.synth_t_min, cfg.synth_t_max))
        a = float(rng.uniform(cfg.synth_a_min, cfg.synth_a_max))
        try:
            clear = load_image(in_path)
        except IOError as exc:
            print(f"synth: skipping {in_path}: {exc}", file=stderr)
            continue
        hazy = apply_haze(clear, HazeParams(transmission=t, airlight=(a, a, a)))
        hazy_path = os.path.join(hazy_dir, stem + ".png")
        save_image(hazy, hazy_path)
        pair_lines.append(f"{in_path},{hazy_path}")
        param_rows.append((stem, t, a))
    if not param_rows:
        print("synth: no decodable inputs", file=stderr)
        return EXIT_EMPTY
    with open(os.path.join(output_dir, "pairs.csv"), "w", encoding="utf-8") as f:
        f.write("\n".join(pair_lines) + "\n")
    with open(os.path.join(output_dir, "params.csv"), "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["id", "transmission", "airlight_r", "airlight_g", "airlight_b"])
        for stem, t, a in param_rows:
            writer.writerow([stem, _fmt(t), _fmt(a), _fmt(a), _fmt(a)])
    return EXIT_OK


def _parse_metric(token: str):
    if token == "":
        return None
    if token == "inf":
        return math.inf
    if token == "-inf":
        return -math.inf
    return float(token)


def run_report(input_csv: str, output_csv=None, stdout=sys.stdout, stderr=sys.stderr) -> int:
    """Summarize an evaluation CSV: recompute the mean of each metric over
    finite per-pair values and print (optionally write) the summary."""
    if not os.path.isfile(input_csv):
        print(f"report: no such file: {input_csv}", file=stderr)
        return EXIT_IO
    with open(input_csv, "r", encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        rows = [r for r in reader if r.get("id") not in (None, "", "mean")]
    data = [r for r in rows if not r.get("error")]
    if not data:
        print("report: no scored rows", file=stderr)
        return EXIT_EMPTY
    print(f"pairs scored: {len(data)}", file=stdout)
    mean = {}
    for col in _METRIC_COLUMNS:
        values = [_parse_metric(r.get(col, "")) for r in data]
        finite = [v for v in values if v is not None and math.isfinite(v)]
        if finite:
            mean[col] = sum(finite) / len(finite)
            print(f"mean {col}: {_fmt(mean[col])}", file=stdout)
    if output_csv is not None:
        with open(output_csv, "w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(["id"] + list(_METRIC_COLUMNS))
            writer.writerow(["mean"] + [_fmt(mean.get(col)) for col in _METRIC_COLUMNS])
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that exits with the documented usage code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _parse_tiles(text: str):
    parts = text.lower().split("x")
    try:
        if len(parts) == 1:
            n = int(parts[0])
            return n, n
        if len(parts) == 2:
            return int(parts[0]), int(parts[1])
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected N or NXxNY tile counts, got {text!r}")


def _add_tunable_flags(parser) -> None:
    parser.add_argument("--config", help="config file (flat key = value format)")
    parser.add_argument("--gamma-threshold", type=float,
                        help="mean-intensity threshold picking the gamma set")
    parser.add_argument("--clip-limit", type=float, help="CLAHE relative clip factor")
    parser.add_argument("--tiles", type=_parse_tiles, metavar="TXxTY",
                        help="CLAHE tile grid, e.g. 8x8")
    parser.add_argument("--dmin", type=float,
                        help="just-noticeable channel difference in dB")
    parser.add_argument("--levels", help="pyramid depth (integer or 'auto')")
    parser.add_argument("--jobs", type=int, help="parallel workers across images")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hazefuse",
                     description="Multi-exposure fusion image enhancement toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("enhance", help="enhance a file or directory of images")
    p.add_argument("--input", required=True, help="input image file or directory")
    p.add_argument("--output", required=True, help="output directory")
    p.add_argument("--dump-maps", action="store_true",
                   help="also write texture/saturation/weight and pyramid-level maps")
    _add_tunable_flags(p)

    p = sub.add_parser("evaluate", help="score manifest pairs into a CSV report")
    p.add_argument("--input", required=True,
                   help="manifest of clear_path,test_path[,roi_path] lines")
    p.add_argument("--output", required=True, help="output CSV path")
    p.add_argument("--roi-dir", help="directory of <test-stem>.png ROI masks")
    _add_tunable_flags(p)

    p = sub.add_parser("synth", help="generate synthetic hazy variants")
    p.add_argument("--input", required=True, help="directory of clear images")
    p.add_argument("--output", required=True, help="output directory")
    p.add_argument("--seed", type=int, required=True, help="random seed")
    _add_tunable_flags(p)

    p = sub.add_parser("report", help="summarize an evaluation CSV")
    p.add_argument("--input", required=True, help="evaluation CSV to summarize")
    p.add_argument("--output", help="optional summary CSV path")
    return parser


def _build_config(args) -> RunConfig:
    cfg = RunConfig()
    if getattr(args, "config", None):
        cfg = config_mod.load(args.config)
    tiles = getattr(args, "tiles", None)
    cfg = config_mod.override(
        cfg,
        gamma_threshold=getattr(args, "gamma_threshold", None),
        clip_limit=getattr(args, "clip_limit", None),
        tiles_x=tiles[0] if tiles else None,
        tiles_y=tiles[1] if tiles else None,
        dmin=getattr(args, "dmin", None),
        jobs=getattr(args, "jobs", None),
    )
    levels = getattr(args, "levels", None)
    if levels is not None:
        cfg = replace(cfg, levels=None if levels.lower() == "auto" else int(levels))
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "report":
            return run_report(args.input, args.output)
        cfg = _build_config(args)
    except (ValueError, argparse.ArgumentTypeError) as exc:
        print(f"hazefuse: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"hazefuse: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        if args.command == "enhance":
            return run_enhance(args.input, args.output, cfg, dump_maps=args.dump_maps)
        if args.command == "evaluate":
            return run_evaluate(args.input, args.output, cfg, roi_dir=args.roi_dir)
        if args.command == "synth":
            return run_synth(args.input, args.output, args.seed, cfg)
    except OSError as exc:
        print(f"hazefuse: {exc}", file=sys.stderr)
        return EXIT_IO
    raise AssertionError(f"unhandled command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
