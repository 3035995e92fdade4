import csv
import io
import math
import os

import numpy as np
import pytest

from hazefuse.cli import (
    EVAL_COLUMNS,
    EXIT_EMPTY,
    EXIT_IO,
    EXIT_OK,
    EXIT_USAGE,
    main,
    run_enhance,
    run_evaluate,
    run_report,
    run_synth,
)
from hazefuse.config import RunConfig, serialize
from hazefuse.image import load_image, save_image


def _write_images(directory, count=3, size=16, seed=0):
    rng = np.random.default_rng(seed)
    os.makedirs(directory, exist_ok=True)
    paths = []
    for i in range(count):
        path = os.path.join(directory, f"img_{i}.png")
        save_image(rng.random((size, size, 3)), path)
        paths.append(path)
    return paths


def _read_rows(csv_path):
    with open(csv_path, newline="") as f:
        return list(csv.DictReader(f))


def test_enhance_directory(tmp_path, capsys):
    src = tmp_path / "in"
    out = tmp_path / "out"
    _write_images(src, count=3)
    assert run_enhance(str(src), str(out), RunConfig()) == EXIT_OK
    names = sorted(os.listdir(out))
    assert names == ["img_0.png", "img_1.png", "img_2.png"]


def test_enhance_single_file(tmp_path):
    paths = _write_images(tmp_path / "in", count=1)
    out = tmp_path / "out"
    assert run_enhance(paths[0], str(out), RunConfig()) == EXIT_OK
    assert os.listdir(out) == ["img_0.png"]


def test_enhance_empty_directory(tmp_path):
    src = tmp_path / "empty"
    src.mkdir()
    assert run_enhance(str(src), str(tmp_path / "out"), RunConfig()) == EXIT_EMPTY


def test_enhance_missing_input(tmp_path):
    assert run_enhance(str(tmp_path / "nope"), str(tmp_path / "out"), RunConfig()) == EXIT_IO


def test_enhance_skips_undecodable(tmp_path, capsys):
    src = tmp_path / "in"
    _write_images(src, count=2)
    (src / "junk.png").write_bytes(b"not a png")
    out = tmp_path / "out"
    assert run_enhance(str(src), str(out), RunConfig()) == EXIT_OK
    assert sorted(os.listdir(out)) == ["img_0.png", "img_1.png"]


def test_enhance_skips_images_too_small_for_config(tmp_path):
    src = tmp_path / "in"
    _write_images(src, count=1, size=16)
    save_image(np.full((4, 4, 3), 0.5), src / "tiny.png")  # under the 8x8 tile grid
    out = tmp_path / "out"
    assert run_enhance(str(src), str(out), RunConfig()) == EXIT_OK
    assert sorted(os.listdir(out)) == ["img_0.png"]


def test_enhance_all_undecodable(tmp_path):
    src = tmp_path / "in"
    src.mkdir()
    (src / "junk.png").write_bytes(b"nope")
    assert run_enhance(str(src), str(tmp_path / "out"), RunConfig()) == EXIT_EMPTY


def test_enhance_deterministic(tmp_path):
    src = tmp_path / "in"
    _write_images(src, count=2)
    out1, out2 = tmp_path / "o1", tmp_path / "o2"
    run_enhance(str(src), str(out1), RunConfig())
    run_enhance(str(src), str(out2), RunConfig())
    for name in os.listdir(out1):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


def test_enhance_parallel_matches_serial(tmp_path):
    src = tmp_path / "in"
    _write_images(src, count=3)
    serial, parallel = tmp_path / "s", tmp_path / "p"
    run_enhance(str(src), str(serial), RunConfig())
    run_enhance(str(src), str(parallel), RunConfig(jobs=2))
    for name in os.listdir(serial):
        assert (serial / name).read_bytes() == (parallel / name).read_bytes()


def test_enhance_dump_maps(tmp_path):
    src = tmp_path / "in"
    _write_images(src, count=1)
    out = tmp_path / "out"
    assert run_enhance(str(src), str(out), RunConfig(), dump_maps=True) == EXIT_OK
    map_dir = out / "maps" / "img_0"
    names = set(os.listdir(map_dir))
    for k in range(5):
        assert {f"texture_{k}.png", f"saturation_{k}.png", f"weight_{k}.png"} <= names
    assert "residual.png" in names


def test_evaluate_identical_pair(tmp_path):
    rng = np.random.default_rng(1)
    img_path = tmp_path / "x.png"
    save_image(rng.random((16, 16, 3)), img_path)
    manifest = tmp_path / "pairs.csv"
    manifest.write_text(f"{img_path},{img_path}\n")
    out_csv = tmp_path / "report.csv"
    assert run_evaluate(str(manifest), str(out_csv), RunConfig()) == EXIT_OK
    rows = _read_rows(out_csv)
    assert [r["id"] for r in rows] == ["x", "mean"]
    row = rows[0]
    assert row["mse_hazy"] == "0"
    assert row["psnr_hazy"] == "inf"
    assert row["ssim_hazy"] == "1"
    assert row["psnr_delta"] == "-inf"
    # mean row carries only columns with finite values
    assert rows[1]["psnr_hazy"] == ""
    assert float(rows[1]["mse_hazy"]) == 0.0


def test_evaluate_empty_manifest(tmp_path):
    manifest = tmp_path / "pairs.csv"
    manifest.write_text("# nothing here\n")
    out_csv = tmp_path / "report.csv"
    assert run_evaluate(str(manifest), str(out_csv), RunConfig()) == EXIT_EMPTY
    with open(out_csv) as f:
        lines = f.read().splitlines()
    assert lines == [",".join(EVAL_COLUMNS)]


def test_evaluate_row_error_keeps_going(tmp_path):
    rng = np.random.default_rng(2)
    img_path = tmp_path / "ok.png"
    save_image(rng.random((16, 16, 3)), img_path)
    manifest = tmp_path / "pairs.csv"
    manifest.write_text(f"{tmp_path}/missing.png,{tmp_path}/gone.png\n"
                        f"{img_path},{img_path}\n")
    out_csv = tmp_path / "report.csv"
    assert run_evaluate(str(manifest), str(out_csv), RunConfig()) == EXIT_OK
    rows = _read_rows(out_csv)
    by_id = {r["id"]: r for r in rows}
    assert by_id["gone"]["error"] != ""
    assert by_id["gone"]["mse_hazy"] == ""
    assert by_id["ok"]["error"] == ""


def test_evaluate_mean_row_is_arithmetic_mean(tmp_path):
    src = tmp_path / "clear"
    _write_images(src, count=3, size=24, seed=6)
    synth_dir = tmp_path / "synth"
    run_synth(str(src), str(synth_dir), 5, RunConfig())
    out_csv = tmp_path / "report.csv"
    assert run_evaluate(str(synth_dir / "pairs.csv"), str(out_csv), RunConfig()) == EXIT_OK
    rows = _read_rows(out_csv)
    data, mean_row = rows[:-1], rows[-1]
    assert mean_row["id"] == "mean"
    for col in ("mse_hazy", "ssim_hazy", "ssim_enhanced", "psnr_delta"):
        values = [float(r[col]) for r in data]
        assert float(mean_row[col]) == pytest.approx(sum(values) / len(values), rel=1e-4)


def test_evaluate_parallel_matches_serial(tmp_path):
    src = tmp_path / "clear"
    _write_images(src, count=3, size=16, seed=8)
    synth_dir = tmp_path / "synth"
    run_synth(str(src), str(synth_dir), 9, RunConfig())
    serial_csv, parallel_csv = tmp_path / "serial.csv", tmp_path / "parallel.csv"
    assert run_evaluate(str(synth_dir / "pairs.csv"), str(serial_csv), RunConfig()) == EXIT_OK
    assert run_evaluate(str(synth_dir / "pairs.csv"), str(parallel_csv), RunConfig(jobs=2)) == EXIT_OK
    assert serial_csv.read_bytes() == parallel_csv.read_bytes()


def test_evaluate_malformed_line_recorded(tmp_path):
    rng = np.random.default_rng(7)
    img_path = tmp_path / "ok.png"
    save_image(rng.random((16, 16, 3)), img_path)
    manifest = tmp_path / "pairs.csv"
    manifest.write_text(f"only_one_field\n{img_path},{img_path}\n")
    out_csv = tmp_path / "report.csv"
    assert run_evaluate(str(manifest), str(out_csv), RunConfig()) == EXIT_OK
    by_id = {r["id"]: r for r in _read_rows(out_csv)}
    assert by_id["line1"]["error"] == "malformed manifest line"


def test_evaluate_all_rows_fail(tmp_path):
    manifest = tmp_path / "pairs.csv"
    manifest.write_text("a.png,b.png\n")
    assert run_evaluate(str(manifest), str(tmp_path / "r.csv"), RunConfig()) == EXIT_EMPTY


def test_evaluate_rows_sorted_by_id(tmp_path):
    rng = np.random.default_rng(3)
    paths = {}
    for name in ("zeta", "alpha"):
        p = tmp_path / f"{name}.png"
        save_image(rng.random((16, 16, 3)), p)
        paths[name] = p
    manifest = tmp_path / "pairs.csv"
    manifest.write_text(f"{paths['zeta']},{paths['zeta']}\n"
                        f"{paths['alpha']},{paths['alpha']}\n")
    out_csv = tmp_path / "report.csv"
    run_evaluate(str(manifest), str(out_csv), RunConfig())
    assert [r["id"] for r in _read_rows(out_csv)] == ["alpha", "zeta", "mean"]


def test_evaluate_with_roi(tmp_path):
    rng = np.random.default_rng(4)
    clear = rng.random((16, 16, 3))
    test = clear.copy()
    test[8:] = rng.random((8, 16, 3))  # damage outside the ROI
    clear_path, test_path = tmp_path / "c.png", tmp_path / "t.png"
    save_image(clear, clear_path)
    save_image(test, test_path)
    mask = np.zeros((16, 16, 3))
    mask[:8] = 1.0
    mask_path = tmp_path / "mask.png"
    save_image(mask, mask_path)
    manifest = tmp_path / "pairs.csv"
    manifest.write_text(f"{clear_path},{test_path},{mask_path}\n")
    out_csv = tmp_path / "report.csv"
    assert run_evaluate(str(manifest), str(out_csv), RunConfig()) == EXIT_OK
    row = _read_rows(out_csv)[0]
    assert row["mse_hazy"] == "0"  # identical inside the ROI


def test_evaluate_roi_dir_lookup(tmp_path):
    rng = np.random.default_rng(5)
    clear = rng.random((16, 16, 3))
    test = clear.copy()
    test[8:] = rng.random((8, 16, 3))
    clear_path, test_path = tmp_path / "c.png", tmp_path / "pairX.png"
    save_image(clear, clear_path)
    save_image(test, test_path)
    roi_dir = tmp_path / "rois"
    roi_dir.mkdir()
    mask = np.zeros((16, 16, 3))
    mask[:8] = 1.0
    save_image(mask, roi_dir / "pairX.png")
    manifest = tmp_path / "pairs.csv"
    manifest.write_text(f"{clear_path},{test_path}\n")
    out_csv = tmp_path / "report.csv"
    run_evaluate(str(manifest), str(out_csv), RunConfig(), roi_dir=str(roi_dir))
    assert _read_rows(out_csv)[0]["mse_hazy"] == "0"


def test_synth_deterministic_manifests(tmp_path):
    src = tmp_path / "clear"
    _write_images(src, count=3)
    out1, out2 = tmp_path / "s1", tmp_path / "s2"
    assert run_synth(str(src), str(out1), 99, RunConfig()) == EXIT_OK
    assert run_synth(str(src), str(out2), 99, RunConfig()) == EXIT_OK
    assert (out1 / "pairs.csv").read_text().count("\n") == 3
    for name in ("params.csv",):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()
    for name in os.listdir(out1 / "hazy"):
        assert (out1 / "hazy" / name).read_bytes() == (out2 / "hazy" / name).read_bytes()


def test_synth_different_seed_changes_params(tmp_path):
    src = tmp_path / "clear"
    _write_images(src, count=2)
    out1, out2 = tmp_path / "s1", tmp_path / "s2"
    run_synth(str(src), str(out1), 1, RunConfig())
    run_synth(str(src), str(out2), 2, RunConfig())
    assert (out1 / "params.csv").read_text() != (out2 / "params.csv").read_text()


def test_synth_unit_transmission_preserves_image(tmp_path):
    src = tmp_path / "clear"
    paths = _write_images(src, count=1)
    out = tmp_path / "synth"
    cfg = RunConfig(synth_t_min=1.0, synth_t_max=1.0)
    run_synth(str(src), str(out), 7, cfg)
    clear = load_image(paths[0])
    hazy = load_image(out / "hazy" / "img_0.png")
    assert np.abs(hazy - clear).max() <= 1.0 / 510.0 + 1e-12


def test_synth_empty_and_missing(tmp_path):
    empty = tmp_path / "none"
    empty.mkdir()
    assert run_synth(str(empty), str(tmp_path / "o"), 0, RunConfig()) == EXIT_EMPTY
    assert run_synth(str(tmp_path / "missing"), str(tmp_path / "o"), 0, RunConfig()) == EXIT_IO


def test_report_summary(tmp_path):
    src = tmp_path / "clear"
    _write_images(src, count=2, size=24)
    synth_dir = tmp_path / "synth"
    run_synth(str(src), str(synth_dir), 3, RunConfig())
    eval_csv = tmp_path / "eval.csv"
    assert run_evaluate(str(synth_dir / "pairs.csv"), str(eval_csv), RunConfig()) == EXIT_OK
    out = io.StringIO()
    summary_csv = tmp_path / "summary.csv"
    assert run_report(str(eval_csv), str(summary_csv), stdout=out) == EXIT_OK
    text = out.getvalue()
    assert "pairs scored: 2" in text
    assert "mean ssim_hazy" in text
    rows = _read_rows(summary_csv)
    assert rows[0]["id"] == "mean"
    # summary mean matches the evaluate mean row
    eval_mean = [r for r in _read_rows(eval_csv) if r["id"] == "mean"][0]
    assert math.isclose(float(rows[0]["mse_hazy"]), float(eval_mean["mse_hazy"]),
                        rel_tol=1e-4)


def test_report_errors(tmp_path):
    assert run_report(str(tmp_path / "missing.csv")) == EXIT_IO
    empty = tmp_path / "empty.csv"
    empty.write_text(",".join(EVAL_COLUMNS) + "\n")
    assert run_report(str(empty)) == EXIT_EMPTY


def test_main_usage_errors():
    assert main([]) == EXIT_USAGE
    assert main(["enhance"]) == EXIT_USAGE
    assert main(["enhance", "--input", "x", "--output", "y", "--bogus"]) == EXIT_USAGE
    assert main(["enhance", "--input", "x", "--output", "y", "--tiles", "huh"]) == EXIT_USAGE


def test_main_dispatch_and_flag_precedence(tmp_path):
    src = tmp_path / "in"
    _write_images(src, count=1)
    # config file asks for an absurd clip limit; the flag must win
    cfg_path = tmp_path / "run.cfg"
    cfg_path.write_text(serialize(RunConfig(clip_limit=50.0, levels=2)))
    out = tmp_path / "out"
    code = main(["enhance", "--input", str(src), "--output", str(out),
                 "--config", str(cfg_path), "--clip-limit", "2.0",
                 "--tiles", "4x4", "--levels", "auto", "--dmin", "0.5"])
    assert code == EXIT_OK
    assert os.listdir(out) == ["img_0.png"]


def test_main_bad_config_usage_error(tmp_path):
    cfg_path = tmp_path / "run.cfg"
    cfg_path.write_text("who_knows = 7\n")
    code = main(["enhance", "--input", str(tmp_path), "--output",
                 str(tmp_path / "o"), "--config", str(cfg_path)])
    assert code == EXIT_USAGE


def test_main_missing_config_io_error(tmp_path):
    code = main(["enhance", "--input", str(tmp_path), "--output",
                 str(tmp_path / "o"), "--config", str(tmp_path / "nope.cfg")])
    assert code == EXIT_IO
