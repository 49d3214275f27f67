"""Command line behavior: round trips, CSV side outputs, exit codes."""

import csv
from pathlib import Path

import numpy as np
import pytest

from rsvlc.cli import main
from rsvlc.pgm import write_pgm

SCENES = Path(__file__).parent.parent / "scenes"


def test_simulate_then_decode_two_led(tmp_path, capsys):
    img = tmp_path / "cap.pgm"
    assert main(["simulate", str(SCENES / "two_led.scene"), "-o", str(img)]) == 0
    out = capsys.readouterr().out
    assert "samples per bit: 8" in out
    assert "rows per frame: 224" in out
    assert "capture capacity: 128 bits" in out
    assert f"wrote {img} (1024 x 512)" in out

    assert main(["decode", str(img), "-b", "8"]) == 0
    out = capsys.readouterr().out
    assert "message: a55a" in out
    assert "mirrored: no" in out
    region_lines = [l for l in out.splitlines() if l.startswith("region ")]
    assert len(region_lines) == 2
    assert "parity Even, payload 0xa5" in region_lines[0]
    assert "parity Odd, payload 0x5a" in region_lines[1]


def test_simulate_then_decode_four_led(tmp_path, capsys):
    img = tmp_path / "cap.pgm"
    assert main(["simulate", str(SCENES / "four_led.scene"), "-o", str(img)]) == 0
    capsys.readouterr()
    assert main(["decode", str(img), "-b", "8"]) == 0
    out = capsys.readouterr().out
    assert "message: cafebabe" in out
    assert len([l for l in out.splitlines() if l.startswith("region ")]) == 4


def test_decode_writes_csv_sidecars(tmp_path, capsys):
    img = tmp_path / "cap.pgm"
    main(["simulate", str(SCENES / "two_led.scene"), "-o", str(img)])
    prof = tmp_path / "prof.csv"
    sig = tmp_path / "sig.csv"
    rc = main(
        [
            "decode",
            str(img),
            "-b",
            "8",
            "--profile-csv",
            str(prof),
            "--signals-csv",
            str(sig),
        ]
    )
    capsys.readouterr()
    assert rc == 0
    with open(prof, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["col_index", "energy"]
    assert len(rows) > 100
    # one lit area, two regions: profile has no sibling, signals get one
    assert not (tmp_path / "prof_1.csv").exists()
    assert sig.exists()
    assert (tmp_path / "sig_1.csv").exists()


def test_simulate_rejects_bad_scene(tmp_path, capsys):
    scene = tmp_path / "bad.scene"
    scene.write_text(
        "period = 8\nrows = 448\ncols = 64\npixel_pitch = 0.5\n"
        "led: x=0 h=40 payload=1\n"
    )
    assert main(["simulate", str(scene), "-o", str(tmp_path / "x.pgm")]) == 2
    assert capsys.readouterr().err.startswith("error:")


def test_simulate_missing_scene(tmp_path, capsys):
    rc = main(["simulate", str(tmp_path / "nope.scene"), "-o", str(tmp_path / "x.pgm")])
    assert rc == 2
    assert "cannot read scene file" in capsys.readouterr().err


def test_decode_missing_image(tmp_path, capsys):
    assert main(["decode", str(tmp_path / "nope.pgm"), "-b", "8"]) == 2
    assert "cannot read image" in capsys.readouterr().err


def test_decode_rejects_non_pgm(tmp_path, capsys):
    path = tmp_path / "junk.pgm"
    path.write_text("not an image\n")
    assert main(["decode", str(path), "-b", "8"]) == 2
    assert "bad PGM file" in capsys.readouterr().err


def test_decode_blank_image(tmp_path, capsys):
    path = tmp_path / "dark.pgm"
    write_pgm(path, np.zeros((300, 100)))
    assert main(["decode", str(path), "-b", "8"]) == 3
    assert "NoLightSource" in capsys.readouterr().err


def test_decode_truncated_image(tmp_path, capsys, two_led_image):
    path = tmp_path / "short.pgm"
    write_pgm(path, two_led_image[:112])
    assert main(["decode", str(path), "-b", "8"]) == 3
    assert "RegionTooShort" in capsys.readouterr().err


def test_sweep_counts_regimes(tmp_path, capsys):
    out_csv = tmp_path / "sweep.csv"
    rc = main(["sweep", "--heights", "50", "--spacings", "10,50", "-o", str(out_csv)])
    out = capsys.readouterr().out
    assert rc == 0
    assert f"wrote {out_csv} (2 points)" in out
    assert "PointSource: 1" in out
    assert "Separable: 1" in out
    with open(out_csv, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0][:4] == ["h", "d_xy", "ratio", "E_min"]
    assert len(rows) == 3


def test_sweep_empty_grid(tmp_path, capsys):
    rc = main(["sweep", "--heights", ",", "--spacings", "10", "-o", str(tmp_path / "s.csv")])
    assert rc == 2
    assert "sweep grid is empty" in capsys.readouterr().err


def test_sweep_bad_number(tmp_path, capsys):
    rc = main(["sweep", "--heights", "abc", "--spacings", "10", "-o", str(tmp_path / "s.csv")])
    assert rc == 2
    assert "comma-separated numbers" in capsys.readouterr().err


def test_sweep_nonpositive_height(tmp_path, capsys):
    rc = main(["sweep", "--heights", "0", "--spacings", "10", "-o", str(tmp_path / "s.csv")])
    assert rc == 2
    assert "must be positive" in capsys.readouterr().err


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as info:
        main(["--version"])
    assert info.value.code == 0
    assert "rsvlc 0.1.0" in capsys.readouterr().out


def test_missing_command_is_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        main([])
    assert info.value.code == 2
