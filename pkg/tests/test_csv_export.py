"""Deterministic CSV rendering and atomic writes."""

import pytest

from src.cli.csv_export import format_value, metadata_line, render_csv, write_text
from src.core.config import make_config
from src.core.error_codes import ErrorCode
from src.core.exceptions import LabError
from src.core.schemas import Branch, Parity


@pytest.mark.parametrize(
    "value, expected",
    [
        (True, "true"),
        (0.0, "0"),
        (-0.0, "0"),
        (0.1, "0.1"),
        (1.0 / 3.0, "0.333333333333"),
        (1e-20, "1e-20"),
        (7, "7"),
        (None, ""),
        (Branch.MINUS, "minus"),
        (Parity.EVEN, "even"),
    ],
)
def test_format_value(value, expected):
    assert format_value(value) == expected


def test_metadata_line_order():
    line = metadata_line(make_config({"gamma": "pi/2"}), ["q", "re"], {"n": 3})
    fields = line.split()
    assert fields[0] == "#"
    keys = [field.split("=")[0] for field in fields[1:]]
    assert keys == [
        "length_l",
        "mass_mu",
        "hbar",
        "gamma",
        "basis_cutoff",
        "grid_points",
        "root_tolerance",
        "n",
        "columns",
    ]
    assert fields[-1] == "columns=q,re"


def test_render_csv():
    text = render_csv(("n", "tau"), [(1, 0.25), (2, 0.125)], make_config())
    lines = text.split("\n")
    assert lines[0].startswith("# ")
    assert lines[1:] == ["n,tau", "1,0.25", "2,0.125", ""]
    assert "\r" not in text


def test_write_text_replaces_target(tmp_path):
    target = tmp_path / "out.csv"
    target.write_text("old")
    write_text("new\n", target)
    assert target.read_text() == "new\n"
    assert sorted(p.name for p in tmp_path.iterdir()) == ["out.csv"]


def test_write_text_to_stdout(capsys):
    write_text("a,b\n", None)
    assert capsys.readouterr().out == "a,b\n"


def test_unwritable_target(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(LabError) as exc:
        write_text("data", blocker / "child.csv")
    assert exc.value.error_code is ErrorCode.FILE_SYSTEM_ERROR
