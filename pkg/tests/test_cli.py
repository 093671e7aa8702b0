"""
Tests for the command-line front end, polygon files and persistence
"""
import json
import math

import pytest

from circsep import __version__
from circsep.cli import (EXIT_ERROR, EXIT_NOT_SEPARABLE, EXIT_OK, answer_inscribed, format_polygon,
                         load_preprocessed, main, parse_polygon_text, read_polygon, run_bench, save_preprocessed)
from circsep.errors import PersistenceError, PolygonFileError
from circsep.geom_core import Line2, Point2, Polygon
from circsep.inscribed import preprocess

from tests.conftest import BAR, C_SHAPE, FAR_TRIANGLE, SQUARE, UNIT_SQUARE


def _write(tmp_path, name, coords):
    path = tmp_path / name
    path.write_text(format_polygon(Polygon.from_coords(coords)))
    return str(path)


def _record(capsys):
    return json.loads(capsys.readouterr().out.strip().splitlines()[-1])


# ========== Polygon files ==========

def test_parse_polygon_text():
    pts = parse_polygon_text("\n3\n0 0\n1 0\n\n0 1\n")
    assert pts == [Point2(0.0, 0.0), Point2(1.0, 0.0), Point2(0.0, 1.0)]


@pytest.mark.parametrize("text, line", [
    ("", 1),
    ("three\n0 0\n1 0\n0 1\n", 1),
    ("2\n0 0\n1 0\n", 1),
    ("3\n0 0\n1 0\n", 4),
    ("3\n0 0\n1 x\n0 1\n", 3),
    ("3\n0 0\n1 0 2\n0 1\n", 3),
    ("\n\n3\n0 0\n1 0\n0 1\n5 5\n", 7),
])
def test_parse_errors_name_the_line(text, line):
    with pytest.raises(PolygonFileError) as info:
        parse_polygon_text(text)
    assert info.value.line == line
    assert f"line {line}" in str(info.value)


def test_polygon_file_round_trip(tmp_path):
    path = _write(tmp_path, "c.txt", C_SHAPE)
    poly = read_polygon(path)
    assert [p.as_tuple() for p in poly] == [tuple(map(float, c)) for c in C_SHAPE]


# ========== Persistence ==========

def test_preprocessed_round_trip(tmp_path, square_pp):
    path = str(tmp_path / "square.csep")
    save_preprocessed(square_pp, path)
    loaded = load_preprocessed(path)
    assert loaded.incircle.radius == pytest.approx(1.0)
    assert loaded.polygon.coords.tolist() == square_pp.polygon.coords.tolist()


@pytest.mark.parametrize("mutate", [
    lambda data: b"XXXX" + data[4:],
    lambda data: data[:4] + b"2" + data[5:],
    lambda data: data[:-3],
    lambda data: data[:6],
])
def test_corrupt_files_are_rejected(tmp_path, square_pp, mutate):
    path = tmp_path / "square.csep"
    save_preprocessed(square_pp, str(path))
    path.write_bytes(mutate(path.read_bytes()))
    with pytest.raises(PersistenceError):
        load_preprocessed(str(path))


# ========== Commands ==========

def test_separate_far_pair(tmp_path, capsys):
    p, q = _write(tmp_path, "p.txt", UNIT_SQUARE), _write(tmp_path, "q.txt", FAR_TRIANGLE)
    assert main(["separate", p, q]) == EXIT_OK
    record = _record(capsys)
    assert record["kind"] == "circle"
    assert record["circle"]["radius"] == pytest.approx(math.sqrt(0.5))


def test_separate_interlocked_pair(tmp_path, capsys):
    p, q = _write(tmp_path, "p.txt", C_SHAPE), _write(tmp_path, "q.txt", BAR)
    svg = tmp_path / "out.svg"
    assert main(["separate", p, q, "--svg", str(svg)]) == EXIT_NOT_SEPARABLE
    assert _record(capsys)["kind"] == "not_separable"
    assert svg.exists()


def test_separate_missing_file(tmp_path, capsys):
    p = _write(tmp_path, "p.txt", UNIT_SQUARE)
    assert main(["separate", p, str(tmp_path / "missing.txt")]) == EXIT_ERROR
    assert "ERROR" in capsys.readouterr().err


def test_separate_bad_file(tmp_path, capsys):
    p = _write(tmp_path, "p.txt", UNIT_SQUARE)
    bad = tmp_path / "bad.txt"
    bad.write_text("3\n0 0\n1 0\n")
    assert main(["separate", p, str(bad)]) == EXIT_ERROR
    assert "line 4" in capsys.readouterr().err


def test_inscribe_point_and_line(tmp_path, capsys):
    square = _write(tmp_path, "square.txt", SQUARE)
    assert main(["inscribe", square, "--point", "0.1,0.9", "--line", "1,0,0"]) == EXIT_OK
    record = _record(capsys)
    assert record["case"] == "parabola"
    assert record["circle"]["radius"] == pytest.approx(0.1 * (2.0 + math.sqrt(2.0)), rel=1e-9)


def test_inscribe_outside_point_is_infeasible(tmp_path, capsys):
    square = _write(tmp_path, "square.txt", SQUARE)
    assert main(["inscribe", square, "--point", "3,0"]) == EXIT_OK
    assert _record(capsys)["kind"] == "infeasible"


def test_inscribe_rejects_non_convex(tmp_path):
    c_shape = _write(tmp_path, "c.txt", C_SHAPE)
    assert main(["inscribe", c_shape]) == EXIT_ERROR


def test_inscribe_with_saved_structure(tmp_path, capsys):
    square = _write(tmp_path, "square.txt", SQUARE)
    saved = str(tmp_path / "square.csep")
    assert main(["inscribe", square, "--preprocess-out", saved]) == EXIT_OK
    assert _record(capsys)["case"] == "incircle"
    assert main(["inscribe", "--preprocess-in", saved, "--line", "1,0,0", "--line", "0,1,0"]) == EXIT_OK
    assert _record(capsys)["circle"]["center"] == pytest.approx([0.5, 0.5])


def test_inscribe_needs_a_polygon():
    assert main(["inscribe", "--point", "0,0"]) == EXIT_ERROR


def test_wrong_side_point_is_an_error(tmp_path, capsys):
    square = _write(tmp_path, "square.txt", SQUARE)
    assert main(["inscribe", square, "--point", "-0.5,0", "--line", "1,0,0"]) == EXIT_ERROR
    assert "negative side" in capsys.readouterr().err


@pytest.mark.parametrize("points, lines", [
    ([], [Line2(1, 0, 0)] * 3),
    ([Point2(0, 0), Point2(0.1, 0)], [Line2(1, 0, 0)]),
    ([Point2(0, 0)], [Line2(1, 0, 0), Line2(0, 1, 0)]),
])
def test_unsupported_constraint_mixes(square_pp, points, lines):
    with pytest.raises(ValueError):
        answer_inscribed(square_pp, points, lines)


def test_bad_argument_syntax(tmp_path):
    square = _write(tmp_path, "square.txt", SQUARE)
    assert main(["inscribe", square, "--point", "1;2"]) == EXIT_ERROR
    assert main([]) == EXIT_ERROR


def test_version(capsys):
    assert main(["--version"]) == EXIT_OK
    assert __version__ in capsys.readouterr().out


def test_bench_without_sizes(capsys):
    assert main(["bench"]) == EXIT_OK
    assert capsys.readouterr().out.split() == ["n", "separate_ms", "ratio", "point_us", "ratio",
                                              "halfplane_us", "ratio", "wedge_us", "ratio"]


def test_run_bench_rows():
    rows = run_bench([16, 32], reps=1)
    assert [r["n"] for r in rows] == [16, 32]
    for row in rows:
        assert row["separate_s"] > 0.0
        assert all(row[key] > 0.0 for key in ("query_point_s", "query_halfplane_s", "query_wedge_s"))


def test_bench_table_has_a_ratio_per_query(capsys):
    assert main(["bench", "--sizes", "16,32", "--reps", "1"]) == EXIT_OK
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 3
    assert len(lines[2].split()) == 9
    assert lines[1].split()[2] == "nan"


def test_answer_without_constraints_is_the_incircle():
    pp = preprocess(SQUARE)
    assert answer_inscribed(pp, [], []).circle.radius == pytest.approx(1.0)
