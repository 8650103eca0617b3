"""Tests for the angle grammar and contexts-file parsing."""

import math

import pytest

from eprb_lab.config import (
    AngleParseError,
    load_contexts_file,
    parse_angle,
    parse_angle_list,
    parse_contexts_text,
)


@pytest.mark.parametrize(
    "text,expected",
    [
        ("0", 0.0),
        ("pi", math.pi),
        ("pi/2", math.pi / 2),
        ("pi/4", math.pi / 4),
        ("3pi/4", 3 * math.pi / 4),
        ("3*pi/4", 3 * math.pi / 4),
        ("2*pi/3", 2 * math.pi / 3),
        ("0.5pi", math.pi / 2),
        ("PI/2", math.pi / 2),
        ("π/4", math.pi / 4),
        ("-pi/2", 3 * math.pi / 2),
        ("1.5", 1.5),
        (" 2 ", 2.0),
        ("2pi", 0.0),
    ],
)
def test_parse_angle_grammar(text, expected):
    assert parse_angle(text) == pytest.approx(expected, abs=1e-15)


def test_parse_angle_accepts_numbers():
    assert parse_angle(1.25) == 1.25
    assert parse_angle(-math.pi / 2) == 3 * math.pi / 2
    assert parse_angle(7) == pytest.approx(7.0 - 2 * math.pi, abs=1e-15)


@pytest.mark.parametrize("bad", ["x", "", "pi/0", "pi/2 junk", "2+pi", "--pi", "pipi"])
def test_parse_angle_rejects_malformed(bad):
    with pytest.raises(AngleParseError):
        parse_angle(bad)


def test_parse_angle_list():
    angles = parse_angle_list("0,pi/2,pi/4,3pi/4")
    assert angles == (0.0, math.pi / 2, math.pi / 4, 3 * math.pi / 4)


def test_parse_angle_list_arity():
    with pytest.raises(AngleParseError) as err:
        parse_angle_list("0,pi/2")
    assert "4" in str(err.value)


def test_parse_contexts_text():
    pairs = parse_contexts_text("theta,phi\n0,pi/2\npi/4,3pi/4\n")
    assert pairs == (
        (0.0, math.pi / 2),
        (math.pi / 4, 3 * math.pi / 4),
    )


def test_parse_contexts_requires_header():
    with pytest.raises(AngleParseError) as err:
        parse_contexts_text("0,pi/2\n")
    assert "theta,phi" in str(err.value)


def test_parse_contexts_reports_line_numbers():
    with pytest.raises(AngleParseError) as err:
        parse_contexts_text("theta,phi\n0,pi/2\nbogus,1\n")
    assert "line 3" in str(err.value)


def test_parse_contexts_rejects_empty():
    with pytest.raises(AngleParseError):
        parse_contexts_text("")
    with pytest.raises(AngleParseError):
        parse_contexts_text("theta,phi\n")


def test_load_contexts_file(tmp_path):
    path = tmp_path / "ctx.csv"
    path.write_text("theta,phi\n0.3,1.1\n")
    assert load_contexts_file(str(path)) == ((0.3, 1.1),)
    with pytest.raises(AngleParseError) as err:
        load_contexts_file(str(tmp_path / "missing.csv"))
    assert "missing.csv" in str(err.value)
