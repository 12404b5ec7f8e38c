import json

import pytest

from file_handler import (ball_config_from_dict, dump_json,
                          finite_configuration_from_dict, parse_background,
                          write_json)
from ground import PeriodicGroundState
from group import IDENTITY, GroupWord
from model import BallConfig, ConstantBackground


def test_dump_json_is_indented_with_trailing_newline():
    text = dump_json({"a": [1, 2]})
    assert text.endswith("\n")
    assert '\n  "a"' in text


def test_write_json_creates_parent_directory(tmp_path):
    target = tmp_path / "nested" / "report.json"
    write_json({"u_min": "-9/2"}, str(target))
    assert json.loads(target.read_text(encoding="utf-8")) == {"u_min": "-9/2"}


def test_write_json_defaults_to_stdout(capsys):
    write_json({"k": 2})
    assert json.loads(capsys.readouterr().out) == {"k": 2}


def test_ball_config_from_dict():
    assert ball_config_from_dict({"k": 2, "center": 3, "leaves": [1, 2, 2]}) == BallConfig(3, (1, 2, 2))
    with pytest.raises(ValueError):
        ball_config_from_dict({"k": 3, "center": 3, "leaves": [1, 2, 2]})


def test_parse_constant_background():
    assert parse_background("const:3", 2) == ConstantBackground(3)


def test_parse_periodic_background():
    background = parse_background("periodic:2;2 1 1", 2)
    assert isinstance(background, PeriodicGroundState)
    assert background.source_ball == BallConfig(2, (2, 1, 1))
    assert background.value(IDENTITY) == 2
    with pytest.raises(ValueError):
        parse_background("periodic:2;2 1", 2)


def test_parse_unknown_background():
    with pytest.raises(ValueError):
        parse_background("random:1", 2)


def test_finite_configuration_from_dict():
    sigma = finite_configuration_from_dict(
        {"background": "const:1", "overrides": [{"word": "", "spin": 2}, {"word": "1 2", "spin": 4}]}, k=2)
    assert sigma.k == 2
    assert sigma.value(IDENTITY) == 2
    assert sigma.value(GroupWord((1, 2))) == 4
    assert sigma.value(GroupWord((3,))) == 1


def test_finite_configuration_needs_an_order():
    with pytest.raises(ValueError):
        finite_configuration_from_dict({"background": "const:1"})
