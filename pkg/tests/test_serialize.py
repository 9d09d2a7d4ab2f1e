from fractions import Fraction as F

import pytest

from cjmcheck import (
    ParseError,
    SelfMap,
    dumps_json,
    dumps_text,
    loads_json,
    loads_text,
    random_space,
    unit_space,
)


def test_text_round_trip():
    space = random_space(4, 9, seed=11)
    maps = [SelfMap((0, 0, 1, 2)), SelfMap((3, 3, 3, 3))]
    text = dumps_text(space, maps)
    space2, maps2 = loads_text(text)
    assert space2.dist == space.dist
    assert maps2 == maps


def test_json_round_trip():
    space = random_space(3, 7, seed=5)
    maps = [SelfMap((2, 2, 2))]
    space2, maps2 = loads_json(dumps_json(space, maps))
    assert space2.dist == space.dist and maps2 == maps


def test_rationals_survive_text():
    space, _ = loads_text("2\n3/7\n")
    assert space.d(0, 1) == F(3, 7)
    text = dumps_text(space)
    assert "3/7" in text


def test_comments_and_blank_lines_ignored():
    space, maps = loads_text("# a space\n\n2\n1   # unit distance\n\n0 0\n")
    assert space.n == 2 and maps == [SelfMap((0, 0))]


def test_single_point_space():
    space, maps = loads_text("1\n0\n")
    assert space.n == 1 and maps == [SelfMap((0,))]


def test_malformed_distance_reports_line():
    with pytest.raises(ParseError) as err:
        loads_text("3\n1 x\n1\n")
    assert err.value.line == 2


def test_wrong_row_length_reports_line():
    with pytest.raises(ParseError) as err:
        loads_text("3\n1\n1\n")
    assert err.value.line == 2


def test_map_with_wrong_arity_reports_line():
    with pytest.raises(ParseError) as err:
        loads_text("2\n1\n0 1 0\n")
    assert err.value.line == 3


def test_non_metric_table_rejected():
    with pytest.raises(ParseError):
        loads_text("3\n1 5\n1\n")


def test_empty_input_rejected():
    with pytest.raises(ParseError):
        loads_text("\n# nothing\n")


def test_unit_space_text_shape():
    text = dumps_text(unit_space(3))
    assert text == "3\n1 1\n1\n"
