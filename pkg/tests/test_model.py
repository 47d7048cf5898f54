import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rxnflux.errors import ParseError
from rxnflux.model import Model, Reaction, parse_model, serialize_model

from generators import random_model

DIAMOND_TEXT = (
    "init A * 1\n"
    "r1: A -> P + P @ 1.0\n"
    "r2: P -> B @ 1.0\n"
    "r3: P -> C @ 1.0\n"
    "r4: B + C -> D @ 1.0\n"
)


def test_parse_diamond():
    m = parse_model(DIAMOND_TEXT)
    assert m.initial == (("A", 1),)
    assert [r.name for r in m.reactions] == ["r1", "r2", "r3", "r4"]
    assert m.reactions[0].products == ("P", "P")
    assert m.reactions[3].reactants == ("B", "C")
    assert m.species == ("A", "B", "C", "D", "P")


def test_parse_zero_init_and_empty_products():
    m = parse_model("init A * 0\nr1: A -> @ 1.0")
    assert m.initial == ()
    assert m.reactions[0].products == ()
    assert m.species == ("A",)


def test_init_lines_aggregate():
    m = parse_model("init A * 2\ninit A * 3\nr: A -> @ 1.0")
    assert m.initial == (("A", 5),)


def test_comments_and_blank_lines():
    m = parse_model("# header\n\ninit A * 1  # trailing\nr: A -> A @ 2.0\n")
    assert m.initial == (("A", 1),)
    assert m.reactions[0].rate == 2.0


def test_too_many_reactants():
    with pytest.raises(ParseError) as err:
        parse_model("r1: A + B + C -> D @ 1.0")
    assert err.value.line == 1


def test_zero_reactants_rejected():
    with pytest.raises(ParseError):
        parse_model("r1: -> A @ 1.0")


@pytest.mark.parametrize("rate", ["0.0", "-1.0", "nan", "inf"])
def test_bad_rates_rejected(rate):
    with pytest.raises(ParseError):
        parse_model(f"r1: A -> B @ {rate}")


def test_duplicate_reaction_name():
    with pytest.raises(ParseError) as err:
        parse_model("r1: A -> B @ 1.0\nr1: B -> A @ 1.0")
    assert err.value.line == 2


def test_reserved_reaction_name():
    with pytest.raises(ParseError):
        parse_model("init: A -> B @ 1.0")


def test_syntax_error_has_position():
    with pytest.raises(ParseError) as err:
        parse_model("r1: A -> B\n")
    assert err.value.line == 1
    assert err.value.column is not None


def test_reaction_arity_enforced_at_construction():
    with pytest.raises(ValueError):
        Reaction("r", (), ("A",), 1.0)
    with pytest.raises(ValueError):
        Reaction("r", ("A", "B", "C"), (), 1.0)
    assert Reaction("r", ("A",), (), 1.0).arity == 1
    assert Reaction("r", ("A", "A"), ("B",), 1.0).arity == 2


def test_model_collects_species():
    m = Model((), (Reaction("r", ("A",), ("B", "B"), 0.5),), ())
    assert m.species == ("A", "B")


def test_rate_round_trips_exactly():
    m = parse_model("r: A -> B @ 0.0054\n")
    assert m.reactions[0].rate == 0.0054
    assert parse_model(serialize_model(m)) == m


def test_empty_model_round_trips():
    empty = Model((), (), ())
    assert parse_model(serialize_model(empty)) == empty


def test_init_only_species_round_trips():
    m = parse_model("init X * 0\ninit A * 2\nr: A -> A @ 1.0\n")
    assert m.species == ("A", "X")
    assert parse_model(serialize_model(m)) == m


@pytest.mark.parametrize("seed", range(30))
def test_random_model_round_trips(seed):
    m = random_model(random.Random(seed))
    text = serialize_model(m)
    again = parse_model(text)
    assert again == m
    assert serialize_model(again) == text


@given(st.text(max_size=200))
def test_fuzz_never_panics(text):
    try:
        m = parse_model(text)
    except ParseError:
        return
    assert isinstance(m, Model)
    for r in m.reactions:
        assert r.arity in (1, 2)
        assert r.rate > 0 and math.isfinite(r.rate)


@given(
    st.lists(
        st.tuples(
            st.sampled_from(["A", "B", "C"]),
            st.integers(min_value=0, max_value=9),
        ),
        max_size=4,
    )
)
def test_fuzz_init_lines(pairs):
    text = "".join(f"init {sp} * {n}\n" for sp, n in pairs)
    m = parse_model(text + "r: A -> B @ 1.0\n")
    totals = {}
    for sp, n in pairs:
        totals[sp] = totals.get(sp, 0) + n
    assert dict(m.initial) == {sp: n for sp, n in totals.items() if n > 0}
