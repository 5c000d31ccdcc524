import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as hs

from motivic_vg.coeffring import LL, MotConst
from motivic_vg.confun import cf_canonicalize
from motivic_vg.corpus import GOLDEN, fiber_corpus, function_corpus, random_confun, random_set
from motivic_vg.dsl import parse_function
from motivic_vg.serialize import FORMAT, deserialize, serialize, serialize_many
from motivic_vg.specialize import SpecReport


def both_ways(value):
    data = serialize(value)
    assert deserialize(data) == value
    assert serialize(deserialize(data)) == data
    text = serialize(value, "text")
    assert deserialize(text, "text") == value


def test_motconst_text():
    v = LL / (LL - 1)
    assert serialize(v, "text") == b"L/(L^1-1)\n"
    both_ways(v)


def test_structured_record_shape():
    rep = SpecReport("f", Fraction(2), Fraction(2), Fraction(2047, 1024), 11, Fraction(1, 1024), "pass")
    rec = json.loads(serialize(rep))
    assert rec["format"] == FORMAT and rec["kind"] == "report"
    assert {"function_id", "q", "symbolic_value", "partial_sum", "truncation_n", "tail_bound", "verdict"} <= set(rec["value"])
    both_ways(rep)


def test_error_report_round_trip():
    both_ways(SpecReport("g", Fraction(1), None, None, None, None, "error", 'note with "quotes"'))


@pytest.mark.parametrize("text", GOLDEN)
def test_golden_values(text):
    both_ways(deserialize(text.encode(), "text"))


@pytest.mark.parametrize("f", function_corpus(12, seed=81, dims=(1, 2)))
def test_canonical_forms(f):
    both_ways(cf_canonicalize(f))


def test_canonical_form_with_parameters():
    f = fiber_corpus(1, seed=3)[0]
    both_ways(cf_canonicalize(f, 1))


def test_many_is_line_delimited():
    vals = [LL, MotConst.from_int(3)]
    lines = serialize_many(vals).decode().splitlines()
    assert [deserialize(ln.encode()) for ln in lines] == vals


def test_unknown_records_are_rejected():
    with pytest.raises(ValueError):
        deserialize(b'{"format":"other/9","kind":"motconst","value":{}}')
    with pytest.raises(ValueError):
        serialize(LL, "yaml")


@given(hs.integers(0, 10 ** 9), hs.integers(1, 3))
def test_random_values_round_trip(seed, dim):
    rng = random.Random(seed)
    both_ways(random_confun(rng, dim, symbols=True))
    both_ways(random_set(rng, dim))


def test_equal_values_serialize_identically():
    a = parse_function("x + 1 on { x in Z^1 : x >= 0 }")
    b = parse_function("1 + x on { x in Z^1 : 0 <= x }")
    assert serialize(a) == serialize(b)
