import json
import random
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from cuweb import serialize as io
from cuweb.circle import circle_semigroup
from cuweb.colimits import colimit, random_diagram
from cuweb.errors import ParseError, SchemaError
from cuweb.fixtures import named_fixtures
from cuweb.metric import reflection, rotation, sample_morphisms, tabulate
from cuweb.fixtures import random_fixture_system
from cuweb.webbing import web

DATA = Path(__file__).parent / "data"
FILES = sorted(p.name for p in DATA.glob("*.json"))


@pytest.mark.parametrize("name", FILES)
def test_data_files_round_trip_bytes(name):
    text = (DATA / name).read_text(encoding="utf-8")
    obj = io.from_document(io.loads(text))
    assert io.dumps(io.to_document(obj)) == text


@pytest.mark.parametrize("name", sorted(named_fixtures()))
def test_fixture_systems_round_trip(name):
    G = named_fixtures()[name]
    doc = io.to_document(G)
    again = io.to_document(io.from_document(json.loads(io.dumps(doc))))
    assert again == doc and io.digest(again) == io.digest(doc)
    assert io.to_document(io.from_document(io.to_document(G.base))) == io.to_document(G.base)


@given(st.integers(0, 10**6))
def test_random_systems_round_trip(seed):
    G = random_fixture_system(random.Random(seed), max_base=4)
    doc = io.to_document(G)
    assert io.dumps(io.to_document(io.from_document(io.loads(io.dumps(doc))))) == io.dumps(doc)


def test_diagram_and_cocone_round_trip():
    D = random_diagram(random.Random(11), shape="diamond")
    doc = io.to_document(D)
    D2 = io.from_document(doc)
    assert io.to_document(D2) == doc
    c = colimit(D)
    cdoc = io.cocone_to_json(D, c)
    assert io.cocone_to_json(D2, io.cocone_from_json(cdoc, D2)) == cdoc


@pytest.mark.parametrize("f", sample_morphisms(2) + [tabulate(rotation(1, 2), 1), reflection(-1)],
                         ids=lambda f: f.name)
def test_circle_morphisms_round_trip(f):
    doc = io.to_document(f)
    assert io.from_document(doc) == f


def test_web_document():
    W = circle_semigroup(0, 2, 1)
    doc = io.to_document(W)
    assert doc["kind"] == "web" and len(doc["pairs"]) == W.size
    assert doc["window"] == 1 and doc["complete"] is False
    W5 = web(named_fixtures()["W5"])
    assert io.to_document(W5)["complete"] is True


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as exc:
        io.loads('{"cuweb_schema": 1,\n "kind": }')
    assert exc.value.witness == (2, 10)
    with pytest.raises(ParseError):
        io.load_file(str(DATA / "missing.json"))


@pytest.mark.parametrize("text", [
    "[1, 2]",
    '{"kind": "monoid"}',
    '{"cuweb_schema": 99, "kind": "monoid"}',
    '{"cuweb_schema": 1, "kind": "sheaf"}',
])
def test_envelope_errors(text):
    with pytest.raises(SchemaError):
        io.loads(text)


def test_body_errors_name_the_key():
    doc = io.loads((DATA / "w5_system.json").read_text(encoding="utf-8"))
    broken = dict(doc)
    del broken["fibers"]
    with pytest.raises(SchemaError) as exc:
        io.from_document(broken)
    assert "fibers" in str(exc.value)
    m = io.loads((DATA / "t1_monoid.json").read_text(encoding="utf-8"))
    m["add"] = m["add"][:-1]
    with pytest.raises(SchemaError):
        io.from_document(m)
