from pathlib import Path

import pytest

import trepan

DATA = Path(__file__).resolve().parents[2] / "data"


def test_applicant_information_content():
    onto = trepan.Ontology.load(str(DATA / "ontologies" / "applicant.onto"))
    assert onto.sub_size == 14
    assert onto.information_content("LoanApplicant") == pytest.approx(0.73735, abs=1e-5)
    assert onto.information_content("Entity") <= 0.06
    assert set(onto.downcov("LoanApplicant")) == {"LoanApplicant", "BOTTOM"}
    assert onto.subsumes("LoanApplicant", "Person")


def test_unknown_concept_raises():
    onto = trepan.Ontology.load(str(DATA / "ontologies" / "applicant.onto"))
    with pytest.raises(trepan.Error, match="Loan"):
        onto.information_content("Lon")


def test_complexity_values():
    assert trepan.syntactic_complexity(1, 0) == pytest.approx(0.1)
    assert trepan.syntactic_complexity(4, 8) == pytest.approx(0.56)
    assert trepan.size_category(11) == "medium"


def test_distill_round_trip():
    schema = trepan.load_schema(str(DATA / "loan" / "schema.json"))
    data = trepan.load_dataset(str(DATA / "loan" / "loan.csv"), schema)
    assert len(data) == 614
    train, test = trepan.train_test_split(data, 0.25, 1)
    oracle = trepan.train_mlp(train, hidden=[2], epochs=40, seed=2)
    onto_path = DATA / "loan" / "loan.onto"
    tree = trepan.extract(oracle, train, size_limit=5, s_min=200, seed=3, mode="reloaded",
                          ontology=trepan.Ontology.load(str(onto_path)),
                          mapping=(DATA / "loan" / "mapping.txt").read_text())
    assert tree.n_internal <= 5
    assert tree.n_leaves == tree.n_internal + 1
    assert 0.0 <= trepan.fidelity(tree, oracle, test) <= 1.0
    again = trepan.tree_from_json(tree.to_json())
    assert again.to_json() == tree.to_json()
    assert tree.to_dot().startswith("digraph tree {")


def test_reloaded_without_ontology_raises():
    schema = trepan.load_schema(str(DATA / "loan" / "schema.json"))
    data = trepan.load_dataset(str(DATA / "loan" / "loan.csv"), schema)
    oracle = trepan.train_mlp(data, hidden=[2], epochs=5)
    with pytest.raises(trepan.Error):
        trepan.extract(oracle, data, mode="reloaded")
