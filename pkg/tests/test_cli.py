import io
import json
from contextlib import redirect_stdout
from pathlib import Path

import hornmod as hm
from hornmod.cli import main
from hornmod.serialize import dumps, structure_to_jsonable

CORPUS = Path(__file__).resolve().parents[1] / "src" / "hornmod" / "corpus"


def run_cli(*argv):
    buffer = io.StringIO()
    with redirect_stdout(buffer):
        code = main(list(argv))
    return code, buffer.getvalue()


def corpus(name):
    return str(CORPUS / name)


def test_check_model_affirmative():
    code, out = run_cli(
        "check-model", "--theory", corpus("preord.theory.json"),
        "--structure", corpus("chain2.structure.json"),
    )
    assert code == 0
    assert json.loads(out)["is_model"] is True


def test_check_model_negative_with_witness(tmp_path):
    broken = hm.Structure(hm.preorder_theory().signature, ["a"], [])
    path = tmp_path / "broken.structure.json"
    path.write_text(dumps(structure_to_jsonable(broken)), encoding="utf-8")
    code, out = run_cli(
        "check-model", "--theory", corpus("preord.theory.json"), "--structure", str(path)
    )
    assert code == 1
    payload = json.loads(out)
    assert payload["is_model"] is False
    assert payload["witness"]["valuation"] == {"v0": "a"}


def test_signature_mismatch_is_input_error():
    code, _ = run_cli(
        "check-model", "--theory", corpus("boolean-vcat.theory.json"),
        "--structure", corpus("chain2.structure.json"),
    )
    assert code == 2


def test_malformed_json_is_input_error(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    code, _ = run_cli("check-model", "--theory", str(bad),
                      "--structure", corpus("chain2.structure.json"))
    assert code == 2


def test_free_model(tmp_path):
    seed = hm.Structure(
        hm.poset_theory().signature,
        ["a", "b"],
        [hm.edge("le", "a", "b"), hm.edge("le", "b", "a")],
    )
    path = tmp_path / "seed.structure.json"
    path.write_text(dumps(structure_to_jsonable(seed)), encoding="utf-8")
    code, out = run_cli("free-model", "--theory", corpus("pos.theory.json"),
                        "--structure", str(path))
    assert code == 0
    payload = json.loads(out)
    assert payload["model"]["carrier"] == ["a"]
    assert payload["unit_map"] == {"a": "a", "b": "a"}


def test_limit_terminal(tmp_path):
    sig_doc = json.loads((CORPUS / "chain2.structure.json").read_text())["signature"]
    path = tmp_path / "sig.json"
    path.write_text(dumps(sig_doc), encoding="utf-8")
    code, out = run_cli("limit", "terminal", "--signature", str(path))
    assert code == 0
    assert json.loads(out)["structure"]["carrier"] == ["*"]


def test_limit_product():
    code, out = run_cli("limit", "product", "--left", corpus("chain2.structure.json"),
                        "--right", corpus("chain2.structure.json"))
    assert code == 0
    payload = json.loads(out)
    assert len(payload["structure"]["carrier"]) == 4
    assert len(payload["structure"]["edges"]) == 9


def test_exponential_verified():
    code, out = run_cli(
        "exponential", "--theory", corpus("preord.theory.json"),
        "--base", corpus("chain2.structure.json"),
        "--target", corpus("chain2.structure.json"),
        "--verify", "--max-q", "2",
    )
    assert code == 0
    payload = json.loads(out)
    assert len(payload["exponential"]["carrier"]) == 3
    assert payload["is_model"] is True
    assert payload["verification"]["passed"] is True
    assert payload["verification"]["tested"] == 5


def test_partial_product_refl():
    code, out = run_cli(
        "partial-product", "--variant", "refl",
        "--morphism", corpus("interp-fail.morphism.json"),
        "--target", corpus("chain2.structure.json"), "--verify",
    )
    assert code == 0
    assert json.loads(out)["verification"]["passed"] is True


def test_convexity_both_methods_agree():
    code, out = run_cli(
        "convexity", "--theory", corpus("preord.theory.json"),
        "--morphism", corpus("interp-fail.morphism.json"), "--method", "both",
    )
    assert code == 1
    payload = json.loads(out)
    assert payload["by_method"]["direct"] == payload["by_method"]["lifting"] is False
    assert payload["counterexample"]["valuation"] == {"x": "c0", "y": "c1", "z": "c2"}


def test_safety_listing():
    code, out = run_cli("safety", "--theory", corpus("pos.theory.json"))
    assert code == 0
    payload = json.loads(out)
    assert len(payload["axioms"]) == 1  # the equality axiom is not listed
    entry = payload["axioms"][0]
    assert entry["safe"] is True and entry["very_safe"] is False
    assert entry["witness"]["y"] == "x"


def test_schema_commands():
    code, out = run_cli(
        "schema-convexity", "--theory", corpus("boolean-vcat.theory.json"),
        "--morphism", corpus("vcat-interp-fail.morphism.json"),
    )
    assert code == 1
    assert json.loads(out)["convex"] is False

    code, out = run_cli("schema-safety", "--theory", corpus("chain3-lukasiewicz-pmet.theory.json"))
    assert code == 0
    payload = {s["schema"]: s for s in json.loads(out)["schemas"]}
    assert payload["generalized_transitivity"]["safe"] is False
    assert payload["generalized_transitivity"]["meet_violation"] is not None
    assert payload["symmetry"]["very_safe"] is True


def test_classify_discrete_and_schematic():
    code, out = run_cli("classify", "--theory", corpus("preord.theory.json"))
    assert code == 0
    payload = json.loads(out)
    assert payload["classification"] == "all_safe"
    assert payload["cartesian_closed"] is True

    code, out = run_cli("classify", "--theory", corpus("chain3-meet-vcat.theory.json"))
    assert code == 0
    payload = json.loads(out)
    assert payload["cartesian_closed"] is True
    assert payload["locally_cartesian_closed"] is False


def test_quantale_check_mutated(tmp_path):
    doc = json.loads((CORPUS / "chain3-meet.quantale.json").read_text())
    doc["tensor"]["0,2"] = "2"
    path = tmp_path / "mutated.quantale.json"
    path.write_text(dumps(doc), encoding="utf-8")
    code, out = run_cli("quantale-check", "--quantale", str(path))
    assert code == 1
    payload = json.loads(out)
    assert payload["ok"] is False and payload["failures"]


def test_entails_exit_codes(tmp_path):
    code, out = run_cli("entails", "--theory", corpus("preord.theory.json"),
                        "--formula", corpus("refl-entail.formula.json"))
    assert code == 0 and json.loads(out)["entails"] is True

    from hornmod.serialize import formula_to_jsonable

    converse = hm.horn([hm.edge("le", "x", "z")], hm.edge("le", "z", "x"))
    path = tmp_path / "converse.formula.json"
    path.write_text(dumps(formula_to_jsonable(converse)), encoding="utf-8")
    code, out = run_cli("entails", "--theory", corpus("preord.theory.json"),
                        "--formula", str(path))
    assert code == 1 and json.loads(out)["entails"] is False


def test_outputs_reparse():
    code, out = run_cli("free-model", "--theory", corpus("preord.theory.json"),
                        "--structure", corpus("chain2.structure.json"))
    assert code == 0
    from hornmod.serialize import parse_structure

    parse_structure(json.loads(out)["model"])
