"""JSON documents for signatures, structures, morphisms, theories and quantales.

Serialization is canonical (all lists sorted) and round-trips: parsing the
output of ``to_jsonable`` reproduces an equal value.  Every document carries
``"format": 1``.
"""
from __future__ import annotations

import json
from typing import Any, Mapping

from .core import (
    DISCRETE,
    EXPLICIT,
    QUANTALE,
    Edge,
    Equality,
    HornFormula,
    HornmodError,
    Morphism,
    RelationSymbol,
    Signature,
    Structure,
    Theory,
    horn,
)
from .quantale import Quantale
from .schema import (
    AxiomSchema,
    ConstantSymbol,
    ExplicitTable,
    PLACEHOLDER,
    PremiseProjection,
    TensorComposite,
    generalized_transitivity_schema,
    symmetry_schema,
)

FORMAT = 1


class ParseError(HornmodError):
    pass


def _expect(doc: Mapping[str, Any], key: str, what: str) -> Any:
    if key not in doc:
        raise ParseError(f"{what} document is missing the {key!r} field")
    return doc[key]


def _check_format(doc: Mapping[str, Any], what: str) -> None:
    if doc.get("format", FORMAT) != FORMAT:
        raise ParseError(f"unsupported {what} format {doc.get('format')!r}")


def quantale_to_jsonable(v: Quantale) -> dict:
    return {
        "format": FORMAT,
        "elements": list(v.elements),
        "leq": [list(p) for p in v.leq_pairs],
        "tensor": {f"{a},{b}": c for a, b, c in v.tensor_pairs},
        "unit": v.unit,
    }


def parse_quantale(doc: Mapping[str, Any]) -> Quantale:
    _check_format(doc, "quantale")
    tensor = []
    for key, value in _expect(doc, "tensor", "quantale").items():
        parts = key.split(",")
        if len(parts) != 2:
            raise ParseError(f"tensor key {key!r} is not of the form 'a,b'")
        tensor.append((parts[0], parts[1], value))
    return Quantale(
        elements=tuple(_expect(doc, "elements", "quantale")),
        leq_pairs=tuple((a, b) for a, b in _expect(doc, "leq", "quantale")),
        tensor_pairs=tuple(tensor),
        unit=_expect(doc, "unit", "quantale"),
    )


def signature_to_jsonable(sig: Signature) -> dict:
    order: dict[str, Any] = {"kind": sig.order_kind}
    if sig.order_kind == EXPLICIT:
        order["pairs"] = [list(p) for p in sig.order_pairs]
    if sig.order_kind == QUANTALE:
        assert sig.quantale is not None
        order["quantale"] = quantale_to_jsonable(sig.quantale)
    return {
        "format": FORMAT,
        "symbols": [{"name": s.name, "arity": s.arity} for s in sig.symbols],
        "order": order,
    }


def parse_signature(doc: Mapping[str, Any]) -> Signature:
    _check_format(doc, "signature")
    symbols = tuple(
        RelationSymbol(s["name"], s["arity"]) for s in _expect(doc, "symbols", "signature")
    )
    order = doc.get("order", {"kind": DISCRETE})
    kind = order.get("kind", DISCRETE)
    if kind == QUANTALE:
        return Signature(symbols, QUANTALE, (), parse_quantale(order["quantale"]))
    pairs = tuple((a, b) for a, b in order.get("pairs", []))
    return Signature(symbols, kind, pairs, None)


def _edge_to_jsonable(e: Edge) -> dict:
    return {"symbol": e.symbol, "args": list(e.args)}


def _parse_edge(doc: Mapping[str, Any]) -> Edge:
    return Edge(_expect(doc, "symbol", "edge"), tuple(_expect(doc, "args", "edge")))


def structure_to_jsonable(x: Structure) -> dict:
    return {
        "format": FORMAT,
        "signature": signature_to_jsonable(x.signature),
        "carrier": list(x.sorted_carrier()),
        "edges": [_edge_to_jsonable(e) for e in x.sorted_edges()],
    }


def parse_structure(doc: Mapping[str, Any]) -> Structure:
    _check_format(doc, "structure")
    sig = parse_signature(_expect(doc, "signature", "structure"))
    carrier = _expect(doc, "carrier", "structure")
    edges = [_parse_edge(e) for e in _expect(doc, "edges", "structure")]
    return Structure(sig, carrier, edges)


def morphism_to_jsonable(h: Morphism) -> dict:
    return {
        "format": FORMAT,
        "source": structure_to_jsonable(h.source),
        "target": structure_to_jsonable(h.target),
        "map": dict(sorted(h.mapping.items())),
    }


def parse_morphism(doc: Mapping[str, Any]) -> Morphism:
    _check_format(doc, "morphism")
    return Morphism(
        parse_structure(_expect(doc, "source", "morphism")),
        parse_structure(_expect(doc, "target", "morphism")),
        dict(_expect(doc, "map", "morphism")),
    )


def formula_to_jsonable(f: HornFormula) -> dict:
    if isinstance(f.conclusion, Equality):
        conclusion: dict[str, Any] = {"equal": [f.conclusion.left, f.conclusion.right]}
    else:
        conclusion = {"edge": _edge_to_jsonable(f.conclusion)}
    return {
        "premises": [_edge_to_jsonable(e) for e in f.sorted_premises()],
        "conclusion": conclusion,
    }


def parse_formula(doc: Mapping[str, Any]) -> HornFormula:
    premises = [_parse_edge(e) for e in _expect(doc, "premises", "formula")]
    concl = _expect(doc, "conclusion", "formula")
    if "equal" in concl:
        left, right = concl["equal"]
        return horn(premises, Equality(left, right))
    if "edge" in concl:
        return horn(premises, _parse_edge(concl["edge"]))
    raise ParseError("formula conclusion must be an 'edge' or an 'equal' pair")


def schema_to_jsonable(s: AxiomSchema) -> dict:
    if s.name in ("generalized_transitivity", "symmetry"):
        return {"schema": s.name}
    combine: dict[str, Any]
    if isinstance(s.combine, TensorComposite):
        combine = {"tensor": True}
    elif isinstance(s.combine, PremiseProjection):
        combine = {"projection": s.combine.index}
    elif isinstance(s.combine, ConstantSymbol):
        combine = {"constant": s.combine.symbol}
    else:
        combine = {"table": {",".join(k): v for k, v in s.combine.entries}}
    return {
        "schema": {
            "name": s.name,
            "arity": s.arity,
            "premises": [list(p.args) for p in s.premises],
            "conclusion": list(s.conclusion.args),
            "combine": combine,
            "monotone": s.monotone,
        }
    }


def parse_schema(doc: Mapping[str, Any]) -> AxiomSchema:
    body = _expect(doc, "schema", "schema")
    if body == "generalized_transitivity":
        return generalized_transitivity_schema()
    if body == "symmetry":
        return symmetry_schema()
    if isinstance(body, str):
        raise ParseError(f"unknown builtin schema {body!r}")
    combine_doc = _expect(body, "combine", "schema")
    if "tensor" in combine_doc:
        combine: Any = TensorComposite()
    elif "projection" in combine_doc:
        combine = PremiseProjection(combine_doc["projection"])
    elif "constant" in combine_doc:
        combine = ConstantSymbol(combine_doc["constant"])
    elif "table" in combine_doc:
        combine = ExplicitTable(
            tuple(
                (tuple(k.split(",")), v) for k, v in sorted(combine_doc["table"].items())
            )
        )
    else:
        raise ParseError("schema combine must be tensor/projection/constant/table")
    return AxiomSchema(
        name=body.get("name", "custom"),
        arity=_expect(body, "arity", "schema"),
        premises=tuple(Edge(PLACEHOLDER, tuple(args)) for args in body["premises"]),
        conclusion=Edge(PLACEHOLDER, tuple(body["conclusion"])),
        combine=combine,
        monotone=body.get("monotone", True),
    )


def theory_to_jsonable(t: Theory) -> dict:
    return {
        "format": FORMAT,
        "signature": signature_to_jsonable(t.signature),
        "axioms": [formula_to_jsonable(a) for a in t.axioms],
        "schemas": [schema_to_jsonable(s) for s in t.schemas],
        "base": t.base_flag,
    }


def parse_theory(doc: Mapping[str, Any]) -> Theory:
    _check_format(doc, "theory")
    sig = parse_signature(_expect(doc, "signature", "theory"))
    axioms = tuple(parse_formula(a) for a in _expect(doc, "axioms", "theory"))
    schemas = tuple(parse_schema(s) for s in doc.get("schemas", []))
    return Theory(sig, axioms, schemas, doc.get("base", True))


def dumps(payload: Any) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=True) + "\n"
