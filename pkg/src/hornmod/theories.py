"""Built-in relational Horn theories over discrete signatures."""
from __future__ import annotations

from .core import (
    DISCRETE,
    Edge,
    Equality,
    HornFormula,
    RelationSymbol,
    Signature,
    Structure,
    Theory,
    horn,
)

LE = "le"
REL = "R"


def order_signature() -> Signature:
    return Signature((RelationSymbol(LE, 2),), DISCRETE)


def binary_signature(name: str = REL) -> Signature:
    return Signature((RelationSymbol(name, 2),), DISCRETE)


def transitivity_axiom(symbol: str = LE) -> HornFormula:
    return horn((Edge(symbol, ("x", "y")), Edge(symbol, ("y", "z"))), Edge(symbol, ("x", "z")))


def symmetry_axiom(symbol: str = REL) -> HornFormula:
    return horn((Edge(symbol, ("x", "y")),), Edge(symbol, ("y", "x")))


def antisymmetry_axiom(symbol: str = LE) -> HornFormula:
    return horn((Edge(symbol, ("x", "y")), Edge(symbol, ("y", "x"))), Equality("x", "y"))


def preorder_theory() -> Theory:
    """Reflexivity and transitivity for a single binary symbol."""
    return Theory(order_signature(), (transitivity_axiom(),), (), base_flag=True)


def poset_theory() -> Theory:
    """Preorders plus the antisymmetry equality axiom."""
    return Theory(
        order_signature(), (transitivity_axiom(), antisymmetry_axiom()), (), base_flag=True
    )


def reflexive_theory(name: str = REL) -> Theory:
    """Just reflexivity for a single binary symbol."""
    return Theory(binary_signature(name), (), (), base_flag=True)


def reflexive_symmetric_theory(name: str = REL) -> Theory:
    """Reflexivity plus symmetry for a single binary symbol."""
    return Theory(binary_signature(name), (symmetry_axiom(name),), (), base_flag=True)


def chain(length: int, symbol: str = LE) -> Structure:
    """The reflexive-transitive chain c0 <= c1 <= ... on the order signature."""
    sig = order_signature() if symbol == LE else binary_signature(symbol)
    carrier = [f"c{i}" for i in range(length)]
    edges = [
        Edge(symbol, (f"c{i}", f"c{j}")) for i in range(length) for j in range(length) if i <= j
    ]
    return Structure(sig, carrier, edges)


def discrete_poset(size: int, symbol: str = LE) -> Structure:
    sig = order_signature() if symbol == LE else binary_signature(symbol)
    carrier = [f"c{i}" for i in range(size)]
    return Structure(sig, carrier, [Edge(symbol, (c, c)) for c in carrier])
