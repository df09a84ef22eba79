"""Relational signatures, structures, morphisms, Horn formulas and theories.

Everything here is an immutable value with a total canonical order on its
parts (symbols and elements sort by name, edges by (symbol, args)), so that
every enumeration in the package is deterministic.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, NamedTuple, Optional, TYPE_CHECKING

if TYPE_CHECKING:
    from .quantale import Quantale

DISCRETE = "discrete"
EXPLICIT = "explicit"
QUANTALE = "quantale"

ORDER_KINDS = (DISCRETE, EXPLICIT, QUANTALE)


class HornmodError(Exception):
    """Base class for all errors raised by this package."""


class SignatureError(HornmodError):
    pass


class StructureError(HornmodError):
    pass


class MorphismError(HornmodError):
    pass


class TheoryError(HornmodError):
    pass


@dataclass(frozen=True, order=True)
class RelationSymbol:
    """A relation symbol with a fixed arity >= 1."""

    name: str
    arity: int

    def __post_init__(self) -> None:
        if self.arity < 1:
            raise SignatureError(f"arity of {self.name!r} must be >= 1, got {self.arity}")


class Edge(NamedTuple):
    """An edge: a relation symbol name applied to a tuple of element or variable names."""

    symbol: str
    args: tuple[str, ...]


def edge(symbol: str, *args: str) -> Edge:
    return Edge(symbol, tuple(args))


def quantale_symbol_name(element: str) -> str:
    """Name of the binary symbol associated with a quantale element."""
    return "~" + element


@dataclass(frozen=True)
class Signature:
    """A finite relational signature, optionally carrying a per-arity preorder.

    The preorder is one of: discrete (equality only), explicit (the
    reflexive-transitive closure of declared pairs between symbols of equal
    arity), or induced by a finite quantale, in which case the symbols are
    exactly the binary symbols named ``~v`` for the quantale elements ``v``.
    """

    symbols: tuple[RelationSymbol, ...]
    order_kind: str = DISCRETE
    order_pairs: tuple[tuple[str, str], ...] = ()
    quantale: Optional["Quantale"] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "symbols", tuple(sorted(set(self.symbols))))
        object.__setattr__(self, "order_pairs", tuple(sorted(set(self.order_pairs))))
        if self.order_kind not in ORDER_KINDS:
            raise SignatureError(f"unknown order kind {self.order_kind!r}")
        names = [s.name for s in self.symbols]
        if len(set(names)) != len(names):
            raise SignatureError("duplicate symbol names in signature")
        arities = {s.name: s.arity for s in self.symbols}
        for low, high in self.order_pairs:
            if low not in arities or high not in arities:
                raise SignatureError(f"order pair ({low!r}, {high!r}) uses unknown symbols")
            if arities[low] != arities[high]:
                raise SignatureError(
                    f"order pair ({low!r}, {high!r}) relates symbols of different arities"
                )
        if self.order_kind == QUANTALE:
            if self.quantale is None:
                raise SignatureError("quantale-induced signature needs a quantale")
            expected = sorted(
                RelationSymbol(quantale_symbol_name(v), 2) for v in self.quantale.elements
            )
            if list(self.symbols) != expected:
                raise SignatureError(
                    "quantale-induced signature must have exactly the binary "
                    "symbols ~v for the quantale elements v"
                )
        elif self.quantale is not None:
            raise SignatureError("only quantale-induced signatures carry a quantale")

    def arity(self, name: str) -> int:
        for s in self.symbols:
            if s.name == name:
                return s.arity
        raise SignatureError(f"unknown relation symbol {name!r}")

    def has_symbol(self, name: str) -> bool:
        return any(s.name == name for s in self.symbols)

    def symbol_names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.symbols)

    def arities(self) -> tuple[int, ...]:
        return tuple(sorted({s.arity for s in self.symbols}))

    def symbols_of_arity(self, n: int) -> tuple[str, ...]:
        return tuple(s.name for s in self.symbols if s.arity == n)

    def order(self, n: int) -> "SymbolOrder":
        """The (closed) preorder on the symbols of arity ``n``."""
        return signature_order_closure(self, n)

    def leq(self, low: str, high: str) -> bool:
        return self.order(self.arity(low)).leq(low, high)


class SymbolOrder:
    """The reflexive-transitive closure of a preorder on same-arity symbols.

    Also provides finite-lattice operations (meets, joins, bounds) computed
    directly from the order relation; they return ``None`` when the required
    bound does not exist.
    """

    __slots__ = ("symbols", "_index", "_leq")

    def __init__(self, symbols: Iterable[str], pairs: Iterable[tuple[str, str]]):
        self.symbols = tuple(sorted(symbols))
        self._index = {s: i for i, s in enumerate(self.symbols)}
        n = len(self.symbols)
        leq = [[False] * n for _ in range(n)]
        for i in range(n):
            leq[i][i] = True
        for low, high in pairs:
            leq[self._index[low]][self._index[high]] = True
        for k in range(n):  # Warshall
            for i in range(n):
                if leq[i][k]:
                    row_k = leq[k]
                    row_i = leq[i]
                    for j in range(n):
                        if row_k[j]:
                            row_i[j] = True
        self._leq = leq

    def leq(self, low: str, high: str) -> bool:
        return self._leq[self._index[low]][self._index[high]]

    def below(self, top: str) -> tuple[str, ...]:
        """All symbols <= top, in canonical order."""
        return tuple(s for s in self.symbols if self.leq(s, top))

    def is_partial_order(self) -> bool:
        return all(
            not (self.leq(a, b) and self.leq(b, a))
            for a, b in itertools.combinations(self.symbols, 2)
        )

    def _bound(self, elems: Iterable[str], upper: bool) -> Optional[str]:
        elems = list(elems)
        if upper:
            cands = [s for s in self.symbols if all(self.leq(e, s) for e in elems)]
            best = [c for c in cands if all(self.leq(c, d) for d in cands)]
        else:
            cands = [s for s in self.symbols if all(self.leq(s, e) for e in elems)]
            best = [c for c in cands if all(self.leq(d, c) for d in cands)]
        return best[0] if len(best) == 1 else None

    def join_of_set(self, elems: Iterable[str]) -> Optional[str]:
        return self._bound(elems, upper=True)

    def meet_of_set(self, elems: Iterable[str]) -> Optional[str]:
        return self._bound(elems, upper=False)

    def join2(self, a: str, b: str) -> Optional[str]:
        return self.join_of_set((a, b))

    def meet2(self, a: str, b: str) -> Optional[str]:
        return self.meet_of_set((a, b))

    def bottom(self) -> Optional[str]:
        return self.join_of_set(())

    def top(self) -> Optional[str]:
        return self.meet_of_set(())

    def is_complete_lattice(self) -> bool:
        if not self.symbols or not self.is_partial_order():
            return False
        return (
            self.bottom() is not None
            and self.top() is not None
            and all(
                self.meet2(a, b) is not None and self.join2(a, b) is not None
                for a, b in itertools.combinations(self.symbols, 2)
            )
        )

    def is_complete_heyting(self) -> bool:
        """Complete lattice in which binary meets distribute over all joins.

        Checked in both the binary form a /\\ (b \\/ c) and the arbitrary-join
        form a /\\ \\/S over every subset S of the (finite) carrier.
        """
        if not self.is_complete_lattice():
            return False
        for a, b, c in itertools.product(self.symbols, repeat=3):
            lhs = self.meet2(a, self.join2(b, c))
            rhs = self.join2(self.meet2(a, b), self.meet2(a, c))
            if lhs != rhs:
                return False
        for a in self.symbols:
            for r in range(len(self.symbols) + 1):
                for subset in itertools.combinations(self.symbols, r):
                    lhs = self.meet2(a, self.join_of_set(subset))
                    rhs = self.join_of_set(self.meet2(a, s) for s in subset)
                    if lhs != rhs:
                        return False
        return True


@lru_cache(maxsize=None)
def signature_order_closure(sig: Signature, n: int) -> SymbolOrder:
    """The per-arity preorder of a signature, closed under reflexivity and transitivity."""
    symbols = sig.symbols_of_arity(n)
    if sig.order_kind == DISCRETE:
        pairs: list[tuple[str, str]] = []
    elif sig.order_kind == EXPLICIT:
        pairs = [(a, b) for a, b in sig.order_pairs if a in symbols]
    else:
        assert sig.quantale is not None
        pairs = [
            (quantale_symbol_name(u), quantale_symbol_name(v))
            for u in sig.quantale.elements
            for v in sig.quantale.elements
            if n == 2 and sig.quantale.leq(u, v)
        ]
    return SymbolOrder(symbols, pairs)


class Structure:
    """A finite carrier with a set of edges over a signature."""

    __slots__ = ("signature", "carrier", "edges", "_by_symbol", "_hash")

    def __init__(self, signature: Signature, carrier: Iterable[str], edges: Iterable[Edge]):
        self.signature = signature
        self.carrier = frozenset(carrier)
        self.edges = frozenset(Edge(e[0], tuple(e[1])) for e in edges)
        by_symbol: dict[str, set[tuple[str, ...]]] = {s.name: set() for s in signature.symbols}
        for e in self.edges:
            if not signature.has_symbol(e.symbol):
                raise StructureError(f"edge uses unknown symbol {e.symbol!r}")
            if len(e.args) != signature.arity(e.symbol):
                raise StructureError(f"edge {e} has wrong arity for {e.symbol!r}")
            if not set(e.args) <= self.carrier:
                raise StructureError(f"edge {e} mentions elements outside the carrier")
            by_symbol[e.symbol].add(e.args)
        self._by_symbol = by_symbol
        self._hash = hash((self.signature, self.carrier, self.edges))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Structure)
            and self.signature == other.signature
            and self.carrier == other.carrier
            and self.edges == other.edges
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Structure(|X|={sorted(self.carrier)}, edges={sorted(self.edges)})"

    def sorted_carrier(self) -> tuple[str, ...]:
        return tuple(sorted(self.carrier))

    def sorted_edges(self) -> tuple[Edge, ...]:
        return tuple(sorted(self.edges))

    def holds(self, symbol: str, args: tuple[str, ...]) -> bool:
        return args in self._by_symbol[symbol]

    def tuples(self, symbol: str) -> frozenset[tuple[str, ...]]:
        return frozenset(self._by_symbol[symbol])

    def size(self) -> int:
        return len(self.carrier)

    def with_edges(self, extra: Iterable[Edge]) -> "Structure":
        return Structure(self.signature, self.carrier, self.edges | frozenset(extra))

    def induced(self, subset: Iterable[str]) -> "Structure":
        """The induced substructure on a subset of the carrier."""
        sub = frozenset(subset)
        if not sub <= self.carrier:
            raise StructureError("induced substructure needs a subset of the carrier")
        kept = [e for e in self.edges if set(e.args) <= sub]
        return Structure(self.signature, sub, kept)


class Morphism:
    """A carrier function between structures; edge preservation is checked, not assumed."""

    __slots__ = ("source", "target", "mapping", "_hash")

    def __init__(self, source: Structure, target: Structure, mapping: Mapping[str, str]):
        self.source = source
        self.target = target
        self.mapping = dict(mapping)
        if set(self.mapping) != source.carrier:
            raise MorphismError("mapping must be defined on exactly the source carrier")
        if not set(self.mapping.values()) <= target.carrier:
            raise MorphismError("mapping has values outside the target carrier")
        self._hash = hash((self.source, self.target, tuple(sorted(self.mapping.items()))))

    def __call__(self, x: str) -> str:
        return self.mapping[x]

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Morphism)
            and self.source == other.source
            and self.target == other.target
            and self.mapping == other.mapping
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        items = ", ".join(f"{k}->{v}" for k, v in sorted(self.mapping.items()))
        return f"Morphism({items})"


def identity_morphism(X: Structure) -> Morphism:
    return Morphism(X, X, {x: x for x in X.carrier})


def compose(outer: Morphism, inner: Morphism) -> Morphism:
    """The composite ``outer . inner`` (apply ``inner`` first)."""
    if inner.target != outer.source:
        raise MorphismError("composition needs matching middle structure")
    return Morphism(inner.source, outer.target, {x: outer(inner(x)) for x in inner.source.carrier})


def validate_morphism(h: Morphism) -> bool:
    """True iff every source edge maps to a target edge.

    Raises on structural defects (signature mismatch, non-total map), which
    are distinct from a clean ``False``.
    """
    if h.source.signature != h.target.signature:
        raise SignatureError("morphism endpoints have different signatures")
    if set(h.mapping) != h.source.carrier or not set(h.mapping.values()) <= h.target.carrier:
        raise MorphismError("mapping is not a total function into the target carrier")
    return all(
        h.target.holds(e.symbol, tuple(h.mapping[a] for a in e.args)) for e in h.source.edges
    )


@dataclass(frozen=True)
class Equality:
    """An equality conclusion between two variables."""

    left: str
    right: str


@dataclass(frozen=True)
class HornFormula:
    """An implication from a finite set of premise edges to an edge or equality.

    All variables are implicitly universally quantified, including any that
    appear only in the conclusion. Equality conclusions require the premise
    variables to be exactly the two equated variables.
    """

    premises: frozenset[Edge]
    conclusion: Edge | Equality

    def __post_init__(self) -> None:
        object.__setattr__(self, "premises", frozenset(self.premises))
        if isinstance(self.conclusion, Equality):
            vs = var_set(self.premises)
            if vs != {self.conclusion.left, self.conclusion.right}:
                raise TheoryError(
                    "equality conclusion requires the premise variables to be "
                    "exactly the equated pair"
                )

    def variables(self) -> frozenset[str]:
        if isinstance(self.conclusion, Equality):
            extra = {self.conclusion.left, self.conclusion.right}
        else:
            extra = set(self.conclusion.args)
        return frozenset(var_set(self.premises) | extra)

    def has_equality(self) -> bool:
        return isinstance(self.conclusion, Equality)

    def sorted_premises(self) -> tuple[Edge, ...]:
        return tuple(sorted(self.premises))


def horn(premises: Iterable[Edge], conclusion: Edge | Equality) -> HornFormula:
    return HornFormula(frozenset(premises), conclusion)


def var_set(edges: Iterable[Edge]) -> frozenset[str]:
    """The set of variables occurring in a set of edges."""
    out: set[str] = set()
    for e in edges:
        out.update(e.args)
    return frozenset(out)


def fresh_variables(count: int, avoid: Iterable[str] = (), base: str = "v") -> tuple[str, ...]:
    """Deterministic fresh variable names not clashing with ``avoid``."""
    taken = set(avoid)
    out: list[str] = []
    i = 0
    while len(out) < count:
        name = f"{base}{i}"
        if name not in taken:
            out.append(name)
            taken.add(name)
        i += 1
    return tuple(out)


@dataclass(frozen=True)
class Theory:
    """A relational Horn theory: a signature, axioms, and optional axiom schemas.

    When ``base_flag`` is set the base axioms of the signature (reflexivity,
    the downward order axioms, and for complete-Heyting signatures the join
    axioms) are implicitly part of the theory.
    """

    signature: Signature
    axioms: tuple[HornFormula, ...] = ()
    schemas: tuple = ()
    base_flag: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "axioms", tuple(self.axioms))
        object.__setattr__(self, "schemas", tuple(self.schemas))
        for ax in self.axioms:
            for e in ax.premises:
                if not self.signature.has_symbol(e.symbol):
                    raise TheoryError(f"axiom premise uses unknown symbol {e.symbol!r}")
                if len(e.args) != self.signature.arity(e.symbol):
                    raise TheoryError(f"axiom premise {e} has wrong arity")
            if isinstance(ax.conclusion, Edge):
                if not self.signature.has_symbol(ax.conclusion.symbol):
                    raise TheoryError(
                        f"axiom conclusion uses unknown symbol {ax.conclusion.symbol!r}"
                    )
                if len(ax.conclusion.args) != self.signature.arity(ax.conclusion.symbol):
                    raise TheoryError(f"axiom conclusion {ax.conclusion} has wrong arity")
        if self.schemas:
            heyting = all(
                self.signature.order(n).is_complete_heyting() for n in self.signature.arities()
            )
            if not heyting:
                raise TheoryError(
                    "axiom schemas require a complete-Heyting symbol order "
                    "(quantale-induced, or explicit passing the Heyting check)"
                )

    def all_axioms(self) -> tuple[HornFormula, ...]:
        """Base axioms, explicit axioms and expanded schema instances, in that order."""
        return _expanded_axioms(self)

    def non_base_axioms(self) -> tuple[HornFormula, ...]:
        """The explicit axioms that are not base axioms of the signature."""
        return tuple(ax for ax in self.axioms if not is_base_axiom(ax, self.signature))

    def has_equality_axiom(self) -> bool:
        return any(ax.has_equality() for ax in self.axioms)


def base_axioms(sig: Signature) -> tuple[HornFormula, ...]:
    """The base theory of a signature: reflexivity, order and join axioms.

    Reflexivity for every symbol; for non-discrete signatures the downward
    axioms R v1..vn => S v1..vn whenever R >= S; for complete-Heyting orders
    additionally the empty-join axiom (bottom holds everywhere) and binary
    join axioms for incomparable pairs.  Arbitrary joins reduce to these on a
    finite lattice.
    """
    out: list[HornFormula] = []
    for s in sig.symbols:
        v = fresh_variables(1)[0]
        out.append(horn((), Edge(s.name, (v,) * s.arity)))
    if sig.order_kind == DISCRETE:
        return tuple(out)
    for n in sig.arities():
        order = sig.order(n)
        vs = fresh_variables(n)
        for high in order.symbols:
            for low in order.symbols:
                if low != high and order.leq(low, high):
                    out.append(horn((Edge(high, vs),), Edge(low, vs)))
        if order.is_complete_heyting():
            bot = order.bottom()
            assert bot is not None
            out.append(horn((), Edge(bot, vs)))
            for a, b in itertools.combinations(order.symbols, 2):
                if order.leq(a, b) or order.leq(b, a):
                    continue  # join is already one of the two premises
                j = order.join2(a, b)
                assert j is not None
                out.append(horn((Edge(a, vs), Edge(b, vs)), Edge(j, vs)))
    return tuple(out)


def is_base_axiom(ax: HornFormula, sig: Signature) -> bool:
    """Whether an axiom has the shape of a base axiom of the signature."""
    if isinstance(ax.conclusion, Equality):
        return False
    concl = ax.conclusion
    if not ax.premises:
        # reflexivity  => R v...v, or the empty-join (bottom) axiom
        if len(set(concl.args)) == 1:
            return True
        order = sig.order(sig.arity(concl.symbol))
        return (
            sig.order_kind != DISCRETE
            and order.is_complete_heyting()
            and concl.symbol == order.bottom()
            and len(set(concl.args)) == len(concl.args)
        )
    if sig.order_kind == DISCRETE:
        return False
    prem = sorted(ax.premises)
    args = concl.args
    if len(set(args)) != len(args) or any(p.args != args for p in prem):
        return False
    order = sig.order(sig.arity(concl.symbol))
    if len(prem) == 1:
        return order.leq(concl.symbol, prem[0].symbol)
    if len(prem) == 2 and order.is_complete_heyting():
        return order.join2(prem[0].symbol, prem[1].symbol) == concl.symbol
    return False


@lru_cache(maxsize=None)
def _expanded_axioms(theory: Theory) -> tuple[HornFormula, ...]:
    from .schema import expand_instances

    out: list[HornFormula] = []
    if theory.base_flag:
        out.extend(base_axioms(theory.signature))
    out.extend(theory.axioms)
    for s in theory.schemas:
        out.extend(inst.formula for inst in expand_instances(s, theory.signature))
    return tuple(out)
