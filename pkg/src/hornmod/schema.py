"""Axiom schemas over complete-Heyting signatures and schema convexity/safety.

A schema is a premise/conclusion shape in a placeholder symbol together with
a combination function sending a tuple of actual symbols (one per premise)
to the conclusion symbol.  Expanding a schema over a finite signature yields
one Horn axiom per label tuple.  Schema convexity replaces the existence of
a single lifted valuation with a join inequality over all lifted valuations,
computed in the symbol lattice.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Optional, Union

from .core import (
    Edge,
    HornFormula,
    HornmodError,
    Morphism,
    QUANTALE,
    Signature,
    Structure,
    SymbolOrder,
    Theory,
    horn,
    var_set,
)
from .quantale import Quantale, QuantaleError, VFunctor, is_heyting
from .semantics import entails

PLACEHOLDER = "?"


class SchemaError(HornmodError):
    pass


@dataclass(frozen=True)
class TensorComposite:
    """Combine labels of a quantale signature by tensoring their elements in order."""


@dataclass(frozen=True)
class PremiseProjection:
    """Return the label of one premise unchanged."""

    index: int


@dataclass(frozen=True)
class ConstantSymbol:
    symbol: str


@dataclass(frozen=True)
class ExplicitTable:
    """A total table from label tuples (in canonical premise order) to symbols."""

    entries: tuple[tuple[tuple[str, ...], str], ...]

    def lookup(self) -> dict[tuple[str, ...], str]:
        return dict(self.entries)


Combine = Union[TensorComposite, PremiseProjection, ConstantSymbol, ExplicitTable]


@dataclass(frozen=True)
class AxiomSchema:
    """An axiom shape in a placeholder symbol plus a label combination function."""

    name: str
    arity: int
    premises: tuple[Edge, ...]
    conclusion: Edge
    combine: Combine
    monotone: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "premises", tuple(sorted(set(self.premises))))
        for e in self.premises + (self.conclusion,):
            if e.symbol != PLACEHOLDER:
                raise SchemaError("schema shapes must use the placeholder symbol")
            if len(e.args) != self.arity:
                raise SchemaError("schema shape has an edge of the wrong arity")
        if isinstance(self.combine, PremiseProjection):
            if not 0 <= self.combine.index < len(self.premises):
                raise SchemaError("projection index out of range")
        if isinstance(self.combine, ExplicitTable):
            for labels, _ in self.combine.entries:
                if len(labels) != len(self.premises):
                    raise SchemaError("table entry has the wrong number of labels")

    def variables(self) -> frozenset[str]:
        return frozenset(var_set(self.premises) | set(self.conclusion.args))


@dataclass(frozen=True)
class SchemaInstance:
    labels: tuple[str, ...]
    formula: HornFormula


def generalized_transitivity_schema() -> AxiomSchema:
    return AxiomSchema(
        name="generalized_transitivity",
        arity=2,
        premises=(Edge(PLACEHOLDER, ("x", "y")), Edge(PLACEHOLDER, ("y", "z"))),
        conclusion=Edge(PLACEHOLDER, ("x", "z")),
        combine=TensorComposite(),
        monotone=True,
    )


def symmetry_schema() -> AxiomSchema:
    return AxiomSchema(
        name="symmetry",
        arity=2,
        premises=(Edge(PLACEHOLDER, ("x", "y")),),
        conclusion=Edge(PLACEHOLDER, ("y", "x")),
        combine=PremiseProjection(0),
        monotone=True,
    )


def apply_combine(schema: AxiomSchema, sig: Signature, labels: tuple[str, ...]) -> str:
    if len(labels) != len(schema.premises):
        raise SchemaError("one label per premise is required")
    combine = schema.combine
    if isinstance(combine, TensorComposite):
        if sig.order_kind != QUANTALE or sig.quantale is None:
            raise SchemaError("tensor combination needs a quantale-induced signature")
        v = sig.quantale
        elements = [label[1:] for label in labels]  # strip the ~ prefix
        return "~" + reduce(v.tensor, elements, v.unit)
    if isinstance(combine, PremiseProjection):
        return labels[combine.index]
    if isinstance(combine, ConstantSymbol):
        return combine.symbol
    table = combine.lookup()
    if labels not in table:
        raise SchemaError(f"table has no entry for labels {labels}")
    return table[labels]


def expand_instances(schema: AxiomSchema, sig: Signature) -> tuple[SchemaInstance, ...]:
    """All instances of the schema over the signature, in canonical label order."""
    symbols = sig.symbols_of_arity(schema.arity)
    if not symbols:
        raise SchemaError(f"signature has no symbols of arity {schema.arity}")
    out = []
    for labels in itertools.product(symbols, repeat=len(schema.premises)):
        premises = [
            Edge(label, shape.args) for label, shape in zip(labels, schema.premises)
        ]
        conclusion = Edge(apply_combine(schema, sig, labels), schema.conclusion.args)
        out.append(SchemaInstance(labels, horn(premises, conclusion)))
    return tuple(out)


@lru_cache(maxsize=None)
def _monotone_verified(schema: AxiomSchema, sig: Signature) -> bool:
    """Whether the declared monotonicity of the combination function holds.

    Builtin combinations are monotone whenever the quantale laws hold; an
    explicit table declared monotone is checked exhaustively and a false
    declaration raises.
    """
    if not schema.monotone:
        return False
    if not isinstance(schema.combine, ExplicitTable):
        return True
    order = sig.order(schema.arity)
    k = len(schema.premises)
    for low in itertools.product(order.symbols, repeat=k):
        for high in itertools.product(order.symbols, repeat=k):
            if all(order.leq(a, b) for a, b in zip(low, high)):
                if not order.leq(
                    apply_combine(schema, sig, low), apply_combine(schema, sig, high)
                ):
                    raise SchemaError(
                        f"table declared monotone but fails at {low} <= {high}"
                    )
    return True


def _require_heyting(sig: Signature, arity: int) -> SymbolOrder:
    order = sig.order(arity)
    if not order.is_complete_heyting():
        raise SchemaError("schema convexity needs a complete-Heyting symbol order")
    return order


def _r_kappa_enumerated(
    schema: AxiomSchema,
    sig: Signature,
    order: SymbolOrder,
    labels: tuple[str, ...],
    x: Structure,
    args_per_premise: list[tuple[str, ...]],
) -> str:
    terms = []
    for sbar in itertools.product(order.symbols, repeat=len(labels)):
        if all(x.holds(s, args) for s, args in zip(sbar, args_per_premise)):
            meets = tuple(order.meet2(r, s) for r, s in zip(labels, sbar))
            terms.append(apply_combine(schema, sig, meets))
    out = order.join_of_set(terms)
    assert out is not None
    return out


def _r_kappa(
    schema: AxiomSchema,
    sig: Signature,
    order: SymbolOrder,
    labels: tuple[str, ...],
    x: Structure,
    kappa: dict[str, str],
) -> str:
    """The join of combined labels over all premise labelings satisfied under kappa.

    When the combination function is monotone the join collapses to a single
    evaluation at the componentwise maxima; in debug mode the collapsed value
    is asserted against the defining join.
    """
    args_per_premise = [tuple(kappa[v] for v in p.args) for p in schema.premises]
    if _monotone_verified(schema, sig):
        maxima = []
        for args in args_per_premise:
            present = [s for s in order.symbols if x.holds(s, args)]
            top = order.join_of_set(present)
            if top is None or top not in present:
                break  # labels not join-closed; fall back to the defining join
            maxima.append(top)
        else:
            meets = tuple(order.meet2(r, u) for r, u in zip(labels, maxima))
            fast = apply_combine(schema, sig, meets)
            if __debug__:
                slow = _r_kappa_enumerated(schema, sig, order, labels, x, args_per_premise)
                assert fast == slow, "monotone fast path disagrees with the defining join"
            return fast
    return _r_kappa_enumerated(schema, sig, order, labels, x, args_per_premise)


@dataclass(frozen=True)
class SchemaCounterexample:
    schema: str
    labels: tuple[str, ...]
    valuation: tuple[tuple[str, str], ...]
    lifted: tuple[str, ...]
    symbol: str


@dataclass(frozen=True)
class SchemaConvexityReport:
    convex: bool
    counterexample: Optional[SchemaCounterexample]


def is_schema_convex_wrt_instance(
    f: Morphism, schema: AxiomSchema, instance: SchemaInstance, theory: Theory
) -> SchemaConvexityReport:
    """Convexity of a morphism with respect to one instance of a schema.

    The endpoints are assumed to be models of the signature's base theory.
    """
    sig = theory.signature
    order = _require_heyting(sig, schema.arity)
    x, z = f.source, f.target
    concl_args = schema.conclusion.args
    premise_vars = var_set(schema.premises)
    variables = tuple(sorted(premise_vars | set(concl_args)))
    other_vars = tuple(sorted(premise_vars - set(concl_args)))
    fibre = {c: tuple(sorted(a for a in x.carrier if f(a) == c)) for c in z.carrier}
    sigma = apply_combine(schema, sig, instance.labels)
    below = order.below(sigma)
    labeled_premises = [
        Edge(label, shape.args) for label, shape in zip(instance.labels, schema.premises)
    ]

    for values in itertools.product(z.sorted_carrier(), repeat=len(variables)):
        kz = dict(zip(variables, values))
        if not all(z.holds(e.symbol, tuple(kz[v] for v in e.args)) for e in labeled_premises):
            continue
        fibres = [fibre[kz[v]] for v in concl_args]
        for xs in itertools.product(*fibres):
            pinned: dict[str, str] = {}
            consistent = True
            for v, val in zip(concl_args, xs):
                if pinned.setdefault(v, val) != val:
                    consistent = False
                    break
            goods: list[dict[str, str]] = []
            if consistent:
                domains = [fibre[kz[v]] for v in other_vars]
                for assignment in itertools.product(*domains):
                    kappa = dict(pinned)
                    kappa.update(zip(other_vars, assignment))
                    goods.append(kappa)
            total = order.bottom()
            assert total is not None
            for kappa in goods:
                total = order.join2(
                    total, _r_kappa(schema, sig, order, instance.labels, x, kappa)
                )
            for t in below:
                if x.holds(t, xs) and not order.leq(t, total):
                    return SchemaConvexityReport(
                        False,
                        SchemaCounterexample(
                            schema.name, instance.labels, tuple(sorted(kz.items())), xs, t
                        ),
                    )
    return SchemaConvexityReport(True, None)


def is_schema_convex(f: Morphism, theory: Theory) -> SchemaConvexityReport:
    """Convexity with respect to every instance of every schema of the theory."""
    for schema in theory.schemas:
        for instance in expand_instances(schema, theory.signature):
            report = is_schema_convex_wrt_instance(f, schema, instance, theory)
            if not report.convex:
                return report
    return SchemaConvexityReport(True, None)


def is_schema_object_convex(x: Structure, theory: Theory) -> SchemaConvexityReport:
    """Object convexity: good valuations only pin the conclusion tuple."""
    sig = theory.signature
    carrier = x.sorted_carrier()
    for schema in theory.schemas:
        order = _require_heyting(sig, schema.arity)
        concl_args = schema.conclusion.args
        other_vars = tuple(sorted(var_set(schema.premises) - set(concl_args)))
        for instance in expand_instances(schema, sig):
            sigma = apply_combine(schema, sig, instance.labels)
            below = order.below(sigma)
            for xs in itertools.product(carrier, repeat=len(concl_args)):
                pinned: dict[str, str] = {}
                consistent = True
                for v, val in zip(concl_args, xs):
                    if pinned.setdefault(v, val) != val:
                        consistent = False
                        break
                goods: list[dict[str, str]] = []
                if consistent:
                    for assignment in itertools.product(carrier, repeat=len(other_vars)):
                        kappa = dict(pinned)
                        kappa.update(zip(other_vars, assignment))
                        goods.append(kappa)
                total = order.bottom()
                assert total is not None
                for kappa in goods:
                    total = order.join2(
                        total, _r_kappa(schema, sig, order, instance.labels, x, kappa)
                    )
                for t in below:
                    if x.holds(t, xs) and not order.leq(t, total):
                        return SchemaConvexityReport(
                            False,
                            SchemaCounterexample(
                                schema.name, instance.labels, (), xs, t
                            ),
                        )
    return SchemaConvexityReport(True, None)


def ch_condition_oracle(h: VFunctor, v: Quantale) -> bool:
    """The distance-form exponentiability condition for maps of reflexive V-graphs.

    For all x1, x3 upstairs, z2 downstairs and u <= d(f(x1), z2),
    u' <= d(z2, f(x3)):

        d(x1, x3) /\\ (u (x) u')
            <= \\/ over x2 in the fibre of z2 of
               (d(x1, x2) /\\ u) (x) (d(x2, x3) /\\ u')
    """
    if not is_heyting(v):
        raise QuantaleError("the distance-form condition needs a Heyting lattice")
    dx, dz = h.source, h.target
    for x1 in dx.carrier:
        for x3 in dx.carrier:
            for z2 in dz.carrier:
                fibre = [a for a in dx.carrier if h(a) == z2]
                for u in v.elements:
                    if not v.leq(u, dz.d(h(x1), z2)):
                        continue
                    for u2 in v.elements:
                        if not v.leq(u2, dz.d(z2, h(x3))):
                            continue
                        lhs = v.meet2(dx.d(x1, x3), v.tensor(u, u2))
                        rhs = v.join(
                            v.tensor(
                                v.meet2(dx.d(x1, x2), u), v.meet2(dx.d(x2, x3), u2)
                            )
                            for x2 in fibre
                        )
                        if not v.leq(lhs, rhs):
                            return False
    return True


@dataclass(frozen=True)
class SchemaSafetyResult:
    safe: bool
    very_safe: bool
    witnesses: Optional[tuple[tuple[tuple[str, ...], tuple[tuple[str, str], ...]], ...]]
    meet_violation: Optional[tuple[tuple[str, ...], str]]
    unsafe_labels: Optional[tuple[str, ...]] = None


def is_schema_safe(schema: AxiomSchema, theory: Theory) -> SchemaSafetyResult:
    """Meet-compatibility of the combination function plus per-instance collapses.

    Safety requires the combination function to commute with meets by a fixed
    symbol, and for each label tuple a variable collapse under which the
    instance's premises follow from its conclusion.
    """
    sig = theory.signature
    order = _require_heyting(sig, schema.arity)
    k = len(schema.premises)
    for rbar in itertools.product(order.symbols, repeat=k):
        for s in order.symbols:
            lowered = tuple(order.meet2(r, s) for r in rbar)
            lhs = apply_combine(schema, sig, lowered)
            rhs = order.meet2(apply_combine(schema, sig, rbar), s)
            if lhs != rhs:
                return SchemaSafetyResult(False, False, None, (rbar, s))
    concl_args = schema.conclusion.args
    fixed = list(dict.fromkeys(concl_args))
    free = tuple(sorted(var_set(schema.premises) - set(concl_args)))
    very = not free
    witnesses = []
    for rbar in itertools.product(order.symbols, repeat=k):
        sigma = apply_combine(schema, sig, rbar)
        head = Edge(sigma, concl_args)
        found = None
        for values in itertools.product(fixed, repeat=len(free)):
            kappa = {v: v for v in fixed}
            kappa.update(zip(free, values))
            ok = all(
                entails(
                    theory,
                    horn((head,), Edge(label, tuple(kappa[v] for v in shape.args))),
                )
                for label, shape in zip(rbar, schema.premises)
            )
            if ok:
                found = tuple(sorted(kappa.items()))
                break
        if found is None:
            return SchemaSafetyResult(False, False, None, None, rbar)
        witnesses.append((rbar, found))
    return SchemaSafetyResult(True, very, tuple(witnesses), None)


def is_schema_very_safe(schema: AxiomSchema, theory: Theory) -> bool:
    return is_schema_safe(schema, theory).very_safe


@dataclass(frozen=True)
class SchematicClassification:
    schematic: bool
    per_schema: tuple[tuple[str, SchemaSafetyResult], ...]
    has_equality: bool
    cartesian_closed: bool
    locally_cartesian_closed: bool
    quasitopos: bool
    notes: tuple[str, ...]


def classify_schematic_theory(theory: Theory) -> SchematicClassification:
    """Closure advisory for a schematic extension of the base theory.

    All schemas safe gives cartesian closure; all very safe gives local
    cartesian closure; very safe without any equality axiom additionally
    makes the category of models a quasitopos (a topological universe).
    """
    non_base = theory.non_base_axioms()
    flat_edge_axioms = [ax for ax in non_base if not ax.has_equality()]
    schematic = theory.base_flag and not flat_edge_axioms
    notes = []
    if not schematic:
        notes.append(
            "theory is not a schematic extension of the base theory; "
            "the schema-safety theorems do not apply"
        )
        return SchematicClassification(False, (), theory.has_equality_axiom(),
                                       False, False, False, tuple(notes))
    results = tuple((s.name, is_schema_safe(s, theory)) for s in theory.schemas)
    all_safe = all(r.safe for _, r in results)
    all_very = all(r.very_safe for _, r in results)
    has_eq = theory.has_equality_axiom()
    if all_very:
        notes.append("all schemas very safe: every morphism of models is convex, "
                     "so the category of models is locally cartesian closed")
        if not has_eq:
            notes.append("no equality axioms: the category is moreover a quasitopos "
                         "(a topological universe)")
    elif all_safe:
        notes.append("all schemas safe: every model is convex, "
                     "so the category of models is cartesian closed")
    else:
        notes.append("some schema is not safe; no closure property is implied")
    return SchematicClassification(
        schematic=True,
        per_schema=results,
        has_equality=has_eq,
        cartesian_closed=all_safe,
        locally_cartesian_closed=all_very,
        quasitopos=all_very and not has_eq,
        notes=tuple(notes),
    )
