"""Convexity of morphisms and objects, safety of axioms, and classification.

Convexity with respect to an axiom asks that every premise-satisfying
valuation downstairs, together with a lift of the conclusion tuple, extends
to a premise-satisfying valuation upstairs with the remaining premise
variables lifted within their fibres.  An equivalent reformulation via weak
right lifting against the axiom's free-model inclusion is provided as an
independent oracle.  Safe axioms are those whose premises follow from their
conclusion under a variable-collapsing substitution; they force convexity of
objects (and, when very safe, of all morphisms).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .core import (
    DISCRETE,
    Edge,
    HornFormula,
    Morphism,
    SignatureError,
    Structure,
    Theory,
    TheoryError,
    compose,
    fresh_variables,
    horn,
    var_set,
)
from .limits import enumerate_morphisms
from .semantics import entails, free_model, is_reflexive_theory_heuristic


@dataclass(frozen=True)
class ConvexityCounterexample:
    """The lexicographically first failing (downstairs valuation, lifted tuple)."""

    axiom: HornFormula
    valuation: tuple[tuple[str, str], ...]
    lifted: tuple[str, ...]


@dataclass(frozen=True)
class ConvexityReport:
    convex: bool
    counterexample: Optional[ConvexityCounterexample]


def eligible_axioms(theory: Theory) -> tuple[HornFormula, ...]:
    """The equality-free axioms of the theory that are not base axioms."""
    return tuple(
        ax
        for ax in theory.non_base_axioms()
        if not ax.has_equality()
    )


def _require_discrete(theory: Theory) -> None:
    if theory.signature.order_kind != DISCRETE:
        raise SignatureError("convexity in this form is defined over discrete signatures")


def _all_valuations(variables: tuple[str, ...], carrier: tuple[str, ...]):
    for values in itertools.product(carrier, repeat=len(variables)):
        yield dict(zip(variables, values))


def is_convex_wrt(f: Morphism, axiom: HornFormula, theory: Theory) -> ConvexityReport:
    """Convexity of a morphism with respect to one equality-free axiom."""
    _require_discrete(theory)
    if axiom.has_equality():
        raise TheoryError("convexity is defined for axioms with edge conclusions")
    assert isinstance(axiom.conclusion, Edge)
    concl = axiom.conclusion
    x, z = f.source, f.target
    premise_vars = var_set(axiom.premises)
    variables = tuple(sorted(premise_vars | set(concl.args)))
    other_vars = tuple(sorted(premise_vars - set(concl.args)))
    fibre = {c: tuple(sorted(a for a in x.carrier if f(a) == c)) for c in z.carrier}

    for kz in _all_valuations(variables, z.sorted_carrier()):
        if not all(z.holds(e.symbol, tuple(kz[v] for v in e.args)) for e in axiom.premises):
            continue
        fibres = [fibre[kz[v]] for v in concl.args]
        for xs in itertools.product(*fibres):
            if not x.holds(concl.symbol, xs):
                continue
            pinned: dict[str, str] = {}
            consistent = True
            for v, val in zip(concl.args, xs):
                if pinned.setdefault(v, val) != val:
                    consistent = False
                    break
            found = consistent and _lift_exists(x, axiom, pinned, other_vars, fibre, kz)
            if not found:
                return ConvexityReport(
                    False,
                    ConvexityCounterexample(axiom, tuple(sorted(kz.items())), xs),
                )
    return ConvexityReport(True, None)


def _lift_exists(
    x: Structure,
    axiom: HornFormula,
    pinned: dict[str, str],
    other_vars: tuple[str, ...],
    fibre: dict[str, tuple[str, ...]],
    kz: dict[str, str],
) -> bool:
    domains = [fibre[kz[v]] for v in other_vars]
    for values in itertools.product(*domains):
        kappa = dict(pinned)
        kappa.update(zip(other_vars, values))
        if all(x.holds(e.symbol, tuple(kappa[v] for v in e.args)) for e in axiom.premises):
            return True
    return False


def convexity_report(f: Morphism, theory: Theory) -> ConvexityReport:
    """Convexity with respect to every eligible axiom, with the first counterexample."""
    _require_discrete(theory)
    for ax in eligible_axioms(theory):
        report = is_convex_wrt(f, ax, theory)
        if not report.convex:
            return report
    return ConvexityReport(True, None)


def is_convex(f: Morphism, theory: Theory) -> bool:
    return convexity_report(f, theory).convex


def _axiom_free_models(axiom: HornFormula, theory: Theory):
    """The free models R_T -> (premises + conclusion)_T and the comparison morphism."""
    assert isinstance(axiom.conclusion, Edge)
    concl = axiom.conclusion
    n = len(concl.args)
    generators = fresh_variables(n, avoid=axiom.variables(), base="g")
    generic = Structure(theory.signature, generators, (Edge(concl.symbol, generators),))
    edge_model = free_model(theory, generic)
    variables = sorted(axiom.variables())
    implication = Structure(
        theory.signature, variables, set(axiom.premises) | {concl}
    )
    impl_model = free_model(theory, implication)
    mapping = {}
    for g, v in zip(generators, concl.args):
        image = impl_model.unit_map(v)
        key = edge_model.unit_map(g)
        if mapping.setdefault(key, image) != image:
            raise TheoryError("axiom free models are inconsistent")  # pragma: no cover
    comparison = Morphism(edge_model.model, impl_model.model, mapping)
    return edge_model.model, impl_model.model, comparison


def is_convex_via_lifting(f: Morphism, theory: Theory) -> bool:
    """Convexity decided through the weak right lifting property.

    For each eligible axiom, every commutative square from the comparison
    morphism of its free models to ``f`` must admit a diagonal filler.  Agrees
    with :func:`is_convex` on all inputs; the pair is a dual-oracle check.
    """
    _require_discrete(theory)
    x, z = f.source, f.target
    for ax in eligible_axioms(theory):
        edge_model, impl_model, comparison = _axiom_free_models(ax, theory)
        fillers = enumerate_morphisms(impl_model, x)
        for top in enumerate_morphisms(edge_model, x):
            target = compose(f, top)
            for bottom in enumerate_morphisms(impl_model, z):
                if compose(bottom, comparison) != target:
                    continue
                if not any(
                    compose(d, comparison) == top and compose(f, d) == bottom
                    for d in fillers
                ):
                    return False
    return True


def is_object_convex(x: Structure, theory: Theory) -> bool:
    """Convexity of the unique map to the terminal object, computed directly."""
    _require_discrete(theory)
    for ax in eligible_axioms(theory):
        assert isinstance(ax.conclusion, Edge)
        concl = ax.conclusion
        other_vars = tuple(sorted(var_set(ax.premises) - set(concl.args)))
        full = {c: x.sorted_carrier() for c in ("*",)}
        for xs in sorted(x.tuples(concl.symbol)):
            pinned: dict[str, str] = {}
            consistent = True
            for v, val in zip(concl.args, xs):
                if pinned.setdefault(v, val) != val:
                    consistent = False
                    break
            if not consistent:
                return False
            if not _lift_exists(
                x, ax, pinned, other_vars, full, {v: "*" for v in other_vars}
            ):
                return False
    return True


@dataclass(frozen=True)
class SafetyResult:
    safe: bool
    very_safe: bool
    witness: Optional[tuple[tuple[str, str], ...]]

    def witness_dict(self) -> Optional[dict[str, str]]:
        return dict(self.witness) if self.witness is not None else None


def is_safe_axiom(axiom: HornFormula, theory: Theory) -> SafetyResult:
    """Search for a variable collapse making the premises follow from the conclusion.

    Candidate values for each free premise variable are tried in the order the
    conclusion tuple lists its variables, so the reported witness is the
    canonical first one.
    """
    if axiom.has_equality():
        raise TheoryError("safety is defined for axioms with edge conclusions")
    assert isinstance(axiom.conclusion, Edge)
    concl = axiom.conclusion
    fixed = list(dict.fromkeys(concl.args))
    free = tuple(sorted(var_set(axiom.premises) - set(concl.args)))
    very = not free
    for values in itertools.product(fixed, repeat=len(free)):
        kappa = {v: v for v in fixed}
        kappa.update(zip(free, values))
        ok = all(
            entails(
                theory,
                horn((concl,), Edge(e.symbol, tuple(kappa[v] for v in e.args))),
            )
            for e in sorted(axiom.premises)
        )
        if ok:
            witness = tuple(sorted(kappa.items()))
            return SafetyResult(True, very, witness)
    return SafetyResult(False, False, None)


def is_very_safe_axiom(axiom: HornFormula, theory: Theory) -> bool:
    return is_safe_axiom(axiom, theory).very_safe


ALL_VERY_SAFE = "all_very_safe"
ALL_SAFE = "all_safe"
NEITHER = "neither"


@dataclass(frozen=True)
class TheoryClassification:
    classification: str
    reflexive: bool
    per_axiom: tuple[SafetyResult, ...]
    has_equality: bool
    cartesian_closed: bool
    locally_cartesian_closed: bool
    quasitopos: bool
    notes: tuple[str, ...]


def classify_theory(theory: Theory) -> TheoryClassification:
    """Which closure properties the safety of the axioms guarantees.

    All axioms safe makes every model exponentiable, hence the category of
    models cartesian closed; all axioms very safe makes every morphism
    exponentiable, hence local cartesian closure; very safe without equality
    axioms additionally gives a quasitopos (a topological universe).
    """
    _require_discrete(theory)
    reflexive = is_reflexive_theory_heuristic(theory)
    results = tuple(is_safe_axiom(ax, theory) for ax in eligible_axioms(theory))
    all_safe = all(r.safe for r in results)
    all_very = all(r.safe and r.very_safe for r in results)
    has_eq = theory.has_equality_axiom()
    notes = []
    if not reflexive:
        notes.append("theory is not reflexive; the safety theorems do not apply")
    if all_very and reflexive:
        classification = ALL_VERY_SAFE
        notes.append("all axioms very safe: every morphism of models is convex, "
                     "so the category of models is locally cartesian closed")
        if not has_eq:
            notes.append("no equality axioms: the category is moreover a quasitopos "
                         "(a topological universe)")
    elif all_safe and reflexive:
        classification = ALL_SAFE
        notes.append("all axioms safe: every model is convex, "
                     "so the category of models is cartesian closed")
    else:
        classification = NEITHER
        notes.append("some axiom is not safe; no closure property is implied")
    return TheoryClassification(
        classification=classification,
        reflexive=reflexive,
        per_axiom=results,
        has_equality=has_eq,
        cartesian_closed=reflexive and all_safe,
        locally_cartesian_closed=reflexive and all_very,
        quasitopos=reflexive and all_very and not has_eq,
        notes=tuple(notes),
    )
