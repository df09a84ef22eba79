"""Deterministic families of small structures used as test objects.

Families enumerate all edge subsets on canonical carriers (e0, e1, ...), can
reduce to isomorphism-class representatives, and sample with a fixed seed
once the exhaustive family exceeds a cap.  All output orders are canonical,
so the same inputs always give the same family.
"""
from __future__ import annotations

import itertools
import random
from typing import Iterator, Optional

from .core import Edge, Signature, Structure, StructureError, Theory
from .semantics import is_model

DEFAULT_CAP = 512


def canonical_carrier(size: int) -> tuple[str, ...]:
    return tuple(f"e{i}" for i in range(size))


def edge_slots(sig: Signature, carrier: tuple[str, ...]) -> list[Edge]:
    """All possible edges over a carrier, in canonical order."""
    out = []
    for s in sig.symbols:
        for args in itertools.product(carrier, repeat=s.arity):
            out.append(Edge(s.name, args))
    return out


def structures_on_carrier(
    sig: Signature, size: int, cap: Optional[int] = DEFAULT_CAP, seed: int = 0
) -> Iterator[Structure]:
    """All structures on the canonical carrier of a size, sampled beyond the cap."""
    carrier = canonical_carrier(size)
    slots = edge_slots(sig, carrier)
    total = 2 ** len(slots)
    if cap is None or total <= cap:
        chosen: Iterator[int] = iter(range(total))
    else:
        if len(slots) > 62:
            raise StructureError("edge-slot space too large to sample by index")
        rng = random.Random(seed)
        chosen = iter(sorted(rng.sample(range(total), cap)))
    for mask in chosen:
        edges = [e for i, e in enumerate(slots) if mask >> i & 1]
        yield Structure(sig, carrier, edges)


def all_structures(
    sig: Signature, max_size: int, cap: Optional[int] = DEFAULT_CAP, seed: int = 0
) -> list[Structure]:
    """All structures with carrier size up to ``max_size`` (sampled per size beyond cap)."""
    out: list[Structure] = []
    for size in range(max_size + 1):
        out.extend(structures_on_carrier(sig, size, cap, seed))
    return out


def iso_key(x: Structure) -> tuple:
    """A canonical form invariant under carrier relabelling."""
    carrier = x.sorted_carrier()
    best = None
    for perm in itertools.permutations(range(len(carrier))):
        rename = {carrier[i]: f"e{perm[i]}" for i in range(len(carrier))}
        edges = tuple(sorted(Edge(e.symbol, tuple(rename[a] for a in e.args)) for e in x.edges))
        if best is None or edges < best:
            best = edges
    return (len(carrier), best)


def dedup_by_iso(structures: list[Structure]) -> list[Structure]:
    """Keep the first representative of each isomorphism class, preserving order."""
    seen = set()
    out = []
    for s in structures:
        key = iso_key(s)
        if key not in seen:
            seen.add(key)
            out.append(s)
    return out


def all_models(
    theory: Theory,
    max_size: int,
    iso: bool = True,
    cap: Optional[int] = DEFAULT_CAP,
    seed: int = 0,
) -> list[Structure]:
    """All models of the theory up to a carrier size, optionally one per iso class."""
    models = [s for s in all_structures(theory.signature, max_size, cap, seed)
              if is_model(s, theory)]
    return dedup_by_iso(models) if iso else models


def sample_family(structures: list[Structure], cap: int, seed: int) -> list[Structure]:
    """A deterministic subfamily: everything when under the cap, else a seeded sample."""
    if len(structures) <= cap:
        return list(structures)
    rng = random.Random(seed)
    indices = sorted(rng.sample(range(len(structures)), cap))
    return [structures[i] for i in indices]


def default_test_family(
    sig: Signature,
    max_size: int = 2,
    cap: int = DEFAULT_CAP,
    seed: int = 0,
    theory: Optional[Theory] = None,
) -> list[Structure]:
    """The default family for the universal-property verifiers.

    One representative per isomorphism class of structures (or of the
    theory's models, when given) up to the size bound, sampled past the cap.
    """
    if theory is not None:
        family = all_models(theory, max_size, iso=True, cap=None)
    else:
        family = dedup_by_iso(all_structures(sig, max_size, cap=None))
    return sample_family(family, cap, seed)
