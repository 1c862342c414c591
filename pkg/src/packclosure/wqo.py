"""Quasi-order combinators: products, subsequence embedding, finite bases.

A quasi-order is represented by its comparison callable ``leq(a, b)``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, List, Optional, Sequence, Tuple

from .errors import NotDecreasing

QuasiOrder = Callable[[Any, Any], bool]


def nat_leq(a, b) -> bool:
    return a <= b


def product_leq(ord1: QuasiOrder, ord2: QuasiOrder) -> QuasiOrder:
    """Componentwise order on pairs."""

    def leq(x, y):
        return ord1(x[0], y[0]) and ord2(x[1], y[1])

    return leq


def power_leq(base: QuasiOrder, n: int) -> QuasiOrder:
    """The ``n``-fold product of ``base`` acting on length-``n`` tuples.

    Built by nesting :func:`product_leq`, so ``power_leq(nat_leq, n)`` is the
    componentwise order on ``N^n``.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return lambda x, y: base(x[0], y[0])
    rest = power_leq(base, n - 1)
    pair = product_leq(base, rest)
    return lambda x, y: pair((x[0], tuple(x[1:])), (y[0], tuple(y[1:])))


@dataclass(frozen=True)
class EmbeddingWitness:
    """Strictly increasing 0-based positions ``mapping[i]`` in the longer
    sequence with ``x[i] <= y[mapping[i]]``."""

    mapping: Tuple[int, ...]


def higman_leq(x: Sequence, y: Sequence, base: QuasiOrder = nat_leq) -> Optional[EmbeddingWitness]:
    """Embed ``x`` into ``y`` as a dominated subsequence, or return ``None``.

    Greedy leftmost matching. It is complete: if any embedding exists, the
    greedy one matches every ``x[i]`` at a position no later than that
    embedding does (induction on ``i``), so it never runs out of ``y``.
    """
    mapping = []
    j = 0
    for xi in x:
        while j < len(y) and not base(xi, y[j]):
            j += 1
        if j == len(y):
            return None
        mapping.append(j)
        j += 1
    return EmbeddingWitness(tuple(mapping))


def higman_leq_exhaustive(x: Sequence, y: Sequence, base: QuasiOrder = nat_leq) -> Optional[EmbeddingWitness]:
    """Reference search over all increasing maps; exponential, for testing."""
    for positions in itertools.combinations(range(len(y)), len(x)):
        if all(base(a, y[p]) for a, p in zip(x, positions)):
            return EmbeddingWitness(positions)
    return None


def compose_witnesses(first: EmbeddingWitness, second: EmbeddingWitness) -> EmbeddingWitness:
    """Witness for ``x <=* z`` from witnesses of ``x <=* y`` and ``y <=* z``."""
    return EmbeddingWitness(tuple(second.mapping[i] for i in first.mapping))


@dataclass
class BasisState:
    """Running minimal basis of a stream under ``leq``.

    ``last_change_index`` is the 0-based stream position of the last
    element that altered the basis, -1 before any.
    """

    leq: QuasiOrder
    basis: List[Any] = field(default_factory=list)
    seen_count: int = 0
    last_change_index: int = -1


def basis_insert(state: BasisState, element) -> bool:
    """Feed one element; returns ``True`` if it was absorbed.

    An element dominating some basis member is absorbed and only counted.
    Otherwise it joins the basis and evicts every member above it. Among
    equivalent elements the first one seen stays.
    """
    index = state.seen_count
    state.seen_count += 1
    if any(state.leq(b, element) for b in state.basis):
        return True
    state.basis = [b for b in state.basis if not state.leq(element, b)]
    state.basis.append(element)
    state.last_change_index = index
    return False


def equivalent(leq: QuasiOrder, a, b) -> bool:
    return leq(a, b) and leq(b, a)


def tail_index(seq: Sequence, leq: QuasiOrder = nat_leq) -> int:
    """Smallest ``k`` with ``seq[k]`` equivalent to the last element.

    ``seq`` must be decreasing: ``seq[i+1] <= seq[i]`` throughout.
    """
    if not seq:
        raise ValueError("empty sequence")
    for i in range(len(seq) - 1):
        if not leq(seq[i + 1], seq[i]):
            raise NotDecreasing(f"element {i + 1} is not below element {i}")
    last = seq[-1]
    return next(k for k, s in enumerate(seq) if equivalent(leq, s, last))
