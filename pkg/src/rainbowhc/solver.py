"""Exact search for rainbow cycles plus brute-force moment oracles.

The searcher backtracks over vertex placements one (k-ell)-block at a time,
pruning on edge presence and on rainbow feasibility (an incremental
distinct-representatives matcher).  Exhaustive mode proves absence; budgeted
mode gives up after a node quota and reports Unknown.

The oracles enumerate all n! permutations outright and exist to pin the
closed-form moment calculations to something independently computable, so
they stay deliberately naive (with a cached numpy fast path for the counting
loop, since Monte Carlo tests call it a hundred thousand times).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import numpy as np

from .core import (
    ColorMatcher,
    ColoredHypergraph,
    CycleSpec,
    Edge,
    Hamperm,
    RainbowCertificate,
    edges_of_hamperm,
    verify_certificate,
)
from .errors import InvalidInput, TooLarge

ENUMERATION_LIMIT = 9       # n! enumeration cap for counting oracles
PAIRWISE_LIMIT = 7          # (n!)^2 cap for the pairwise second-moment oracle


class SearchStatus(Enum):
    FOUND = "found"
    NOT_FOUND = "not_found"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class SearchOutcome:
    """Result of one search: status, optional certificate, effort spent."""

    status: SearchStatus
    certificate: Optional[RainbowCertificate]
    nodes_expanded: int
    budget_hit: bool
    reason: Optional[str] = None

    @property
    def found(self) -> bool:
        return self.status is SearchStatus.FOUND

    def to_record(self, budget: Optional[int] = None, provenance=None) -> dict:
        """JSON-ready record: status, certificate, effort, provenance."""
        cert = None
        if self.certificate is not None:
            cert = {
                "permutation": list(self.certificate.hamperm.pi),
                "edges": [list(e) for e in self.certificate.edges],
                "colors": list(self.certificate.colors),
            }
        return {
            "status": self.status.value,
            "certificate": cert,
            "nodes_expanded": self.nodes_expanded,
            "budget_hit": self.budget_hit,
            "budget": budget,
            "reason": self.reason,
            "provenance": provenance,
        }


class _BudgetExceeded(Exception):
    pass


def find_rainbow_cycle(
    H: ColoredHypergraph,
    spec: CycleSpec,
    mode: str = "exhaustive",
    budget: Optional[int] = None,
) -> SearchOutcome:
    """Search H for a rainbow ell-overlapping Hamilton cycle.

    Placement proceeds block by block around the cycle, candidate blocks in
    increasing lexicographic order; an edge is checked the moment its window
    is fully placed (presence in H, then a color via the incremental
    matcher).  Vertex 1 is fixed into the first block — the only symmetry
    reduction applied, existence-preserving because rotating a permutation
    by multiples of k-ell permutes the same edge set.  Exhaustive mode
    returns NOT_FOUND only on full exhaustion; budgeted mode additionally
    stops after ``budget`` node expansions and returns UNKNOWN.
    """
    if H.n != spec.n or H.k != spec.k:
        raise InvalidInput(
            f"hypergraph (n={H.n}, k={H.k}) does not match spec "
            f"(n={spec.n}, k={spec.k})"
        )
    if mode not in ("exhaustive", "budgeted"):
        raise InvalidInput(f"unknown search mode {mode!r}")
    if mode == "budgeted":
        if budget is None or budget <= 0:
            raise InvalidInput("budgeted mode needs a positive budget")
    else:
        budget = None

    m = spec.m
    if H.r < m:
        return SearchOutcome(
            SearchStatus.NOT_FOUND, None, 0, False, reason="insufficient_colors"
        )
    if H.edge_count < m:
        return SearchOutcome(
            SearchStatus.NOT_FOUND, None, 0, False, reason="too_few_edges"
        )

    n, bs = spec.n, spec.block_size
    windows = spec.windows()
    span = -(-spec.k // bs) - 1  # extra blocks an edge's window reaches into
    perm = [0] * n
    used = [False] * (n + 1)
    matcher = ColorMatcher()
    nodes = 0

    def edges_ready(block: int) -> range:
        if block < m - 1:
            j = block - span
            return range(j, j + 1) if j >= 0 else range(0)
        return range(m - 1 - span, m)  # closing block: last regular + wrapped

    def place(block: int) -> Optional[RainbowCertificate]:
        nonlocal nodes
        base = block * bs
        unused = [v for v in range(1, n + 1) if not used[v]]
        for cand in itertools.permutations(unused, bs):
            if block == 0 and 1 not in cand:
                continue
            nodes += 1
            if budget is not None and nodes > budget:
                raise _BudgetExceeded
            for off, v in enumerate(cand):
                perm[base + off] = v
                used[v] = True
            added = []
            ok = True
            for j in edges_ready(block):
                key = tuple(sorted(perm[p] for p in windows[j]))
                colors = H.colors_of(key)
                if not colors or not matcher.add(j, colors):
                    ok = False
                    break
                added.append(j)
            if ok:
                if block + 1 == m:
                    pi = Hamperm(tuple(perm), spec)
                    edges = edges_of_hamperm(pi)
                    colors = tuple(matcher.color_of(j) for j in range(m))
                    return RainbowCertificate(pi, tuple(edges), colors)
                result = place(block + 1)
                if result is not None:
                    return result
            for j in reversed(added):
                matcher.remove(j)
            for v in cand:
                used[v] = False
        return None

    try:
        cert = place(0)
    except _BudgetExceeded:
        return SearchOutcome(SearchStatus.UNKNOWN, None, nodes, True)
    if cert is not None:
        return SearchOutcome(SearchStatus.FOUND, cert, nodes, False)
    return SearchOutcome(SearchStatus.NOT_FOUND, None, nodes, False, reason="exhausted")


# ---------------------------------------------------------------------------
# permutation-enumeration machinery


def _colex_rank(edge: Edge) -> int:
    """Rank of a canonical edge in colex order over all k-subsets of [n]."""
    return sum(math.comb(v - 1, j + 1) for j, v in enumerate(edge))


@lru_cache(maxsize=32)
def _perm_edge_table(n: int, k: int, ell: int) -> np.ndarray:
    """(n!, m) array: row = induced-edge colex ranks of each permutation of
    [n] in lexicographic permutation order."""
    spec = CycleSpec(n, k, ell)
    perms = np.fromiter(
        itertools.chain.from_iterable(itertools.permutations(range(n))),
        dtype=np.int32,
        count=math.factorial(n) * n,
    ).reshape(math.factorial(n), n)
    comb = np.zeros((n, k + 1), dtype=np.int64)
    for v in range(n):
        for t in range(k + 1):
            comb[v, t] = math.comb(v, t)
    table = np.empty((perms.shape[0], spec.m), dtype=np.int64)
    for i, window in enumerate(spec.windows()):
        vals = np.sort(perms[:, list(window)], axis=1)
        rank = np.zeros(perms.shape[0], dtype=np.int64)
        for j in range(k):
            rank += comb[vals[:, j], j + 1]
        table[:, i] = rank
    return table


def _presence_and_colors(
    H: ColoredHypergraph,
) -> tuple[np.ndarray, np.ndarray]:
    total = math.comb(H.n, H.k)
    present = np.zeros(total, dtype=bool)
    color = np.zeros(total, dtype=np.int64)
    for edge, colors in H.items():
        rank = _colex_rank(edge)
        present[rank] = True
        color[rank] = next(iter(colors))
    return present, color


def count_hamperms(
    H: ColoredHypergraph, spec: CycleSpec, limit: int = ENUMERATION_LIMIT
) -> tuple[int, int]:
    """Enumerate all n! permutations of [n] against H.

    Returns (X_count, Y_count): permutations whose induced edges all exist,
    and those additionally admitting a system of pairwise distinct colors.
    """
    if H.n != spec.n or H.k != spec.k:
        raise InvalidInput("hypergraph does not match spec")
    if spec.n > limit:
        raise TooLarge(f"n = {spec.n} exceeds the enumeration limit {limit}")
    if not H.multi_color:
        table = _perm_edge_table(spec.n, spec.k, spec.ell)
        present, color = _presence_and_colors(H)
        ok = present[table].all(axis=1)
        x_count = int(ok.sum())
        if x_count == 0:
            return 0, 0
        cmat = np.sort(color[table[ok]], axis=1)
        rainbow = (cmat[:, 1:] != cmat[:, :-1]).all(axis=1)
        return x_count, int(rainbow.sum())

    from .core import distinct_color_system

    x_count = y_count = 0
    for perm in itertools.permutations(range(1, spec.n + 1)):
        pi = Hamperm(perm, spec)
        color_sets = []
        for edge in edges_of_hamperm(pi):
            colors = H.colors_of(edge)
            if not colors:
                break
            color_sets.append(colors)
        else:
            x_count += 1
            if distinct_color_system(color_sets) is not None:
                y_count += 1
    return x_count, y_count


@dataclass(frozen=True)
class OverlapProfile:
    """N(b, a) table against a reference cycle, plus the N(0, 0) mass.

    Entry (b, a) counts permutations whose induced cycle shares exactly b
    edges with the reference cycle, those shared edges forming a maximal
    chains in the reference cycle's cyclic edge order (consecutive chain
    members intersecting; chains meeting across the wrap-around seam merge;
    the full-overlap case b = m is recorded under a = 1).  Entry (0, 0)
    counts edge-disjoint permutations, so the table totals n!.
    """

    spec: CycleSpec
    table: dict[tuple[int, int], int]

    def total(self) -> int:
        return sum(self.table.values())

    def by_overlap(self) -> dict[int, int]:
        """Aggregate N(b) = sum_a N(b, a)."""
        agg: dict[int, int] = {}
        for (b, _a), count in self.table.items():
            agg[b] = agg.get(b, 0) + count
        return agg


def overlap_profile(spec: CycleSpec, limit: int = ENUMERATION_LIMIT) -> OverlapProfile:
    """Exhaustive N(b, a) via enumeration, reference cycle = identity.

    Fixing the reference permutation is sound because the table does not
    depend on it (relabeling vertices is a bijection on permutations).
    """
    if spec.n > limit:
        raise TooLarge(f"n = {spec.n} exceeds the enumeration limit {limit}")
    n, m = spec.n, spec.m
    identity = Hamperm(tuple(range(1, n + 1)), spec)
    ref_edges = edges_of_hamperm(identity)
    ref_sets = [set(e) for e in ref_edges]
    meets = [
        [bool(ref_sets[i] & ref_sets[j]) for j in range(m)] for i in range(m)
    ]
    total_ranks = math.comb(n, spec.k)
    ref_index = np.full(total_ranks, -1, dtype=np.int64)
    for i, e in enumerate(ref_edges):
        ref_index[_colex_rank(e)] = i

    table = _perm_edge_table(spec.n, spec.k, spec.ell)
    idx_mat = ref_index[table]
    counts: dict[tuple[int, int], int] = {}
    for row in idx_mat:
        shared = sorted(int(i) for i in row if i >= 0)
        b = len(shared)
        if b == 0:
            key = (0, 0)
        else:
            breaks = sum(
                1
                for t in range(b)
                if not meets[shared[t]][shared[(t + 1) % b]]
            )
            key = (b, breaks if breaks else 1)
        counts[key] = counts.get(key, 0) + 1
    return OverlapProfile(spec, counts)


def falling_factorial(x: int, t: int) -> int:
    """(x)_t = x (x-1) ... (x-t+1); zero when t > x >= 0."""
    out = 1
    for i in range(t):
        out *= x - i
    return out


def _both_rainbow_probability(b: int, m: int, r: int) -> Fraction:
    """Pr(two cycles sharing b edges are both rainbow), colors iid uniform.

    The first cycle is rainbow with probability (r)_m / r^m; conditioned on
    that, the second needs its m-b fresh edges colored distinctly avoiding
    the b shared colors: (r-b)_{m-b} / r^{m-b}.
    """
    return Fraction(falling_factorial(r, m), r**m) * Fraction(
        falling_factorial(r - b, m - b), r ** (m - b)
    )


def second_moment_from_profile(
    profile: OverlapProfile, p, r: int
) -> Fraction:
    """Exact E(Y^2) from the overlap table.

    E(Y^2) = n! * sum_b N(b) p^{2m-b} ((r)_m / r^m) ((r-b)_{m-b} / r^{m-b}),
    the b = 0 term carried by the true N(0, 0).  Exact rational arithmetic.
    """
    spec = profile.spec
    m = spec.m
    if r < m:
        raise InvalidInput(f"r = {r} < m = {m}: E(Y) = 0 regime")
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise InvalidInput(f"p must lie in [0, 1], got {p}")
    total = Fraction(0)
    for b, count in profile.by_overlap().items():
        total += count * p ** (2 * m - b) * _both_rainbow_probability(b, m, r)
    return math.factorial(spec.n) * total


def second_moment_bruteforce(
    spec: CycleSpec, p, r: int, limit: int = PAIRWISE_LIMIT
) -> Fraction:
    """Exact E(Y^2) by looping over all ordered permutation pairs.

    For each pair, the union size of the two induced edge sets and the shared
    count b are measured directly on edge bitmasks; the pair contributes
    p^{|union|} * Pr(both rainbow).  No overlap table, no path counting.
    """
    if spec.n > limit:
        raise TooLarge(f"n = {spec.n} exceeds the pairwise limit {limit}")
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise InvalidInput(f"p must lie in [0, 1], got {p}")
    m = spec.m
    masks = []
    for perm in itertools.permutations(range(1, spec.n + 1)):
        mask = 0
        for edge in edges_of_hamperm(Hamperm(perm, spec)):
            mask |= 1 << _colex_rank(edge)
        masks.append(mask)
    pair_counts: dict[tuple[int, int], int] = {}
    for m1 in masks:
        for m2 in masks:
            key = ((m1 | m2).bit_count(), (m1 & m2).bit_count())
            pair_counts[key] = pair_counts.get(key, 0) + 1
    total = Fraction(0)
    for (union, b), count in pair_counts.items():
        total += count * p**union * _both_rainbow_probability(b, m, r)
    return total


def expected_Y_bruteforce(
    spec: CycleSpec, p, r: int, limit: int = ENUMERATION_LIMIT
) -> Fraction:
    """Exact E(Y) summed over all n! permutations.

    Each permutation contributes p^d * (r)_d / r^d where d is its number of
    distinct induced edges (measured, not assumed).
    """
    if spec.n > limit:
        raise TooLarge(f"n = {spec.n} exceeds the enumeration limit {limit}")
    p = Fraction(p)
    by_distinct: dict[int, int] = {}
    for perm in itertools.permutations(range(1, spec.n + 1)):
        d = len(set(edges_of_hamperm(Hamperm(perm, spec))))
        by_distinct[d] = by_distinct.get(d, 0) + 1
    total = Fraction(0)
    for d, count in by_distinct.items():
        total += count * p**d * Fraction(falling_factorial(r, d), r**d)
    return total


def solver_agrees_with_oracle(
    H: ColoredHypergraph, spec: CycleSpec
) -> tuple[bool, SearchOutcome, tuple[int, int]]:
    """Cross-check: exhaustive search existence vs the counting oracle."""
    outcome = find_rainbow_cycle(H, spec, mode="exhaustive")
    counts = count_hamperms(H, spec)
    agree = outcome.found == (counts[1] > 0)
    if outcome.found and not verify_certificate(H, outcome.certificate):
        agree = False
    return agree, outcome, counts
