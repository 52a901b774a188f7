"""Randomized Partial Cycle Cover decision and the problems reduced to it.

One repetition on a bipartite graph draws edge weights uniformly from
``1..2m`` and counts ordered consistent-matching pairs on ``ell`` vertices
modulo ``2**(k+1)``.  A cover made of ``p`` even cycles yields ``2**p`` such
pairs of equal weight, so covers with more than ``k`` cycles vanish modulo
``2**(k+1)``.  Any nonzero residue therefore proves a cover with at most
``k`` cycles exists (no false positives), and when one exists the weights
isolate a unique lightest such cover with probability at least 1/2.

General graphs are handled by subdividing every edge first: the result is
bipartite, cycles double in length and keep their count.  Weights are then
drawn per original edge (see :func:`subdivided_weights`).

Reductions for the derived problems:

* Hamiltonian cycle: ``k = 1``, ``ell = n``.
* Hamiltonian path: add an apex adjacent to every vertex, placed above the
  forest as the new root.  A Hamiltonian cycle of the apex graph minus the
  apex is a Hamiltonian path, and any Hamiltonian path closes through the
  apex.
* Long cycle: ``k = 1`` and every ``ell`` from ``ell_min`` to ``n``, all read
  from one evaluation per repetition.
* Long path: a path on ``t >= 2`` vertices closes through the apex into a
  cycle on ``t + 1`` vertices; a cycle on ``t + 1`` vertices either avoids
  the apex (and contains a path on ``t + 1`` vertices) or is a path on ``t``
  vertices plus the apex.  So ask for a cycle of length at least
  ``ell_min + 1`` in the apex graph.
* Minimum cycle cover: smallest ``k`` such that all ``n`` vertices are
  covered by at most ``k`` cycles, by linear search over ``k``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .counter import CallStats, count_pairs, count_pairs_range
from .graph import EliminationForest, Graph, GraphError, add_apex, subdivide, validate_forest
from .poly import CoeffRing

DEFAULT_REPETITIONS = 16


class SolverError(ValueError):
    pass


@dataclass(frozen=True)
class PccInstance:
    graph: Graph
    k: int
    ell: int

    def __post_init__(self):
        if self.k < 0:
            raise SolverError("k must be non-negative")
        if not 0 <= self.ell <= self.graph.n:
            raise SolverError(f"ell must lie in 0..{self.graph.n}")


@dataclass(frozen=True)
class SolverConfig:
    seed: int = 0
    repetitions: int = DEFAULT_REPETITIONS
    exact: bool = False

    def __post_init__(self):
        if self.repetitions < 1:
            raise SolverError("at least one repetition is required")

    def rng(self, repetition: int, stream: int = 0) -> np.random.Generator:
        """PCG64 substream for one repetition, derived from ``(seed, stream,
        repetition)`` so repetitions are reproducible and independent."""
        ss = np.random.SeedSequence(self.seed & (2**64 - 1), spawn_key=(stream, repetition))
        return np.random.Generator(np.random.PCG64(ss))


@dataclass
class Verdict:
    answer: bool
    repetitions: int = 0
    witness_weight: Optional[int] = None
    elapsed: float = 0.0
    stats: CallStats = field(default_factory=CallStats)
    note: str = ""
    cover_size: Optional[int] = None  # cover size (in the counted graph) of the witness row

    def __bool__(self):
        return self.answer


def draw_weights(m: int, rng: np.random.Generator) -> list[int]:
    """Independent uniform weights from ``1..2m``."""
    return [int(w) for w in rng.integers(1, 2 * m, size=m, endpoint=True)]


def subdivided_weights(m: int, rng: np.random.Generator) -> list[int]:
    """Weights for a subdivided graph with ``m`` original edges: a draw from
    ``1..2m`` on the first half of each edge and 1 on the second.

    Covers correspond to edge sets of the original graph and every cover of
    a fixed size gains the same constant, so isolation works as for weights
    on the original edges while the weight range stays four times smaller.
    """
    out = []
    for w in draw_weights(m, rng):
        out += [w, 1]
    return out


def _repeat(g: Graph, forest: EliminationForest, k: int, lo: int, hi: int, cfg: SolverConfig,
            draw: Callable[[np.random.Generator], list[int]], stream: int) -> Verdict:
    """Repetitions over cover sizes ``lo..hi`` of a bipartite graph; the first
    repetition with a nonzero residue in some row answers yes."""
    start = time.perf_counter()
    modulus = 1 << (k + 1)
    ring = CoeffRing.exact() if cfg.exact else CoeffRing.modular(k)
    stats = CallStats()
    for rep in range(cfg.repetitions):
        weights = draw(cfg.rng(rep, stream))
        if lo == hi:
            rows = {lo: count_pairs(g, forest, lo, weights, ring, stats=stats)}
        else:
            rows = count_pairs_range(g, forest, lo, hi, weights, ring, stats)
        hits = {size: min(w for w, c in row.items() if c % modulus)
                for size, row in rows.items() if any(c % modulus for c in row.values())}
        if hits:
            size = max(hits)
            return Verdict(True, rep + 1, hits[size], time.perf_counter() - start, stats,
                           cover_size=size)
    return Verdict(False, cfg.repetitions, None, time.perf_counter() - start, stats)


def solve_pcc_bipartite(inst: PccInstance, forest: EliminationForest, cfg: SolverConfig,
                        stream: int = 0) -> Verdict:
    g, ell = inst.graph, inst.ell
    if not g.is_bipartite():
        raise SolverError("graph is not bipartite")
    if ell % 2:
        raise SolverError("cover size must be even on a bipartite graph")
    return _repeat(g, forest, inst.k, ell, ell, cfg, lambda rng: draw_weights(g.m, rng), stream)


def _solve_subdivided(g: Graph, forest: EliminationForest, k: int, lo: int, hi: int,
                      cfg: SolverConfig, stream: int) -> Verdict:
    sub = subdivide(g, forest)
    v = _repeat(sub.graph, sub.forest, k, 2 * lo, 2 * hi, cfg,
                lambda rng: subdivided_weights(g.m, rng), stream)
    if v.cover_size is not None:
        v.cover_size //= 2
    return v


def solve_pcc(inst: PccInstance, forest: EliminationForest, cfg: SolverConfig,
              stream: int = 0) -> Verdict:
    """Decide whether exactly ``ell`` vertices can be covered by at most ``k``
    vertex-disjoint cycles."""
    g, k, ell = inst.graph, inst.k, inst.ell
    check = validate_forest(g, forest)
    if not check:
        raise GraphError(check.message)
    if ell == 0:
        return Verdict(True, 0, 0, note="empty cover")
    if ell <= 2 or k == 0:
        return Verdict(False, 0, note="no cycle fits")
    if ell > g.m:
        # covering ell vertices by cycles takes ell edges
        return Verdict(False, 0, note="too few edges")
    return _solve_subdivided(g, forest, k, ell, ell, cfg, stream)


def solve_hamiltonian_cycle(g: Graph, forest: EliminationForest, cfg: SolverConfig) -> Verdict:
    if g.n < 3:
        return Verdict(False, 0, note="fewer than three vertices")
    return solve_pcc(PccInstance(g, 1, g.n), forest, cfg)


def solve_hamiltonian_path(g: Graph, forest: EliminationForest, cfg: SolverConfig) -> Verdict:
    if g.n == 0:
        return Verdict(False, 0, note="empty graph")
    if g.n <= 2:
        ok = g.n == 1 or g.m == 1
        return Verdict(ok, 0, note="decided directly")
    check = validate_forest(g, forest)
    if not check:
        raise GraphError(check.message)
    ag, af = add_apex(g, forest)
    return solve_hamiltonian_cycle(ag, af, cfg)


def solve_long_cycle(g: Graph, forest: EliminationForest, cfg: SolverConfig, ell_min: int) -> Verdict:
    """Is there a cycle on at least ``ell_min`` vertices?

    One evaluation per repetition yields the residues for every length from
    ``ell_min`` to ``n``; each length is isolated independently, so a
    yes-instance is missed with probability at most ``2**-repetitions``.
    """
    if ell_min < 3:
        raise SolverError("cycles have at least three vertices")
    check = validate_forest(g, forest)
    if not check:
        raise GraphError(check.message)
    top = min(g.n, g.m)
    if ell_min > top:
        return Verdict(False, 0, note="too few vertices or edges")
    v = _solve_subdivided(g, forest, 1, ell_min, top, cfg, 0)
    if v:
        v.note = f"cycle on {v.cover_size} vertices"
    return v


def solve_long_path(g: Graph, forest: EliminationForest, cfg: SolverConfig, ell_min: int) -> Verdict:
    """Is there a simple path on at least ``ell_min`` vertices?"""
    if ell_min < 1:
        raise SolverError("paths have at least one vertex")
    if ell_min > g.n:
        return Verdict(False, 0, note="longer than the graph")
    if ell_min == 1:
        return Verdict(True, 0, note="single vertex")
    check = validate_forest(g, forest)
    if not check:
        raise GraphError(check.message)
    ag, af = add_apex(g, forest)
    return solve_long_cycle(ag, af, cfg, ell_min + 1)


def solve_min_cycle_cover(g: Graph, forest: EliminationForest, cfg: SolverConfig) -> Optional[int]:
    """Fewest vertex-disjoint cycles covering every vertex, or ``None``.

    A reported value is never below the true optimum; randomness can only
    make it larger or missing.
    """
    if g.n == 0:
        return None
    for k in range(1, g.n // 3 + 1):
        if solve_pcc(PccInstance(g, k, g.n), forest, cfg, stream=k):
            return k
    return None
