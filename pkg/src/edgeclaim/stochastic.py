"""Discrete-particle reference simulator for the edge competition dynamics.

Every active particle walks one edge per step and survives the crossing with
probability 1 - lam * sigma, where sigma is computed from the previous
step's surviving traversals (1/K before any traffic exists).  Absorbed
particles are regenerated up to the initial population, distributed over
vertices proportionally to the class's current occupation.  Averaged over
runs, normalized traversal counts approach the deterministic model's flows,
which is what makes this an independent oracle for it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dynamics import CompetitionConfig, _require_no_isolated, initial_state
from .errors import ParameterError
from .graph import WeightedGraph


@dataclass(frozen=True)
class StepRecord:
    """Per-step bookkeeping for one class, kept only when recording."""

    class_id: int
    counts_before: np.ndarray
    moved: np.ndarray
    survived: np.ndarray
    generated: np.ndarray
    absorbed: np.ndarray
    counts_after: np.ndarray


@dataclass(frozen=True)
class StochasticState:
    """Final particle counts plus the last step's traversals and bookkeeping."""

    counts: np.ndarray        # (K, n) active particles per vertex
    traversals: np.ndarray    # (K, 2E) surviving crossings in the last step
    generated: np.ndarray     # (K, n) regenerated in the last step
    absorbed: np.ndarray      # (K, n) absorbed while leaving each vertex, last step
    initial_total: int
    step: int
    seed_vertices: tuple[int, ...]
    records: tuple[StepRecord, ...] = field(default=(), repr=False)


def draw_regeneration(
    rng: np.random.Generator, counts: np.ndarray, initial_total: int
) -> np.ndarray:
    """New particles for one class: the deficit against the initial population,
    placed by a single multinomial draw over vertices with probabilities
    proportional to the current counts.  Zero everywhere when there is no
    deficit."""
    total = int(counts.sum())
    deficit = initial_total - total
    if deficit <= 0 or total == 0:
        return np.zeros_like(counts)
    return rng.multinomial(deficit, counts / total).astype(counts.dtype)


def stochastic_run(
    g: WeightedGraph,
    cfg: CompetitionConfig,
    initial_total: int,
    steps: int | None = None,
    record_steps: bool = False,
) -> StochasticState:
    """Simulate `initial_total` particles per class for `steps` steps
    (cfg.max_steps by default).

    Seed vertices are drawn exactly as in the deterministic model, so the
    same config makes the two models comparable.  If a class goes extinct it
    is re-seeded with one particle at its seed vertex before regeneration.
    """
    if initial_total < 1:
        raise ParameterError(f"initial_total must be >= 1, got {initial_total}")
    _require_no_isolated(g)
    steps = cfg.max_steps if steps is None else steps
    k = cfg.class_count
    n = g.vertex_count
    n_slots = 2 * g.edge_count

    rng = np.random.default_rng(cfg.seed)
    seeds = initial_state(g, cfg).seed_vertices

    counts = np.zeros((k, n), dtype=np.int64)
    for c, v in enumerate(seeds):
        counts[c, v] = initial_total
    traversals = np.zeros((k, n_slots), dtype=np.int64)
    generated = np.zeros((k, n), dtype=np.int64)
    absorbed = np.zeros((k, n), dtype=np.int64)
    records: list[StepRecord] = []

    # Per-vertex slot lists and walk probabilities, renormalized to sum to 1.
    vertex_slots = [g.vertex_slots(i) for i in range(n)]
    vertex_pvals = []
    for i in range(n):
        pv = g.slot_walk[vertex_slots[i]]
        vertex_pvals.append(pv / pv.sum() if pv.size else pv)

    t = 0
    for t in range(1, steps + 1):
        und = traversals[:, 0::2] + traversals[:, 1::2]
        total = und.sum(axis=0)
        share = np.divide(
            und.astype(np.float64),
            total[None, :],
            out=np.zeros((k, g.edge_count)),
            where=total > 0,
        )
        sigma = np.where(total > 0, 1.0 - share, 1.0 / k)
        survive_p = 1.0 - cfg.lam * np.repeat(sigma, 2, axis=1)

        new_counts = np.zeros_like(counts)
        new_trav = np.zeros_like(traversals)
        new_gen = np.zeros_like(generated)
        new_abs = np.zeros_like(absorbed)
        moved_all = np.zeros_like(traversals) if record_steps else None

        for c in range(k):
            moved = np.zeros(n_slots, dtype=np.int64)
            for i in np.flatnonzero(counts[c]).tolist():
                moved[vertex_slots[i]] += rng.multinomial(
                    int(counts[c, i]), vertex_pvals[i]
                )
            survived = rng.binomial(moved, survive_p[c])
            new_trav[c] = survived
            new_counts[c] = np.bincount(
                g.slot_dst, weights=survived, minlength=n
            ).astype(np.int64)
            new_abs[c] = np.bincount(
                g.slot_src, weights=moved - survived, minlength=n
            ).astype(np.int64)
            if moved_all is not None:
                moved_all[c] = moved

        for c in range(k):
            if new_counts[c].sum() == 0:
                new_counts[c, seeds[c]] = 1
                new_gen[c, seeds[c]] = 1
            regen = draw_regeneration(rng, new_counts[c], initial_total)
            new_counts[c] += regen
            new_gen[c] += regen

        if record_steps:
            for c in range(k):
                records.append(
                    StepRecord(
                        class_id=c,
                        counts_before=counts[c].copy(),
                        moved=moved_all[c],
                        survived=new_trav[c].copy(),
                        generated=new_gen[c].copy(),
                        absorbed=new_abs[c].copy(),
                        counts_after=new_counts[c].copy(),
                    )
                )

        counts, traversals, generated, absorbed = (
            new_counts,
            new_trav,
            new_gen,
            new_abs,
        )

    return StochasticState(
        counts=counts,
        traversals=traversals,
        generated=generated,
        absorbed=absorbed,
        initial_total=initial_total,
        step=t,
        seed_vertices=seeds,
        records=tuple(records),
    )
