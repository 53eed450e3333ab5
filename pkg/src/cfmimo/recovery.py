"""Equation selection at the hub and backhaul accounting."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

from .cnf import Equation
from .exactrank import rank, sparse_rows


@dataclass(frozen=True)
class EquationSet:
    equations: tuple[Equation, ...]

    def __init__(self, equations: Sequence[Equation]):
        object.__setattr__(self, "equations", tuple(equations))

    def __len__(self):
        return len(self.equations)

    @property
    def rates(self) -> list[float]:
        return [e.rate for e in self.equations]

    @property
    def matrix(self) -> list[tuple]:
        """Rows of Gaussian-integer coefficients, one per AP."""
        return [tuple(e.coeffs) for e in self.equations]


@dataclass(frozen=True)
class SelectionResult:
    selected: tuple[int, ...]  # positions in the EquationSet, ascending
    m_rank: int
    min_rate: float
    discarded: int


def greedy_select(eqs: EquationSet) -> SelectionResult:
    """Greedy AP selection: scan equations from the worst rate upwards and
    discard each one whose removal keeps the rank, until only a basis is left.

    Ties in rate are broken by AP position (stable sort), so the output is
    deterministic.
    """
    rows = sparse_rows(eqs.matrix)
    total = len(rows)
    m_rank = rank(rows)
    if m_rank == 0:
        return SelectionResult((), 0, 0.0, total)
    rates = eqs.rates
    theta = sorted(range(total), key=lambda i: rates[i])
    alive = set(range(total))
    discard = 0
    # rank(alive) == m_rank holds throughout, so only the reduced rank is needed
    for i in theta:
        if discard == total - m_rank:
            break
        # visiting the best rows first lets the rank computation stop early
        others = [rows[j] for j in sorted(alive - {i}, key=lambda j: -rates[j])]
        if rank(others, limit=m_rank) == m_rank:
            alive.remove(i)
            discard += 1
    sel = tuple(sorted(alive))
    return SelectionResult(sel, m_rank, min(rates[i] for i in sel), discard)


def exhaustive_select(eqs: EquationSet, cap: int = 100_000) -> SelectionResult:
    """Max-min optimal full-rank subset by enumerating every subset of size M_rank."""
    rows = sparse_rows(eqs.matrix)
    total = len(rows)
    m_rank = rank(rows)
    if m_rank == 0:
        return SelectionResult((), 0, 0.0, total)
    if math.comb(total, m_rank) > cap:
        raise ValueError(f"C({total},{m_rank}) subsets exceed cap {cap}")
    rates = eqs.rates
    best, best_val = None, -math.inf
    for sub in itertools.combinations(range(total), m_rank):
        val = min(rates[i] for i in sub)
        if val <= best_val:
            continue
        if rank([rows[i] for i in sub]) == m_rank:
            best, best_val = sub, val
    return SelectionResult(tuple(best), m_rank, best_val, total - m_rank)


def backhaul_load(sel: SelectionResult, m_total: int, r0: float, strategy: str = "all") -> float:
    """Total backhaul: every AP forwards (``"all"``) or only the selected ones."""
    if r0 < 0:
        raise ValueError("r0 must be non-negative")
    if strategy == "all":
        return m_total * r0
    if strategy == "selected":
        return sel.m_rank * r0
    raise ValueError(f"unknown backhaul strategy {strategy!r}")
