#!/usr/bin/env python3
"""
Tropical for currentlab
Max-plus determinants, tropical rank certification and the forbidden interleaving scan
"""

import itertools
import logging
from concurrent.futures import FIRST_COMPLETED, ThreadPoolExecutor, wait
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

import config
from current_core import DiscreteCurrent
from cyclic_boundary import BoundaryPoint, Chord
from errors import ValidationError
from holonomy import NEG_INF, HolonomyContext, potential_matrix

logger = logging.getLogger(__name__)

CERTIFIED = "certified"
VIOLATED = "violated"


@dataclass(frozen=True)
class TropicalMatrix:
    """Square matrix over the max-plus semiring; -inf is float('-inf')"""

    entries: Tuple[Tuple[Any, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(row) for row in self.entries)
        object.__setattr__(self, "entries", rows)
        k = len(rows)
        if k == 0 or any(len(row) != k for row in rows):
            raise ValidationError("Tropical matrix must be square and nonempty")

    @property
    def size(self) -> int:
        return len(self.entries)

    def __getitem__(self, index):
        return self.entries[index]


def permutation_score(m, perm: Sequence[int]):
    """Sum of m[i][perm[i]]"""
    entries = m.entries if isinstance(m, TropicalMatrix) else m
    return sum((entries[i][j] for i, j in enumerate(perm)), Fraction(0))


def bruhat_covers(perm: Sequence[int]) -> List[Tuple[int, ...]]:
    """Permutations covered by perm in the order with the identity on top"""
    covers = []
    for i, j in itertools.combinations(range(len(perm)), 2):
        if perm[i] < perm[j] and not any(perm[i] < perm[k] < perm[j] for k in range(i + 1, j)):
            moved = list(perm)
            moved[i], moved[j] = moved[j], moved[i]
            covers.append(tuple(moved))
    return covers


def _brute_force(m: TropicalMatrix):
    best, count, arg = NEG_INF, 0, None
    for perm in itertools.permutations(range(m.size)):
        s = permutation_score(m, perm)
        if s > best:
            best, count, arg = s, 1, perm
        elif s == best and s != NEG_INF:
            count += 1
    return best, count == 1 and best != NEG_INF, arg


def _hungarian_min(cost: List[List[Fraction]]) -> List[int]:
    """Minimum-cost perfect assignment on a square matrix, exact; returns row -> column"""
    n = len(cost)
    inf = float("inf")
    job = [-1] * (n + 1)
    ys = [Fraction(0)] * n
    yt = [Fraction(0)] * (n + 1)
    for j_cur in range(n):
        w_cur = n
        job[w_cur] = j_cur
        min_to = [inf] * (n + 1)
        prv = [-1] * (n + 1)
        in_z = [False] * (n + 1)
        while job[w_cur] != -1:
            in_z[w_cur] = True
            j = job[w_cur]
            delta, w_next = inf, -1
            for w in range(n):
                if not in_z[w]:
                    reduced = cost[j][w] - ys[j] - yt[w]
                    if reduced < min_to[w]:
                        min_to[w] = reduced
                        prv[w] = w_cur
                    if min_to[w] < delta:
                        delta, w_next = min_to[w], w
            for w in range(n + 1):
                if in_z[w]:
                    ys[job[w]] += delta
                    yt[w] -= delta
                else:
                    min_to[w] -= delta
            w_cur = w_next
        while w_cur != n:
            w = prv[w_cur]
            job[w_cur] = job[w]
            w_cur = w
    assignment = [0] * n
    for w in range(n):
        assignment[job[w]] = w
    return assignment


def _optimal_assignment(entries: List[List[Any]]):
    """Max-plus optimum via the min-cost assignment with forbidden cells priced out"""
    k = len(entries)
    finite = [abs(a) for row in entries for a in row if a != NEG_INF]
    scale = max(finite, default=Fraction(1)) or Fraction(1)
    forbidden = 2 * k * scale + 1
    cost = [[forbidden if a == NEG_INF else -Fraction(a) for a in row] for row in entries]
    perm = tuple(_hungarian_min(cost))
    value = permutation_score(entries, perm)
    return value, perm


def _assignment_det(m: TropicalMatrix):
    entries = [list(row) for row in m.entries]
    best, perm = _optimal_assignment(entries)
    if best == NEG_INF:
        return NEG_INF, False, None
    for i, j in enumerate(perm):
        saved = entries[i][j]
        entries[i][j] = NEG_INF
        other, _ = _optimal_assignment(entries)
        entries[i][j] = saved
        if other == best:
            return best, False, perm
    return best, True, perm


def tropical_det(m: TropicalMatrix) -> Tuple[Any, bool]:
    """(max over permutations of the selected sum, whether exactly one permutation attains it)"""
    if m.size <= config.EXHAUSTIVE_DET_LIMIT:
        value, unique, _ = _brute_force(m)
    else:
        value, unique, _ = _assignment_det(m)
    return value, unique


def forbidden_scan(mu: DiscreteCurrent, n: int) -> Optional[List[Chord]]:
    """Find n support chords with x1 < ... < xn < y1 < ... < yn, or None"""
    if n < 1:
        raise ValidationError(f"n must be at least 1, got {n}")
    support = mu.support
    if n == 1:
        return support[:1] or None
    for first in support:
        base = first.src.angle

        def offset(p: BoundaryPoint) -> Fraction:
            return (p.angle - base) % 1

        y1 = offset(first.dst)
        candidates = sorted(
            (c for c in support if c != first and 0 < offset(c.src) < y1 < offset(c.dst)),
            key=lambda c: (offset(c.src), -offset(c.dst)),
        )
        # longest chain increasing in both source and target offsets
        length = [1] * len(candidates)
        parent = [-1] * len(candidates)
        for j, cj in enumerate(candidates):
            for i in range(j):
                ci = candidates[i]
                if offset(ci.src) < offset(cj.src) and offset(ci.dst) < offset(cj.dst) and length[i] + 1 > length[j]:
                    length[j], parent[j] = length[i] + 1, i
        for j, size in enumerate(length):
            if size >= n - 1:
                chain = []
                while j != -1 and len(chain) < n - 1:
                    chain.append(candidates[j])
                    j = parent[j]
                chain.reverse()
                return [first] + chain
    return None


@dataclass(frozen=True)
class RankWitness:
    rows: Tuple[BoundaryPoint, ...]
    cols: Tuple[BoundaryPoint, ...]
    permutations: Tuple[Tuple[int, ...], ...]
    value: Any


@dataclass
class RankReport:
    verdict: str
    n: int
    T: Fraction
    witness: Optional[RankWitness] = None
    vacuous: bool = False
    tuples_examined: int = 0
    note: str = ""

    @property
    def certified(self) -> bool:
        return self.verdict == CERTIFIED

    def to_report(self, mu: Optional[DiscreteCurrent] = None) -> Dict[str, Any]:
        report: Dict[str, Any] = {
            "verdict": self.verdict,
            "n": self.n,
            "mass": str(self.T),
            "vacuous": self.vacuous,
            "tuples_examined": self.tuples_examined,
        }
        if self.note:
            report["note"] = self.note
        if self.witness is not None:
            report["witness"] = {
                "rows": [str(p) for p in self.witness.rows],
                "cols": [str(p) for p in self.witness.cols],
                "permutations": [list(p) for p in self.witness.permutations],
                "value": str(self.witness.value),
            }
        return report


@dataclass
class _ScanTables:
    """Integer-scaled potential matrix shared by all row chunks"""

    values: np.ndarray
    threshold: int
    cols: np.ndarray
    perms: List[Tuple[int, ...]]
    examined: List[int] = field(default_factory=list)


def _scaled_tables(matrix: List[List[Any]], n: int) -> _ScanTables:
    finite = [Fraction(a) for row in matrix for a in row if a != NEG_INF]
    den = lcm(*(a.denominator for a in finite)) if finite else 1
    ints = [[None if a == NEG_INF else int(Fraction(a) * den) for a in row] for row in matrix]
    maxabs = max((abs(a) for row in ints for a in row if a is not None), default=0)
    low = -(n + 1) * (2 * maxabs + 1)
    dtype = np.int64 if (n + 1) * (abs(low) + maxabs) < 2 ** 62 else object
    values = np.array([[low if a is None else a for a in row] for row in ints], dtype=dtype)
    size = len(matrix)
    cols = np.array(list(itertools.combinations(range(size), n + 1)), dtype=np.intp)
    return _ScanTables(
        values=values,
        threshold=-(n + 1) * maxabs,
        cols=cols,
        perms=list(itertools.permutations(range(n + 1))),
    )


def _scan_rows(tables: _ScanTables, rows: Sequence[Tuple[int, ...]]):
    """First row subset with a column subset whose max-plus determinant has a unique finite argmax"""
    for row in rows:
        sub = tables.values[list(row)]
        scores = np.stack([
            sum(sub[i][tables.cols[:, perm[i]]] for i in range(len(row)))
            for perm in tables.perms
        ])
        best = scores.max(axis=0)
        count = (scores == best).sum(axis=0)
        bad = np.nonzero((count == 1) & (best >= tables.threshold))[0]
        if len(bad):
            j = int(bad[0])
            winner = int(np.argmax(scores[:, j]))
            return row, tuple(int(c) for c in tables.cols[j]), tables.perms[winner]
    return None


def _chunks(items: List[Any], size: int):
    for start in range(0, len(items), size):
        yield items[start:start + size]


def certify_tropical_rank(ctx: HolonomyContext, n: int, workers: Optional[int] = None,
                          deterministic: bool = True) -> RankReport:
    """Check every (n+1)x(n+1) max-plus minor of the gap potential matrix for a tie at the top"""
    if n < 1:
        raise ValidationError(f"n must be at least 1, got {n}")
    workers = workers or config.WORKERS
    gaps, matrix = potential_matrix(ctx)
    if n + 1 > len(gaps):
        return RankReport(CERTIFIED, n, ctx.T, vacuous=True,
                          note=f"only {len(gaps)} gaps, no {n + 1}-tuples exist")
    tables = _scaled_tables(matrix, n)
    row_sets = list(itertools.combinations(range(len(gaps)), n + 1))
    examined = len(row_sets) * len(tables.cols)
    chunks = list(_chunks(row_sets, max(1, len(row_sets) // (4 * workers) or 1)))

    hit = None
    if workers <= 1:
        for chunk in chunks:
            hit = _scan_rows(tables, chunk)
            if hit:
                break
    elif deterministic:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for result in pool.map(lambda chunk: _scan_rows(tables, chunk), chunks):
                if result:
                    hit = result
                    break
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            pending = {pool.submit(_scan_rows, tables, chunk) for chunk in chunks}
            while pending and hit is None:
                done, pending = wait(pending, return_when=FIRST_COMPLETED)
                for future in done:
                    if future.result():
                        hit = future.result()
                        break
            for future in pending:
                future.cancel()

    if hit is None:
        logger.info(f"Tropical rank {n} certified at T={ctx.T} over {examined} tuples")
        return RankReport(CERTIFIED, n, ctx.T, tuples_examined=examined)
    rows, cols, perm = hit
    value = permutation_score([[matrix[r][c] for c in cols] for r in rows], perm)
    witness = RankWitness(
        rows=tuple(gaps[r] for r in rows),
        cols=tuple(gaps[c] for c in cols),
        permutations=(perm,),
        value=value,
    )
    logger.info(f"Tropical rank {n} violated at T={ctx.T}: rows {rows}, cols {cols}")
    return RankReport(VIOLATED, n, ctx.T, witness=witness, tuples_examined=examined)


def witness_matrix(ctx: HolonomyContext, witness: RankWitness) -> TropicalMatrix:
    """Rebuild the max-plus minor of a witness from the potential"""
    gaps = list(witness.rows) + list(witness.cols)
    return TropicalMatrix(tuple(
        tuple(NEG_INF if x == y else ctx.potential(x, y) for y in witness.cols)
        for x in witness.rows
    )) if gaps else TropicalMatrix(((NEG_INF,),))
