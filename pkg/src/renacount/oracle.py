"""Exhaustive enumeration of all expressions of a given size.

This is the brute-force side of every series check: it knows nothing about
generating functions and simply walks grammar (epsilon | letter | union |
concat | star) over all size splits.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from typing import Callable, Iterator

from .expr import EPS, Concat, Expr, Letter, Star, Union, avoids_absorbing_in_union, is_sigma_star
from .glushkov import position_sets
from .series import coeffs_B

DEFAULT_CAP = 10**8


class BudgetExceeded(RuntimeError):
    pass


@dataclass
class MeasureAggregate:
    """Exact sums over a set of expressions; merging is addition."""

    count: int = 0
    letters: int = 0
    first: int = 0
    last: int = 0
    follow: int = 0
    follow_star: int = 0
    transitions: int = 0
    nullable: int = 0

    def add(self, e: Expr) -> None:
        self.add_sets(position_sets(e))

    def add_sets(self, ps) -> None:
        self.count += 1
        self.letters += len(ps.letters)
        self.first += len(ps.first)
        self.last += len(ps.last)
        self.follow += len(ps.follow)
        self.follow_star += len(ps.follow_star)
        self.transitions += len(ps.first) + len(ps.follow)
        self.nullable += ps.nullable

    def merge(self, other: "MeasureAggregate") -> "MeasureAggregate":
        return MeasureAggregate(*(getattr(self, f.name) + getattr(other, f.name) for f in fields(self)))

    __add__ = merge

    def as_dict(self) -> dict[str, int]:
        return asdict(self)


def _gen(k: int, n: int) -> Iterator[Expr]:
    if n == 1:
        yield EPS
        for i in range(1, k + 1):
            yield Letter(i)
        return
    for c in _gen(k, n - 1):
        yield Star(c)
    for ctor in (Union, Concat):
        for i in range(1, n - 1):
            for a in _gen(k, i):
                for b in _gen(k, n - 1 - i):
                    yield ctor(a, b)


def _gen_part(k: int, n: int, part: tuple) -> Iterator[Expr]:
    kind = part[0]
    if kind == "leaf":
        yield from _gen(k, 1)
    elif kind == "star":
        for c in _gen(k, n - 1):
            yield Star(c)
    else:
        ctor = Union if kind == "union" else Concat
        i = part[1]
        for a in _gen(k, i):
            for b in _gen(k, n - 1 - i):
                yield ctor(a, b)


def root_partitions(n: int) -> list[tuple]:
    """Disjoint pieces of the size-n space: root kind x left-subtree size."""
    if n == 1:
        return [("leaf",)]
    parts: list[tuple] = [("star",)]
    for kind in ("union", "concat"):
        parts += [(kind, i) for i in range(1, n - 1)]
    return parts


def _check_budget(k: int, n: int, cap: int) -> int:
    if k < 1 or n < 1:
        raise ValueError("k and n must be >= 1")
    predicted = coeffs_B(k, n)[n]
    if predicted > cap:
        raise BudgetExceeded(f"{predicted} expressions of size {n} over {k} letters exceed the cap {cap}")
    return predicted


def enumerate_all(k: int, n: int, visitor: Callable[[Expr], None] | None = None,
                  cap: int = DEFAULT_CAP) -> int:
    """Visit every expression of size n exactly once; return the count."""
    _check_budget(k, n, cap)
    count = 0
    for e in _gen(k, n):
        if visitor is not None:
            visitor(e)
        count += 1
    return count


def iter_expressions(k: int, n: int, cap: int = DEFAULT_CAP) -> Iterator[Expr]:
    _check_budget(k, n, cap)
    return _gen(k, n)


PREDICATES: dict[str, Callable[[Expr, int], bool]] = {
    "all": lambda e, k: True,
    "rena": avoids_absorbing_in_union,
}


def _aggregate_part(args) -> MeasureAggregate:
    k, n, part, predicate = args
    pred = PREDICATES[predicate] if isinstance(predicate, str) else predicate
    agg = MeasureAggregate()
    for e in _gen_part(k, n, part):
        if pred(e, k):
            agg.add(e)
    return agg


def enumerate_filtered(k: int, n: int, predicate: str | Callable[[Expr, int], bool] = "rena",
                       cap: int = DEFAULT_CAP, workers: int = 1) -> MeasureAggregate:
    """Aggregate measures over all size-n expressions accepted by ``predicate``.

    ``predicate`` is a name from :data:`PREDICATES` or a callable ``(expr, k)``;
    with ``workers > 1`` the root partitions run in separate processes
    (named predicates only).
    """
    _check_budget(k, n, cap)
    jobs = [(k, n, part, predicate) for part in root_partitions(n)]
    total = MeasureAggregate()
    if workers > 1 and isinstance(predicate, str) and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for agg in pool.map(_aggregate_part, jobs):
                total = total + agg
    else:
        for job in jobs:
            total = total + _aggregate_part(job)
    return total


def oracle_record(k: int, n: int, predicate: str = "rena", cap: int = DEFAULT_CAP,
                  workers: int = 1) -> dict:
    """One JSON-ready record of every aggregate for (k, n)."""
    agg = enumerate_filtered(k, n, predicate, cap, workers)
    return {"k": k, "n": n, "class": predicate, **agg.as_dict()}



# ---------------------------------------------------------------------------
# oracle vs series

# aggregate field -> series whose n-th coefficient it must equal
SERIES_FOR_FIELD = {
    "count": "R",
    "nullable": "R_eps",
    "letters": "L",
    "first": "F",
    "last": "S",
    "follow": "E",
    "follow_star": "Estar",
    "transitions": "T",
}
# the same over union operands (REna minus the Sigma-star expressions)
OPERAND_SERIES_FOR_FIELD = {
    "count": "R_P",
    "letters": "P",
    "first": "F_P",
    "follow": "E_P",
    "follow_star": "Estar_P",
}
GLUSHKOV_CHECKS = ("f", "s", "e", "e_star", "t")


@dataclass(frozen=True)
class Divergence:
    check: str
    n: int
    expected: int  # enumeration side
    got: int  # series / counting side

    def describe(self) -> str:
        return f"{self.check} differs at n={self.n}: enumeration {self.expected}, series {self.got}"


@dataclass
class SuiteReport:
    k: int
    n_max: int
    checks: list[tuple[str, int, bool]]
    divergences: list[Divergence]

    @property
    def ok(self) -> bool:
        return not self.divergences

    @property
    def first_divergence(self) -> Divergence | None:
        return min(self.divergences, key=lambda d: d.n, default=None)

    def as_dict(self) -> dict:
        first = self.first_divergence
        return {
            "k": self.k,
            "n_max": self.n_max,
            "ok": self.ok,
            "checks": len(self.checks),
            "failed": len(self.divergences),
            "first_divergence": None if first is None else {**asdict(first), "message": first.describe()},
        }


def _suite_part(args):
    """One root partition: total count, REna and operand aggregates, and the
    number of REna expressions whose counting recursion disagrees with
    its set sizes (per function)."""
    from .glushkov import count_functions

    k, n, part, glushkov_check = args
    total = 0
    rena, pattern = MeasureAggregate(), MeasureAggregate()
    bad = dict.fromkeys(GLUSHKOV_CHECKS, 0)
    for e in _gen_part(k, n, part):
        total += 1
        if not avoids_absorbing_in_union(e, k):
            continue
        ps = position_sets(e)
        rena.add_sets(ps)
        if n == 2 * k and is_sigma_star(e, k):
            pattern.add_sets(ps)
        if glushkov_check:
            cf = count_functions(e)
            bad["f"] += cf.f != len(ps.first)
            bad["s"] += cf.s != len(ps.last)
            bad["e"] += cf.e != len(ps.follow)
            bad["e_star"] += cf.e_star != len(ps.follow_star)
            bad["t"] += cf.t != len(ps.first) + len(ps.follow)
    return total, rena, pattern, bad


def run_oracle_suite(k: int, n_max: int, table=None, cap: int = DEFAULT_CAP, workers: int = 1,
                     glushkov_check: bool = True) -> SuiteReport:
    """Compare exhaustive enumeration against the series for n = 1..n_max.

    ``table`` defaults to a fresh :func:`coeff_table`; pass a modified one to
    check that the suite catches it.  With ``glushkov_check`` every REna
    expression also has its counting recursion compared with its set sizes.
    """
    from .series import coeff_table

    for n in range(1, n_max + 1):
        _check_budget(k, n, cap)
    if table is None:
        table = coeff_table(k, n_max)
    checks: list[tuple[str, int, bool]] = []
    bad: list[Divergence] = []

    def check(name, n, expected, got):
        ok = expected == got
        checks.append((name, n, ok))
        if not ok:
            bad.append(Divergence(name, n, expected, got))

    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for n in range(1, n_max + 1):
            jobs = [(k, n, part, glushkov_check) for part in root_partitions(n)]
            results = pool.map(_suite_part, jobs) if pool else map(_suite_part, jobs)
            total, rena, pattern = 0, MeasureAggregate(), MeasureAggregate()
            mism = dict.fromkeys(GLUSHKOV_CHECKS, 0)
            for t, r, p, m in results:
                total += t
                rena, pattern = rena + r, pattern + p
                for key in mism:
                    mism[key] += m[key]
            check("B", n, total, table["B"][n])
            for fld, series in SERIES_FOR_FIELD.items():
                check(series, n, getattr(rena, fld), table[series][n])
            for fld, series in OPERAND_SERIES_FOR_FIELD.items():
                check(series, n, getattr(rena, fld) - getattr(pattern, fld), table[series][n])
            if glushkov_check:
                for key, count in mism.items():
                    check(f"glushkov:{key}", n, 0, count)
    finally:
        if pool:
            pool.shutdown()
    return SuiteReport(k, n_max, checks, bad)
