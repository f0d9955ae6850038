"""Exact uniform random generation by the recursive method.

At every node the root production is chosen with probability proportional
to its exact count and binary nodes split their size proportionally to the
exact product of the children's counts.  All draws are exact integers
below exact totals, so the output is exactly uniform on the class.

For REna, union operands come from the class without the Sigma-star
expressions.  That class differs from REna only at size 2k, where an
operand is drawn from REna and redrawn if it is a Sigma-star; this happens
with probability C_k / R[2k] and keeps the distribution exactly uniform.

Stream rule: item ``i`` of a batch with seed ``s`` uses
``random.Random(SeedSequence(s, spawn_key=(i,)).generate_state(4))``,
so batches do not depend on how the work is divided.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from operator import mul
from typing import Iterator

import numpy as np

try:
    from gmpy2 import mpz as _big
except ImportError:  # pragma: no cover
    _big = int

from .expr import EPS, Concat, Expr, Letter, Star, Union, is_sigma_star
from .series import coeffs_B, coeffs_R

CLASSES = ("RE", "REna")


class ImpossibleSize(ValueError):
    pass


@dataclass(frozen=True)
class SamplerSpec:
    k: int
    n: int
    cls: str = "REna"
    seed: int = 0

    def __post_init__(self):
        if self.cls not in CLASSES:
            raise ValueError(f"class must be one of {CLASSES}, got {self.cls!r}")
        if self.k < 1:
            raise ValueError("alphabet size must be >= 1")
        if self.n < 1:
            raise ImpossibleSize("size must be >= 1")


class Sampler:
    """Holds the exact count tables for one (k, class) up to a maximum size."""

    def __init__(self, k: int, n_max: int, cls: str = "REna"):
        if cls not in CLASSES:
            raise ValueError(f"class must be one of {CLASSES}, got {cls!r}")
        self.k, self.n_max, self.cls = k, n_max, cls
        if cls == "RE":
            counts = coeffs_B(k, n_max)
            self._total, self._operand = counts, counts
        else:
            R, RP = coeffs_R(k, n_max)
            self._total, self._operand = R, RP
        self._total = [_big(x) for x in self._total]
        self._operand = [_big(x) for x in self._operand]
        c = self._total
        p = self._operand
        # per-size totals of each root production
        self._star = [0, 0] + [c[m - 1] for m in range(2, n_max + 1)]
        self._concat = [0] * (n_max + 1)
        self._union = [0] * (n_max + 1)
        for m in range(3, n_max + 1):
            self._concat[m] = sum(map(mul, c[1:m - 1], c[m - 2:0:-1]))
            self._union[m] = sum(map(mul, p[1:m - 1], p[m - 2:0:-1]))

    def count(self, n: int) -> int:
        return int(self._total[n])

    def sample(self, n: int, rng: random.Random) -> Expr:
        if not 1 <= n <= self.n_max:
            raise ImpossibleSize(f"size {n} outside the table range 1..{self.n_max}")
        # explicit work stack; results are assembled afterwards
        return self._draw(n, rng, operand=False)

    def _draw(self, n: int, rng: random.Random, operand: bool) -> Expr:
        k = self.k
        # tasks: ("node", size, operand_flag) expands; ("build", kind) assembles
        tasks: list[tuple] = [("node", n, operand)]
        out: list[Expr] = []
        while tasks:
            task = tasks.pop()
            if task[0] == "build":
                kind = task[1]
                if kind == "star":
                    out.append(Star(out.pop()))
                else:
                    b = out.pop()
                    a = out.pop()
                    out.append(Union(a, b) if kind == "union" else Concat(a, b))
                continue
            _, m, is_operand = task
            if is_operand and self.cls == "REna" and m == 2 * k:
                # operands exclude Sigma-star, which only exists at size 2k
                while True:
                    e = self._draw(m, rng, operand=False)
                    if not is_sigma_star(e, k):
                        break
                out.append(e)
                continue
            if m == 1:
                r = rng.randrange(k + 1)
                out.append(EPS if r == 0 else Letter(r))
                continue
            u = rng.randrange(int(self._total[m]))
            if u < self._star[m]:
                tasks.append(("build", "star"))
                tasks.append(("node", m - 1, False))
                continue
            u -= self._star[m]
            if u < self._concat[m]:
                i = self._split(m, u, self._total)
                tasks.append(("build", "concat"))
                tasks.append(("node", m - 1 - i, False))
                tasks.append(("node", i, False))
                continue
            u -= self._concat[m]
            i = self._split(m, u, self._operand)
            tasks.append(("build", "union"))
            tasks.append(("node", m - 1 - i, True))
            tasks.append(("node", i, True))
        return out[0]

    @staticmethod
    def _split(m: int, u: int, counts: list[int]) -> int:
        """Left size i in 1..m-2 such that u falls in its block of the exact
        cumulative sum of counts[i]*counts[m-1-i].

        Blocks are visited from both ends inward (i = 1, m-2, 2, m-3, ...);
        any fixed visiting order gives the same distribution and this one
        finds the heavy extreme splits first.
        """
        lo, hi = 1, m - 2
        while lo <= hi:
            w = counts[lo] * counts[m - 1 - lo]
            if u < w:
                return lo
            u -= w
            if hi != lo:
                w = counts[hi] * counts[m - 1 - hi]
                if u < w:
                    return hi
                u -= w
            lo += 1
            hi -= 1
        raise AssertionError("draw exceeded the exact total")


@lru_cache(maxsize=16)
def get_sampler(k: int, n_max: int, cls: str) -> Sampler:
    return Sampler(k, n_max, cls)


def item_rng(seed: int, i: int) -> random.Random:
    state = np.random.SeedSequence(seed, spawn_key=(i,)).generate_state(4, dtype=np.uint64)
    return random.Random(int.from_bytes(state.tobytes(), "little"))


def sample(spec: SamplerSpec, rng: random.Random | None = None) -> Expr:
    """One uniform expression of size ``spec.n``; ``rng`` defaults to item 0
    of the stream for ``spec.seed``."""
    rng = item_rng(spec.seed, 0) if rng is None else rng
    return get_sampler(spec.k, spec.n, spec.cls).sample(spec.n, rng)


def _sample_range(args) -> list[Expr]:
    k, n, cls, seed, start, stop = args
    s = get_sampler(k, n, cls)
    return [s.sample(n, item_rng(seed, i)) for i in range(start, stop)]


def sample_batch(spec: SamplerSpec, count: int, parallelism: int = 1) -> Iterator[Expr]:
    """``count`` expressions in index order; item i depends only on (seed, i)."""
    if count <= 0:
        return iter(())
    if parallelism <= 1:
        s = get_sampler(spec.k, spec.n, spec.cls)
        return (s.sample(spec.n, item_rng(spec.seed, i)) for i in range(count))
    chunk = max(1, -(-count // (4 * parallelism)))
    jobs = [(spec.k, spec.n, spec.cls, spec.seed, a, min(a + chunk, count)) for a in range(0, count, chunk)]

    def gen():
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            for part in pool.map(_sample_range, jobs):
                yield from part

    return gen()
