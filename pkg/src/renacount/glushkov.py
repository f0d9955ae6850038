"""Glushkov position automata and the transition-counting functions.

Two independent routes are provided.  :func:`position_sets` materializes
First/Last/Follow as sets, by structural induction with the nullability
split of the star case.  :func:`count_functions` computes only the set
sizes (f, s, e, e*) by the counting recursion and never builds a set.
The test suite holds the two routes against each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .expr import Concat, Epsilon, Expr, Letter, Star, Union, postorder


@dataclass(frozen=True)
class PositionSets:
    first: frozenset[int]
    last: frozenset[int]
    follow: frozenset[tuple[int, int]]
    nullable: bool
    follow_star: frozenset[tuple[int, int]]  # Follow of the starred expression
    letters: tuple[int, ...]  # letters[j-1] is the letter at position j


@dataclass(frozen=True)
class _Node:
    first: frozenset
    last: frozenset
    nullable: bool
    edd: frozenset
    eds: frozenset


def _cross(a: _Node, b: _Node) -> frozenset:
    return frozenset((i, j) for i in a.last for j in b.first) | frozenset(
        (i, j) for i in b.last for j in a.first)


def position_sets(e: Expr) -> PositionSets:
    """First, Last, Follow and Follow-under-star of ``e``.

    Positions number the letters 1..m left to right.
    """
    letters: list[int] = []
    stack: list[_Node] = []
    for node in postorder(e):
        if isinstance(node, Epsilon):
            stack.append(_Node(frozenset(), frozenset(), True, frozenset(), frozenset()))
        elif isinstance(node, Letter):
            letters.append(node.index)
            i = len(letters)
            stack.append(_Node(frozenset({i}), frozenset({i}), False, frozenset(), frozenset({(i, i)})))
        elif isinstance(node, Star):
            a = stack.pop()
            stack.append(_Node(a.first, a.last, True, a.eds, a.eds))
        elif isinstance(node, Union):
            b = stack.pop()
            a = stack.pop()
            stack.append(_Node(a.first | b.first, a.last | b.last, a.nullable or b.nullable,
                               a.edd | b.edd, a.eds | b.eds | _cross(a, b)))
        else:
            b = stack.pop()
            a = stack.pop()
            first = a.first | b.first if a.nullable else a.first
            last = a.last | b.last if b.nullable else b.last
            edd = a.edd | b.edd | frozenset((i, j) for i in a.last for j in b.first)
            # under a star, a nullable side keeps its own loop-back pairs;
            # a non-nullable side gets them through Cross
            left = a.eds if b.nullable else a.edd
            right = b.eds if a.nullable else b.edd
            eds = left | right | _cross(a, b)
            stack.append(_Node(first, last, a.nullable and b.nullable, edd, eds))
    top = stack.pop()
    return PositionSets(top.first, top.last, top.edd, top.nullable, top.eds, tuple(letters))


@dataclass(frozen=True)
class GlushkovNfa:
    """Position automaton: states ``0..m``, initial state 0."""

    n_states: int
    transitions: tuple[tuple[int, int, int], ...]  # (source, letter, target), sorted
    finals: frozenset[int]

    @property
    def n_transitions(self) -> int:
        return len(self.transitions)

    def accepts(self, word: Sequence[int]) -> bool:
        delta: dict[tuple[int, int], list[int]] = {}
        for src, a, dst in self.transitions:
            delta.setdefault((src, a), []).append(dst)
        current = {0}
        for a in word:
            current = {d for q in current for d in delta.get((q, a), ())}
            if not current:
                return False
        return bool(current & self.finals)

    def to_json_dict(self) -> dict:
        return {
            "states": self.n_states,
            "transitions": [list(t) for t in self.transitions],
            "finals": sorted(self.finals),
        }


def build_glushkov(e: Expr) -> GlushkovNfa:
    ps = position_sets(e)
    lab = ps.letters
    trans = {(0, lab[j - 1], j) for j in ps.first}
    trans |= {(i, lab[j - 1], j) for i, j in ps.follow}
    finals = set(ps.last)
    if ps.nullable:
        finals.add(0)
    return GlushkovNfa(len(lab) + 1, tuple(sorted(trans)), frozenset(finals))


@dataclass(frozen=True)
class Counts:
    f: int
    s: int
    e: int
    e_star: int
    nullable: bool

    @property
    def t(self) -> int:
        return self.f + self.e


def count_functions(e: Expr) -> Counts:
    """f = |First|, s = |Last|, e = |Follow|, e* = |Follow(e*)| and
    t = f + e (Glushkov transitions), by the counting recursion alone."""
    stack: list[Counts] = []
    for node in postorder(e):
        if isinstance(node, Epsilon):
            stack.append(Counts(0, 0, 0, 0, True))
        elif isinstance(node, Letter):
            stack.append(Counts(1, 1, 0, 1, False))
        elif isinstance(node, Star):
            a = stack.pop()
            stack.append(Counts(a.f, a.s, a.e_star, a.e_star, True))
        else:
            b = stack.pop()
            a = stack.pop()
            c = a.s * b.f + b.s * a.f
            if isinstance(node, Union):
                stack.append(Counts(a.f + b.f, a.s + b.s, a.e + b.e, a.e_star + b.e_star + c,
                                    a.nullable or b.nullable))
            else:
                f = a.f + b.f if a.nullable else a.f
                s = a.s + b.s if b.nullable else b.s
                e_ = a.e + b.e + a.s * b.f
                left = a.e_star if b.nullable else a.e
                right = b.e_star if a.nullable else b.e
                stack.append(Counts(f, s, e_, left + right + c, a.nullable and b.nullable))
    return stack.pop()


def matches(e: Expr, word: Sequence[int]) -> bool:
    """Reference membership test working directly on the tree.

    Decides ``word[i:j] in L(node)`` by splitting for concatenation and
    star, memoized on (node, i, j).  Independent of any automaton.
    """
    word = tuple(word)

    @lru_cache(maxsize=None)
    def m(node: Expr, i: int, j: int) -> bool:
        if isinstance(node, Epsilon):
            return i == j
        if isinstance(node, Letter):
            return j == i + 1 and word[i] == node.index
        if isinstance(node, Union):
            return m(node.left, i, j) or m(node.right, i, j)
        if isinstance(node, Concat):
            return any(m(node.left, i, x) and m(node.right, x, j) for x in range(i, j + 1))
        # star: empty, or a non-empty first factor followed by the star again
        if i == j:
            return True
        return any(m(node.child, i, x) and m(node, x, j) for x in range(i + 1, j + 1))

    return m(e, 0, len(word))
