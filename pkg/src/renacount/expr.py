"""Regular expression trees over a k-letter alphabet.

Expressions are immutable trees built from five node kinds. Letters carry
an index in ``1..k``; the alphabet size is supplied by the caller wherever
it matters (parsing, the absorbing-pattern predicates).

Traversals are iterative so that deep trees (long chains of stars or
left-combs, as produced by the sampler at large sizes) never hit the
interpreter recursion limit.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from typing import Callable, Iterator, Union as _U


@dataclass(frozen=True, slots=True)
class Epsilon:
    pass


@dataclass(frozen=True, slots=True)
class Letter:
    index: int


@dataclass(frozen=True, slots=True)
class Union:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True, slots=True)
class Concat:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True, slots=True)
class Star:
    child: "Expr"


Expr = _U[Epsilon, Letter, Union, Concat, Star]

EPS = Epsilon()

# kind codes shared with the flat encoding used by the compiled kernels
K_EPS, K_LETTER, K_UNION, K_CONCAT, K_STAR = 0, 1, 2, 3, 4


class ExprSyntaxError(ValueError):
    """Malformed expression text; ``offset`` is the 0-based character index."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class AlphabetError(ValueError):
    pass


def children(e: Expr) -> tuple:
    if isinstance(e, (Union, Concat)):
        return (e.left, e.right)
    if isinstance(e, Star):
        return (e.child,)
    return ()


def postorder(e: Expr) -> Iterator[Expr]:
    """Yield nodes children-first, left subtree before right subtree."""
    stack = [(e, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            yield node
            continue
        stack.append((node, True))
        for c in reversed(children(node)):
            stack.append((c, False))


def fold(e: Expr, leaf: Callable, unary: Callable, binary: Callable):
    """Bottom-up evaluation without recursion.

    ``leaf(node)`` handles Epsilon/Letter, ``unary(node, v)`` handles Star and
    ``binary(node, vl, vr)`` handles Union/Concat.
    """
    values: list = []
    for node in postorder(e):
        if isinstance(node, (Union, Concat)):
            vr = values.pop()
            vl = values.pop()
            values.append(binary(node, vl, vr))
        elif isinstance(node, Star):
            values.append(unary(node, values.pop()))
        else:
            values.append(leaf(node))
    return values[0]


def size(e: Expr) -> int:
    """Tree size: number of symbols, parentheses disregarded."""
    return sum(1 for _ in postorder(e))


def alphabetic_size(e: Expr) -> int:
    return sum(1 for node in postorder(e) if isinstance(node, Letter))


def is_nullable(e: Expr) -> bool:
    return fold(
        e,
        lambda n: isinstance(n, Epsilon),
        lambda n, v: True,
        lambda n, a, b: (a or b) if isinstance(n, Union) else (a and b),
    )


def letters_of_union_tree(e: Expr) -> list[int] | None:
    """Letter indices of a tree built only from Union and Letter nodes, read
    left to right; ``None`` if any other node kind occurs."""
    out = []
    stack = [e]
    while stack:
        node = stack.pop()
        if isinstance(node, Letter):
            out.append(node.index)
        elif isinstance(node, Union):
            stack.append(node.right)
            stack.append(node.left)
        else:
            return None
    return out


def is_sigma_star(e: Expr, k: int) -> bool:
    """True for ``(s_i1 + ... + s_ik)*`` with the letters a permutation of the
    alphabet, under any association of the unions."""
    if not isinstance(e, Star):
        return False
    letters = letters_of_union_tree(e.child)
    return letters is not None and len(letters) == k and sorted(letters) == list(range(1, k + 1))


def avoids_absorbing_in_union(e: Expr, k: int) -> bool:
    """Membership in REna: no union operand is a Sigma-star expression."""
    for node in postorder(e):
        if isinstance(node, Union) and (is_sigma_star(node.left, k) or is_sigma_star(node.right, k)):
            return False
    return True


def max_letter(e: Expr) -> int:
    return max((n.index for n in postorder(e) if isinstance(n, Letter)), default=0)


# ---------------------------------------------------------------------------
# text format

def letter_name(i: int) -> str:
    if i < 1:
        raise AlphabetError(f"letter index must be >= 1, got {i}")
    if i <= 26:
        return string.ascii_lowercase[i - 1]
    return f"s{i}"


def format_expr(e: Expr) -> str:
    """Fully parenthesized canonical text, e.g. ``((a+b)*)``."""
    return fold(
        e,
        lambda n: "@" if isinstance(n, Epsilon) else letter_name(n.index),
        lambda n, v: f"({v}*)",
        lambda n, a, b: f"({a}{'+' if isinstance(n, Union) else '.'}{b})",
    )


def parse(text: str, k: int) -> Expr:
    """Parse the fully parenthesized syntax.

    Grammar: ``E := '@' | letter | '(' E '+' E ')' | '(' E '.' E ')' | '(' E '*' ')'``.
    Letters are ``a``..``z`` or ``s<index>``; whitespace is ignored.
    """
    toks = _tokenize(text)
    pos = 0
    # explicit stack of partially built '(' frames: [offset, left, op]
    frames: list[list] = []
    result: Expr | None = None

    def tok(i):
        return toks[i] if i < len(toks) else (None, len(text))

    while True:
        kind, off = tok(pos)
        # parse an operand start
        if kind == "(":
            frames.append([off, None, None])
            pos += 1
            continue
        if kind == "@":
            node: Expr = EPS
        elif isinstance(kind, int):
            if not 1 <= kind <= k:
                raise AlphabetError(f"letter {letter_name(kind)!r} at offset {off} is outside the alphabet of size {k}")
            node = Letter(kind)
        elif kind is None:
            raise ExprSyntaxError("unexpected end of input", off)
        else:
            raise ExprSyntaxError(f"unexpected {kind!r}", off)
        pos += 1
        # reduce completed operands into enclosing frames
        while True:
            if not frames:
                result = node
                break
            frame = frames[-1]
            kind, off = tok(pos)
            if frame[1] is None:
                if kind == "*":
                    kind2, off2 = tok(pos + 1)
                    if kind2 != ")":
                        raise ExprSyntaxError("expected ')'" if kind2 is not None else "unexpected end of input", off2)
                    frames.pop()
                    node = Star(node)
                    pos += 2
                    continue
                if kind in ("+", "."):
                    frame[1], frame[2] = node, kind
                    pos += 1
                    node = None
                    break
                if kind is None:
                    raise ExprSyntaxError("unexpected end of input", off)
                raise ExprSyntaxError("expected '+', '.' or '*'", off)
            if kind != ")":
                raise ExprSyntaxError("expected ')'" if kind is not None else "unexpected end of input", off)
            frames.pop()
            node = Union(frame[1], node) if frame[2] == "+" else Concat(frame[1], node)
            pos += 1
        if result is not None:
            break
    if pos != len(toks):
        raise ExprSyntaxError("trailing input", toks[pos][1])
    return result


def _tokenize(text: str) -> list[tuple]:
    toks = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "()+.*@":
            toks.append((ch, i))
            i += 1
        elif ch == "s" and i + 1 < n and text[i + 1].isdigit():
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            toks.append((int(text[i + 1:j]), i))
            i = j
        elif "a" <= ch <= "z":
            toks.append((ord(ch) - ord("a") + 1, i))
            i += 1
        else:
            raise ExprSyntaxError(f"unexpected character {ch!r}", i)
    return toks


# ---------------------------------------------------------------------------
# flat encoding for the compiled kernels

def to_flat(e: Expr):
    """Preorder arrays ``(kind, left, right, label)``.

    Node 0 is the root; children always have larger indices than their
    parent and letters appear in left-to-right order, so the i-th Letter
    node met in index order is position i.
    """
    import numpy as np

    kinds, lefts, rights, labels = [], [], [], []
    stack = [(e, -1, 0)]  # node, parent index, slot (0 left/child, 1 right)
    while stack:
        node, parent, slot = stack.pop()
        idx = len(kinds)
        if parent >= 0:
            (lefts if slot == 0 else rights)[parent] = idx
        lefts.append(-1)
        rights.append(-1)
        if isinstance(node, Epsilon):
            kinds.append(K_EPS); labels.append(0)
        elif isinstance(node, Letter):
            kinds.append(K_LETTER); labels.append(node.index)
        elif isinstance(node, Star):
            kinds.append(K_STAR); labels.append(0)
            stack.append((node.child, idx, 0))
        else:
            kinds.append(K_UNION if isinstance(node, Union) else K_CONCAT); labels.append(0)
            stack.append((node.right, idx, 1))
            stack.append((node.left, idx, 0))
    return (np.array(kinds, dtype=np.int8), np.array(lefts, dtype=np.int32),
            np.array(rights, dtype=np.int32), np.array(labels, dtype=np.int32))


def from_flat(kind, left, right, label, root: int = 0) -> Expr:
    """Inverse of :func:`to_flat` for the subtree rooted at ``root``."""
    # indices are preorder, so a reverse sweep over the subtree builds children first
    end = root + 1
    stack = [root]
    while stack:  # find the extent of the subtree
        i = stack.pop()
        end = max(end, i + 1)
        if left[i] >= 0:
            stack.append(int(left[i]))
        if right[i] >= 0:
            stack.append(int(right[i]))
    built: dict[int, Expr] = {}
    for i in range(end - 1, root - 1, -1):
        kd = int(kind[i])
        if kd == K_EPS:
            built[i] = EPS
        elif kd == K_LETTER:
            built[i] = Letter(int(label[i]))
        elif kd == K_STAR:
            built[i] = Star(built.pop(int(left[i])))
        elif kd == K_UNION:
            built[i] = Union(built.pop(int(left[i])), built.pop(int(right[i])))
        else:
            built[i] = Concat(built.pop(int(left[i])), built.pop(int(right[i])))
    return built[root]
