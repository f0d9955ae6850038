"""Array kernels for bulk Glushkov statistics over expression corpora.

A corpus is four concatenated preorder arrays (see ``expr.to_flat``) plus
an ``offsets`` array: expression ``x`` occupies ``offsets[x]:offsets[x+1]``
and its child indices are relative to ``offsets[x]``.  Node count equals
tree size, so the right child of a binary node at ``i`` with a left subtree
of size ``a`` sits at ``i + 1 + a``.
"""

from __future__ import annotations

import numpy as np

from ._jit import njit
from .expr import Expr, to_flat

# node kinds are the literal codes of expr.K_*: 0 eps, 1 letter, 2 union, 3 concat, 4 star

# columns of the per-expression statistics matrix
STAT_COLUMNS = (
    "size", "letters", "nullable",
    "f", "s", "e", "e_star",          # counting recursion
    "first", "last", "follow", "follow_star", "transitions",  # set cardinalities
)


@njit
def _counts_one(kind, left, right, lo, hi, out):
    # out[i] = (nullable, f, s, e, e_star) for node i, bottom-up
    for i in range(hi - 1, lo - 1, -1):
        kd = kind[i]
        if kd == 0:
            out[i, 0] = 1; out[i, 1] = 0; out[i, 2] = 0; out[i, 3] = 0; out[i, 4] = 0
        elif kd == 1:
            out[i, 0] = 0; out[i, 1] = 1; out[i, 2] = 1; out[i, 3] = 0; out[i, 4] = 1
        elif kd == 4:
            a = lo + left[i]
            out[i, 0] = 1; out[i, 1] = out[a, 1]; out[i, 2] = out[a, 2]
            out[i, 3] = out[a, 4]; out[i, 4] = out[a, 4]
        else:
            a = lo + left[i]
            b = lo + right[i]
            c = out[a, 2] * out[b, 1] + out[b, 2] * out[a, 1]
            if kd == 2:
                out[i, 0] = 1 if (out[a, 0] + out[b, 0]) > 0 else 0
                out[i, 1] = out[a, 1] + out[b, 1]
                out[i, 2] = out[a, 2] + out[b, 2]
                out[i, 3] = out[a, 3] + out[b, 3]
                out[i, 4] = out[a, 4] + out[b, 4] + c
            else:
                na = out[a, 0]
                nb = out[b, 0]
                out[i, 0] = na * nb
                out[i, 1] = out[a, 1] + out[b, 1] if na else out[a, 1]
                out[i, 2] = out[a, 2] + out[b, 2] if nb else out[b, 2]
                out[i, 3] = out[a, 3] + out[b, 3] + out[a, 2] * out[b, 1]
                lft = out[a, 4] if nb else out[a, 3]
                rgt = out[b, 4] if na else out[b, 3]
                out[i, 4] = lft + rgt + c


@njit
def _sets_one(kind, left, right, lo, hi, first, last, nullable, follow):
    # global Glushkov construction: First/Last per node as boolean rows,
    # Follow accumulated from every concatenation and every star
    m = 0
    pos = np.zeros(hi - lo, np.int64)
    for i in range(lo, hi):
        if kind[i] == 1:
            pos[i - lo] = m
            m += 1
    for i in range(hi - 1, lo - 1, -1):
        r = i - lo
        kd = kind[i]
        for p in range(m):
            first[r, p] = False
            last[r, p] = False
        if kd == 0:
            nullable[r] = True
        elif kd == 1:
            nullable[r] = False
            first[r, pos[r]] = True
            last[r, pos[r]] = True
        elif kd == 4:
            a = left[i]
            nullable[r] = True
            for p in range(m):
                first[r, p] = first[a, p]
                last[r, p] = last[a, p]
            for p in range(m):
                if last[a, p]:
                    for q in range(m):
                        if first[a, q]:
                            follow[p, q] = True
        else:
            a = left[i]
            b = right[i]
            if kd == 2:
                nullable[r] = nullable[a] or nullable[b]
                for p in range(m):
                    first[r, p] = first[a, p] or first[b, p]
                    last[r, p] = last[a, p] or last[b, p]
            else:
                nullable[r] = nullable[a] and nullable[b]
                for p in range(m):
                    first[r, p] = first[a, p] or (nullable[a] and first[b, p])
                    last[r, p] = last[b, p] or (nullable[b] and last[a, p])
                for p in range(m):
                    if last[a, p]:
                        for q in range(m):
                            if first[b, q]:
                                follow[p, q] = True
    return m


@njit
def corpus_stats(kind, left, right, offsets):
    """Per-expression statistics, one row per expression (see STAT_COLUMNS)."""
    n_expr = offsets.shape[0] - 1
    stats = np.zeros((n_expr, 12), np.int64)
    max_nodes = 1
    for x in range(n_expr):
        max_nodes = max(max_nodes, offsets[x + 1] - offsets[x])
    cnt = np.zeros((offsets[-1] + 1, 5), np.int64)
    first = np.zeros((max_nodes, max_nodes), np.bool_)
    last = np.zeros((max_nodes, max_nodes), np.bool_)
    nullable = np.zeros(max_nodes, np.bool_)
    follow = np.zeros((max_nodes, max_nodes), np.bool_)
    for x in range(n_expr):
        lo = offsets[x]
        hi = offsets[x + 1]
        _counts_one(kind, left, right, lo, hi, cnt)
        m = 0
        for i in range(lo, hi):
            if kind[i] == 1:
                m += 1
        for p in range(m):
            for q in range(m):
                follow[p, q] = False
        _sets_one(kind, left, right, lo, hi, first, last, nullable, follow)
        n_first = 0
        n_last = 0
        n_follow = 0
        n_follow_star = 0
        for p in range(m):
            if first[0, p]:
                n_first += 1
            if last[0, p]:
                n_last += 1
        for p in range(m):
            for q in range(m):
                if follow[p, q]:
                    n_follow += 1
                    n_follow_star += 1
                elif last[0, p] and first[0, q]:
                    n_follow_star += 1
        stats[x, 0] = hi - lo
        stats[x, 1] = m
        stats[x, 2] = cnt[lo, 0]
        stats[x, 3] = cnt[lo, 1]
        stats[x, 4] = cnt[lo, 2]
        stats[x, 5] = cnt[lo, 3]
        stats[x, 6] = cnt[lo, 4]
        stats[x, 7] = n_first
        stats[x, 8] = n_last
        stats[x, 9] = n_follow
        stats[x, 10] = n_follow_star
        # transitions are (src, letter, dst) triples; dst fixes the letter
        stats[x, 11] = n_first + n_follow
    return stats


@njit
def random_corpus(seed, count, k, min_size, max_size, pattern_rate):
    """Random expression trees with sizes uniform in [min_size, max_size].

    Not uniform over expressions: the root kind and the size split are drawn
    with simple fixed weights.  With probability ``pattern_rate`` a subtree of
    size 2k becomes a Sigma-star with a random permutation and union shape.
    Returns ``(kind, left, right, label, offsets)``.
    """
    np.random.seed(seed)
    sizes = np.empty(count, np.int64)
    for x in range(count):
        sizes[x] = np.random.randint(min_size, max_size + 1)
    offsets = np.zeros(count + 1, np.int64)
    for x in range(count):
        offsets[x + 1] = offsets[x] + sizes[x]
    total = offsets[count]
    kind = np.zeros(total, np.int8)
    left = np.full(total, -1, np.int32)
    right = np.full(total, -1, np.int32)
    label = np.zeros(total, np.int32)
    st_idx = np.empty(2 * max_size + 2, np.int64)
    st_size = np.empty(2 * max_size + 2, np.int64)
    st_mode = np.empty(2 * max_size + 2, np.int64)  # 0 free tree, 1 permutation-union tree
    perm = np.arange(1, k + 1)
    for x in range(count):
        base = offsets[x]
        top = 0
        st_idx[0] = 0; st_size[0] = sizes[x]; st_mode[0] = 0
        top = 1
        letter_cursor = 0
        while top > 0:
            top -= 1
            i = st_idx[top]; s = st_size[top]; mode = st_mode[top]
            g = base + i
            if mode == 1:
                if s == 1:
                    kind[g] = 1
                    label[g] = perm[letter_cursor]
                    letter_cursor += 1
                else:
                    leaves = (s + 1) // 2
                    lb = np.random.randint(1, leaves)
                    ls = 2 * lb - 1
                    kind[g] = 2
                    left[g] = i + 1; right[g] = i + 1 + ls
                    # push right first so the left subtree takes letters first
                    st_idx[top] = i + 1 + ls; st_size[top] = s - 1 - ls; st_mode[top] = 1
                    st_idx[top + 1] = i + 1; st_size[top + 1] = ls; st_mode[top + 1] = 1
                    top += 2
                continue
            if s == 1:
                r = np.random.randint(0, k + 1)
                if r == 0:
                    kind[g] = 0
                else:
                    kind[g] = 1
                    label[g] = r
            elif s == 2 * k and pattern_rate > 0.0 and np.random.random() < pattern_rate:
                kind[g] = 4
                left[g] = i + 1
                np.random.shuffle(perm)
                letter_cursor = 0
                st_idx[top] = i + 1; st_size[top] = s - 1; st_mode[top] = 1
                top += 1
            elif s == 2:
                kind[g] = 4
                left[g] = i + 1
                st_idx[top] = i + 1; st_size[top] = 1; st_mode[top] = 0
                top += 1
            else:
                u = np.random.random()
                if u < 0.2:
                    kind[g] = 4
                    left[g] = i + 1
                    st_idx[top] = i + 1; st_size[top] = s - 1; st_mode[top] = 0
                    top += 1
                else:
                    kind[g] = 2 if u < 0.6 else 3
                    ls = np.random.randint(1, s - 1)
                    left[g] = i + 1; right[g] = i + 1 + ls
                    st_idx[top] = i + 1 + ls; st_size[top] = s - 1 - ls; st_mode[top] = 0
                    st_idx[top + 1] = i + 1; st_size[top + 1] = ls; st_mode[top + 1] = 0
                    top += 2
    return kind, left, right, label, offsets


def flatten_corpus(exprs: list[Expr]):
    """Concatenate ``to_flat`` encodings; returns ``(kind, left, right, label, offsets)``."""
    parts = [to_flat(e) for e in exprs]
    offsets = np.zeros(len(parts) + 1, np.int64)
    for x, p in enumerate(parts):
        offsets[x + 1] = offsets[x] + len(p[0])
    if not parts:
        empty = np.zeros(0, np.int32)
        return np.zeros(0, np.int8), empty, empty, empty, offsets
    return tuple(np.concatenate([p[c] for p in parts]) for c in range(4)) + (offsets,)


def stats_for(exprs: list[Expr]) -> np.ndarray:
    kind, left, right, _label, offsets = flatten_corpus(exprs)
    return corpus_stats(kind, left, right, offsets)


def corpus_expr(corpus, x: int) -> Expr:
    """Rebuild expression ``x`` of a flat corpus as a tree."""
    from .expr import from_flat

    kind, left, right, label, offsets = corpus
    lo, hi = int(offsets[x]), int(offsets[x + 1])
    return from_flat(kind[lo:hi], left[lo:hi], right[lo:hi], label[lo:hi], 0)
