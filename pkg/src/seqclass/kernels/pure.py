"""Pure-Python solver kernels.

Reference implementation of the hot inner loops (exact DP, entropy pick,
signature growth, whole-tree policy tables). The compiled module in
_native.pyx mirrors this file operation for operation; keep the two in
lockstep (same summation order, same tie handling) so both backends
produce bit-identical results.

All kernels work on column bitmasks: bit i of col_masks[j] is row i's
value in column j. A survivor set is a bitmask over rows. The *_table
functions return {survivor set: chosen column} policies from which the
caller reconstructs trees.
"""

from __future__ import annotations

import math

INF = math.inf

# Relative tolerance for "these two scores are the same" when breaking ties.
TIE_TOL = 1e-12


def mass(priors, smask: int) -> float:
    """Total prior mass of the rows in smask (summed in ascending row order)."""
    total = 0.0
    while smask:
        total += priors[(smask & -smask).bit_length() - 1]
        smask &= smask - 1
    return total


def survivor_weights(priors, smask: int, n_rows: int) -> list[float]:
    """Renormalized priors over the survivor set.

    Falls back to uniform weights when the surviving mass is zero (possible
    with zero-prior rows) so decision rules stay well defined.
    """
    w = [0.0] * n_rows
    total = mass(priors, smask)
    m = smask
    if total > 0.0:
        while m:
            i = (m & -m).bit_length() - 1
            w[i] = priors[i] / total
            m &= m - 1
    else:
        u = 1.0 / smask.bit_count()
        while m:
            w[(m & -m).bit_length() - 1] = u
            m &= m - 1
    return w


def _wmass(w, smask: int) -> float:
    total = 0.0
    while smask:
        total += w[(smask & -smask).bit_length() - 1]
        smask &= smask - 1
    return total


def _is_tie(a: float, b: float) -> bool:
    return abs(a - b) <= TIE_TOL * max(1.0, abs(a), abs(b))


# ---------------------------------------------------------------------------
# exact dynamic program


def dp_table(col_masks, priors, costs, root: int):
    """Minimum-expected-cost table over survivor sets.

    Works on unnormalized masses: U(S) = min over informative columns j of
    [mass(S) * c_j + U(S with 0 in j) + U(S with 1 in j)], U(singleton) = 0.
    Ties go to the lowest column index. Returns (U(root), {state: column}).
    """
    n = len(col_masks)
    memo_u: dict[int, float] = {}
    memo_j: dict[int, int] = {}

    def rec(s: int) -> float:
        got = memo_u.get(s)
        if got is not None:
            return got
        if s & (s - 1) == 0:
            memo_u[s] = 0.0
            return 0.0
        ps = mass(priors, s)
        best = INF
        best_j = -1
        for j in range(n):
            s1 = s & col_masks[j]
            if s1 == 0 or s1 == s:
                continue
            u0 = rec(s & ~col_masks[j])
            u1 = rec(s1)
            u = ps * costs[j] + u0 + u1
            if u < best:
                best = u
                best_j = j
        memo_u[s] = best
        memo_j[s] = best_j
        return best

    total = rec(root)
    return total, memo_j


# ---------------------------------------------------------------------------
# entropy heuristic


def _branch_entropy(w, smask: int, branch_mass: float) -> float:
    """Entropy of the survivor weights inside a branch, renormalized."""
    if branch_mass <= 0.0:
        return 0.0
    h = 0.0
    while smask:
        wi = w[(smask & -smask).bit_length() - 1]
        if wi > 0.0:
            q = wi / branch_mass
            h -= q * math.log2(q)
        smask &= smask - 1
    return h


def _entropy_pick(col_masks, costs, w, smask: int, maximize_reduction: bool):
    h_s = _branch_entropy(w, smask, 1.0)
    best_j = -1
    best_key = -INF
    best_cost = 0.0
    best_score = 0.0
    for j in range(len(col_masks)):
        s1 = smask & col_masks[j]
        if s1 == 0 or s1 == smask:
            continue
        s0 = smask & ~col_masks[j]
        m0 = _wmass(w, s0)
        m1 = _wmass(w, s1)
        expected = m0 * _branch_entropy(w, s0, m0) + m1 * _branch_entropy(w, s1, m1)
        if maximize_reduction:
            score = (h_s - expected) / costs[j]
            key = score
        else:
            score = expected / costs[j]
            key = -score
        if best_j < 0:
            take = True
        elif key > best_key and not _is_tie(key, best_key):
            take = True
        elif _is_tie(key, best_key) and costs[j] < best_cost:
            take = True
        else:
            take = False
        if take:
            if best_j < 0 or key > best_key:
                best_key = key
            best_j = j
            best_cost = costs[j]
            best_score = score
    return best_j, best_score


def entropy_pick(col_masks, priors, costs, smask: int, n_rows: int, maximize_reduction: bool):
    """Column chosen by the entropy rule. Returns (column, reported score).

    maximize_reduction=True: maximize (H(S) - E[H after split]) / cost.
    maximize_reduction=False: minimize E[H after split] / cost.
    Score ties are broken toward the cheaper column, then the lower index.
    """
    w = survivor_weights(priors, smask, n_rows)
    return _entropy_pick(col_masks, costs, w, smask, maximize_reduction)


def entropy_tree_table(col_masks, priors, costs, root: int, n_rows: int,
                       maximize_reduction: bool):
    """Entropy policy for every node of the grown tree: {state: column}."""
    out: dict[int, int] = {}

    def rec(s: int) -> None:
        if s & (s - 1) == 0:
            return
        w = survivor_weights(priors, s, n_rows)
        j, _ = _entropy_pick(col_masks, costs, w, s, maximize_reduction)
        out[s] = j
        rec(s & ~col_masks[j])
        rec(s & col_masks[j])

    rec(root)
    return out


# ---------------------------------------------------------------------------
# signature heuristic


def _differ_masks(col_masks, smask: int, row: int) -> list[int]:
    """Per column: surviving rows whose value differs from `row`'s."""
    others = smask & ~(1 << row)
    out = []
    for cm in col_masks:
        if cm >> row & 1:
            out.append(others & ~cm)
        else:
            out.append(others & cm)
    return out


def _grow(costs, w, differ, smask: int, row: int, seed: int):
    """Greedy signature growth from a seed column.

    Each step adds the column with the greatest ratio of still-undiscriminated
    differing mass to inspection cost (ties: lowest column index), until the
    row is separated from every other survivor.
    """
    n = len(differ)
    cols = [seed]
    total = costs[seed]
    in_sig = 1 << seed
    undisc = (smask & ~(1 << row)) & ~differ[seed]
    while undisc:
        best_j = -1
        best_key = -INF
        for j in range(n):
            if in_sig >> j & 1:
                continue
            dm = differ[j] & undisc
            if dm == 0:
                continue
            key = _wmass(w, dm) / costs[j]
            if best_j < 0 or (key > best_key and not _is_tie(key, best_key)):
                best_key = key
                best_j = j
        cols.append(best_j)
        total += costs[best_j]
        in_sig |= 1 << best_j
        undisc &= ~differ[best_j]
    return cols, total


def _best_sig(col_masks, costs, w, smask: int, row: int):
    """Cheapest greedy signature over all informative seed columns.

    Cost ties prefer fewer columns, then the lexicographically smallest
    sorted column set. Seeds that already cost clearly more than the
    incumbent signature cannot win and are skipped.
    """
    differ = _differ_masks(col_masks, smask, row)
    best_cols = None
    best_total = INF
    for seed in range(len(col_masks)):
        s1 = smask & col_masks[seed]
        if s1 == 0 or s1 == smask:
            continue
        if best_cols is not None and costs[seed] > best_total + 1e-6 * max(1.0, best_total):
            continue
        cols, total = _grow(costs, w, differ, smask, row, seed)
        if best_cols is None:
            best_cols, best_total = cols, total
            continue
        if total < best_total and not _is_tie(total, best_total):
            best_cols, best_total = cols, total
        elif _is_tie(total, best_total):
            if len(cols) < len(best_cols):
                best_cols, best_total = cols, total
            elif len(cols) == len(best_cols) and sorted(cols) < sorted(best_cols):
                best_cols, best_total = cols, total
    return best_cols, best_total


def signature_grow(col_masks, priors, costs, smask: int, n_rows: int, row: int, seed: int):
    """Greedy signature from one seed: (ordered columns, total cost)."""
    w = survivor_weights(priors, smask, n_rows)
    differ = _differ_masks(col_masks, smask, row)
    return _grow(costs, w, differ, smask, row, seed)


def signature_best(col_masks, priors, costs, smask: int, n_rows: int, row: int):
    """Cheapest greedy signature over all informative seeds."""
    w = survivor_weights(priors, smask, n_rows)
    return _best_sig(col_masks, costs, w, smask, row)


def _signature_pick(col_masks, costs, w, smask: int):
    min_cost = INF
    for j in range(len(col_masks)):
        s1 = smask & col_masks[j]
        if s1 != 0 and s1 != smask and costs[j] < min_cost:
            min_cost = costs[j]
    best_row = -1
    best_ratio = -INF
    best_cols = None
    m = smask
    while m:
        i = (m & -m).bit_length() - 1
        m &= m - 1
        # a row whose best imaginable ratio cannot strictly beat the
        # incumbent can be skipped without changing the outcome
        if best_row >= 0 and w[i] / min_cost <= best_ratio:
            continue
        cols, total = _best_sig(col_masks, costs, w, smask, i)
        ratio = w[i] / total
        if best_row < 0 or (ratio > best_ratio and not _is_tie(ratio, best_ratio)):
            best_row = i
            best_ratio = ratio
            best_cols = cols
    best_j = -1
    best_match = INF
    best_cost = 0.0
    for j in sorted(best_cols):
        cm = col_masks[j]
        agree = (smask & cm) if (cm >> best_row & 1) else (smask & ~cm)
        match = _wmass(w, agree)
        if best_j < 0:
            take = True
        elif match < best_match and not _is_tie(match, best_match):
            take = True
        elif _is_tie(match, best_match) and costs[j] < best_cost:
            take = True
        else:
            take = False
        if take:
            if best_j < 0 or match < best_match:
                best_match = match
            best_j = j
            best_cost = costs[j]
    return best_j, best_ratio, best_row


def signature_pick(col_masks, priors, costs, smask: int, n_rows: int):
    """Guess-and-verify choice: pick the most promising row, then the column
    of its signature least likely to match.

    Row selection maximizes survivor weight / signature cost (ties: lowest
    row). Column selection minimizes the surviving mass that agrees with the
    hypothesized row's value (ties: cheaper column, then lower index).
    Returns (column, row ratio score, hypothesized row).
    """
    w = survivor_weights(priors, smask, n_rows)
    return _signature_pick(col_masks, costs, w, smask)


def signature_tree_table(col_masks, priors, costs, root: int, n_rows: int):
    """Guess-and-verify policy for every node of the tree: {state: column}."""
    out: dict[int, int] = {}

    def rec(s: int) -> None:
        if s & (s - 1) == 0:
            return
        w = survivor_weights(priors, s, n_rows)
        j, _, _ = _signature_pick(col_masks, costs, w, s)
        out[s] = j
        rec(s & ~col_masks[j])
        rec(s & col_masks[j])

    rec(root)
    return out


# ---------------------------------------------------------------------------
# hybrid


def hybrid_table(col_masks, priors, costs, root: int, n_rows: int,
                 maximize_reduction: bool):
    """Hybrid policy: expand both heuristic candidates per state, keep the
    subtree with the lower unnormalized cost (ties favour entropy).

    Memoized by survivor set. Returns (U(root), {state: chosen column});
    the tree is the walk from the root along chosen splits.
    """
    memo_u: dict[int, float] = {}
    memo_j: dict[int, int] = {}

    def expand(s: int, j: int) -> float:
        u0 = rec(s & ~col_masks[j])
        u1 = rec(s & col_masks[j])
        return mass(priors, s) * costs[j] + u0 + u1

    def rec(s: int) -> float:
        if s & (s - 1) == 0:
            return 0.0
        got = memo_u.get(s)
        if got is not None:
            return got
        w = survivor_weights(priors, s, n_rows)
        je, _ = _entropy_pick(col_masks, costs, w, s, maximize_reduction)
        js, _, _ = _signature_pick(col_masks, costs, w, s)
        if je == js:
            u, j = expand(s, je), je
        else:
            ue = expand(s, je)
            us = expand(s, js)
            if us < ue and not _is_tie(us, ue):
                u, j = us, js
            else:
                u, j = ue, je
        memo_u[s] = u
        memo_j[s] = j
        return u

    total = rec(root)
    return total, memo_j
