# distutils: language = c++
# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled solver kernels.

Mirror of pure.py with the same summation order and tie handling so both
backends return bit-identical results (the build disables FP contraction
for the same reason). Limited to 64 rows / 64 columns.
"""

from libc.math cimport INFINITY, fabs, log2
from libc.stdlib cimport free, malloc
from libcpp.unordered_map cimport unordered_map
from cython.operator cimport dereference as deref, preincrement as inc

ctypedef unsigned long long u64

cdef extern from *:
    int __builtin_popcountll(u64) nogil
    int __builtin_ctzll(u64) nogil

cdef double TIE_TOL = 1e-12

DEF MAXBITS = 64


cdef struct DpEntry:
    double u
    int j


cdef inline double _mass(const double* p, u64 s) noexcept nogil:
    cdef double t = 0.0
    while s:
        t += p[__builtin_ctzll(s)]
        s &= s - 1
    return t


cdef inline double _wmass(const double* w, u64 s) noexcept nogil:
    cdef double t = 0.0
    while s:
        t += w[__builtin_ctzll(s)]
        s &= s - 1
    return t


cdef inline bint _is_tie(double a, double b) noexcept nogil:
    cdef double scale = 1.0
    if fabs(a) > scale:
        scale = fabs(a)
    if fabs(b) > scale:
        scale = fabs(b)
    return fabs(a - b) <= TIE_TOL * scale


cdef void _weights(const double* priors, u64 smask, double* w, int n_rows) noexcept nogil:
    cdef int i
    cdef double total = _mass(priors, smask)
    cdef double u
    cdef u64 m = smask
    for i in range(n_rows):
        w[i] = 0.0
    if total > 0.0:
        while m:
            i = __builtin_ctzll(m)
            w[i] = priors[i] / total
            m &= m - 1
    else:
        u = 1.0 / __builtin_popcountll(smask)
        while m:
            w[__builtin_ctzll(m)] = u
            m &= m - 1


cdef class _Arrays:
    """Owns the C copies of masks, priors and costs for one call."""
    cdef u64* masks
    cdef double* priors
    cdef double* costs
    cdef int n_rows
    cdef int n_cols

    def __cinit__(self, col_masks, priors, costs, int n_rows):
        cdef int n = len(col_masks)
        cdef int j, i
        if n > MAXBITS or n_rows > MAXBITS:
            raise ValueError("native kernels are limited to 64 rows/columns")
        self.n_cols = n
        self.n_rows = n_rows
        self.masks = <u64*> malloc(n * sizeof(u64))
        self.costs = <double*> malloc(n * sizeof(double))
        self.priors = <double*> malloc(n_rows * sizeof(double))
        if self.masks == NULL or self.costs == NULL or self.priors == NULL:
            raise MemoryError()
        for j in range(n):
            self.masks[j] = col_masks[j]
            self.costs[j] = costs[j]
        for i in range(n_rows):
            self.priors[i] = priors[i]

    def __dealloc__(self):
        free(self.masks)
        free(self.costs)
        free(self.priors)


# ---------------------------------------------------------------------------
# exact dynamic program


cdef double _dp(u64 s, _Arrays a, unordered_map[u64, DpEntry]& memo):
    cdef unordered_map[u64, DpEntry].iterator it = memo.find(s)
    cdef DpEntry entry
    cdef double ps, u0, u1, u, best
    cdef int j, best_j
    cdef u64 s0, s1
    if it != memo.end():
        return deref(it).second.u
    if s & (s - 1) == 0:
        entry.u = 0.0
        entry.j = -1
        memo[s] = entry
        return 0.0
    ps = _mass(a.priors, s)
    best = INFINITY
    best_j = -1
    for j in range(a.n_cols):
        s1 = s & a.masks[j]
        if s1 == 0 or s1 == s:
            continue
        s0 = s & ~a.masks[j]
        u0 = _dp(s0, a, memo)
        u1 = _dp(s1, a, memo)
        u = ps * a.costs[j] + u0 + u1
        if u < best:
            best = u
            best_j = j
    entry.u = best
    entry.j = best_j
    memo[s] = entry
    return best


def dp_table(col_masks, priors, costs, root):
    """Minimum-expected-cost table over survivor sets.

    Same contract as pure.dp_table: (U(root), {state: best column}).
    """
    cdef _Arrays a = _Arrays(col_masks, priors, costs, len(priors))
    cdef unordered_map[u64, DpEntry] memo
    cdef double total = _dp(<u64> root, a, memo)
    choices = {}
    cdef unordered_map[u64, DpEntry].iterator it = memo.begin()
    cdef DpEntry e
    while it != memo.end():
        e = deref(it).second
        if e.j >= 0:
            choices[deref(it).first] = e.j
        inc(it)
    return total, choices


# ---------------------------------------------------------------------------
# entropy heuristic


cdef double _branch_entropy(const double* w, u64 smask, double branch_mass) noexcept nogil:
    cdef double h = 0.0
    cdef double wi, q
    if branch_mass <= 0.0:
        return 0.0
    while smask:
        wi = w[__builtin_ctzll(smask)]
        if wi > 0.0:
            q = wi / branch_mass
            h -= q * log2(q)
        smask &= smask - 1
    return h


cdef int _entropy_pick_c(_Arrays a, const double* w, u64 s, bint maximize_reduction,
                         double* score_out) noexcept nogil:
    cdef u64 s0, s1
    cdef double h_s, m0, m1, expected, score, key
    cdef double best_key = -INFINITY
    cdef double best_cost = 0.0
    cdef double best_score = 0.0
    cdef int j, best_j = -1
    cdef bint take
    h_s = _branch_entropy(w, s, 1.0)
    for j in range(a.n_cols):
        s1 = s & a.masks[j]
        if s1 == 0 or s1 == s:
            continue
        s0 = s & ~a.masks[j]
        m0 = _wmass(w, s0)
        m1 = _wmass(w, s1)
        expected = m0 * _branch_entropy(w, s0, m0) + m1 * _branch_entropy(w, s1, m1)
        if maximize_reduction:
            score = (h_s - expected) / a.costs[j]
            key = score
        else:
            score = expected / a.costs[j]
            key = -score
        if best_j < 0:
            take = True
        elif key > best_key and not _is_tie(key, best_key):
            take = True
        elif _is_tie(key, best_key) and a.costs[j] < best_cost:
            take = True
        else:
            take = False
        if take:
            if best_j < 0 or key > best_key:
                best_key = key
            best_j = j
            best_cost = a.costs[j]
            best_score = score
    score_out[0] = best_score
    return best_j


def entropy_pick(col_masks, priors, costs, smask, n_rows, bint maximize_reduction):
    """Column chosen by the entropy rule. Returns (column, reported score)."""
    cdef _Arrays a = _Arrays(col_masks, priors, costs, n_rows)
    cdef double w[MAXBITS]
    cdef double score = 0.0
    cdef int j
    _weights(a.priors, <u64> smask, w, a.n_rows)
    j = _entropy_pick_c(a, w, <u64> smask, maximize_reduction, &score)
    return j, score


cdef void _ent_tree_c(u64 s, _Arrays a, bint maximize_reduction, dict out):
    cdef double w[MAXBITS]
    cdef double score = 0.0
    cdef int j
    if s & (s - 1) == 0:
        return
    _weights(a.priors, s, w, a.n_rows)
    j = _entropy_pick_c(a, w, s, maximize_reduction, &score)
    out[s] = j
    _ent_tree_c(s & ~a.masks[j], a, maximize_reduction, out)
    _ent_tree_c(s & a.masks[j], a, maximize_reduction, out)


def entropy_tree_table(col_masks, priors, costs, root, n_rows, bint maximize_reduction):
    """Entropy policy for every node of the grown tree: {state: column}."""
    cdef _Arrays a = _Arrays(col_masks, priors, costs, n_rows)
    out = {}
    _ent_tree_c(<u64> root, a, maximize_reduction, out)
    return out


# ---------------------------------------------------------------------------
# signature heuristic


cdef void _differ_row(_Arrays a, u64 smask, int row, u64* differ) noexcept nogil:
    cdef u64 others = smask & ~((<u64> 1) << row)
    cdef u64 cm
    cdef int j
    for j in range(a.n_cols):
        cm = a.masks[j]
        if (cm >> row) & 1:
            differ[j] = others & ~cm
        else:
            differ[j] = others & cm


cdef double _grow_c(_Arrays a, const double* w, const u64* differ, u64 smask,
                    int row, int seed, int* cols_out, int* n_out) noexcept nogil:
    cdef double total = a.costs[seed]
    cdef u64 in_sig = (<u64> 1) << seed
    cdef u64 undisc = (smask & ~((<u64> 1) << row)) & ~differ[seed]
    cdef u64 dm
    cdef int n_cols = 1
    cdef int j, best_j
    cdef double key, best_key
    cols_out[0] = seed
    while undisc:
        best_j = -1
        best_key = -INFINITY
        for j in range(a.n_cols):
            if (in_sig >> j) & 1:
                continue
            dm = differ[j] & undisc
            if dm == 0:
                continue
            key = _wmass(w, dm) / a.costs[j]
            if best_j < 0 or (key > best_key and not _is_tie(key, best_key)):
                best_key = key
                best_j = j
        cols_out[n_cols] = best_j
        n_cols += 1
        total += a.costs[best_j]
        in_sig |= (<u64> 1) << best_j
        undisc &= ~differ[best_j]
    n_out[0] = n_cols
    return total


cdef bint _set_less(const int* a_cols, int a_n, const int* b_cols, int b_n) noexcept nogil:
    """Lexicographic comparison of two sorted column sets of equal length."""
    cdef int sa[MAXBITS]
    cdef int sb[MAXBITS]
    cdef int i, j, key
    for i in range(a_n):
        sa[i] = a_cols[i]
        sb[i] = b_cols[i]
    # insertion sort; signatures are short
    for i in range(1, a_n):
        key = sa[i]
        j = i - 1
        while j >= 0 and sa[j] > key:
            sa[j + 1] = sa[j]
            j -= 1
        sa[j + 1] = key
    for i in range(1, a_n):
        key = sb[i]
        j = i - 1
        while j >= 0 and sb[j] > key:
            sb[j + 1] = sb[j]
            j -= 1
        sb[j + 1] = key
    for i in range(a_n):
        if sa[i] != sb[i]:
            return sa[i] < sb[i]
    return False


cdef double _best_sig_c(_Arrays a, const double* w, u64 smask, int row,
                        int* cols_out, int* n_out) noexcept nogil:
    cdef u64 differ[MAXBITS]
    cdef int cols[MAXBITS]
    cdef int n_cols
    cdef int seed, i
    cdef u64 s1
    cdef double total
    cdef double best_total = INFINITY
    cdef bint have = False
    cdef bint take
    cdef double margin
    _differ_row(a, smask, row, differ)
    n_out[0] = 0
    for seed in range(a.n_cols):
        s1 = smask & a.masks[seed]
        if s1 == 0 or s1 == smask:
            continue
        if have:
            margin = 1.0 if best_total < 1.0 else best_total
            if a.costs[seed] > best_total + 1e-6 * margin:
                continue
        total = _grow_c(a, w, differ, smask, row, seed, cols, &n_cols)
        if not have:
            take = True
        elif total < best_total and not _is_tie(total, best_total):
            take = True
        elif _is_tie(total, best_total):
            if n_cols < n_out[0]:
                take = True
            elif n_cols == n_out[0] and _set_less(cols, n_cols, cols_out, n_out[0]):
                take = True
            else:
                take = False
        else:
            take = False
        if take:
            have = True
            best_total = total
            n_out[0] = n_cols
            for i in range(n_cols):
                cols_out[i] = cols[i]
    return best_total


cdef int _signature_pick_c(_Arrays a, const double* w, u64 s,
                           double* ratio_out, int* row_out) noexcept nogil:
    cdef int cols[MAXBITS]
    cdef int best_cols[MAXBITS]
    cdef int n_cols = 0
    cdef int n_best = 0
    cdef u64 m = s
    cdef u64 cm, agree
    cdef int i, j, jj, best_row = -1, best_j = -1
    cdef double total, ratio, match
    cdef double best_ratio = -INFINITY
    cdef double best_match = INFINITY
    cdef double best_cost = 0.0
    cdef bint take
    cdef double min_cost = INFINITY
    cdef u64 s1
    for j in range(a.n_cols):
        s1 = s & a.masks[j]
        if s1 != 0 and s1 != s and a.costs[j] < min_cost:
            min_cost = a.costs[j]
    while m:
        i = __builtin_ctzll(m)
        m &= m - 1
        # a row whose best imaginable ratio cannot strictly beat the
        # incumbent can be skipped without changing the outcome
        if best_row >= 0 and w[i] / min_cost <= best_ratio:
            continue
        total = _best_sig_c(a, w, s, i, cols, &n_cols)
        ratio = w[i] / total
        if best_row < 0 or (ratio > best_ratio and not _is_tie(ratio, best_ratio)):
            best_row = i
            best_ratio = ratio
            n_best = n_cols
            for j in range(n_cols):
                best_cols[j] = cols[j]
    # step 3 walks the signature columns in ascending order
    for i in range(1, n_best):
        jj = best_cols[i]
        j = i - 1
        while j >= 0 and best_cols[j] > jj:
            best_cols[j + 1] = best_cols[j]
            j -= 1
        best_cols[j + 1] = jj
    for i in range(n_best):
        j = best_cols[i]
        cm = a.masks[j]
        if (cm >> best_row) & 1:
            agree = s & cm
        else:
            agree = s & ~cm
        match = _wmass(w, agree)
        if best_j < 0:
            take = True
        elif match < best_match and not _is_tie(match, best_match):
            take = True
        elif _is_tie(match, best_match) and a.costs[j] < best_cost:
            take = True
        else:
            take = False
        if take:
            if best_j < 0 or match < best_match:
                best_match = match
            best_j = j
            best_cost = a.costs[j]
    ratio_out[0] = best_ratio
    row_out[0] = best_row
    return best_j


def signature_grow(col_masks, priors, costs, smask, n_rows, row, seed):
    """Greedy signature from a seed column: (ordered columns, total cost)."""
    cdef _Arrays a = _Arrays(col_masks, priors, costs, n_rows)
    cdef double w[MAXBITS]
    cdef u64 differ[MAXBITS]
    cdef int cols[MAXBITS]
    cdef int n_cols = 0
    cdef double total
    _weights(a.priors, <u64> smask, w, a.n_rows)
    _differ_row(a, <u64> smask, row, differ)
    total = _grow_c(a, w, differ, <u64> smask, row, seed, cols, &n_cols)
    return [cols[i] for i in range(n_cols)], total


def signature_best(col_masks, priors, costs, smask, n_rows, row):
    """Cheapest greedy signature over all informative seeds."""
    cdef _Arrays a = _Arrays(col_masks, priors, costs, n_rows)
    cdef double w[MAXBITS]
    cdef int cols[MAXBITS]
    cdef int n_cols = 0
    cdef double total
    _weights(a.priors, <u64> smask, w, a.n_rows)
    total = _best_sig_c(a, w, <u64> smask, row, cols, &n_cols)
    if n_cols == 0:
        return None, total
    return [cols[i] for i in range(n_cols)], total


def signature_pick(col_masks, priors, costs, smask, n_rows):
    """Guess-and-verify choice: (column, row ratio score, hypothesized row)."""
    cdef _Arrays a = _Arrays(col_masks, priors, costs, n_rows)
    cdef double w[MAXBITS]
    cdef double ratio = 0.0
    cdef int row = -1
    cdef int j
    _weights(a.priors, <u64> smask, w, a.n_rows)
    j = _signature_pick_c(a, w, <u64> smask, &ratio, &row)
    return j, ratio, row


cdef void _sig_tree_c(u64 s, _Arrays a, dict out):
    cdef double w[MAXBITS]
    cdef double ratio = 0.0
    cdef int row = -1
    cdef int j
    if s & (s - 1) == 0:
        return
    _weights(a.priors, s, w, a.n_rows)
    j = _signature_pick_c(a, w, s, &ratio, &row)
    out[s] = j
    _sig_tree_c(s & ~a.masks[j], a, out)
    _sig_tree_c(s & a.masks[j], a, out)


def signature_tree_table(col_masks, priors, costs, root, n_rows):
    """Guess-and-verify policy for every node of the tree: {state: column}."""
    cdef _Arrays a = _Arrays(col_masks, priors, costs, n_rows)
    out = {}
    _sig_tree_c(<u64> root, a, out)
    return out


# ---------------------------------------------------------------------------
# hybrid


cdef double _hybrid_expand(u64 s, int j, _Arrays a, bint maximize_reduction,
                           unordered_map[u64, DpEntry]& memo):
    cdef double u0 = _hybrid(s & ~a.masks[j], a, maximize_reduction, memo)
    cdef double u1 = _hybrid(s & a.masks[j], a, maximize_reduction, memo)
    return _mass(a.priors, s) * a.costs[j] + u0 + u1


cdef double _hybrid(u64 s, _Arrays a, bint maximize_reduction,
                    unordered_map[u64, DpEntry]& memo):
    cdef unordered_map[u64, DpEntry].iterator it
    cdef DpEntry entry
    cdef double w[MAXBITS]
    cdef double score = 0.0
    cdef double ratio = 0.0
    cdef double u, ue, us
    cdef int je, js, j, row
    if s & (s - 1) == 0:
        return 0.0
    it = memo.find(s)
    if it != memo.end():
        return deref(it).second.u
    _weights(a.priors, s, w, a.n_rows)
    je = _entropy_pick_c(a, w, s, maximize_reduction, &score)
    js = _signature_pick_c(a, w, s, &ratio, &row)
    if je == js:
        u = _hybrid_expand(s, je, a, maximize_reduction, memo)
        j = je
    else:
        ue = _hybrid_expand(s, je, a, maximize_reduction, memo)
        us = _hybrid_expand(s, js, a, maximize_reduction, memo)
        if us < ue and not _is_tie(us, ue):
            u = us
            j = js
        else:
            u = ue
            j = je
    entry.u = u
    entry.j = j
    memo[s] = entry
    return u


def hybrid_table(col_masks, priors, costs, root, n_rows, bint maximize_reduction):
    """Hybrid policy memoized by survivor set: (U(root), {state: column})."""
    cdef _Arrays a = _Arrays(col_masks, priors, costs, n_rows)
    cdef unordered_map[u64, DpEntry] memo
    cdef double total = _hybrid(<u64> root, a, maximize_reduction, memo)
    choices = {}
    cdef unordered_map[u64, DpEntry].iterator it = memo.begin()
    while it != memo.end():
        choices[deref(it).first] = deref(it).second.j
        inc(it)
    return total, choices
