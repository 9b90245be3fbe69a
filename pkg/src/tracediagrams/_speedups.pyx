# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled contraction kernels.

Mirrors tracediagrams._kernels_pure: same signatures, same exact-arithmetic
semantics.  Index bookkeeping (odometers, offsets, Levi-Civita signs, factor
scheduling) runs as C integer code; the entry values themselves stay Python
ints/Fractions, so results are bit-identical to the pure kernels.
"""

from cpython.list cimport PyList_GET_ITEM
from libc.stdlib cimport free, malloc

FACTOR_EPS = 0
FACTOR_DELTA = 1
FACTOR_MAT = 2


cdef inline Py_ssize_t _ipow(Py_ssize_t base, Py_ssize_t exp):
    cdef Py_ssize_t out = 1
    cdef Py_ssize_t i
    for i in range(exp):
        out *= base
    return out


def pair_contract(Py_ssize_t n, list a_vals, Py_ssize_t a_naxes,
                  list b_vals, Py_ssize_t b_naxes, pairs):
    """See tracediagrams._kernels_pure.pair_contract."""
    cdef Py_ssize_t npairs = len(pairs)
    cdef Py_ssize_t i, j, p, q, pos, off_a, off_b, ndig
    cdef long long terms = 0

    a_paired = {pp for pp, _ in pairs}
    b_paired = {qq for _, qq in pairs}
    if len(a_paired) != npairs or len(b_paired) != npairs:
        raise ValueError("duplicate axis in pairing")
    for pp, qq in pairs:
        if not (0 <= pp < a_naxes and 0 <= qq < b_naxes):
            raise ValueError(f"pairing axis out of range: ({pp}, {qq})")

    a_free = [i for i in range(a_naxes) if i not in a_paired]
    b_free = [i for i in range(b_naxes) if i not in b_paired]
    pair_list = [(int(pp), int(qq)) for pp, qq in pairs]

    cdef Py_ssize_t na_free = len(a_free)
    cdef Py_ssize_t nb_free = len(b_free)
    cdef Py_ssize_t n_abases = _ipow(n, na_free)
    cdef Py_ssize_t n_bbases = _ipow(n, nb_free)
    cdef Py_ssize_t n_sums = _ipow(n, npairs)

    cdef Py_ssize_t total_axes = a_naxes + b_naxes
    cdef Py_ssize_t *strides = <Py_ssize_t *> malloc(
        sizeof(Py_ssize_t) * (total_axes if total_axes else 1))
    cdef Py_ssize_t *offsets = <Py_ssize_t *> malloc(
        sizeof(Py_ssize_t) * (n_abases + n_bbases + 2 * n_sums))
    cdef Py_ssize_t ndig_alloc = max(na_free, nb_free, npairs, 1)
    cdef Py_ssize_t *digits = <Py_ssize_t *> malloc(
        sizeof(Py_ssize_t) * ndig_alloc)
    if strides is NULL or offsets is NULL or digits is NULL:
        if strides is not NULL:
            free(strides)
        if offsets is not NULL:
            free(offsets)
        if digits is not NULL:
            free(digits)
        raise MemoryError()

    cdef Py_ssize_t *a_str = strides
    cdef Py_ssize_t *b_str = strides + a_naxes
    cdef Py_ssize_t *a_bases = offsets
    cdef Py_ssize_t *b_bases = offsets + n_abases
    cdef Py_ssize_t *ao_offs = b_bases + n_bbases
    cdef Py_ssize_t *bo_offs = ao_offs + n_sums

    try:
        for i in range(a_naxes):
            a_str[i] = _ipow(n, a_naxes - 1 - i)
        for i in range(b_naxes):
            b_str[i] = _ipow(n, b_naxes - 1 - i)

        for i in range(ndig_alloc):
            digits[i] = 0
        for j in range(n_abases):
            off_a = 0
            for i in range(na_free):
                off_a += digits[i] * a_str[<Py_ssize_t> a_free[i]]
            a_bases[j] = off_a
            for pos in range(na_free - 1, -1, -1):
                digits[pos] += 1
                if digits[pos] < n:
                    break
                digits[pos] = 0

        for i in range(ndig_alloc):
            digits[i] = 0
        for j in range(n_bbases):
            off_b = 0
            for i in range(nb_free):
                off_b += digits[i] * b_str[<Py_ssize_t> b_free[i]]
            b_bases[j] = off_b
            for pos in range(nb_free - 1, -1, -1):
                digits[pos] += 1
                if digits[pos] < n:
                    break
                digits[pos] = 0

        for i in range(ndig_alloc):
            digits[i] = 0
        for j in range(n_sums):
            off_a = 0
            off_b = 0
            for i in range(npairs):
                p, q = pair_list[i]
                off_a += digits[i] * a_str[p]
                off_b += digits[i] * b_str[q]
            ao_offs[j] = off_a
            bo_offs[j] = off_b
            for pos in range(npairs - 1, -1, -1):
                digits[pos] += 1
                if digits[pos] < n:
                    break
                digits[pos] = 0

        out = []
        for i in range(n_abases):
            off_a = a_bases[i]
            for j in range(n_bbases):
                off_b = b_bases[j]
                acc = 0
                for pos in range(n_sums):
                    av = <object> PyList_GET_ITEM(
                        a_vals, off_a + ao_offs[pos])
                    if av:
                        bv = <object> PyList_GET_ITEM(
                            b_vals, off_b + bo_offs[pos])
                        if bv:
                            acc += av * bv
                            terms += 1
                out.append(acc)
        return out, terms
    finally:
        free(strides)
        free(offsets)
        free(digits)


def permute_axes(Py_ssize_t n, list vals, Py_ssize_t naxes, perm):
    """See tracediagrams._kernels_pure.permute_axes."""
    if sorted(perm) != list(range(naxes)):
        raise ValueError(f"not an axis permutation: {perm}")
    cdef Py_ssize_t size = _ipow(n, naxes)
    cdef Py_ssize_t *weights = <Py_ssize_t *> malloc(
        sizeof(Py_ssize_t) * (2 * naxes if naxes else 1))
    if weights is NULL:
        raise MemoryError()
    cdef Py_ssize_t *digits = weights + naxes
    cdef Py_ssize_t i, r, src, pos
    try:
        for r in range(naxes):
            weights[r] = _ipow(n, naxes - 1 - <Py_ssize_t> perm[r])
            digits[r] = 0
        out = []
        src = 0
        for i in range(size):
            out.append(<object> PyList_GET_ITEM(vals, src))
            for pos in range(naxes - 1, -1, -1):
                digits[pos] += 1
                src += weights[pos]
                if digits[pos] < n:
                    break
                digits[pos] = 0
                src -= n * weights[pos]
        return out
    finally:
        free(weights)


cdef int _eps_sign(Py_ssize_t *buf, Py_ssize_t m):
    cdef Py_ssize_t i, j, inv = 0
    cdef Py_ssize_t di
    for i in range(m):
        di = buf[i]
        for j in range(i + 1, m):
            if di == buf[j]:
                return 0
            if di > buf[j]:
                inv += 1
    return -1 if inv & 1 else 1


cdef class _Network:
    """DFS state for epsilon_network, shared across the recursion."""
    cdef Py_ssize_t n, nvars, n_out
    cdef Py_ssize_t *digits
    cdef Py_ssize_t *is_fixed
    cdef Py_ssize_t *out_vars
    cdef Py_ssize_t *eps_buf
    cdef list sched
    cdef list out
    cdef long long terms

    def __cinit__(self, Py_ssize_t n, Py_ssize_t nvars, Py_ssize_t n_out,
                  Py_ssize_t eps_max):
        cdef Py_ssize_t nalloc = nvars if nvars else 1
        cdef Py_ssize_t oalloc = n_out if n_out else 1
        cdef Py_ssize_t ealloc = eps_max if eps_max else 1
        self.digits = <Py_ssize_t *> malloc(sizeof(Py_ssize_t) * 2 * nalloc)
        self.out_vars = <Py_ssize_t *> malloc(sizeof(Py_ssize_t) * oalloc)
        self.eps_buf = <Py_ssize_t *> malloc(sizeof(Py_ssize_t) * ealloc)
        if self.digits is NULL or self.out_vars is NULL or \
                self.eps_buf is NULL:
            raise MemoryError()
        self.is_fixed = self.digits + nalloc
        self.n = n
        self.nvars = nvars
        self.n_out = n_out
        self.terms = 0

    def __dealloc__(self):
        if self.digits is not NULL:
            free(self.digits)
        if self.out_vars is not NULL:
            free(self.out_vars)
        if self.eps_buf is not NULL:
            free(self.eps_buf)

    cdef object _factors(self, Py_ssize_t level, object partial):
        """Apply the factors scheduled at `level`; None signals a zero."""
        cdef Py_ssize_t m, k, h, t
        cdef int s
        cdef tuple payload
        for item in <list> PyList_GET_ITEM(self.sched, level):
            kind = (<tuple> item)[0]
            payload = (<tuple> item)[1]
            if kind == FACTOR_EPS:
                m = len(payload)
                for k in range(m):
                    self.eps_buf[k] = self.digits[<Py_ssize_t> payload[k]]
                s = _eps_sign(self.eps_buf, m)
                if s == 0:
                    return None
                if s < 0:
                    partial = -partial
            elif kind == FACTOR_DELTA:
                if self.digits[<Py_ssize_t> payload[0]] != \
                        self.digits[<Py_ssize_t> payload[1]]:
                    return None
            else:
                h = payload[0]
                t = payload[1]
                entry = <object> PyList_GET_ITEM(
                    <list> payload[2],
                    self.digits[h] * self.n + self.digits[t])
                if not entry:
                    return None
                partial = partial * entry
        return partial

    cdef void _recurse(self, Py_ssize_t level, object partial):
        cdef Py_ssize_t idx, i, d
        if level == self.nvars:
            idx = 0
            for i in range(self.n_out):
                idx = idx * self.n + self.digits[self.out_vars[i]]
            (<list> self.out)[idx] = \
                (<object> PyList_GET_ITEM(self.out, idx)) + partial
            self.terms += 1
            return
        if self.is_fixed[level]:
            p = self._factors(level + 1, partial)
            if p is not None:
                self._recurse(level + 1, p)
            return
        for d in range(self.n):
            self.digits[level] = d
            p = self._factors(level + 1, partial)
            if p is not None:
                self._recurse(level + 1, p)


def epsilon_network(Py_ssize_t n, Py_ssize_t nvars, out_vars, fixed,
                    eps_factors, delta_factors, mat_factors):
    """See tracediagrams._kernels_pure.epsilon_network."""
    cdef Py_ssize_t n_out = len(out_vars)
    cdef Py_ssize_t eps_max = 0
    for f in eps_factors:
        if len(f) > eps_max:
            eps_max = len(f)
    cdef _Network net = _Network(n, nvars, n_out, eps_max)
    cdef Py_ssize_t i, v, d

    fixed_map = dict(fixed)
    for v in range(nvars):
        net.digits[v] = 0
        net.is_fixed[v] = 0
    for v, d in fixed_map.items():
        net.digits[v] = d
        net.is_fixed[v] = 1
    for i in range(n_out):
        net.out_vars[i] = out_vars[i]

    sched = [[] for _ in range(nvars + 1)]

    def last_var(vs):
        free_vs = [x for x in vs if x not in fixed_map]
        return max(free_vs) if free_vs else -1

    for f in eps_factors:
        sched[last_var(f) + 1].append((FACTOR_EPS, tuple(f)))
    for pair in delta_factors:
        sched[last_var(pair) + 1].append((FACTOR_DELTA, tuple(pair)))
    for h, t, vals in mat_factors:
        sched[last_var((h, t)) + 1].append(
            (FACTOR_MAT, (int(h), int(t), list(vals))))

    net.sched = sched
    net.out = [0] * _ipow(n, n_out)

    start = net._factors(0, 1)
    if start is not None:
        net._recurse(0, start)
    return net.out, net.terms
