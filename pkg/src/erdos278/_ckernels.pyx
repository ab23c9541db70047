# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: bitset sieve and residue-tuple scan."""

from libc.stdint cimport int32_t, uint64_t
from libc.stdlib cimport calloc, free, malloc


cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil


def count_uncovered(residues, moduli, Py_ssize_t period):
    cdef Py_ssize_t words = (period + 63) >> 6
    cdef uint64_t* bits = <uint64_t*>calloc(words if words > 0 else 1, sizeof(uint64_t))
    cdef Py_ssize_t a, n, j, covered = 0
    if bits == NULL:
        raise MemoryError()
    try:
        for pair in set(zip(residues, moduli)):
            a = pair[0]
            n = pair[1]
            with nogil:
                j = a
                while j < period:
                    bits[j >> 6] |= (<uint64_t>1) << (j & 63)
                    j += n
        with nogil:
            for j in range(words):
                covered += __builtin_popcountll(bits[j])
    finally:
        free(bits)
    return period - covered


cdef struct Scan:
    int32_t* counts
    Py_ssize_t* mods
    Py_ssize_t* cur
    Py_ssize_t* bmin
    Py_ssize_t* bmax
    Py_ssize_t r
    Py_ssize_t period
    Py_ssize_t covered
    Py_ssize_t min_unc
    Py_ssize_t max_unc
    long long seen


cdef inline void _leaf(Scan* s, Py_ssize_t unc) noexcept nogil:
    cdef Py_ssize_t i
    s.seen += 1
    if unc < s.min_unc:
        s.min_unc = unc
        for i in range(s.r):
            s.bmin[i] = s.cur[i]
    if unc > s.max_unc:
        s.max_unc = unc
        for i in range(s.r):
            s.bmax[i] = s.cur[i]


cdef void _dfs(Scan* s, Py_ssize_t level) noexcept nogil:
    cdef Py_ssize_t n = s.mods[level]
    cdef Py_ssize_t a, j, added
    cdef Py_ssize_t period = s.period
    cdef int32_t* counts = s.counts
    for a in range(n):
        s.cur[level] = a
        added = 0
        j = a
        if level == s.r - 1:
            while j < period:
                if counts[j] == 0:
                    added += 1
                j += n
            _leaf(s, period - s.covered - added)
            continue
        while j < period:
            if counts[j] == 0:
                added += 1
            counts[j] += 1
            j += n
        s.covered += added
        _dfs(s, level + 1)
        s.covered -= added
        j = a
        while j < period:
            counts[j] -= 1
            j += n


def residue_extrema(moduli, Py_ssize_t period):
    cdef Scan s
    cdef Py_ssize_t i, j
    cdef Py_ssize_t r = len(moduli)
    s.r = r
    s.period = period
    s.counts = <int32_t*>calloc(period, sizeof(int32_t))
    s.mods = <Py_ssize_t*>malloc(r * sizeof(Py_ssize_t))
    s.cur = <Py_ssize_t*>calloc(r, sizeof(Py_ssize_t))
    s.bmin = <Py_ssize_t*>calloc(r, sizeof(Py_ssize_t))
    s.bmax = <Py_ssize_t*>calloc(r, sizeof(Py_ssize_t))
    try:
        if not (s.counts and s.mods and s.cur and s.bmin and s.bmax):
            raise MemoryError()
        for i in range(r):
            s.mods[i] = moduli[i]
        s.min_unc = period + 1
        s.max_unc = -1
        s.seen = 0
        s.covered = 0
        j = 0
        while j < period:
            s.counts[j] = 1
            s.covered += 1
            j += s.mods[0]
        with nogil:
            if r == 1:
                _leaf(&s, period - s.covered)
            else:
                _dfs(&s, 1)
        return (s.min_unc, tuple(s.bmin[i] for i in range(r)),
                s.max_unc, tuple(s.bmax[i] for i in range(r)), s.seen)
    finally:
        free(s.counts)
        free(s.mods)
        free(s.cur)
        free(s.bmin)
        free(s.bmax)
