# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled union-find kernel; same contract as ``aida._unionfind_py``."""
from array import array

from cpython.array cimport array as carray, clone


cdef inline Py_ssize_t _find(long long[::1] parent, Py_ssize_t x) noexcept nogil:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = <Py_ssize_t>parent[x]
    return x


def label_components(Py_ssize_t n, const long long[:] sources, const long long[:] targets):
    """Label each of ``n`` nodes with the smallest node index of its component."""
    if sources.shape[0] != targets.shape[0]:
        raise ValueError("sources and targets must have equal length")
    cdef carray out = clone(array("q"), n, zero=False)
    cdef long long[::1] parent = out
    cdef Py_ssize_t i, k, ra, rb
    cdef long long a, b
    for i in range(n):
        parent[i] = i
    for k in range(sources.shape[0]):
        a = sources[k]
        b = targets[k]
        if a < 0 or a >= n or b < 0 or b >= n:
            raise IndexError(f"edge ({a}, {b}) out of range for {n} nodes")
        with nogil:
            ra = _find(parent, <Py_ssize_t>a)
            rb = _find(parent, <Py_ssize_t>b)
            if ra < rb:
                parent[rb] = ra
            elif rb < ra:
                parent[ra] = rb
    with nogil:
        for i in range(n):
            parent[i] = _find(parent, i)
    return out
