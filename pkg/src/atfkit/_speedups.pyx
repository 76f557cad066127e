# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled search kernels; see ``_purekernels`` for the reference code."""


def ternary_triples(long long c1, long long c2, long long c3, long long s, long long bound):
    cdef long long x, y, z, ax, axy, sxy
    out = []
    for x in range(1, bound + 1):
        ax = c1 * x * x
        for y in range(1, bound + 1):
            axy = ax + c2 * y * y
            sxy = s * x * y
            for z in range(1, bound + 1):
                if axy + c3 * z * z == sxy * z:
                    out.append((x, y, z))
    return out


def has_ternary_triple(long long c1, long long c2, long long c3, long long s, long long bound):
    cdef long long x, y, z, ax, axy, sxy
    for x in range(1, bound + 1):
        ax = c1 * x * x
        for y in range(1, bound + 1):
            axy = ax + c2 * y * y
            sxy = s * x * y
            for z in range(1, bound + 1):
                if axy + c3 * z * z == sxy * z:
                    return True
    return False
