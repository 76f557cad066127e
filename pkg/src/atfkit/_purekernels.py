"""Pure-Python versions of the hot search kernels.

These are the reference implementations; :mod:`atfkit._speedups` mirrors
them loop for loop in Cython.
"""


def ternary_triples(c1, c2, c3, s, bound):
    """All ``(x, y, z)`` in ``[1, bound]^3`` with ``c1 x^2 + c2 y^2 + c3 z^2 = s x y z``.

    Plain triple loop, sorted lexicographically.
    """
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


def has_ternary_triple(c1, c2, c3, s, bound):
    for x in range(1, bound + 1):
        ax = c1 * x * x
        for y in range(1, bound + 1):
            axy = ax + c2 * y * y
            sxy = s * x * y
            for z in range(1, bound + 1):
                if axy + c3 * z * z == sxy * z:
                    return True
    return False
