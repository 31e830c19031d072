"""Optional numba compilation of the float inner loops.

``jit`` is ``numba.njit`` when numba can be imported. Otherwise it is
:func:`ijit`, which accepts the same call forms (bare decorator or decorator
factory with options) and returns the function unchanged.

"""
import warnings


def ijit(first=None, **options):
    """Stand-in for ``numba.njit``; options are accepted and ignored.

    """
    if callable(first):
        return first
    return lambda f: f


try:
    import numba
except ImportError:
    warnings.warn(
        "Could not import numba package. All railyardpy "
        "functions will work properly but the float q-Pochhammer "
        "products will be slow. Consider installing numba to "
        "speed them up."
    )
    jit = ijit
else:
    jit = numba.njit
