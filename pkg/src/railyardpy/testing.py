"""Testing utilities.
"""
import os.path

import pytest


def test(slow=False, *args):
    """Run the bundled test-suite.

    Parameters
    ----------
    slow : bool
        Also run the tests marked ``slow``.
    args : str
        Extra pytest arguments.

    Returns
    -------
    int
        pytest's exit code.

    """
    argv = [os.path.dirname(os.path.abspath(__file__))]
    if not slow:
        argv += ["-m", "not slow"]
    return pytest.main(argv + list(args))
