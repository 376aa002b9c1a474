import doctest
import importlib
import pkgutil

import pytest

import nlho

MODULES = [m.name for m in pkgutil.walk_packages(nlho.__path__, "nlho.") if not m.name.endswith("__main__")]


@pytest.mark.parametrize("name", MODULES)
def test_module_doctests(name):
    res = doctest.testmod(importlib.import_module(name), optionflags=doctest.ELLIPSIS)
    assert res.failed == 0
