from __future__ import annotations

import pytest

from prodkit import catalog
from prodkit.finalg import save_algebra


@pytest.fixture
def z2():
    return catalog.cyclic_group(2)


@pytest.fixture
def z3():
    return catalog.cyclic_group(3)


@pytest.fixture
def z4():
    return catalog.cyclic_group(4)


@pytest.fixture
def klein():
    return catalog.klein_group()


@pytest.fixture
def s3():
    return catalog.sym3()


@pytest.fixture
def q4():
    return catalog.quasigroup4()


@pytest.fixture
def c2():
    return catalog.chain_lattice(2)


@pytest.fixture
def alg_file(tmp_path):
    """Write a catalog algebra to a temp .alg file and return its path."""

    def write(A, name=None):
        path = tmp_path / f"{name or A.name}.alg"
        save_algebra(A, path)
        return str(path)

    return write
