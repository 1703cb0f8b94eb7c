import random
from functools import lru_cache

import pytest
from hypothesis import settings

from pigeom.base_field import FieldCtx
from pigeom.ram_ring import RamCtx
from pigeom.witt_base import BaseCtx

settings.register_profile("pigeom", deadline=None, max_examples=25, derandomize=True)
settings.load_profile("pigeom")


@lru_cache(maxsize=None)
def field(p, m=1, modulus=None):
    return FieldCtx(p, m, modulus)


@lru_cache(maxsize=None)
def base(p, m, K):
    return BaseCtx(field(p, m), K)


@lru_cache(maxsize=None)
def ring(p, m, K, e=1, s=1, n=1, zeta_exps=None, M=None):
    return RamCtx(base(p, m, K), e=e, s=s, n=n,
                  zeta_exps=None if zeta_exps is None else list(zeta_exps), M=M)


@pytest.fixture
def rng():
    return random.Random(1234)


@pytest.fixture
def R522():
    """p=5, m=2, K=8, e=2, two directions with zeta = (1, -1)."""
    return ring(5, 2, 8, e=2, n=2, zeta_exps=(0, 1))
