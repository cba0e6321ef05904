import random

import pytest

from tensorgap.fields import GF, QQ
from tensorgap.tensors import Tensor


def random_rational_tensor(dims, rng, bound=5):
    size = 1
    for d in dims:
        size *= d
    return Tensor(QQ, dims, [QQ.from_int(rng.randint(-bound, bound)) for _ in range(size)])


def random_fp_tensor(dims, p, rng):
    field = GF(p)
    size = 1
    for d in dims:
        size *= d
    return Tensor(field, dims, [field.from_int(rng.randrange(p)) for _ in range(size)])


def all_fp_tensors(dims, p):
    """Every tensor over F_p of the given shape, paired with its integer code."""
    field = GF(p)
    size = 1
    for d in dims:
        size *= d
    for code in range(p**size):
        digits = []
        n = code
        for _ in range(size):
            digits.append(n % p)
            n //= p
        yield code, Tensor(field, dims, [field.from_int(d) for d in digits])


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)
