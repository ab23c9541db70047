import pytest

from erdos278.core import is_prime


def primes_from(start, count):
    out = []
    p = max(2, start)
    while len(out) < count:
        if is_prime(p):
            out.append(p)
        p += 1
    return out


@pytest.fixture
def first_primes():
    return primes_from(2, 12)
