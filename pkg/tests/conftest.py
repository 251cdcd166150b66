import functools

import numpy as np
import pytest

from pseudoed.text import Text, default_letters


def ed_reference(a, b):
    """Levenshtein distance by memoized recursion; independent of the library."""
    a, b = tuple(a), tuple(b)

    @functools.lru_cache(maxsize=None)
    def go(i, j):
        if i == 0:
            return j
        if j == 0:
            return i
        return min(go(i - 1, j) + 1, go(i, j - 1) + 1, go(i - 1, j - 1) + (a[i - 1] != b[j - 1]))

    return go(len(a), len(b))


def random_text(rng: np.random.Generator, n: int, sigma: int = 4) -> Text:
    return Text(tuple(int(v) for v in rng.integers(0, sigma, n)), default_letters(sigma))


def mutate(rng: np.random.Generator, x: Text, k: int) -> Text:
    out = list(x.symbols)
    sigma = x.alphabet_size
    for _ in range(k):
        kind = int(rng.integers(0, 3))
        if kind == 0 and out:
            del out[int(rng.integers(0, len(out)))]
        elif kind == 1 or not out:
            out.insert(int(rng.integers(0, len(out) + 1)), int(rng.integers(0, sigma)))
        else:
            out[int(rng.integers(0, len(out)))] = int(rng.integers(0, sigma))
    return x.with_symbols(out)


@pytest.fixture
def nprng():
    return np.random.default_rng(12345)
