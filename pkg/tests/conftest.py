from functools import lru_cache
from itertools import permutations
from math import factorial

import pytest

ALPHABET = "abcdefghi"

# Rows 1-16 and 705-720 of the n = 6 listing.
LISTING_HEAD = [
    "abcdef", "abcdfe", "abcedf", "abcefd", "abcfde", "abcfed", "abdcef", "abdcfe",
    "abdecf", "abdefc", "abdfce", "abdfec", "abecdf", "abecfd", "abedcf", "abedfc",
]
LISTING_TAIL = [
    "febcad", "febcda", "febdac", "febdca", "fecabd", "fecadb", "fecbad", "fecbda",
    "fecdab", "fecdba", "fedabc", "fedacb", "fedbac", "fedbca", "fedcab", "fedcba",
]


@lru_cache(maxsize=None)
def lex_sequence(n):
    """itertools emits in lexicographic order of input positions."""
    return tuple(permutations(ALPHABET[:n]))


@pytest.fixture
def listing():
    rows = {k: tuple(s) for k, s in enumerate(LISTING_HEAD, start=1)}
    rows.update({k: tuple(s) for k, s in enumerate(LISTING_TAIL, start=705)})
    assert len(rows) == 32 and max(rows) == factorial(6)
    return rows
