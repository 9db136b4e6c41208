"""
Families of partial matchings used by normal ordering and braiding.

``enumerate_matchings(n, k)`` lists every set of k disjoint ordered pairs
(p, q), p < q, drawn from 1..n. ``enumerate_bipartite(n, m, k)`` does the same
with p in 1..n and q in n+1..n+m.
"""
import functools
import itertools
import math
from dataclasses import dataclass

from .errors import MatchingError


@dataclass(frozen=True)
class Matching:
    pairs: tuple
    complement: tuple

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)


def _pairings(items):
    """
    Yield all perfect pairings of ``items`` (first item paired first).
    """
    items = list(items)
    if not items:
        yield []
        return
    first = items.pop(0)
    for i, item in enumerate(items):
        for rest in _pairings(items[:i] + items[i + 1:]):
            yield [(first, item)] + rest


@functools.lru_cache(maxsize=256)
def enumerate_matchings(n, k):
    if n < 0 or not 0 <= k <= n // 2:
        raise MatchingError('k={} is out of range for n={}'.format(k, n))
    out = []
    for support in itertools.combinations(range(1, n + 1), 2 * k):
        complement = tuple(i for i in range(1, n + 1) if i not in support)
        for pairing in _pairings(support):
            out.append(Matching(tuple(sorted(pairing)), complement))
    return tuple(out)


@functools.lru_cache(maxsize=256)
def enumerate_bipartite(n, m, k):
    if n < 0 or m < 0 or not 0 <= k <= min(n, m):
        raise MatchingError('k={} is out of range for n={}, m={}'.format(k, n, m))
    everything = range(1, n + m + 1)
    out = []
    for left in itertools.combinations(range(1, n + 1), k):
        for right in itertools.permutations(range(n + 1, n + m + 1), k):
            used = set(left) | set(right)
            complement = tuple(i for i in everything if i not in used)
            out.append(Matching(tuple(zip(left, right)), complement))
    return tuple(out)


def matching_count(n, k):
    """
    n! / (2^k k! (n-2k)!).
    """
    return math.factorial(n) // (2 ** k * math.factorial(k) * math.factorial(n - 2 * k))


def bipartite_count(n, m, k):
    return math.comb(n, k) * math.comb(m, k) * math.factorial(k)
