"""Slow, obviously-correct reference implementations used by the tests."""

from itertools import combinations
from math import gcd


def naive_reduce(letters):
    """Cancel the leftmost adjacent inverse pair until none is left."""
    w = list(letters)
    changed = True
    while changed:
        changed = False
        for i in range(len(w) - 1):
            a, b = w[i], w[i + 1]
            if a.symbol == b.symbol and a.exponent == -b.exponent:
                del w[i:i + 2]
                changed = True
                break
    return tuple(w)


def random_order_reduce(letters, rng):
    """Cancel adjacent inverse pairs chosen at random; the result must not depend on the choice."""
    w = list(letters)
    while True:
        spots = [i for i in range(len(w) - 1)
                 if w[i].symbol == w[i + 1].symbol and w[i].exponent == -w[i + 1].exponent]
        if not spots:
            return tuple(w)
        i = rng.choice(spots)
        del w[i:i + 2]


def det(m):
    n = len(m)
    if n == 0:
        return 1
    if n == 1:
        return m[0][0]
    total = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        total += (-1) ** j * m[0][j] * det(minor)
    return total


def determinantal_divisors(m):
    """d_k = gcd of all k x k minors; the invariant factors are d_k / d_{k-1}."""
    rows, cols = len(m), len(m[0])
    out = []
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for rs in combinations(range(rows), k):
            for cs in combinations(range(cols), k):
                g = gcd(g, det([[m[r][c] for c in cs] for r in rs]))
        out.append(g)
    return out


def invariant_factors(m):
    divs = determinantal_divisors(m)
    out, prev = [], 1
    for d in divs:
        if d == 0:
            out.append(0)
            prev = 0
            continue
        out.append(d // prev)
        prev = d
    return out
