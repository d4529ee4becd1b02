"""Binomial coefficients under the combinatorial convention, and the Kronecker delta."""
import math


def binomial(n: int, k: int) -> int:
    """n! / (k! (n - k)!) when 0 <= k <= n, and 0 for every other pair."""
    if k < 0 or n < 0 or k > n:
        return 0
    return math.comb(n, k)


def kronecker(n: int) -> int:
    return 1 if n == 0 else 0
