"""Reference values for the operator complexity module.

Pairing codes use Cantor's polynomial on (s - 1, t - 1) shifted by one.
Logarithms come from mpmath at 60 digits and are printed as decimals.
"""

from fractions import Fraction

import mpmath

mpmath.mp.dps = 60


def pair(s, t):
    a, b = s - 1, t - 1
    w = a + b
    return w * (w + 1) // 2 + b + 1


def neg_log2(q):
    return -mpmath.log(mpmath.mpf(q.numerator) / q.denominator, 2)


def tail(s, n):
    return (Fraction(1, 2 ** (s + 2)) - Fraction(1, 2 ** n)) / 2


if __name__ == "__main__":
    print("pair table s,t <= 4:")
    for s in range(1, 5):
        print("  ", [pair(s, t) for t in range(1, 5)])
    print("pair(1000, 1000) =", pair(1000, 1000))
    print("pair(2**31, 2**31) =", pair(2**31, 2**31))
    for s, n in [(1, 8), (2, 8), (3, 10)]:
        t = tail(s, n)
        print(f"tail s={s} n={n}: {t}  -log2 = {mpmath.nstr(neg_log2(t), 30)}")
    for q in [Fraction(331, 2048), Fraction(503, 4096), Fraction(39, 512), Fraction(495, 8192)]:
        print(f"-log2 {q} = {mpmath.nstr(neg_log2(q), 30)}")
