"""
How fast the number of regimes grows
====================================

Each real root can sit inside or outside the circle, and a conjugate pair
moves as one unit. A 4-variate VMA(8) with only real roots already has
2^32 regimes.
"""
from allpass import count_regimes, estimate_cost

for n, q, pairs in [(1, 2, 0), (2, 2, 2), (3, 4, 3), (4, 8, 0), (4, 8, 16)]:
    raw, grouped = count_regimes(n, q, pairs)
    _, text = estimate_cost(grouped, 1.0)
    print(f"n={n} q={q} pairs={pairs:2d}: raw={raw:>11d} grouped={grouped:>11d} at 1s each {text}")
