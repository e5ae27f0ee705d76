"""Phase-estimation counting, serial and split across parallel blocks.

Splitting N positions into p blocks and counting each block at the same
depth shrinks the variance of the summed estimate roughly by a factor p,
which is the classical speed-up the lower bound says cannot be beaten.
"""
from paradv import CountingSpec, parallel_disjoint_counters, phase_estimation_count

spec = CountingSpec(4, "1/2")  # N = 16

for t in (3, 4, 5, 6):
    est = phase_estimation_count(spec, 4, t)
    print(f"K=4, t={t}: {est.queries} queries, success {est.success_prob:.4f}, "
          f"most likely estimate {est.mode()}")

for p in (1, 2, 4):
    res = parallel_disjoint_counters(spec, 4, p, t_bits=3, seed=1, trials=10_000)
    print(f"p={p}: depth {res.depth}, total queries {res.total_queries}, "
          f"variance {res.empirical_variance:.3f} (exact {res.exact_variance:.3f})")

# A dyadic case: each half of N=32 holds 8 of 16 marked positions.
res = parallel_disjoint_counters(CountingSpec(5, "1/2"), 16, 2, t_bits=3, seed=0)
print(f"N=32, K=16, p=2: P(exact count) = {res.exact_success_prob:.6f} at depth {res.depth}")
