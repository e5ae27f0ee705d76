"""Lower bounds for approximate counting on the smallest interesting instance.

N = 4 positions, K = 1 marked, eps = 1: we must tell weight-1 inputs from
weight-2 inputs. Run with ``python demos/01_flagship_bounds.py``.
"""
import math

from paradv import (
    build_counting_instance,
    counting_adversary,
    counting_closed_forms,
    enumerate_relation,
    extrema,
    theorem1_bound,
    theorem2_bound,
    theorem3_bound,
)

inst = build_counting_instance(n=2, K=1, epsilon=1)
print(f"|X| = {len(inst.X)} inputs of weight 1, |Y| = {len(inst.Y)} inputs of weight 2")

# Every singleton sits below three pairs, every pair above two singletons.
rel = enumerate_relation(inst)
print(f"relation has {len(rel)} pairs")

# The adversary matrix is the symmetrised incidence of that relation.
gamma = counting_adversary(inst)

for p in (1, 2, 3, 4):
    spec = theorem1_bound(gamma, p)
    ext = extrema(rel, p)
    cf = counting_closed_forms(inst.N, inst.K, inst.epsilon, p)
    print(
        f"p={p}: spectral ratio {spec.ratio:.6f} (worst positions {spec.worst_tuple}), "
        f"combinatorial {theorem2_bound(ext.h, ext.h_prime, ext.ell, ext.ell_prime):.6f}, "
        f"closed form {cf.bound:.6f}, (1/eps) sqrt(N/pK) = {theorem3_bound(4, 1, 1, p):.6f}"
    )

# With p = 1 everything agrees on sqrt(6).
print("sqrt(6) =", math.sqrt(6))
