"""Compare the binomial closed forms for h, h', l, l' with brute-force counts.

For p = 1 the closed forms are exact. For p >= 2 the enumerated row maximum
l can exceed the single-separating-position formula; the audit warns and
shows a witness row and position set.
"""
import warnings

from paradv import audit_extrema, build_counting_instance, counting_closed_forms, enumerate_relation, extrema
from paradv.model import valid_counting_parameters

warnings.simplefilter("always")

for n, K, eps in valid_counting_parameters([8]):
    inst = build_counting_instance(n, K, eps)
    rel = enumerate_relation(inst)
    for p in (1, 2):
        ext = extrema(rel, p)
        cf = counting_closed_forms(inst.N, K, eps, p)
        with warnings.catch_warnings(record=True) as caught:
            audit_extrema(rel, ext, cf)
        flag = " <-- " + str(caught[0].message) if caught else ""
        print(f"N=8 K={K} eps={eps} p={p}: enumerated l={ext.ell} l'={ext.ell_prime}; "
              f"closed form l={cf.ell_paper} l'<={cf.ell_prime_upper}{flag}")
