"""Watch the adversary progress measure decay under real query algorithms.

W^t is the eigenvector-weighted sum of overlaps between the states reached
on related inputs. It starts at the spectral norm of the adversary matrix
and one parallel query round can move it by at most twice the largest
filtered spectral norm.
"""
from paradv import build_counting_instance, counting_adversary, progress_trace, random_schedule
from paradv.simulator import final_overlap_check, grover_schedule, read_bit_schedule

gamma = counting_adversary(build_counting_instance(2, 1, 1))

for p in (1, 2):
    tr = progress_trace(gamma, random_schedule(n=2, p=p, T=4, seed=2024))
    print(f"random schedule p={p}: W = {[round(w, 4) for w in tr.W]}")
    print(f"  largest step {max(tr.deltas):.4f} against bound {tr.step_bound:.4f}")

tr = progress_trace(gamma, grover_schedule(2, 3))
print(f"Grover iterations: W = {[round(w, 4) for w in tr.W]}")

# Reading one position separates only the pairs that differ there.
rep = final_overlap_check(gamma, read_bit_schedule(2, 0))
separated = sum(ok for *_, ok in rep.pairs)
print(f"read position 0: {separated}/{len(rep.pairs)} related pairs below overlap {rep.threshold:.4f}")
