"""Aggregated bound reports and their text serialisations.

Machine-readable output is JSON with sorted keys: exact integers are stored
as decimal strings and floats are rounded to 12 significant digits, so
identical inputs give byte-identical files. Each report groups its numbers
by how they were obtained: ``closed_form``, ``enumerated`` or ``spectral``.
"""
from __future__ import annotations

import csv
import io
import json
import warnings
from dataclasses import asdict, dataclass, field

from .adversary import adversary_from_relation, theorem1_bound
from .combinatorics import (
    PaperDiscrepancyWarning,
    audit_extrema,
    counting_closed_forms,
    enumerate_relation,
    extrema,
    theorem2_bound,
    theorem3_bound,
)
from .model import build_counting_instance, format_fraction

MODES = ("combinatorial", "spectral", "all")


def sig12(v: float) -> float:
    return float(f"{v:.12g}")


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


@dataclass
class BoundReport:
    n: int
    K: int
    epsilon: str
    p: int
    mode: str
    # closed form
    cf_h: int
    cf_h_prime: int
    cf_ell: int
    cf_ell_prime: int
    cf_theorem2: float
    theorem3: float
    # enumerated
    enum_h: int | None = None
    enum_h_prime: int | None = None
    enum_ell: int | None = None
    enum_ell_prime: int | None = None
    enum_theorem2: float | None = None
    witnesses: dict = field(default_factory=dict)
    # spectral
    lambda_gamma: float | None = None
    max_filtered_lambda: float | None = None
    worst_tuple: list[int] | None = None
    theorem1_ratio: float | None = None
    discrepancies: list[dict] = field(default_factory=list)

    @property
    def N(self) -> int:
        return 1 << self.n

    def to_record(self) -> dict:
        rec = {
            "parameters": {"n": self.n, "N": self.N, "K": self.K, "epsilon": self.epsilon,
                           "p": self.p, "mode": self.mode},
            "closed_form": {
                "h": str(self.cf_h), "h_prime": str(self.cf_h_prime),
                "ell": str(self.cf_ell), "ell_prime_upper": str(self.cf_ell_prime),
                "theorem2": self.cf_theorem2, "theorem3": self.theorem3,
            },
            "discrepancies": self.discrepancies,
        }
        if self.enum_h is not None:
            rec["enumerated"] = {
                "h": str(self.enum_h), "h_prime": str(self.enum_h_prime),
                "ell": str(self.enum_ell), "ell_prime": str(self.enum_ell_prime),
                "theorem2": self.enum_theorem2, "witnesses": self.witnesses,
            }
        if self.lambda_gamma is not None:
            rec["spectral"] = {
                "lambda_gamma": self.lambda_gamma, "max_filtered_lambda": self.max_filtered_lambda,
                "worst_tuple": self.worst_tuple, "theorem1_ratio": self.theorem1_ratio,
            }
        return rec

    @classmethod
    def from_record(cls, rec: dict) -> "BoundReport":
        par, cf = rec["parameters"], rec["closed_form"]
        r = cls(
            n=par["n"], K=par["K"], epsilon=par["epsilon"], p=par["p"], mode=par["mode"],
            cf_h=int(cf["h"]), cf_h_prime=int(cf["h_prime"]), cf_ell=int(cf["ell"]),
            cf_ell_prime=int(cf["ell_prime_upper"]), cf_theorem2=cf["theorem2"],
            theorem3=cf["theorem3"], discrepancies=rec.get("discrepancies", []),
        )
        if "enumerated" in rec:
            e = rec["enumerated"]
            r.enum_h, r.enum_h_prime = int(e["h"]), int(e["h_prime"])
            r.enum_ell, r.enum_ell_prime = int(e["ell"]), int(e["ell_prime"])
            r.enum_theorem2, r.witnesses = e["theorem2"], e["witnesses"]
        if "spectral" in rec:
            s = rec["spectral"]
            r.lambda_gamma, r.max_filtered_lambda = s["lambda_gamma"], s["max_filtered_lambda"]
            r.worst_tuple, r.theorem1_ratio = s["worst_tuple"], s["theorem1_ratio"]
        return r

    def render(self) -> str:
        lines = [f"instance: n={self.n} N={self.N} K={self.K} eps={self.epsilon} p={self.p}"]
        lines.append(
            f"closed-form: h={self.cf_h} h'={self.cf_h_prime} ell={self.cf_ell} "
            f"ell'<={self.cf_ell_prime} theorem2={self.cf_theorem2:.10g}"
        )
        if self.enum_h is not None:
            lines.append(
                f"enumerated: h={self.enum_h} h'={self.enum_h_prime} ell={self.enum_ell} "
                f"ell'={self.enum_ell_prime} theorem2={self.enum_theorem2:.10g}"
            )
        if self.lambda_gamma is not None:
            lines.append(
                f"spectral: lambda={self.lambda_gamma:.10g} max_filtered={self.max_filtered_lambda:.10g} "
                f"worst_tuple={self.worst_tuple} theorem1 ratio={self.theorem1_ratio:.10g}"
            )
        lines.append(f"theorem3={self.theorem3:.10g}")
        for d in self.discrepancies:
            lines.append(
                f"WARN {d['quantity']}: enumerated={d['enumerated']} closed_form={d['closed_form']} "
                f"witness_tuple={d['witness_tuple']} witness_index={d['witness_index']} "
                f"witness={d['witness_input']}"
            )
        return "\n".join(lines)


def bound_report(n: int, K: int, epsilon, p: int, mode: str = "all",
                 workers: int | None = None) -> BoundReport:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    inst = build_counting_instance(n, K, epsilon)
    N = inst.N
    cf = counting_closed_forms(N, K, inst.epsilon, p)
    rep = BoundReport(
        n=n, K=K, epsilon=format_fraction(inst.epsilon), p=p, mode=mode,
        cf_h=cf.h, cf_h_prime=cf.h_prime, cf_ell=cf.ell_paper, cf_ell_prime=cf.ell_prime_upper,
        cf_theorem2=sig12(cf.bound), theorem3=sig12(theorem3_bound(N, K, inst.epsilon, p)),
    )
    rel = enumerate_relation(inst)
    if mode in ("combinatorial", "all"):
        ext = extrema(rel, p, workers)
        rep.enum_h, rep.enum_h_prime = ext.h, ext.h_prime
        rep.enum_ell, rep.enum_ell_prime = ext.ell, ext.ell_prime
        rep.enum_theorem2 = sig12(theorem2_bound(ext.h, ext.h_prime, ext.ell, ext.ell_prime))
        rep.witnesses = {
            "h_row": ext.h_row, "h_prime_col": ext.h_prime_col,
            "ell_tuple": list(ext.ell_tuple), "ell_row": ext.ell_row,
            "ell_prime_tuple": list(ext.ell_prime_tuple), "ell_prime_col": ext.ell_prime_col,
        }
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", PaperDiscrepancyWarning)
            found = audit_extrema(rel, ext, cf)
        rep.discrepancies = [
            {**asdict(d), "enumerated": str(d.enumerated), "closed_form": str(d.closed_form),
             "witness_tuple": list(d.witness_tuple)}
            for d in found
        ]
    if mode in ("spectral", "all"):
        s = theorem1_bound(adversary_from_relation(rel), p, workers)
        rep.lambda_gamma = sig12(s.lambda_gamma)
        rep.max_filtered_lambda = sig12(s.max_filtered_lambda)
        rep.worst_tuple = list(s.worst_tuple)
        rep.theorem1_ratio = sig12(s.ratio)
    return rep


SWEEP_COLUMNS = ("n", "N", "K", "eps", "p", "h", "hp", "ell_enum", "ellp_enum", "ell_cf",
                 "ellp_cf", "thm2_enum", "thm2_cf", "thm1_ratio", "thm3")


@dataclass(frozen=True)
class SweepRow:
    n: int
    N: int
    K: int
    eps: str
    p: int
    h: int
    hp: int
    ell_enum: int
    ellp_enum: int
    ell_cf: int
    ellp_cf: int
    thm2_enum: float
    thm2_cf: float
    thm1_ratio: float
    thm3: float

    @classmethod
    def from_report(cls, r: BoundReport) -> "SweepRow":
        return cls(r.n, r.N, r.K, r.epsilon, r.p, r.enum_h, r.enum_h_prime, r.enum_ell,
                   r.enum_ell_prime, r.cf_ell, r.cf_ell_prime, r.enum_theorem2, r.cf_theorem2,
                   r.theorem1_ratio, r.theorem3)


def sweep_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_COLUMNS)
    for row in rows:
        w.writerow(f"{v:.12g}" if isinstance(v, float) else v for v in
                   (getattr(row, c) for c in SWEEP_COLUMNS))
    return buf.getvalue()
