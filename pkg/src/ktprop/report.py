"""Task execution and report rendering for problem files."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__
from ._exact import format_fraction
from .analysis import (
    PolytopeModel,
    check_inequalities,
    equivalence_report,
    model_sequence,
    power_map_injectivity_scan,
)
from .errors import PreconditionError
from .hodge import gram_signature
from .problem import Problem

FORMAT_VERSION = 1


def encode(value):
    """JSON-compatible form of a library value; rationals become ``"p/q"`` strings."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return format_fraction(Fraction(value))
    if isinstance(value, Fraction):
        return format_fraction(value)
    if isinstance(value, float):
        return value
    if isinstance(value, (list, tuple)):
        return [encode(v) for v in value]
    if isinstance(value, dict):
        return {str(k): encode(v) for k, v in value.items()}
    raise TypeError(f"cannot encode {type(value).__name__}")


@dataclass
class Report:
    provenance: dict
    tasks: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"format": FORMAT_VERSION, "provenance": self.provenance, "tasks": self.tasks}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Report":
        data = json.loads(text)
        if data.get("format") != FORMAT_VERSION:
            raise ValueError(f"unsupported report format {data.get('format')!r}")
        return cls(provenance=data["provenance"], tasks=data["tasks"])

    @property
    def inconsistent_tasks(self) -> list[int]:
        bad = []
        for t in self.tasks:
            if t["type"] == "equivalence" and not t["result"]["consistent"]:
                bad.append(t["index"])
            if t["type"] == "scan" and t["result"]["counterexamples"]:
                bad.append(t["index"])
        return bad


class TaskError(Exception):
    def __init__(self, task, message: str):
        super().__init__(f"task {task.index} ({task.type}, line {task.line}): {message}")
        self.task = task


def _tol(problem: Problem, tolerance: float):
    return tolerance if problem.approximate else None


def _run_task(problem: Problem, task, seed: int, tolerance: float) -> dict:
    model = problem.model
    p = task.params
    tol = _tol(problem, tolerance)
    if task.type in ("sequence", "inequalities", "equivalence"):
        a, b = problem.classes[p["alpha"]], problem.classes[p["beta"]]
        inputs = {"alpha": p["alpha"], "beta": p["beta"]}
        if task.type == "sequence":
            s = model_sequence(model, a, b)
            return {"inputs": inputs, "result": {"n": s.n, "s": encode(s.s)}}
        if task.type == "inequalities":
            r = check_inequalities(model_sequence(model, a, b), tol)
            return {
                "inputs": inputs,
                "result": {
                    "n": r.n,
                    "s": encode(r.s),
                    "log_concavity_defects": encode(r.log_concavity_defects),
                    "power_chain_defects": encode(r.power_chain_defects),
                    "extreme_defect": encode(r.extreme_defect),
                    "ratios": encode(r.ratios),
                    "log_concave": r.log_concave,
                    "power_chain_holds": r.power_chain_holds,
                    "ratio_chain_holds": r.ratio_chain_holds,
                    "ratios_nonincreasing": r.ratios_nonincreasing,
                    "equality": [r.equality_1, r.equality_2, r.equality_3],
                },
            }
        r = equivalence_report(model, a, b, tol)
        return {
            "inputs": inputs,
            "result": {
                "n": r.n,
                "s": encode(r.s),
                "statements": [
                    {"label": st.label, "holds": st.holds, "defect": encode(st.defect), "detail": st.detail}
                    for st in r.statuses
                ],
                "binomial_identity_defect": encode(r.bm.identity_defect),
                "consistent": r.consistent,
            },
        }
    if task.type == "signature":
        names = p.get("kahler", "").split()
        ws = [problem.classes[n] for n in names]
        sig = gram_signature(model, kahler_classes=ws)
        return {"inputs": {"kahler": names}, "result": {"signature": list(sig.as_tuple())}}
    if task.type == "scan":
        samples = int(p.get("samples", 100))
        task_seed = int(p.get("seed", seed))
        rep = power_map_injectivity_scan(model, samples, task_seed)
        return {
            "inputs": {"samples": samples, "seed": task_seed},
            "result": {
                "proportional_pairs": rep.proportional_pairs,
                "parallel_images": rep.parallel_images,
                "counterexamples": [_describe_class(a) + " | " + _describe_class(b) for a, b in rep.counterexamples],
            },
        }
    raise TaskError(task, "unknown task type")


def _describe_class(c) -> str:
    if hasattr(c, "vertices"):
        return repr(c)
    return "(" + ", ".join(format_fraction(x) if not isinstance(x, float) else repr(x) for x in c.coords) + ")"


def run_problem(problem: Problem, seed: int = 0, tolerance: float = 1e-9) -> Report:
    """Execute every task in file order; raises :class:`TaskError` on invalid input."""
    digest = hashlib.sha256(problem.text.encode("utf-8")).hexdigest()
    provenance = {
        "input_sha256": digest,
        "seed": seed,
        "version": __version__,
        "model": problem.model.describe(),
        "approximate": problem.approximate,
        "tolerance": tolerance if problem.approximate else None,
    }
    report = Report(provenance)
    for task in problem.tasks:
        try:
            body = _run_task(problem, task, seed, tolerance)
        except (PreconditionError, ValueError) as exc:
            raise TaskError(task, str(exc)) from exc
        report.tasks.append({"index": task.index, "type": task.type, **body})
    return report


def render_text(report: Report) -> str:
    prov = report.provenance
    lines = []
    if prov.get("approximate"):
        lines.append(f"*** APPROXIMATE MODE: float data, relative tolerance {prov['tolerance']} ***")
    lines.append(f"model: {prov['model']}")
    lines.append(f"input sha256: {prov['input_sha256']}")
    lines.append(f"seed: {prov['seed']}  version: {prov['version']}")
    for t in report.tasks:
        lines.append("")
        inputs = ", ".join(f"{k}={v}" for k, v in t["inputs"].items())
        lines.append(f"[task {t['index']}] {t['type']} ({inputs})")
        r = t["result"]
        if t["type"] == "sequence":
            lines.append(f"  s = ({', '.join(map(str, r['s']))})")
        elif t["type"] == "inequalities":
            lines.append(f"  s = ({', '.join(map(str, r['s']))})")
            lines.append(f"  log-concavity defects: {', '.join(map(str, r['log_concavity_defects'])) or '-'}")
            lines.append(f"  power-chain defects:   {', '.join(map(str, r['power_chain_defects']))}")
            lines.append(f"  extreme defect:        {r['extreme_defect']}")
            lines.append(f"  log-concave: {r['log_concave']}  equality in (1),(2),(3): {r['equality']}")
        elif t["type"] == "equivalence":
            lines.append(f"  s = ({', '.join(map(str, r['s']))})")
            for st in r["statements"]:
                mark = "holds" if st["holds"] else "fails"
                note = st["detail"] if st["defect"] is None else f"{st['detail']}: {st['defect']}"
                lines.append(f"  {mark:5}  {st['label']}   [{note}]")
            lines.append(f"  binomial identity defect: {r['binomial_identity_defect']}")
            verdict = "all six hold" if all(st["holds"] for st in r["statements"]) else (
                "all six fail" if not any(st["holds"] for st in r["statements"]) else "INCONSISTENT")
            lines.append(f"  consistent: {r['consistent']} ({verdict})")
        elif t["type"] == "signature":
            p, n, z = r["signature"]
            lines.append(f"  inertia (positive, negative, zero) = ({p}, {n}, {z})")
        elif t["type"] == "scan":
            lines.append(
                f"  proportional pairs: {r['proportional_pairs']}  parallel images: {r['parallel_images']}"
                f"  counterexamples: {len(r['counterexamples'])}"
            )
            for c in r["counterexamples"]:
                lines.append(f"    {c}")
    return "\n".join(lines) + "\n"
