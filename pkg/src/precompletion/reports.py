"""Ring files and the text / structured reports built from them.

A ring file looks like::

    # Q[[x,y,z]]/(x^2)
    label: square of a variable
    vars: x y z
    residue: countable
    gens: x^2

``gens`` is a ';'-separated list and may be the single generator 0.  The
residue tag has no default because it decides the dim >= 2 verdicts.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Tuple

from . import __version__
from .classifier import QUESTIONS, RESIDUE_TAGS, ClassificationReport, RingPresentation
from .errors import SpecError
from .invariants import InvariantReport, Undecided, decided

TOOL = "precompletion"
_KEYS = ("label", "vars", "residue", "gens")


@dataclass(frozen=True)
class RingSpecFile:
    variables: Tuple[str, ...]
    generators: Tuple[str, ...]
    residue: str
    label: str = ""

    def presentation(self) -> RingPresentation:
        return RingPresentation.from_strings(self.variables, self.generators, self.residue, self.label)

    def echo(self) -> dict:
        return {
            "label": self.label,
            "vars": list(self.variables),
            "gens": list(self.generators),
            "residue": self.residue,
        }


def parse_spec(text: str) -> RingSpecFile:
    seen = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition(":")
        key = key.strip().lower()
        if not sep or key not in _KEYS:
            raise SpecError(f"line {lineno}: expected one of {', '.join(k + ':' for k in _KEYS)}")
        if key in seen:
            raise SpecError(f"line {lineno}: duplicate {key!r}")
        seen[key] = value.strip()
    for key in ("vars", "residue", "gens"):
        if key not in seen:
            raise SpecError(f"missing {key!r} line")
    residue = seen["residue"].lower()
    if residue not in RESIDUE_TAGS:
        raise SpecError(f"residue must be 'countable' or 'uncountable', got {seen['residue']!r}")
    variables = tuple(seen["vars"].replace(",", " ").split())
    if len(set(variables)) != len(variables):
        raise SpecError("repeated variable name")
    gens = tuple(g.strip() for g in seen["gens"].split(";") if g.strip())
    if not gens:
        raise SpecError("gens must list at least one generator (write 0 for the zero ideal)")
    return RingSpecFile(variables, gens, residue, seen.get("label", ""))


def load_spec(path) -> RingSpecFile:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise SpecError(f"cannot read {path}: {e.strerror or e}")
    return parse_spec(text)


# --- formatting helpers -----------------------------------------------------------


def fmt_value(v) -> str:
    if isinstance(v, Undecided):
        return f"Undecided({v.reason})"
    if v is True:
        return "Yes"
    if v is False:
        return "No"
    return str(v)


def _primes(inv: InvariantReport):
    if not decided(inv.minimal_primes):
        return fmt_value(inv.minimal_primes)
    return [
        {"generators": [str(g) for g in p.generators], "quotient_dimension": p.quotient_dimension}
        for p in inv.minimal_primes
    ]


def _window(w):
    if not decided(w):
        return fmt_value(w)
    if w is None:
        return None
    return {"prime": str(w), "quotient_dimension": w.quotient_dimension}


def invariants_document(inv: InvariantReport) -> dict:
    t = inv.depth1_transcript
    cert = inv.depth2_certificate
    doc = {
        "dimension": inv.dimension,
        "embedding_dimension": inv.embedding_dimension,
        "minimal_primes": _primes(inv),
        "reduced": fmt_value(inv.reduced),
        "equidimensional": fmt_value(inv.equidimensional),
        "depth_at_least_one": fmt_value(inv.depth1),
        "socle_witness": None if t.witness is None else str(t.witness),
        "depth_at_least_two": fmt_value(inv.depth2),
        "depth_certificate": None,
        "noncat_window_1": _window(inv.noncat_window_1),
        "noncat_window_2": _window(inv.noncat_window_2),
        "integers_are_nonzerodivisors": fmt_value(inv.integers_are_nonzerodivisors),
    }
    if cert is not None:
        doc["depth_certificate"] = {
            "regular_sequence": [str(l) for l in cert.regular_sequence],
            "depth_lower_bound": cert.depth_lower_bound,
            "quotient_checks": len(cert.steps),
            "note": cert.note,
        }
    return doc


def classification_document(rep: ClassificationReport) -> dict:
    out = {}
    for q in QUESTIONS:
        a = rep.answers[q]
        out[q] = {
            "verdict": str(a.verdict),
            "branch": a.branch,
            "citation": a.citation,
            "conditions": [
                {"text": c.text, "verdict": fmt_value(c.value), "witness": c.witness}
                for c in a.conditions
            ],
        }
    return out


def report_document(spec: Optional[RingSpecFile], rep: ClassificationReport, seed: int, trials: int,
                    construction: Optional[dict] = None, timing: Optional[float] = None) -> dict:
    doc = {
        "tool": TOOL,
        "version": __version__,
        "input": spec.echo() if spec is not None else None,
        "seed": seed,
        "trials": trials,
        "invariants": invariants_document(rep.invariants),
        "classification": classification_document(rep),
        "annotations": list(rep.annotations),
        "construction": construction,
    }
    if timing is not None:
        doc["timing_seconds"] = round(timing, 3)
    return doc


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def verdict_table(rep: ClassificationReport) -> str:
    """The per-question verdicts, one per line; this is what the corpus stores."""
    lines = [f"{q}: {rep.answers[q].verdict}" for q in QUESTIONS]
    for q in ("noncat_domain", "noncat_ufd"):
        a = rep.answers[q]
        if str(a.verdict) == "Yes":
            lines.append(f"{q} witness: {a.conditions[2].witness}")
    return "\n".join(lines) + "\n"


def text_report(spec: Optional[RingSpecFile], rep: ClassificationReport) -> str:
    R = rep.ring
    inv = rep.invariants
    gens = ", ".join(str(g) for g in R.ideal.generators) or "0"
    head = f"T = Q[[{', '.join(R.variables)}]]/({gens}), residue field {R.residue}"
    lines: List[str] = []
    if R.label:
        lines.append(R.label)
    lines += [head, "", "invariants"]
    for k, v in invariants_document(inv).items():
        if isinstance(v, (dict, list)):
            v = json.dumps(v, ensure_ascii=False)
        lines.append(f"  {k}: {v}")
    lines += ["", "verdicts"]
    for q in QUESTIONS:
        a = rep.answers[q]
        lines.append(f"  {q}: {a.verdict}   [{a.branch}; {a.citation}]")
        for c in a.conditions:
            w = f"  ({c.witness})" if c.witness else ""
            lines.append(f"      {fmt_value(c.value):<5} {c.text}{w}")
    if rep.annotations:
        lines += ["", "notes"] + [f"  {n}" for n in rep.annotations]
    return "\n".join(lines) + "\n"


def construction_document(report) -> dict:
    cfg = report.config
    return {
        "config": {
            "n": cfg.n,
            "precision": cfg.precision,
            "steps": cfg.steps,
            "q": str(cfg.q),
            "base": str(cfg.base),
            "max_x_degree": cfg.max_x_degree,
            "max_height": cfg.max_height,
        },
        "trace": [
            {"i": e.i, "j": e.j, "case": e.case, "z": str(e.z), "extension": e.i > report.trace.requested}
            for e in report.trace.entries
        ],
        "u": str(report.u.series.representative),
        "eq2_samples": [
            {"index": s.index, "unit": s.unit, "step": s.step, "verified": s.verified}
            for s in report.stage.eq2_samples
        ],
        "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in report.checks],
        "passed": report.passed,
    }


def construction_report_document(report) -> dict:
    return {
        "tool": TOOL,
        "version": __version__,
        "input": None,
        "seed": report.config.seed,
        "trials": None,
        "invariants": None,
        "classification": None,
        "annotations": [],
        "construction": construction_document(report),
    }
