"""Decide which uncountable local rings with countable spectrum T can complete.

Each question is answered by evaluating the characterization conditions on
the exact invariants of T.  A Yes or No is only emitted when every condition
of the applicable dimension branch was decided; otherwise the answer is
Undecided with the first blocking reason.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Union

from .algebra import Polynomial
from .errors import NonHomogeneous, SpecError, UnitIdeal
from .groebner import IdealHandle, is_homogeneous
from .invariants import InvariantReport, PrimeWitness, Undecided, compute_invariants, decided

COUNTABLE = "countable"
UNCOUNTABLE = "uncountable"
RESIDUE_TAGS = (COUNTABLE, UNCOUNTABLE)

UFD_HYPOTHESIS_UNVERIFIABLE = "UfdHypothesisUnverifiable"

QUESTIONS = ("domain", "excellent", "ufd", "excellent_ufd", "noncat_domain", "noncat_ufd")

CITATIONS = {
    "domain": "completion of an uncountable local domain with countable spectrum",
    "excellent": "completion of an uncountable excellent local domain with countable spectrum",
    "ufd": "completion of an uncountable local UFD with countable spectrum",
    "excellent_ufd": "complete local UFD as completion of an uncountable excellent local UFD with countable spectrum",
    "noncat_domain": "completion of an uncountable noncatenary local domain with countable spectrum",
    "noncat_ufd": "completion of an uncountable noncatenary local UFD with countable spectrum",
}


@dataclass(frozen=True, eq=False)
class RingPresentation:
    """T = Q[[variables]]/ideal with a declared residue field size."""

    variables: tuple
    ideal: IdealHandle
    residue: str
    label: str = ""

    def __post_init__(self):
        if self.residue not in RESIDUE_TAGS:
            raise SpecError(f"residue tag must be one of {RESIDUE_TAGS}, got {self.residue!r}")
        if tuple(self.variables) != self.ideal.ring:
            raise SpecError("ideal ring does not match the variable list")
        if not is_homogeneous(self.ideal):
            bad = next(g for g in self.ideal.generators if not g.is_homogeneous())
            raise NonHomogeneous(
                f"generator {bad} is not homogeneous; only homogeneous ideals are accepted, "
                "so that graded invariants agree with those of the local ring"
            )
        if any(g.constant_term != 0 for g in self.ideal.generators) or self.ideal.is_unit():
            raise UnitIdeal("the ideal contains 1, so T is the zero ring")

    @classmethod
    def from_strings(cls, variables: Sequence[str], generators: Sequence[str], residue: str, label: str = ""):
        ring = tuple(variables)
        gens = [Polynomial.parse(g, ring) for g in generators]
        return cls(ring, IdealHandle(gens, ring=ring), residue, label)

    @property
    def countable(self) -> bool:
        return self.residue == COUNTABLE

    def retagged(self, residue: str) -> "RingPresentation":
        return RingPresentation(self.variables, self.ideal, residue, self.label)


@dataclass(frozen=True)
class Verdict:
    value: str  # "Yes" | "No" | "Undecided"
    reason: Optional[str] = None

    def __str__(self):
        return f"Undecided({self.reason})" if self.value == "Undecided" else self.value


YES = Verdict("Yes")
NO = Verdict("No")


@dataclass(frozen=True)
class Condition:
    text: str
    value: Union[bool, Undecided]
    witness: Optional[str] = None


@dataclass
class Answer:
    question: str
    verdict: Verdict
    branch: str
    conditions: List[Condition]
    citation: str


@dataclass
class ClassificationReport:
    ring: RingPresentation
    invariants: InvariantReport
    answers: Dict[str, Answer]
    annotations: List[str] = field(default_factory=list)

    def verdict(self, question: str) -> Verdict:
        return self.answers[question].verdict


def _combine(conditions: List[Condition]) -> Verdict:
    for c in conditions:
        if not decided(c.value):
            return Verdict("Undecided", c.value.reason)
    return YES if all(c.value for c in conditions) else NO


def _answer(question, branch, conditions) -> Answer:
    return Answer(question, _combine(conditions), branch, conditions, CITATIONS[question])


def _branch(dim: int) -> str:
    return "dim 0" if dim == 0 else ("dim 1" if dim == 1 else "dim >= 2")


def _window_text(p: PrimeWitness, threshold: int, dim: int) -> str:
    return f"{p}: {threshold} < {p.quotient_dimension} < {dim}"


# individual conditions


def _integers(inv):
    return Condition("no integer is a zero divisor", True, "Q is contained in T, so integers are units")


def _m_not_associated(inv):
    t = inv.depth1_transcript
    w = "(I : M) = I" if t.verdict else f"socle element {t.witness}"
    return Condition("M is not an associated prime of T", inv.depth1, w)


def _countable(R):
    return Condition("T/M is countable", R.countable, f"residue tag {R.residue}")


def _uncountable_field(R, inv):
    return [
        Condition("T is a field", inv.is_field, f"embedding dimension {inv.embedding_dimension}"),
        Condition("T is uncountable", not R.countable, f"residue tag {R.residue}"),
    ]


def _reduced(inv):
    return Condition("T is reduced", inv.reduced)


def _equidim(inv):
    dims = None
    if decided(inv.minimal_primes):
        dims = ", ".join(str(p.quotient_dimension) for p in inv.minimal_primes)
    return Condition("T is equidimensional", inv.equidimensional, dims and f"dim(T/P) over Min(T): {dims}")


def _depth2(inv):
    cert = inv.depth2_certificate
    w = None
    if cert is not None and cert.regular_sequence:
        w = "regular sequence " + ", ".join(str(l) for l in cert.regular_sequence)
    elif cert is not None and cert.note:
        w = cert.note
    return Condition("depth T >= 2", inv.depth2, w)


def _window(inv, threshold):
    win = inv.noncat_window_1 if threshold == 1 else inv.noncat_window_2
    text = f"some P in Min(T) has {threshold} < dim(T/P) < dim T"
    if not decided(win):
        return Condition(text, win)
    if win is None:
        return Condition(text, False)
    return Condition(text, True, _window_text(win, threshold, inv.dimension))


# questions


def classify_uncountable_domain_countable_spectrum(R: RingPresentation, inv: InvariantReport) -> Answer:
    dim = inv.dimension
    if dim == 0:
        conds = _uncountable_field(R, inv)
    elif dim == 1:
        conds = [_integers(inv), _m_not_associated(inv)]
    else:
        conds = [_integers(inv), _m_not_associated(inv), _countable(R)]
    return _answer("domain", _branch(dim), conds)


def classify_excellent(R: RingPresentation, inv: InvariantReport) -> Answer:
    dim = inv.dimension
    if dim == 0:
        conds = _uncountable_field(R, inv)
    elif dim == 1:
        conds = [_reduced(inv), _equidim(inv)]
    else:
        conds = [_reduced(inv), _equidim(inv), _countable(R)]
    return _answer("excellent", _branch(dim), conds)


def classify_ufd(R: RingPresentation, inv: InvariantReport) -> Answer:
    dim = inv.dimension
    if dim == 0:
        conds = _uncountable_field(R, inv)
    elif dim == 1:
        conds = [
            Condition("T is a DVR: embedding dimension 1", inv.embedding_dimension == 1,
                      f"embedding dimension {inv.embedding_dimension}"),
            Condition("T is a DVR: reduced", inv.reduced),
        ]
    else:
        conds = [_integers(inv), _depth2(inv), _countable(R)]
    return _answer("ufd", _branch(dim), conds)


def classify_excellent_ufd(R: RingPresentation, inv: InvariantReport) -> Answer:
    dim = inv.dimension
    if inv.is_regular:
        hyp = Condition("T is a UFD (regular local ring)", True,
                        f"dim = embedding dimension = {dim}")
    else:
        hyp = Condition("T is a UFD (regular local ring)", Undecided(UFD_HYPOTHESIS_UNVERIFIABLE),
                        f"dim {dim} < embedding dimension {inv.embedding_dimension}")
    if dim == 0:
        conds = [hyp, Condition("T is uncountable", not R.countable, f"residue tag {R.residue}")]
    elif dim == 1:
        conds = [hyp]
    else:
        conds = [hyp, _countable(R)]
    return _answer("excellent_ufd", _branch(dim), conds)


def classify_noncatenary_domain(R: RingPresentation, inv: InvariantReport) -> Answer:
    conds = [_integers(inv), _m_not_associated(inv), _window(inv, 1), _countable(R)]
    return _answer("noncat_domain", "any dim", conds)


def classify_noncatenary_ufd(R: RingPresentation, inv: InvariantReport) -> Answer:
    conds = [_integers(inv), _depth2(inv), _window(inv, 2), _countable(R)]
    return _answer("noncat_ufd", "any dim", conds)


_CLASSIFIERS = {
    "domain": classify_uncountable_domain_countable_spectrum,
    "excellent": classify_excellent,
    "ufd": classify_ufd,
    "excellent_ufd": classify_excellent_ufd,
    "noncat_domain": classify_noncatenary_domain,
    "noncat_ufd": classify_noncatenary_ufd,
}


def classify_all(R: RingPresentation, trials: int = 20, seed: int = 0,
                 invariants: Optional[InvariantReport] = None) -> ClassificationReport:
    inv = invariants if invariants is not None else compute_invariants(R.ideal, trials, seed)
    answers = {q: _CLASSIFIERS[q](R, inv) for q in QUESTIONS}
    notes = []
    if inv.is_domain is True:
        dom = answers["domain"].verdict
        notes.append(f"T is itself a domain (ideal verified prime); domain answer {dom} "
                     "follows from the dimension and residue field alone")
    return ClassificationReport(R, inv, answers, notes)
