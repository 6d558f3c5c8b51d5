"""Desk-scale run of the z-selection algorithm that adjoins u to a CS-subring.

T = Q[[x1..xn]] and the stage-0 ring S is Q[x1..xn] localized at the origin,
represented exactly by LocalElement.  The algorithm picks z_1, z_2, ... in
S∩M from the values G_j(M_i) of an enumeration G_1, G_2, ... of the nonzero
polynomials of S[X], then u = 1 + sum_k A_k z_1...z_k with A_k = g^q(k).

Everything about the z's and the partial sums M_k is exact.  u and the
quantities built from it live in Q[[x]]/M^K.  Only one adjunction (stage 0 to
stage 1) is carried out; enumerating S[u][X] would need exact zero tests on
elements of T, which truncated arithmetic cannot provide.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from math import comb
from typing import Iterator, List, Optional, Sequence, Tuple

from .algebra import (
    LocalElement,
    Polynomial,
    TruncatedSeries,
    XPolynomial,
    is_unit,
    substitute,
)
from .errors import (
    BoundExhausted,
    MissingWitness,
    PreconditionViolated,
    PrecisionTooLow,
    SpecError,
    WitnessVerificationFailed,
)

UNIT, ZERO, FACTOR = "unit", "zero", "factor"

# A run stops with BoundExhausted rather than looping forever if an index keeps
# hitting the zero case; a nonzero G has finitely many roots so this is a bug guard.
MAX_RUN_STEPS = 200


# --- the exponent function q ------------------------------------------------------


_AFFINE = re.compile(r"^\s*(?:(\d+)\s*\*?\s*)?i\s*(?:([+-])\s*(\d+))?\s*$")


@dataclass(frozen=True)
class ExponentMap:
    """A strictly increasing q: Z+ -> Z+.

    Either affine (a*i + b) or an explicit prefix list; a list is extended past
    its end by steps of +1 so that it still defines a function on all of Z+.
    """

    slope: int = 1
    offset: int = 0
    prefix: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.prefix:
            vals = self.prefix
            if vals[0] < 1 or any(b <= a for a, b in zip(vals, vals[1:])):
                raise SpecError(f"q values {list(vals)} are not positive and strictly increasing")
        elif self.slope < 1 or self.slope + self.offset < 1:
            raise SpecError(f"q(i) = {self} is not a strictly increasing map to Z+")

    @classmethod
    def parse(cls, text: str) -> "ExponentMap":
        text = text.strip()
        m = _AFFINE.match(text)
        if m:
            a = int(m.group(1)) if m.group(1) else 1
            b = int(m.group(3)) if m.group(3) else 0
            return cls(a, -b if m.group(2) == "-" else b)
        try:
            vals = tuple(int(t) for t in re.split(r"[,\s]+", text.strip("[]() ")) if t)
        except ValueError:
            raise SpecError(f"cannot parse q spec {text!r}; use a list like 1,2,4 or a form like 2*i+1")
        if not vals:
            raise SpecError("empty q spec")
        return cls(prefix=vals)

    def __call__(self, i: int) -> int:
        if i < 1:
            raise ValueError("q is defined on positive integers")
        if self.prefix:
            if i <= len(self.prefix):
                return self.prefix[i - 1]
            return self.prefix[-1] + (i - len(self.prefix))
        return self.slope * i + self.offset

    def same_as(self, other: "ExponentMap") -> bool:
        """Equality as functions on Z+.

        Past the longer prefix both maps are affine, so agreeing on two more
        indices there forces agreement everywhere.
        """
        horizon = max(len(self.prefix), len(other.prefix)) + 2
        return all(self(i) == other(i) for i in range(1, horizon + 1))

    def __str__(self):
        if self.prefix:
            return ",".join(str(v) for v in self.prefix)
        a = "" if self.slope == 1 else f"{self.slope}*"
        if self.offset == 0:
            return f"{a}i"
        sign = "+" if self.offset > 0 else "-"
        return f"{a}i{sign}{abs(self.offset)}"


IDENTITY = ExponentMap()


# --- configuration ----------------------------------------------------------------


def variables_for(n: int) -> Tuple[str, ...]:
    return tuple(f"x{k}" for k in range(1, n + 1))


@dataclass(frozen=True, eq=False)
class ConstructionConfig:
    n: int = 2
    precision: int = 5
    steps: int = 4
    q: ExponentMap = IDENTITY
    base: Optional[Polynomial] = None  # defaults to x1
    max_x_degree: int = 2
    max_height: int = 4
    seed: int = 0
    sample_size: int = 10

    def __post_init__(self):
        if self.n < 1:
            raise SpecError("need at least one variable")
        if self.precision < 2:
            raise SpecError("precision must be >= 2")
        if self.steps < 1:
            raise SpecError("steps must be >= 1")
        if self.max_x_degree < 0 or self.max_height < 1:
            raise SpecError("enumeration bounds must be positive")
        if self.max_height > len(coefficient_atoms(self.ring)):
            raise SpecError(f"max_height {self.max_height} exceeds the available coefficient atoms")
        if self.base is None:
            object.__setattr__(self, "base", Polynomial.variable(self.ring, 0))
        g = self.base
        if g.ring != self.ring:
            raise SpecError(f"base element lives in {g.ring}, expected {self.ring}")
        if g.is_zero() or g.constant_term != 0:
            raise SpecError("base element must be nonzero with zero constant term")

    @property
    def ring(self) -> Tuple[str, ...]:
        return variables_for(self.n)

    def with_(self, **changes) -> "ConstructionConfig":
        fields = dict(n=self.n, precision=self.precision, steps=self.steps, q=self.q,
                      base=self.base, max_x_degree=self.max_x_degree, max_height=self.max_height,
                      seed=self.seed, sample_size=self.sample_size)
        fields.update(changes)
        if "n" in changes and "base" not in changes:
            fields["base"] = None
        return ConstructionConfig(**fields)


# --- enumeration of S[X] ----------------------------------------------------------


def coefficient_atoms(ring: Sequence[str]) -> List[LocalElement]:
    """Distinct nonzero elements of S used as coefficient building blocks.

    Index h in a candidate tuple refers to atoms[h - 1]; index 0 means a zero
    coefficient.
    """
    ring = tuple(ring)
    var = [Polynomial.variable(ring, k) for k in range(len(ring))]
    one = Polynomial.one(ring)
    atoms = [one, var[0], -one] + var[1:]
    atoms += [
        LocalElement(one, one + var[0]),
        one * 2,
        var[0] * var[0],
        LocalElement(one, one - var[0]),
    ]
    return [LocalElement.of(a, ring) for a in atoms]


class CandidateEnumeration:
    """Dovetail order on nonzero polynomials a_0 + a_1 X + ... + a_D X^D.

    Each coefficient is an atom index in 0..max_height.  A tuple sits in layer
    max(D + 1, largest index), and the order is (layer, X-degree, sum of
    indices, the index tuple itself).  The first element is the constant 1.
    """

    def __init__(self, ring: Sequence[str], max_x_degree: int = 2, max_height: int = 4):
        self.ring = tuple(ring)
        atoms = coefficient_atoms(self.ring)
        if max_height > len(atoms):
            raise SpecError(f"max_height {max_height} exceeds the {len(atoms)} available atoms")
        self.atoms = atoms[:max_height]
        self.max_x_degree = max_x_degree
        self.max_height = max_height
        self._tuples = sorted(self._universe(), key=self._key)

    def _universe(self) -> Iterator[Tuple[int, ...]]:
        H = self.max_height

        def rec(prefix, remaining):
            if remaining == 0:
                yield tuple(prefix)
                return
            for h in range(H + 1):
                yield from rec(prefix + [h], remaining - 1)

        for D in range(self.max_x_degree + 1):
            for lower in rec([], D):
                for top in range(1, H + 1):
                    yield lower + (top,)

    @staticmethod
    def _key(t):
        D = len(t) - 1
        return (max(D + 1, max(t)), D, sum(t), t)

    def __len__(self):
        return len(self._tuples)

    def index_tuple(self, j: int) -> Tuple[int, ...]:
        if j < 1:
            raise ValueError("candidate indices start at 1")
        if j > len(self._tuples):
            raise BoundExhausted(
                f"candidate {j} is past the enumeration universe of {len(self._tuples)} polynomials "
                f"(max X-degree {self.max_x_degree}, max height {self.max_height})"
            )
        return self._tuples[j - 1]

    def __getitem__(self, j: int) -> XPolynomial:
        t = self.index_tuple(j)
        zero = LocalElement.of(0, self.ring)
        return XPolynomial(self.ring, [self.atoms[h - 1] if h else zero for h in t])


# --- subring stages ---------------------------------------------------------------


@dataclass
class StageWitness:
    element: TruncatedSeries
    c: Polynomial
    d: TruncatedSeries
    source: str = ""


class SubringStage:
    """A CS-subring at truncated precision, described by its factorization witnesses.

    Stage 0 is S: every nonunit p/s has the witness (p, 1/s), computed on the
    fly.  Later stages keep an explicit table of witnesses for the nonunits
    that were examined.
    """

    def __init__(self, index: int, ring, precision: int, adjoined=(), enumeration=None):
        self.index = index
        self.ring = tuple(ring)
        self.precision = precision
        self.adjoined: Tuple[TruncatedSeries, ...] = tuple(adjoined)
        self.enumeration = enumeration
        self.witnesses: List[StageWitness] = []
        self.eq2_samples: List["Eq2Sample"] = []

    @classmethod
    def base(cls, cfg: ConstructionConfig) -> "SubringStage":
        enum = CandidateEnumeration(cfg.ring, cfg.max_x_degree, cfg.max_height)
        return cls(0, cfg.ring, cfg.precision, (), enum)

    def witness(self, r) -> Tuple[Polynomial, object]:
        """Return (c, d) with r = c*d, c in S∩M and d a unit."""
        if self.index == 0:
            r = LocalElement.of(r, self.ring)
            if is_unit(r):
                raise MissingWitness(f"{r} is a unit; only nonunits carry an S∩M factor")
            return r.numerator, LocalElement(Polynomial.one(self.ring), r.denominator)
        if isinstance(r, TruncatedSeries):
            for w in self.witnesses:
                if w.element == r:
                    return w.c, w.d
        raise MissingWitness(f"stage {self.index} has no factorization witness for {r}")

    def record(self, element: TruncatedSeries, c: Polynomial, d: TruncatedSeries, source: str = ""):
        self.witnesses.append(StageWitness(element, c, d, source))


def enumerate_candidate(stage: SubringStage, j: int) -> XPolynomial:
    if stage.enumeration is None:
        raise PreconditionViolated(
            f"stage {stage.index} cannot enumerate its polynomial ring; only one adjunction is supported"
        )
    return stage.enumeration[j]


# --- z selection ------------------------------------------------------------------


@dataclass(frozen=True)
class Selection:
    case: str
    z: Polynomial
    value: LocalElement  # G_j(M_i)
    d: Optional[LocalElement] = None  # unit with value = z*d in the factor case


def z_select(G: XPolynomial, M: Polynomial, stage: SubringStage, base: Polynomial) -> Selection:
    r = G.evaluate(M)
    if is_unit(r):
        return Selection(UNIT, base, r)
    if r.is_zero():
        return Selection(ZERO, base, r)
    c, d = stage.witness(r)
    if c.is_zero() or c.constant_term != 0:
        raise WitnessVerificationFailed(f"witness factor {c} is not a nonzero element of S∩M")
    return Selection(FACTOR, c, r, d)


# --- the run ----------------------------------------------------------------------


@dataclass(frozen=True)
class TraceEntry:
    i: int
    j: int
    case: str
    z: Polynomial
    value: LocalElement
    M: Polynomial
    d: Optional[LocalElement] = None


@dataclass
class ZTrace:
    """Executed steps; the first ``requested`` are the ones asked for.

    The run may go further so that u is complete at the working precision and
    every sampled candidate has been consumed.
    """

    entries: List[TraceEntry]
    requested: int

    def head(self) -> List[TraceEntry]:
        return self.entries[: self.requested]

    def consumption(self, j: int) -> Optional[TraceEntry]:
        """The step at which candidate j was used up (unit or factor case)."""
        for e in self.entries:
            if e.j == j and e.case != ZERO:
                return e
        return None


class _ZRun:
    def __init__(self, cfg: ConstructionConfig, stage: SubringStage):
        self.cfg = cfg
        self.stage = stage
        self.ring = cfg.ring
        self.g = cfg.base
        self.g_order = cfg.base.order()
        one = Polynomial.one(self.ring)
        self.z: List[Polynomial] = []
        self.A: List[Polynomial] = []
        self.M: List[Polynomial] = [one]  # M_1 = 1
        self.prod = one  # z_1 ... z_i
        self.summand_orders: List[int] = []
        self.entries: List[TraceEntry] = []
        self.j = 1

    def step(self):
        i = len(self.z) + 1
        if i > MAX_RUN_STEPS:
            raise BoundExhausted(f"z-run exceeded {MAX_RUN_STEPS} steps")
        G = enumerate_candidate(self.stage, self.j)
        Mi = self.M[-1]
        sel = z_select(G, Mi, self.stage, self.g)
        self.entries.append(TraceEntry(i, self.j, sel.case, sel.z, sel.value, Mi, sel.d))
        if sel.case != ZERO:
            self.j += 1
        A = self.g ** self.cfg.q(i)
        self.z.append(sel.z)
        self.A.append(A)
        self.prod = self.prod * sel.z
        term = A * self.prod
        self.M.append(Mi + term)
        self.summand_orders.append(term.order())

    def ensure_steps(self, k: int):
        while len(self.z) < k:
            self.step()

    def ensure_order(self, K: int):
        """Run until every later summand of u lies in M^K."""
        while not self.summand_orders or self.summand_orders[-1] < K:
            self.step()

    def ensure_consumed(self, j: int):
        while self.j <= j:
            self.step()


@dataclass
class UElement:
    """u = 1 + sum A_k z_1...z_k at precision K, with its generating data.

    ``M[k - 1]`` is M_k = 1 + A_1 z_1 + ... + A_{k-1} z_1...z_{k-1}.  Every
    summand past the stored data has order >= precision.
    """

    series: TruncatedSeries
    q: ExponentMap
    base: Polynomial
    z: Tuple[Polynomial, ...]
    A: Tuple[Polynomial, ...]
    M: Tuple[Polynomial, ...]

    @property
    def precision(self) -> int:
        return self.series.precision

    def M_k(self, k: int) -> Polynomial:
        return self.M[k - 1]

    def K_k(self, k: int, drop: Optional[int] = None) -> TruncatedSeries:
        """K_k = sum_{m >= k} A_m prod_{l <= m, l != k} z_l at precision K.

        ``drop`` omits the summand with that m; it exists for negative controls.
        """
        K = self.precision
        total = Polynomial.zero(self.base.ring)
        prod = Polynomial.one(self.base.ring)
        for l in range(1, k):
            prod = (prod * self.z[l - 1]).truncate(K)
        for m in range(k, len(self.z) + 1):
            if m > k:
                prod = (prod * self.z[m - 1]).truncate(K)
            if m != drop:
                total = total + (self.A[m - 1] * prod).truncate(K)
        return TruncatedSeries(total, K)


def _assemble_u(run: _ZRun, K: int, q: ExponentMap) -> UElement:
    ring = run.ring
    total = Polynomial.one(ring)
    prod = Polynomial.one(ring)
    for A, z in zip(run.A, run.z):
        prod = (prod * z).truncate(K)
        total = total + (A * prod).truncate(K)
    return UElement(TruncatedSeries(total, K), q, run.g, tuple(run.z), tuple(run.A), tuple(run.M))


def eq2_witness(G: XPolynomial, u: UElement, k: int, d_prime: LocalElement,
                drop: Optional[int] = None) -> TruncatedSeries:
    """d' + sum_m r_m sum_{j=1}^m C(m, j) z_k^(j-1) K_k^j M_k^(m-j) at precision K."""
    K = u.precision
    zk = TruncatedSeries(u.z[k - 1], K)
    Kk = u.K_k(k, drop)
    Mk = TruncatedSeries(u.M_k(k), K)
    total = d_prime.to_series(K)
    for m, r in enumerate(G.coefficients):
        if m == 0 or r.is_zero():
            continue
        inner = TruncatedSeries(Polynomial.zero(u.base.ring), K)
        for j in range(1, m + 1):
            inner = inner + (zk ** (j - 1)) * (Kk ** j) * (Mk ** (m - j)) * comb(m, j)
        total = total + r.to_series(K) * inner
    return total


def eq1_linear(a, b, u: UElement, k: int) -> bool:
    """G = aX + b satisfies G(u) = G(M_k) + z_k a K_k at precision K."""
    K = u.precision
    G = XPolynomial(u.base.ring, [b, a])
    lhs = substitute(G, u.series)
    rhs = G.evaluate(u.M_k(k)).to_series(K) + TruncatedSeries(u.z[k - 1], K) * LocalElement.of(a, u.base.ring).to_series(K) * u.K_k(k)
    return lhs == rhs


def verify_eq2(G: XPolynomial, trace: ZTrace, u: UElement, k: int, drop: Optional[int] = None) -> bool:
    """Check G(u) = z_k * d at precision K, d built from the trace at step k."""
    if k < 1 or k > len(trace.entries):
        return False
    entry = trace.entries[k - 1]
    if entry.case != FACTOR or entry.d is None or entry.value != G.evaluate(u.M_k(k)):
        return False
    lhs = substitute(G, u.series)
    d = eq2_witness(G, u, k, entry.d, drop)
    return is_unit(d) and lhs == TruncatedSeries(u.z[k - 1], u.precision) * d


@dataclass
class Eq2Sample:
    index: int
    unit: bool
    step: Optional[int] = None  # k at which the candidate was consumed
    verified: Optional[bool] = None


def _sample_indices(cfg: ConstructionConfig, trace_js: Sequence[int], universe: int) -> List[int]:
    return sorted(set(range(1, min(cfg.sample_size, universe) + 1)) | set(trace_js))


def run_construction(cfg: ConstructionConfig) -> Tuple[ZTrace, UElement, SubringStage]:
    stage0 = SubringStage.base(cfg)
    run = _ZRun(cfg, stage0)
    K = cfg.precision
    run.ensure_steps(cfg.steps)
    run.ensure_order(K)
    sampled = _sample_indices(cfg, [e.j for e in run.entries[: cfg.steps]], len(stage0.enumeration))
    one = Polynomial.one(cfg.ring)
    for i in sampled:
        if is_unit(enumerate_candidate(stage0, i).evaluate(one)):
            continue
        run.ensure_consumed(i)
    # K_k for the consumption steps needs the tail up to order K + ord z_k.
    extra = max((e.z.order() for e in run.entries if e.case == FACTOR), default=0)
    run.ensure_order(K + extra)
    trace = ZTrace(run.entries, cfg.steps)
    u = _assemble_u(run, K, cfg.q)

    stage1 = SubringStage(1, cfg.ring, K, (u.series,))
    samples = []
    for i in sampled:
        G = enumerate_candidate(stage0, i)
        if is_unit(G.evaluate(one)):
            samples.append(Eq2Sample(i, True))
            continue
        entry = trace.consumption(i)
        ok = verify_eq2(G, trace, u, entry.i)
        samples.append(Eq2Sample(i, False, entry.i, ok))
        if not ok:
            raise WitnessVerificationFailed(f"unit factorization witness for G_{i} at k={entry.i} does not check")
        d = eq2_witness(G, u, entry.i, entry.d)
        stage1.record(substitute(G, u.series), entry.z, d, f"G_{i}(u), k={entry.i}")
    stage1.eq2_samples = samples
    return trace, u, stage1


# --- certificates -----------------------------------------------------------------


def check_witness(r, c: Polynomial, d, precision: int) -> bool:
    """r = c*d at the given precision with c in S∩M and d a unit."""
    ring = c.ring
    if c.constant_term != 0:
        return False
    r_s = r if isinstance(r, TruncatedSeries) else LocalElement.of(r, ring).to_series(precision)
    d_s = d if isinstance(d, TruncatedSeries) else LocalElement.of(d, ring).to_series(precision)
    if not is_unit(d_s):
        return False
    return r_s == TruncatedSeries(c, precision) * d_s


def check_principal_extension(stage: SubringStage, r) -> bool:
    """Truncated certificate that rB = cB is extended from S."""
    c, d = stage.witness(r)
    return check_witness(r, c, d, stage.precision)


def leading_disagreement_order(q: ExponentMap, p: ExponentMap, cfg: ConstructionConfig) -> Optional[int]:
    """Order of the first term where the two u's differ, or None if q = p.

    The z's up to the first index i0 with q(i0) != p(i0) agree, so the
    difference starts with (g^q(i0) - g^p(i0)) z_1...z_i0.
    """
    if q.same_as(p):
        return None
    i0 = next(i for i in range(1, 10 ** 6) if q(i) != p(i))
    run = _ZRun(cfg.with_(q=q), SubringStage.base(cfg))
    run.ensure_steps(i0)
    return min(q(i0), p(i0)) * run.g_order + sum(z.order() for z in run.z[:i0])


def verify_u_injectivity(q: ExponentMap, p: ExponentMap, cfg: ConstructionConfig) -> bool:
    lead = leading_disagreement_order(q, p, cfg)
    if lead is None:
        return False
    if cfg.precision <= lead:
        raise PrecisionTooLow(
            f"q and p first differ in a term of order {lead}; need precision > {lead}, got {cfg.precision}"
        )
    u1 = run_construction(cfg.with_(q=q))[1]
    u2 = run_construction(cfg.with_(q=p))[1]
    return u1.series != u2.series


def random_exponent_pairs(count: int, max_value: int, seed: int, max_tries: int = 10_000):
    """Distinct pairs of strictly increasing prefix lists with values <= max_value."""
    rng = random.Random(seed)
    pool = [v for v in range(1, max_value + 1)]
    pairs = []
    for _ in range(max_tries):
        if len(pairs) == count:
            break
        a = ExponentMap(prefix=tuple(sorted(rng.sample(pool, rng.randint(1, len(pool))))))
        b = ExponentMap(prefix=tuple(sorted(rng.sample(pool, rng.randint(1, len(pool))))))
        if not a.same_as(b):
            pairs.append((a, b))
    if len(pairs) < count:
        raise BoundExhausted(f"found only {len(pairs)} distinct pairs")
    return pairs


# --- summary and serialization ----------------------------------------------------


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class ConstructionReport:
    config: ConstructionConfig
    trace: ZTrace
    u: UElement
    stage: SubringStage
    checks: List[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def construct_and_check(cfg: ConstructionConfig, compare_q: Optional[ExponentMap] = None) -> ConstructionReport:
    trace, u, stage = run_construction(cfg)
    head = trace.head()
    checks = [
        Check("z_nonzero", all(not e.z.is_zero() for e in head), f"{len(head)} entries"),
        Check("z_in_maximal_ideal", all(e.z.constant_term == 0 for e in head)),
    ]
    Ms = [e.M for e in head]
    checks.append(Check("M_distinct", len(set(Ms)) == len(Ms), f"M_1..M_{len(Ms)}"))
    nonunit = [s for s in stage.eq2_samples if not s.unit]
    checks.append(Check(
        "eq2", all(s.verified for s in nonunit),
        f"{sum(bool(s.verified) for s in nonunit)}/{len(nonunit)} nonunit samples, "
        f"{len(stage.eq2_samples) - len(nonunit)} unit samples",
    ))
    checks.append(Check(
        "witnesses", all(check_principal_extension(stage, w.element) for w in stage.witnesses),
        f"{len(stage.witnesses)} stage-1 witnesses",
    ))
    if compare_q is not None:
        ok = verify_u_injectivity(cfg.q, compare_q, cfg)
        checks.append(Check("injectivity", ok, f"q={cfg.q} vs p={compare_q}"))
    return ConstructionReport(cfg, trace, u, stage, checks)


def serialize_trace(report: ConstructionReport) -> str:
    cfg = report.config
    lines = [
        f"# z-trace n={cfg.n} K={cfg.precision} N={cfg.steps} q={cfg.q} g={cfg.base} seed={cfg.seed}",
    ]
    for e in report.trace.entries:
        tag = "" if e.i <= report.trace.requested else " extension"
        lines.append(f"i={e.i} j={e.j} case={e.case} z={e.z}{tag}")
    lines.append(f"u = {report.u.series}")
    for c in report.checks:
        status = "pass" if c.passed else "FAIL"
        lines.append(f"check {c.name}: {status}" + (f" ({c.detail})" if c.detail else ""))
    return "\n".join(lines) + "\n"
