"""Certificate pipelines: decomposition and admissibility witnesses.

``levin_decomposition`` turns a frame refutation of a formula into a list of
classically refutable negation bodies: the refuting valuation induces a
substitution into the alpha fragment, the image has finite rank, and each
normal-form body gets a classical countermodel.  Every step is re-checked.

``admissibility_witness`` certifies that a rule premise does not force its
conclusion: a world forcing the premise but not the conclusion generates a
subframe on which the induced substitution keeps the premise valid while the
universal valuation refutes the conclusion's image at the bottom.

``alpha_pmorphism`` reads a surjection-on-points off a valuation (each
maximal world forces exactly one family member) and extends it by meets;
``check_pmorphism`` and ``transfer_check`` verify the order-theoretic laws
and the forcing transfer along the map.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Mapping, Sequence

from .alpha import (
    UniversalValuation,
    alpha_I,
    alpha_formulas,
    u_valuation,
    universal_subst,
)
from .errors import SelfCheckError
from .formula import (
    BOT,
    TOP,
    Atom,
    Formula,
    Neg,
    Substitution,
    apply_subst,
    atoms,
    render,
)
from .ipc import classical_countermodel, _truth
from .kpform import RANK_CAP, kp_normalize
from .medvedev import (
    DEFAULT_VALUATION_BUDGET,
    MedvedevFrame,
    RefutationWitness,
    Valuation,
    exhaustive_cost,
    frame,
    gens,
    generated_subframe,
    iter_valuations,
    refute,
    run_program,
    compile_formula,
    sample_valuation,
    truth_set,
    valid_on,
)
from .randgen import random_formula

# --- decomposition ------------------------------------------------------------


@dataclass(frozen=True)
class LevinDecomposition:
    """A refuted formula, its alpha-fragment image, and per-body countermodels."""

    source: Formula
    n: int
    valuation: Valuation
    sigma: Substitution
    image: Formula
    bodies: tuple[Formula, ...]
    countermodels: tuple[Mapping[str, bool], ...]

    def __post_init__(self):
        if len(self.countermodels) != len(self.bodies):
            raise SelfCheckError("one countermodel per body required")
        for body, cm in zip(self.bodies, self.countermodels):
            if not _truth(body, dict(cm)):
                raise SelfCheckError(
                    f"assignment {cm} does not satisfy body {render(body)}"
                )

    def to_obj(self) -> dict:
        return {
            "formula": render(self.source),
            "n": self.n,
            "valuation": self.valuation.to_obj(),
            "sigma": {a: render(f) for a, f in sorted(self.sigma.mapping.items())},
            "image": render(self.image),
            "bodies": [render(b) for b in self.bodies],
            "countermodels": [dict(sorted(cm.items())) for cm in self.countermodels],
        }


def levin_decomposition(phi: Formula, max_n: int = 4, *, strategy: str = "auto",
                        count: int = 1000, seed: int = 0,
                        budget: int = DEFAULT_VALUATION_BUDGET,
                        cap: int = RANK_CAP) -> LevinDecomposition | None:
    """Refute ``phi`` on a small frame and decompose the image of the witness.

    Returns None when no refutation is found up to ``max_n`` (inconclusive
    unless every frame was swept exhaustively and ``phi`` was valid on all).
    """
    wit = refute(phi, max_n, strategy, count=count, seed=seed, budget=budget)
    if wit is None:
        return None
    sigma = universal_subst(wit.n, wit.valuation)
    image = apply_subst(sigma, phi)
    nd = kp_normalize(image, cap=cap)
    countermodels = []
    for body in nd.bodies:
        cm = classical_countermodel(Neg(body))
        if cm is None:
            raise SelfCheckError(
                f"body {render(body)} is classically unsatisfiable; "
                "the refutation pipeline is broken"
            )
        countermodels.append(cm)
    return LevinDecomposition(
        source=phi,
        n=wit.n,
        valuation=wit.valuation,
        sigma=sigma,
        image=image,
        bodies=nd.bodies,
        countermodels=tuple(countermodels),
    )


# --- admissibility ------------------------------------------------------------


@dataclass(frozen=True)
class EvidenceEntry:
    n: int
    mode: str  # "exhaustive" | "sample"
    valid: bool
    checked: int


@dataclass(frozen=True)
class AdmissibilityWitness:
    """A substitution keeping the premise valid while refuting the conclusion.

    ``valuation`` lives on the generated subframe (size ``k``) of the world
    that separated premise from conclusion; ``refutation`` pins the failure
    of the conclusion's image at that frame's bottom under the universal
    valuation, and ``validity_evidence`` records frame checks of the
    premise's image (its validity on every frame is guaranteed; the checks
    cover frames up to the configured bound).
    """

    premise: Formula
    conclusion: Formula
    k: int
    valuation: Valuation
    sigma: Substitution
    refutation: RefutationWitness
    validity_evidence: tuple[EvidenceEntry, ...]

    def to_obj(self) -> dict:
        return {
            "premise": render(self.premise),
            "conclusion": render(self.conclusion),
            "k": self.k,
            "valuation": self.valuation.to_obj(),
            "sigma": {a: render(f) for a, f in sorted(self.sigma.mapping.items())},
            "refutation": self.refutation.to_obj(),
            "validity_evidence": [
                {"n": e.n, "mode": e.mode, "valid": e.valid, "checked": e.checked}
                for e in self.validity_evidence
            ],
        }


def _separating_world(fr: MedvedevFrame, prog_premise: list[tuple],
                      prog_conclusion: list[tuple], val: Valuation) -> int | None:
    """Least world (max generators, then smallest mask) forcing the premise
    but not the conclusion, or None."""
    q = (run_program(fr, prog_premise, val.map)
         & (fr.all_worlds ^ run_program(fr, prog_conclusion, val.map)))
    if not q:
        return None
    best = None
    todo = q
    while todo:
        lsb = todo & -todo
        todo ^= lsb
        w = lsb.bit_length()
        if best is None or (-w.bit_count(), w) < (-best.bit_count(), best):
            best = w
    return best


def admissibility_witness(premise: Formula, conclusion: Formula, max_n: int = 3, *,
                          validity_bound: int = 4, strategy: str = "auto",
                          count: int = 1000, seed: int = 0,
                          budget: int = DEFAULT_VALUATION_BUDGET
                          ) -> AdmissibilityWitness | None:
    """Search frames 1..max_n for a valuation and world separating the rule.

    The scan order is ascending frame size, valuation enumeration order,
    then the least separating world.  Returns None when no separation shows
    up within the bound (which does not prove the conclusion follows).
    """
    if strategy not in ("exhaustive", "sample", "auto"):
        raise ValueError(f"unknown strategy {strategy!r}")
    names = list(dict.fromkeys(atoms(premise) + atoms(conclusion)))
    prog_p = compile_formula(premise)
    prog_c = compile_formula(conclusion)

    found: tuple[int, Valuation, int] | None = None
    for n in range(1, max_n + 1):
        fr = frame(n)
        use_exhaustive = strategy == "exhaustive"
        if strategy == "auto":
            cost = exhaustive_cost(fr, len(names))
            use_exhaustive = cost is not None and 2 * cost <= budget
        if use_exhaustive:
            source = iter_valuations(fr, names)
        else:
            rng = random.Random(seed + n)
            source = (sample_valuation(fr, names, rng) for _ in range(count))
        for val in source:
            w = _separating_world(fr, prog_p, prog_c, val)
            if w is not None:
                found = (n, val, w)
                break
        if found:
            break
    if found is None:
        return None

    n, val, w = found
    sub = generated_subframe(frame(n), w)
    restricted = sub.restrict_valuation(val)
    k = sub.frame.n

    # premise forced at w persists to the whole cone; conclusion fails at its root
    if truth_set(sub.frame, restricted, premise) != sub.frame.all_worlds:
        raise SelfCheckError("premise is not globally forced on the generated subframe")
    if truth_set(sub.frame, restricted, conclusion) >> (sub.frame.bottom() - 1) & 1:
        raise SelfCheckError("conclusion did not fail at the subframe bottom")

    sigma = universal_subst(k, restricted)
    u = u_valuation(k)
    refutation = RefutationWitness(
        k, u.valuation, sub.frame.bottom(), apply_subst(sigma, conclusion)
    )

    image_premise = apply_subst(sigma, premise)
    evidence = []
    for n2 in range(1, validity_bound + 1):
        fr2 = frame(n2)
        cost = exhaustive_cost(fr2, len(atoms(image_premise)))
        if cost is not None and cost <= budget:
            res = valid_on(fr2, image_premise, "exhaustive", budget=budget)
        else:
            res = valid_on(fr2, image_premise, "sample", count=count, seed=seed + n2)
        if not res.valid:
            raise SelfCheckError(
                f"premise image unexpectedly refuted on M_{n2}; "
                "the substitution construction is broken"
            )
        evidence.append(EvidenceEntry(n2, "exhaustive" if res.exhaustive else "sample",
                                      res.valid, res.checked))

    return AdmissibilityWitness(
        premise=premise,
        conclusion=conclusion,
        k=k,
        valuation=restricted,
        sigma=sigma,
        refutation=refutation,
        validity_evidence=tuple(evidence),
    )


# --- point maps between frames -------------------------------------------------


@dataclass(frozen=True)
class PMorphism:
    """A world map between frames, stored as a dense tuple by source mask."""

    m: int
    n: int
    mapping: tuple[int, ...]

    @classmethod
    def from_max_map(cls, m: int, n: int, point_map: Mapping[int, int]) -> "PMorphism":
        """Extend a map on maximal worlds (generator i -> generator j) by meets."""
        if set(point_map) != set(range(1, m + 1)):
            raise ValueError(f"point map must cover generators 1..{m}")
        if not all(1 <= j <= n for j in point_map.values()):
            raise ValueError(f"point map targets must lie in 1..{n}")
        images = []
        for w in frame(m).worlds():
            out = 0
            for g in gens(w):
                out |= 1 << (point_map[g] - 1)
            images.append(out)
        return cls(m, n, tuple(images))

    def apply(self, w: int) -> int:
        return self.mapping[w - 1]


@dataclass(frozen=True)
class PMorphismReport:
    ok: bool
    violations: tuple[tuple, ...]  # ("monotone", x, y) | ("back", x, y_prime)


def check_pmorphism(pm: PMorphism) -> PMorphismReport:
    """Exhaustive monotonicity and back-condition check.

    The back condition uses the canonical candidate: for ``y`` above the
    image of ``x``, keep exactly the generators of ``x`` whose point images
    lie in ``y``; that world must sit above ``x`` and map onto ``y``.
    """
    fr_m = frame(pm.m)
    violations = []
    for x in fr_m.worlds():
        fx = pm.apply(x)
        for y in fr_m.worlds():
            if fr_m.le(x, y) and fx | pm.apply(y) != fx:
                violations.append(("monotone", x, y))

    point_images = [pm.apply(1 << i) for i in range(pm.m)]
    for x in fr_m.worlds():
        fx = pm.apply(x)
        y = fx  # iterate submasks of fx: exactly the worlds above it
        while True:
            candidate = 0
            for g in gens(x):
                img = point_images[g - 1]
                if img & y == img:
                    candidate |= 1 << (g - 1)
            if candidate == 0 or (x | candidate != x) or pm.apply(candidate) != y:
                violations.append(("back", x, y))
            y = (y - 1) & fx
            if y == 0:
                break
    return PMorphismReport(not violations, tuple(violations))


def alpha_pmorphism(m: int, n: int, w: Valuation) -> PMorphism:
    """Map each maximal world to the index of the unique family member it
    forces under ``w``, extended to all worlds by meets; validated before
    returning."""
    if w.frame.n != m:
        raise ValueError(f"valuation lives on {w.frame!r}, not M_{m}")
    fam = alpha_formulas(n)
    fr_m = frame(m)
    member_ts = [truth_set(fr_m, w, a) for a in fam.formulas]
    point_map = {}
    for i in range(1, m + 1):
        bit = 1 << ((1 << (i - 1)) - 1)
        js = [j for j in range(1, n + 1) if member_ts[j - 1] & bit]
        if len(js) != 1:
            raise SelfCheckError(
                f"maximal world {i} forces {len(js)} family members; expected exactly one"
            )
        point_map[i] = js[0]
    pm = PMorphism.from_max_map(m, n, point_map)
    report = check_pmorphism(pm)
    if not report.ok:
        raise SelfCheckError(f"constructed map fails: {report.violations[0]}")
    return pm


@dataclass(frozen=True)
class TransferCase:
    formula: Formula
    ok: bool
    world: int | None  # source-frame world where the two sides disagree


@dataclass(frozen=True)
class TransferReport:
    cases: tuple[TransferCase, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.cases)


def check_alpha_transfer(pm: PMorphism, u: UniversalValuation,
                         w: Valuation) -> TransferReport:
    """The membership transfer: ``f(x)`` lands in the truth set of
    ``alpha_I`` under the universal valuation exactly when ``x`` is in its
    truth set under ``w``, for every index set ``I``."""
    fr_m, fr_n = frame(pm.m), frame(pm.n)
    cases = []
    for mask in frame(u.n).worlds():
        f = alpha_I(u.family, gens(mask))
        ts_w = truth_set(fr_m, w, f)
        ts_u = truth_set(fr_n, u.valuation, f)
        bad = None
        for x in fr_m.worlds():
            if bool(ts_w >> (x - 1) & 1) != bool(ts_u >> (pm.apply(x) - 1) & 1):
                bad = x
                break
        cases.append(TransferCase(f, bad is None, bad))
    return TransferReport(tuple(cases))


def transfer_check(pm: PMorphism, sigma: Substitution, u: UniversalValuation,
                   w: Valuation, test_formulas: Sequence[Formula] | None = None, *,
                   count: int = 100, depth: int = 4, seed: int = 0) -> TransferReport:
    """Forcing of substitution images transfers along the map: for each test
    formula ``chi``, ``x`` forces ``sigma(chi)`` under ``w`` exactly when
    ``f(x)`` forces it under the universal valuation.

    Defaults probe the atoms of ``sigma``'s domain, the constants, and
    ``count`` seeded random formulas.  Image truth sets are evaluated
    compositionally: each atom's image is evaluated once per side and the
    test formula is then run over those truth sets, which agrees with
    evaluating ``apply_subst(sigma, chi)`` directly.
    """
    domain = sorted(sigma.mapping)
    if test_formulas is None:
        rng = random.Random(seed)
        test_formulas = ([Atom(p) for p in domain] + [TOP, BOT]
                         + [random_formula(rng, domain, depth) for _ in range(count)])

    fr_m, fr_n = frame(pm.m), frame(pm.n)
    side_u = Valuation(fr_n, {p: truth_set(fr_n, u.valuation, sigma.lookup(p))
                              for p in domain})
    side_w = Valuation(fr_m, {p: truth_set(fr_m, w, sigma.lookup(p))
                              for p in domain})
    cases = []
    for chi in test_formulas:
        ts_u = truth_set(fr_n, side_u, chi)
        ts_w = truth_set(fr_m, side_w, chi)
        bad = None
        for x in fr_m.worlds():
            if bool(ts_w >> (x - 1) & 1) != bool(ts_u >> (pm.apply(x) - 1) & 1):
                bad = x
                break
        cases.append(TransferCase(chi, bad is None, bad))
    return TransferReport(tuple(cases))
