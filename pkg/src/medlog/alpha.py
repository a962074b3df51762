"""Pairwise-contradictory formula families and the universal valuation.

For ``n`` targets over atoms ``p1..pm`` (``m = ceil(log2 n)``), the family
``alpha_1..alpha_n`` consists of the full conjunctions of literals taken in
descending bit-pattern order (``alpha_1`` all positive), except that when
``n`` is not a power of two the tail patterns are merged into one final
disjunction; for ``n = 1`` the family is just ``T``.  The members are
pairwise contradictory, their disjunction is valid in the double-negation
sense, and under the universal valuation the ``i``-th maximal world forces
exactly ``alpha_i``.

The universal valuation makes an atom true exactly on the worlds whose
generators all carry that atom positively, so membership of a world in the
truth set of ``alpha_I := ~~(alpha_i | ...)`` is containment of its
generator set in ``I``.  That law is model-checked at construction time.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import SelfCheckError
from .formula import (
    TOP,
    Atom,
    Formula,
    Neg,
    Substitution,
    apply_subst,
    big_and,
    big_or,
    render,
)
from .medvedev import (
    MedvedevFrame,
    Valuation,
    frame,
    gens,
    truth_set,
    upset_worlds,
)

MAX_FAMILY = 1 << 10

# full membership validation is quadratic in the world count; beyond this the
# constructor still verifies the maximal-world condition
FULL_VALIDATION_N = 10


@dataclass(frozen=True)
class AlphaFamily:
    n: int
    m: int  # number of atoms p1..pm
    formulas: tuple[Formula, ...]

    def atom_names(self) -> list[str]:
        return [f"p{j}" for j in range(1, self.m + 1)]


def _literal_conjunction(pattern: int, m: int) -> Formula:
    lits = [
        Atom(f"p{j}") if pattern >> (m - j) & 1 else Neg(Atom(f"p{j}"))
        for j in range(1, m + 1)
    ]
    return big_and(lits)


def alpha_formulas(n: int) -> AlphaFamily:
    """The n-member family; patterns descend so that ``alpha_1`` is all-positive."""
    if not 1 <= n <= MAX_FAMILY:
        raise ValueError(f"family size must be in 1..{MAX_FAMILY}, got {n}")
    if n == 1:
        return AlphaFamily(1, 0, (TOP,))
    m = (n - 1).bit_length()
    full = 1 << m
    base = [_literal_conjunction(full - i, m) for i in range(1, full + 1)]
    if n == full:
        formulas = base
    else:
        formulas = base[: n - 1] + [big_or(base[n - 1:])]
    return AlphaFamily(n, m, tuple(formulas))


def alpha_I(family: AlphaFamily, indices: Iterable[int]) -> Formula:
    """``~~(alpha_i | ...)`` over the given index set, ascending."""
    idx = sorted(set(indices))
    if not idx:
        raise ValueError("index set must be non-empty")
    if idx[0] < 1 or idx[-1] > family.n:
        raise ValueError(f"indices must lie in 1..{family.n}")
    return Neg(Neg(big_or([family.formulas[i - 1] for i in idx])))


@dataclass(frozen=True)
class UniversalValuation:
    n: int
    family: AlphaFamily
    valuation: Valuation


def _effective_pattern(i: int, m: int) -> int:
    # the merged tail member answers atoms like its first merged pattern
    return (1 << m) - i


@lru_cache(maxsize=None)
def u_valuation(n: int) -> UniversalValuation:
    """The valuation under which the family separates the maximal worlds.

    Atom ``pj`` holds at a world exactly when every generator's pattern sets
    ``pj``; equivalently its truth set is the submask cone of ``S_j``, the
    set of maximal worlds whose pattern carries ``pj``.  Construction
    validates the maximal-world condition and (for ``n`` up to
    ``FULL_VALIDATION_N``) the membership law for every index set.
    """
    fam = alpha_formulas(n)
    fr = frame(n)
    mapping: dict[str, int] = {}
    for j in range(1, fam.m + 1):
        s_mask = 0
        for i in range(1, n + 1):
            if _effective_pattern(i, fam.m) >> (fam.m - j) & 1:
                s_mask |= 1 << (i - 1)
        mapping[f"p{j}"] = fr.up_bits(s_mask) if s_mask else 0
    u = UniversalValuation(n, fam, Valuation(fr, mapping))
    _validate(u, full=n <= FULL_VALIDATION_N)
    return u


def _validate(u: UniversalValuation, full: bool) -> None:
    fr = frame(u.n)
    # each maximal world forces its own family member and no other
    member_ts = [truth_set(fr, u.valuation, a) for a in u.family.formulas]
    for i in range(1, u.n + 1):
        w = 1 << (i - 1)
        for j in range(1, u.n + 1):
            forced = bool(member_ts[j - 1] >> (w - 1) & 1)
            if forced != (i == j):
                raise SelfCheckError(
                    f"maximal world {i} and member {j} disagree in the family for n={u.n}"
                )
    if not full:
        return
    # membership law: the truth set of alpha_I is exactly the submask cone of I
    for mask in fr.worlds():
        f = alpha_I(u.family, gens(mask))
        if truth_set(fr, u.valuation, f) != fr.up_bits(mask):
            raise SelfCheckError(
                f"membership law fails for index set {gens(mask)} at n={u.n}"
            )


def universal_subst(n: int, v: Valuation) -> Substitution:
    """Replace each atom by the disjunction of ``alpha_I`` over its truth set.

    Worlds contribute in ascending mask order; an atom true nowhere maps to
    the empty disjunction ``~T``.
    """
    if v.frame.n != n:
        raise ValueError(f"valuation lives on {v.frame!r}, not M_{n}")
    fam = alpha_formulas(n)
    mapping = {
        atom: big_or([alpha_I(fam, gens(w)) for w in upset_worlds(bits)])
        for atom, bits in v.map.items()
    }
    return Substitution(mapping)


@dataclass(frozen=True)
class LemmaCase:
    formula: Formula
    ok: bool
    world: int | None  # smallest disagreeing world mask

    def __repr__(self) -> str:
        state = "ok" if self.ok else f"mismatch at {gens(self.world)}"
        return f"<{render(self.formula)}: {state}>"


@dataclass(frozen=True)
class LemmaReport:
    n: int
    cases: tuple[LemmaCase, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.cases)


def verify_lemma(n: int, v: Valuation, test_formulas: Sequence[Formula]) -> LemmaReport:
    """Compare each formula's truth set under ``v`` with its substitution
    image's truth set under the universal valuation, world by world."""
    fr = frame(n)
    sigma = universal_subst(n, v)
    u = u_valuation(n)
    cases = []
    for f in test_formulas:
        left = truth_set(fr, v, f)
        right = truth_set(fr, u.valuation, apply_subst(sigma, f))
        if left == right:
            cases.append(LemmaCase(f, True, None))
        else:
            diff = left ^ right
            cases.append(LemmaCase(f, False, (diff & -diff).bit_length()))
    return LemmaReport(n, tuple(cases))
