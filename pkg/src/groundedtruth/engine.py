"""Least fixed point of the truth-set operator.

For a consistent set ``U`` of codes, ``L(U)`` is the least set of universe
sentences that contains the seeds ``L0(U)`` and is closed under the nine
compositional rules.  ``G(U)`` is the set of codes of ``L(U)``.  Starting
from the codes of the true object sentences and iterating ``G`` climbs to
the least fixed point ``U*``.
"""

from __future__ import annotations

import json
import logging
import random
from dataclasses import dataclass, field

from .fragment import Fragment, z1_of, z2_of
from .syntax import AND, IFF, IMP, OR, Binary, Formula, Not

log = logging.getLogger(__name__)

FORMAT = "groundedtruth.fixpoint/1"


class InconsistentInput(ValueError):
    """``U`` contains the codes of some ``A`` and ``¬A``."""

    def __init__(self, witness: Formula):
        super().__init__(f"inconsistent code set: contains both {witness} and its negation")
        self.witness = witness


class ConsistencyViolation(RuntimeError):
    """An iterate of the outer loop turned out inconsistent (an engine bug)."""

    def __init__(self, iterate: int, witness: Formula):
        super().__init__(f"iterate {iterate} is inconsistent at {witness}")
        self.iterate = iterate
        self.witness = witness


class StateFormatError(ValueError):
    pass


# the nine rules; each rule names the component statuses that make the compound true

NEGATED = {OR: "nor", AND: "nand", IMP: "nimp", IFF: "niff"}


def rule_holds(kind, a, b, na, nb, m) -> bool:
    if kind == "nn":
        return a in m
    A = a in m
    B = b in m
    NA = na is not None and na in m
    NB = nb is not None and nb in m
    if kind == OR:
        return (A and (B or NB)) or (NA and B)
    if kind == AND:
        return A and B
    if kind == IMP:
        return (NA and (B or NB)) or (A and B)
    if kind == IFF:
        return (A and B) or (NA and NB)
    if kind == "nor":
        return NA and NB
    if kind == "nand":
        return (NA and (B or NB)) or (A and NB)
    if kind == "nimp":
        return A and NB
    if kind == "niff":
        return (A and NB) or (NA and B)
    raise ValueError(kind)


class RuleIndex:
    """Compound sentences of a universe with the components each rule reads."""

    def __init__(self, frag: Fragment):
        self.entries: list[tuple] = []
        self.triggers: dict[Formula, list[int]] = {}
        negation = frag.negation
        for c in frag.universe:
            if isinstance(c, Binary):
                kind, a, b = c.op, c.left, c.right
            elif isinstance(c, Not) and isinstance(c.body, Binary):
                kind, a, b = NEGATED[c.body.op], c.body.left, c.body.right
            elif isinstance(c, Not) and isinstance(c.body, Not):
                kind, a, b = "nn", c.body.body, None
            else:
                continue
            if kind == "nn":
                entry = (c, kind, a, None, None, None)
                reads = (a,)
            else:
                na, nb = negation(a), negation(b)
                entry = (c, kind, a, b, na, nb)
                reads = tuple(x for x in (a, b, na, nb) if x is not None)
            i = len(self.entries)
            self.entries.append(entry)
            for x in set(reads):
                self.triggers.setdefault(x, []).append(i)


def rule_index(frag: Fragment) -> RuleIndex:
    if frag._rule_index is None:
        frag._rule_index = RuleIndex(frag)
    return frag._rule_index


def check_consistent(codes, frag: Fragment) -> Formula | None:
    """``None`` if ``codes`` is consistent, otherwise a sentence A with #A and #¬A both in it."""
    codes = codes if isinstance(codes, (set, frozenset)) else set(codes)
    by_code = frag.by_code
    for c in codes:
        f = by_code.get(c)
        if isinstance(f, Not) and f.body.id in frag.code_of and frag.code_of[f.body.id] in codes:
            return f.body
    return None


def l0_of(codes, frag: Fragment) -> set[Formula]:
    """Seed sentences for a code set: Z alone for the empty set, all seven sets otherwise."""
    if not codes:
        return set(frag.z)
    seeds = set(frag.z)
    seeds.update(z1_of(codes, frag))
    seeds.update(z2_of(codes, frag))
    seeds.update(frag.fixed_seeds)
    return seeds


def closure_step(current: set[Formula], frag: Fragment) -> set[Formula]:
    """One naive application of all rules: ``current`` plus everything it licenses."""
    out = set(current)
    for c, kind, a, b, na, nb in rule_index(frag).entries:
        if c not in current and rule_holds(kind, a, b, na, nb, current):
            out.add(c)
    return out


@dataclass
class Saturation:
    """``L(U)`` with the stage at which each member first appeared."""

    frag: Fragment
    stage_of: dict[Formula, int]
    stage_sizes: list[int]

    @property
    def L(self) -> frozenset:
        return frozenset(self.stage_of)

    @property
    def stages(self) -> int:
        return len(self.stage_sizes)

    def stage(self, n: int) -> frozenset:
        """``Lₙ``: members that appeared at stage n or earlier."""
        return frozenset(f for f, k in self.stage_of.items() if k <= n)

    @property
    def F(self) -> frozenset:
        """Sentences whose negation is in ``L(U)``."""
        return frozenset(f.body for f in self.stage_of if isinstance(f, Not) and f.body in self.frag)

    @property
    def G(self) -> frozenset:
        code = self.frag.code
        return frozenset(code(f) for f in self.stage_of)


def saturate(codes, frag: Fragment, *, check=True, start: set | None = None) -> Saturation:
    """Compute ``L(U)`` stage by stage.

    Each stage checks rule conditions against the previous stage only,
    so stage indices match the ``L0 ⊆ L1 ⊆ …`` definition.  ``start``
    lets the caller supply a subset of ``L(U)`` to begin from; stage
    numbers are then relative to it.
    """
    codes = codes if isinstance(codes, (set, frozenset)) else frozenset(codes)
    if check:
        witness = check_consistent(codes, frag)
        if witness is not None:
            raise InconsistentInput(witness)
    index = rule_index(frag)
    entries, triggers = index.entries, index.triggers
    current = l0_of(codes, frag)
    if start:
        current |= start
    stage_of = dict.fromkeys(current, 0)
    sizes = [len(current)]
    frontier = current
    n = 0
    while frontier:
        candidates = set()
        for x in frontier:
            candidates.update(triggers.get(x, ()))
        new = []
        for i in candidates:
            c, kind, a, b, na, nb = entries[i]
            if c not in current and rule_holds(kind, a, b, na, nb, current):
                new.append(c)
        if not new:
            break
        n += 1
        current.update(new)
        for c in new:
            stage_of[c] = n
        sizes.append(len(current))
        frontier = new
    return Saturation(frag, stage_of, sizes)


def G(codes, frag: Fragment) -> frozenset:
    return saturate(codes, frag).G


@dataclass
class FixpointTrace:
    iterates: list[frozenset]
    stage_counts: list[int]
    saturation: Saturation
    consistency: list[bool] = field(default_factory=list)

    @property
    def fixpoint(self) -> frozenset:
        return self.iterates[-1]

    @property
    def W(self) -> frozenset:
        return self.iterates[0]

    def to_json(self) -> dict:
        return {
            "format": FORMAT,
            "iterates": [sorted(u) for u in self.iterates],
            "fixpoint": sorted(self.fixpoint),
            "stage_counts": list(self.stage_counts),
            "final_stage_sizes": list(self.saturation.stage_sizes),
            "consistency": list(self.consistency),
        }

    def dump(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=1)
            fh.write("\n")


def outer_fixpoint(frag: Fragment, *, warm_start=True) -> FixpointTrace:
    """Iterate ``U₀ = W``, ``Uₖ₊₁ = G(Uₖ)`` until it stops growing.

    Every iterate is checked for consistency and for containing its
    predecessor.  With ``warm_start`` each saturation begins from the
    previous ``L``, which is sound because ``L`` is monotone; the final
    saturation is always redone from scratch so that stage numbers are
    exact.
    """
    u = saturate(frozenset(), frag).G
    iterates = [u]
    consistency = [True]
    stage_counts = []
    previous_l = None
    for k in range(1, len(frag) + 3):
        sat = saturate(u, frag, check=False, start=previous_l if warm_start else None)
        stage_counts.append(sat.stages)
        v = sat.G
        witness = check_consistent(v, frag)
        consistency.append(witness is None)
        if witness is not None:
            raise ConsistencyViolation(k, witness)
        if not u <= v:
            missing = frag.sentence(next(iter(u - v)))
            raise ConsistencyViolation(k, missing)
        log.debug("iterate %d: %d codes", k, len(v))
        if v == u:
            consistency.pop()
            final = saturate(u, frag, check=False)
            return FixpointTrace(iterates, stage_counts, final, consistency)
        iterates.append(v)
        u = v
        previous_l = set(sat.stage_of)
    raise RuntimeError("outer iteration did not stabilise")


def load_state(path, frag: Fragment) -> FixpointTrace:
    """Read a saved fixed point and check it against the fragment."""
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise StateFormatError(f"cannot read state {path}: {exc}") from exc
    try:
        if data.get("format") != FORMAT:
            raise StateFormatError(f"not a fixpoint state file (format {data.get('format')!r})")
        iterates = [frozenset(int(c) for c in u) for u in data["iterates"]]
        fixpoint = frozenset(int(c) for c in data["fixpoint"])
        stage_counts = [int(c) for c in data["stage_counts"]]
        consistency = [bool(c) for c in data["consistency"]]
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise StateFormatError(f"malformed state: {exc}") from exc
    if not iterates or iterates[-1] != fixpoint:
        raise StateFormatError("the last iterate is not the stored fixed point")
    unknown = fixpoint - frag.codes
    if unknown:
        raise StateFormatError(f"{len(unknown)} codes in the state are not in the fragment")
    if check_consistent(fixpoint, frag) is not None:
        raise StateFormatError("the stored fixed point is inconsistent")
    sat = saturate(fixpoint, frag)
    if sat.G != fixpoint:
        raise StateFormatError("the stored set is not a fixed point of this fragment")
    return FixpointTrace(iterates, stage_counts, sat, consistency)


# minimality

@dataclass
class FixedPointSample:
    seed: frozenset
    status: str  # "fixed-point" or "inconsistent"
    fixed_point: frozenset | None = None
    contains_least: bool | None = None
    witness: Formula | None = None


@dataclass
class MinimalityReport:
    samples: list[FixedPointSample]
    seed: int | None

    @property
    def fixed_points(self) -> list[FixedPointSample]:
        return [s for s in self.samples if s.status == "fixed-point"]

    @property
    def ok(self) -> bool:
        return all(s.contains_least for s in self.fixed_points)


def fixed_point_above(seed_codes, frag: Fragment) -> FixedPointSample:
    """Grow a consistent code set to a fixed point, if it stays consistent.

    First ``V ← V ∪ G(V)`` until nothing is added; if that ever becomes
    inconsistent the seed is rejected.  Then ``V ← G(V)`` shrinks to a
    fixed point.
    """
    v = frozenset(seed_codes)
    witness = check_consistent(v, frag)
    if witness is not None:
        return FixedPointSample(frozenset(seed_codes), "inconsistent", witness=witness)
    while True:
        grown = v | G(v, frag)
        witness = check_consistent(grown, frag)
        if witness is not None:
            return FixedPointSample(frozenset(seed_codes), "inconsistent", witness=witness)
        if grown == v:
            break
        v = grown
    while True:
        shrunk = G(v, frag)
        if shrunk == v:
            return FixedPointSample(frozenset(seed_codes), "fixed-point", fixed_point=v)
        v = shrunk


def minimality_check(least: frozenset, frag: Fragment, trials: int = 20, seed: int = 0,
                     extra_seeds=()) -> MinimalityReport:
    """Look for fixed points above random consistent supersets of W.

    Each fixed point found must contain ``least``.
    """
    rng = random.Random(seed)
    w = saturate(frozenset(), frag).G
    pool = sorted(frag.codes - w)
    seeds = [frozenset(s) for s in extra_seeds]
    for _ in range(trials):
        chosen = set(w)
        for c in rng.sample(pool, min(len(pool), rng.randint(1, 8))):
            if not clashes(c, chosen, frag):
                chosen.add(c)
        seeds.append(frozenset(chosen))
    samples = []
    for s in seeds:
        sample = fixed_point_above(s, frag)
        if sample.status == "fixed-point":
            sample.contains_least = least <= sample.fixed_point
        samples.append(sample)
    return MinimalityReport(samples, seed)


def random_consistent(frag: Fragment, rng: random.Random, density: float = 0.3) -> frozenset:
    """A random consistent code set: each sentence/negation pair contributes at most one side."""
    chosen = set()
    for f in frag.universe:
        if rng.random() < density and not clashes(frag.code(f), chosen, frag):
            chosen.add(frag.code(f))
    return frozenset(chosen)


def clashes(code: int, codes, frag: Fragment) -> bool:
    """Would adding ``code`` to the consistent set ``codes`` make it inconsistent?"""
    f = frag.sentence(code)
    if isinstance(f, Not) and f.body in frag and frag.code(f.body) in codes:
        return True
    n = frag.negation(f)
    return n is not None and frag.code(n) in codes
