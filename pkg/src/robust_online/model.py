"""Core vocabulary: hypotheses, perturbation maps, version spaces.

Instances and labels are dense integer ids.  A hypothesis is a total
lookup table over the instance space.  A perturbation map sends each
instance to the set of inputs an adversary may present in its place.
Version spaces are bitmasks over the hypothesis ids of a parent class,
so restriction is a single AND against a precomputed consistency mask.
"""

import itertools
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import DomainError, LimitExceeded

Instance = int
Label = int


class DuplicateHypothesisWarning(UserWarning):
    pass


@dataclass(frozen=True)
class Hypothesis:
    """A total function from instances to labels.

    Attributes:
        id: Dense index within the owning class (0-based).
        table: Label per instance, indexed by instance id.
        label_count: Size of the label space the table draws from.
    """

    id: int
    table: tuple[Label, ...]
    label_count: int = 2

    def __call__(self, x: Instance) -> Label:
        if not 0 <= x < len(self.table):
            raise DomainError(f"instance id {x} outside [0, {len(self.table)})")
        return self.table[x]


@dataclass(frozen=True)
class HypothesisClass:
    """A nonempty finite set of hypotheses over a shared instance space."""

    hypotheses: tuple[Hypothesis, ...]
    instance_count: int
    label_count: int

    @classmethod
    def from_tables(cls, tables, label_count: int = 2) -> "HypothesisClass":
        """Build a class from label tables, merging duplicates with a warning.

        Ids are assigned densely in first-appearance order.
        """
        tables = [tuple(t) for t in tables]
        if not tables:
            raise DomainError("a hypothesis class must be nonempty")
        widths = {len(t) for t in tables}
        if len(widths) != 1:
            raise DomainError(f"hypothesis tables have mixed lengths {sorted(widths)}")
        (instance_count,) = widths
        if instance_count == 0:
            raise DomainError("the instance space must be nonempty")
        for t in tables:
            for y in t:
                if not 0 <= y < label_count:
                    raise DomainError(f"label {y} outside [0, {label_count})")
        seen: dict[tuple, int] = {}
        kept = []
        for t in tables:
            if t in seen:
                warnings.warn(
                    f"duplicate hypothesis table {t} merged", DuplicateHypothesisWarning
                )
                continue
            seen[t] = len(kept)
            kept.append(t)
        hyps = tuple(
            Hypothesis(i, t, label_count) for i, t in enumerate(kept)
        )
        return cls(hyps, instance_count, label_count)

    @property
    def size(self) -> int:
        return len(self.hypotheses)

    def __iter__(self):
        return iter(self.hypotheses)

    def __getitem__(self, i: int) -> Hypothesis:
        return self.hypotheses[i]


def full_class(instance_count: int, label_count: int = 2) -> HypothesisClass:
    """Every total function on the instance space.  Guarded against blowup."""
    if label_count**instance_count > 4096:
        raise LimitExceeded(
            f"{label_count}^{instance_count} hypotheses exceeds the 4096 enumeration cap"
        )
    tables = itertools.product(range(label_count), repeat=instance_count)
    return HypothesisClass.from_tables(tables, label_count)


@dataclass(frozen=True)
class PerturbationMap:
    """Forward sets U(x) plus the transposed preimage sets.

    Invariant: z in forward[x] iff x in preimage[z] (checked at build).
    Empty U(x) is allowed; such an instance can never be presented as a
    perturbed input and its restriction constraint is vacuous.
    """

    forward: tuple[frozenset[Instance], ...]
    preimage: tuple[frozenset[Instance], ...] = field(default=())

    def __post_init__(self):
        n = len(self.forward)
        for x, s in enumerate(self.forward):
            for z in s:
                if not 0 <= z < n:
                    raise DomainError(f"U({x}) contains out-of-range instance {z}")
        if not self.preimage:
            pre = [set() for _ in range(n)]
            for x, s in enumerate(self.forward):
                for z in s:
                    pre[z].add(x)
            object.__setattr__(
                self, "preimage", tuple(frozenset(p) for p in pre)
            )
        else:
            if len(self.preimage) != n:
                raise DomainError("preimage width differs from forward width")
            for z in range(n):
                for x in range(n):
                    if (z in self.forward[x]) != (x in self.preimage[z]):
                        raise DomainError(
                            f"preimage is not the transpose of forward at ({x}, {z})"
                        )

    @classmethod
    def from_sets(cls, sets) -> "PerturbationMap":
        return cls(tuple(frozenset(s) for s in sets))

    @property
    def instance_count(self) -> int:
        return len(self.forward)


def identity_map(n: int) -> PerturbationMap:
    return PerturbationMap.from_sets([{x} for x in range(n)])


def total_map(n: int) -> PerturbationMap:
    return PerturbationMap.from_sets([set(range(n))] * n)


def empty_map(n: int) -> PerturbationMap:
    return PerturbationMap.from_sets([set()] * n)


def adversarial_loss(h: Hypothesis, x: Instance, y: Label, u: PerturbationMap) -> int:
    """1 if some admissible perturbation of x gets a label other than y.

    The supremum over an empty perturbation set is 0: an instance that
    cannot be presented at all can never be misclassified.
    """
    if not 0 <= x < u.instance_count:
        raise DomainError(f"instance id {x} outside [0, {u.instance_count})")
    if not 0 <= y < h.label_count:
        raise DomainError(f"label id {y} outside [0, {h.label_count})")
    if len(h.table) != u.instance_count:
        raise DomainError("hypothesis and perturbation map cover different spaces")
    return int(any(h.table[z] != y for z in u.forward[x]))


@lru_cache(maxsize=None)
def consistency_masks(hc: HypothesisClass, u: PerturbationMap):
    """masks[x][y]: bitmask of hypothesis ids with zero adversarial loss on (x, y)."""
    if hc.instance_count != u.instance_count:
        raise DomainError("hypothesis class and perturbation map cover different spaces")
    masks = []
    for x in range(hc.instance_count):
        row = []
        for y in range(hc.label_count):
            m = 0
            for h in hc:
                if not any(h.table[z] != y for z in u.forward[x]):
                    m |= 1 << h.id
            row.append(m)
        masks.append(tuple(row))
    return tuple(masks)


@dataclass(frozen=True)
class VersionSpace:
    """A subset of a hypothesis class, canonically a fixed-width bit vector."""

    parent: HypothesisClass
    mask: int

    @classmethod
    def full(cls, hc: HypothesisClass) -> "VersionSpace":
        return cls(hc, (1 << hc.size) - 1)

    @property
    def size(self) -> int:
        return self.mask.bit_count()

    @property
    def is_empty(self) -> bool:
        return self.mask == 0

    def members(self) -> tuple[Hypothesis, ...]:
        return tuple(h for h in self.parent if self.mask >> h.id & 1)

    def __contains__(self, h: Hypothesis) -> bool:
        return bool(self.mask >> h.id & 1)


def restrict(v: VersionSpace, x: Instance, y: Label, u: PerturbationMap) -> VersionSpace:
    """Keep the hypotheses with zero adversarial loss on the clean pair (x, y).

    With U(x) empty the constraint is vacuous and v comes back unchanged.
    """
    if not 0 <= y < v.parent.label_count:
        raise DomainError(f"label id {y} outside [0, {v.parent.label_count})")
    m = consistency_masks(v.parent, u)[x][y]
    return VersionSpace(v.parent, v.mask & m)


def surviving_mask(pairs, hc: HypothesisClass, u: PerturbationMap) -> int:
    """Bitmask of hypotheses with zero adversarial loss on every given pair."""
    masks = consistency_masks(hc, u)
    m = (1 << hc.size) - 1
    for x, y in pairs:
        if not 0 <= x < hc.instance_count:
            raise DomainError(f"instance id {x} outside [0, {hc.instance_count})")
        if not 0 <= y < hc.label_count:
            raise DomainError(f"label id {y} outside [0, {hc.label_count})")
        m &= masks[x][y]
        if m == 0:
            break
    return m


def is_realizable_sequence(pairs, hc: HypothesisClass, u: PerturbationMap) -> bool:
    """True iff one hypothesis has zero adversarial loss on the whole sequence."""
    return surviving_mask(pairs, hc, u) != 0


def compatible_pairs(u: PerturbationMap) -> set[tuple[Instance, Instance]]:
    """Ordered instance pairs whose perturbation sets intersect.

    These are exactly the pairs an orientation-game adversary may present,
    and the node alphabet of shattered trees.  Symmetric by construction;
    (x, x) appears iff U(x) is nonempty.
    """
    n = u.instance_count
    return {
        (a, b)
        for a in range(n)
        for b in range(n)
        if u.forward[a] & u.forward[b]
    }
