"""Online learners for the two game protocols.

Orientation game: the adversary shows a pair of candidate instances with
intersecting perturbation sets (plus a label per side in the multiclass
variant); the learner must say which side will be revealed as clean.

Robust game: the adversary shows a perturbed input; the learner commits to
a label before the clean pair is revealed.

The optimal orientation learner predicts the side whose restricted version
space still has the larger adversarial dimension.  The robust learner is a
reduction: it asks the orientation learner to orient candidate preimages of
the perturbed input against each other, and on every mistake feeds it one
resolved query on which the orientation learner itself was wrong, so both
mistake counts are bounded by the adversarial dimension.
"""

from dataclasses import dataclass

from .dimension import get_engine
from .errors import ProtocolViolation, SearchInvariantError
from .model import HypothesisClass, PerturbationMap, VersionSpace, consistency_masks

OPTIMAL = "optimal"
BASELINES = ("constant-0", "constant-1", "random", "majority")
LEARNER_NAMES = (OPTIMAL,) + BASELINES


@dataclass(frozen=True)
class OrientationQuery:
    """One orientation-game round: candidate instances and their labels.

    Side i of the pair carries labels[i]; binary games fix labels (0, 1),
    so the side index and the label coincide.
    """

    pair: tuple[int, int]
    labels: tuple[int, int] = (0, 1)


class SoaOrientationLearner:
    """Dimension-greedy orientation learner.

    Predicts the query label whose side keeps the larger-dimensional
    version space, with ties broken toward the smaller label id (or the
    larger, under tie_break="high"; the mistake bound is tie-break
    independent).  Every mistake strictly decreases the dimension of the
    version space, so mistakes never exceed the class dimension on
    realizable sequences.
    """

    game = "orientation"

    def __init__(
        self,
        hc: HypothesisClass,
        u: PerturbationMap,
        multiclass: bool = False,
        tie_break: str = "low",
        strict: bool = True,
    ):
        if tie_break not in ("low", "high"):
            raise ValueError(f"unknown tie_break {tie_break!r}")
        self.hc = hc
        self.u = u
        self.multiclass = multiclass
        self.tie_break = tie_break
        self.strict = strict
        self.engine = get_engine(hc, u, multiclass)
        self._masks = consistency_masks(hc, u)
        self.mask = (1 << hc.size) - 1
        self.mistake_count = 0
        self.events: list[str] = []

    @property
    def version_space(self) -> VersionSpace:
        return VersionSpace(self.hc, self.mask)

    def side_dimensions(self, query: OrientationQuery) -> tuple[int, int]:
        dims = []
        for i in (0, 1):
            m = self.mask & self._masks[query.pair[i]][query.labels[i]]
            dims.append(self.engine.dimension_of_mask(m))
        return dims[0], dims[1]

    def predict(self, query: OrientationQuery) -> int:
        d0, d1 = self.side_dimensions(query)
        y0, y1 = query.labels
        if d0 > d1:
            return y0
        if d1 > d0:
            return y1
        if self.tie_break == "low":
            return min(y0, y1)
        return max(y0, y1)

    def update(self, query: OrientationQuery, side: int) -> None:
        """Absorb the reveal of query side `side` (0 or 1)."""
        if side not in (0, 1):
            raise ProtocolViolation(f"revealed side must be 0 or 1, got {side}")
        label = query.labels[side]
        if self.predict(query) != label:
            self.mistake_count += 1
        new = self.mask & self._masks[query.pair[side]][label]
        if new == 0:
            if self.strict:
                raise ProtocolViolation(
                    "orientation reveal emptied the version space; "
                    "the revealed sequence is not realizable"
                )
            if self.mask != 0:
                self.events.append("version-space-emptied")
        self.mask = new


class RobustReductionLearner:
    """Robust-game learner built on an orientation learner.

    Each round, the candidate preimages of the perturbed input are grouped
    by label into P[y] (instances x with the input in U(x) and a nonempty
    restriction on (x, y)).  A label y wins when one of its candidates is
    oriented toward y against every candidate of every other label.  With
    no winner the binary learner answers 1 (the multiclass variant answers
    the smallest label id); with several winners it logs the event and
    answers the smallest.

    On a mistake there must exist a candidate of some other label that the
    orientation learner oriented wrongly against the revealed clean
    instance; that resolved query is fed back, charging the mistake to the
    orientation learner.  Strict mode treats a missing counterpart or an
    emptied version space as a broken realizability contract; tolerant
    mode (strict=False) records an event and keeps playing, predicting
    `empty_prediction` once the version space is gone.
    """

    game = "robust"

    def __init__(
        self,
        hc: HypothesisClass,
        u: PerturbationMap,
        multiclass: bool = False,
        orientation: SoaOrientationLearner | None = None,
        strict: bool = True,
        empty_prediction: int | None = None,
        tie_break: str = "low",
    ):
        self.hc = hc
        self.u = u
        self.multiclass = multiclass
        self.strict = strict
        self.empty_prediction = empty_prediction
        self.orientation = orientation or SoaOrientationLearner(
            hc, u, multiclass, tie_break=tie_break, strict=False
        )
        self._masks = consistency_masks(hc, u)
        self.mask = (1 << hc.size) - 1
        self.mistake_count = 0
        self.history: list[tuple[OrientationQuery, int]] = []
        self.events: list[str] = []
        self._last = None  # (z, prediction, candidate sets) for update reuse

    @property
    def version_space(self) -> VersionSpace:
        return VersionSpace(self.hc, self.mask)

    def candidate_sets(self, z: int) -> list[list[int]]:
        """P[y]: preimage candidates of z whose (x, y) restriction survives."""
        pre = sorted(self.u.preimage[z])
        return [
            [x for x in pre if self.mask & self._masks[x][y]]
            for y in range(self.hc.label_count)
        ]

    def _orient(self, x0: int, x1: int, y0: int, y1: int) -> int:
        return self.orientation.predict(OrientationQuery((x0, x1), (y0, y1)))

    def _compute(self, z: int):
        if self.mask == 0 and self.empty_prediction is not None:
            return self.empty_prediction, [[] for _ in range(self.hc.label_count)]
        cands = self.candidate_sets(z)
        winners = []
        if not self.multiclass:
            p0, p1 = cands[0], cands[1]
            if any(all(self._orient(x0, x1, 0, 1) == 0 for x1 in p1) for x0 in p0):
                winners.append(0)
            if any(all(self._orient(x0, x1, 0, 1) == 1 for x0 in p0) for x1 in p1):
                winners.append(1)
            fallback = 1
        else:
            for y, py in enumerate(cands):
                for xy in py:
                    if all(
                        self._orient(xy, x2, y, y2) == y
                        for y2, p2 in enumerate(cands)
                        if y2 != y
                        for x2 in p2
                    ):
                        winners.append(y)
                        break
            fallback = 0
        if not winners:
            return fallback, cands
        if len(winners) > 1:
            self.events.append(f"multiple-qualifying-labels:{winners}")
        return winners[0], cands

    def predict(self, z: int) -> int:
        pred, cands = self._compute(z)
        self._last = (z, pred, cands)
        return pred

    def _feed_counterpart(self, z: int, x: int, y: int, cands) -> bool:
        """Find and feed the wrongly oriented query a mistake guarantees."""
        if not self.multiclass:
            opp = 1 - y
            for x2 in cands[opp]:
                pair = (x2, x) if y == 1 else (x, x2)
                query = OrientationQuery(pair, (0, 1))
                if self.orientation.predict(query) == opp:
                    self.orientation.update(query, y)
                    self.history.append((query, y))
                    return True
            return False
        for y2 in range(self.hc.label_count):
            if y2 == y:
                continue
            for x2 in cands[y2]:
                query = OrientationQuery((x, x2), (y, y2))
                if self.orientation.predict(query) == y2:
                    self.orientation.update(query, 0)
                    self.history.append((query, 0))
                    return True
        return False

    def update(self, z: int, x: int, y: int) -> None:
        """Absorb the clean reveal (x, y) for the round that showed z."""
        if z not in self.u.forward[x]:
            # A tolerant learner may run under a perturbation map that is
            # only a belief about the true one, so this is not fatal.
            if self.strict:
                raise ProtocolViolation(
                    f"revealed clean instance {x} does not perturb to the "
                    f"shown input {z}"
                )
            self.events.append("input-outside-belief")
        if self._last is not None and self._last[0] == z:
            _, pred, cands = self._last
        else:
            pred, cands = self._compute(z)
        self._last = None
        if pred != y:
            self.mistake_count += 1
            if not self._feed_counterpart(z, x, y, cands):
                if self.strict:
                    raise SearchInvariantError(
                        "mistake round has no wrongly oriented counterpart; "
                        "this cannot happen on a realizable sequence"
                    )
                self.events.append("missing-counterpart")
        new = self.mask & self._masks[x][y]
        if new == 0:
            if self.strict:
                raise ProtocolViolation(
                    "clean reveal emptied the version space; "
                    "the sequence is not realizable"
                )
            if self.mask != 0:
                self.events.append("version-space-emptied")
        self.mask = new


class LazyRobustLearner:
    """Update-on-mistake wrapper; correct rounds leave the state untouched."""

    game = "robust"

    def __init__(self, inner):
        self.inner = inner
        self.mistake_count = 0

    @property
    def version_space(self):
        return self.inner.version_space

    @property
    def events(self):
        return self.inner.events

    def predict(self, z: int) -> int:
        return self.inner.predict(z)

    def update(self, z: int, x: int, y: int) -> None:
        if self.inner.predict(z) != y:
            self.mistake_count += 1
            self.inner.update(z, x, y)


class LazyOrientationLearner:
    game = "orientation"

    def __init__(self, inner):
        self.inner = inner
        self.mistake_count = 0

    @property
    def version_space(self):
        return self.inner.version_space

    def predict(self, query: OrientationQuery) -> int:
        return self.inner.predict(query)

    def update(self, query: OrientationQuery, side: int) -> None:
        if self.inner.predict(query) != query.labels[side]:
            self.mistake_count += 1
            self.inner.update(query, side)


def lazy_wrap(learner):
    """Wrap any learner of either game so it only updates on its mistakes."""
    if learner.game == "robust":
        return LazyRobustLearner(learner)
    if learner.game == "orientation":
        return LazyOrientationLearner(learner)
    raise ValueError(f"unknown game tag {learner.game!r}")


class ConstantLearner:
    def __init__(self, game: str, label: int):
        self.game = game
        self.label = label
        self.mistake_count = 0

    def predict(self, _) -> int:
        return self.label

    def update(self, *args) -> None:
        revealed = _revealed_label(self.game, args)
        if self.label != revealed:
            self.mistake_count += 1


class RandomLearner:
    """Uniform guesses; orientation games guess among the presented labels."""

    def __init__(self, game: str, label_count: int, rng):
        self.game = game
        self.label_count = label_count
        self.rng = rng
        self.mistake_count = 0
        self._trace: list[int] = []

    def predict(self, query) -> int:
        if self.game == "orientation":
            pred = query.labels[int(self.rng.integers(2))]
        else:
            pred = int(self.rng.integers(self.label_count))
        self._trace.append(pred)
        return pred

    def update(self, *args) -> None:
        revealed = _revealed_label(self.game, args)
        if self._trace and self._trace[-1] != revealed:
            self.mistake_count += 1


class MajorityLearner:
    """Version-space head counts instead of dimensions; tolerant of emptying."""

    def __init__(self, game: str, hc: HypothesisClass, u: PerturbationMap):
        self.game = game
        self.hc = hc
        self.u = u
        self._masks = consistency_masks(hc, u)
        self.mask = (1 << hc.size) - 1
        self.mistake_count = 0

    @property
    def version_space(self) -> VersionSpace:
        return VersionSpace(self.hc, self.mask)

    def predict(self, query) -> int:
        if self.game == "orientation":
            sizes = [
                (self.mask & self._masks[query.pair[i]][query.labels[i]]).bit_count()
                for i in (0, 1)
            ]
            if sizes[0] != sizes[1]:
                return query.labels[sizes.index(max(sizes))]
            return min(query.labels)
        z = query
        counts = [0] * self.hc.label_count
        for h in self.hc:
            if self.mask >> h.id & 1:
                counts[h.table[z]] += 1
        return counts.index(max(counts))

    def update(self, *args) -> None:
        if self.game == "orientation":
            query, side = args
            x, label = query.pair[side], query.labels[side]
        else:
            _, x, label = args
            query = None
        pred = self.predict(query if query is not None else args[0])
        if pred != label:
            self.mistake_count += 1
        self.mask &= self._masks[x][label]


def _revealed_label(game: str, args):
    if game == "orientation":
        query, side = args
        return query.labels[side]
    return args[2]


def make_learner(
    name: str,
    game: str,
    hc: HypothesisClass,
    u: PerturbationMap,
    multiclass: bool = False,
    rng=None,
    strict: bool = True,
    tie_break: str = "low",
):
    """Build a registered learner for one game.

    Names: "optimal" (SOA orientation learner, or its robust reduction),
    "constant-0", "constant-1", "random", "majority".
    """
    if game not in ("orientation", "robust"):
        raise ValueError(f"unknown game {game!r}")
    if name == OPTIMAL:
        if game == "orientation":
            return SoaOrientationLearner(hc, u, multiclass, tie_break, strict)
        return RobustReductionLearner(
            hc, u, multiclass, strict=strict, tie_break=tie_break
        )
    if name == "constant-0":
        return ConstantLearner(game, 0)
    if name == "constant-1":
        return ConstantLearner(game, 1)
    if name == "random":
        if rng is None:
            raise ValueError("the random learner needs an rng")
        return RandomLearner(game, hc.label_count, rng)
    if name == "majority":
        return MajorityLearner(game, hc, u)
    raise ValueError(f"unknown learner {name!r}; choose from {LEARNER_NAMES}")
