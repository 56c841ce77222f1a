"""Place/transition Petri nets with weighted arcs and firing semantics.

Nets and markings are immutable values: every operation returns a new
value and never touches its inputs, so they are safe to share between
threads or keep in histories.  Place and transition identifiers are
plain strings; a net optionally carries human-readable labels for
rendering.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from .errors import RenetError

PlaceId = str
TransitionId = str

# (source, target) -> weight; one endpoint is a place, the other a transition
Arc = tuple[str, str]

DEFAULT_MAX_DEPTH = 16
DEFAULT_MAX_STATES = 10_000


class PetriNetError(RenetError):
    """Base class for net construction and firing errors."""


class DuplicateIdError(PetriNetError):
    pass


class DanglingArcError(PetriNetError):
    pass


class PlaceTransitionOverlapError(PetriNetError):
    pass


class EmptyNetError(PetriNetError):
    pass


class InvalidWeightError(PetriNetError):
    pass


class UnknownTransitionError(PetriNetError):
    pass


class UnknownPlaceError(PetriNetError):
    pass


class NotEnabledError(PetriNetError):
    pass


class BoundExceededError(PetriNetError):
    """Raised when bounded reachability would have to truncate silently."""


class Marking:
    """Immutable token-count map; places absent from the map hold zero tokens.

    Markings are hashable, so reachability sets can be plain Python sets.
    """

    __slots__ = ("_tokens", "_hash")

    def __init__(self, tokens: Mapping[str, int] | None = None) -> None:
        counts: dict[str, int] = {}
        for place, n in (tokens or {}).items():
            n = int(n)
            if n < 0:
                raise ValueError(f"negative token count {n} for place {place!r}")
            if n > 0:
                counts[place] = n
        self._tokens = counts
        self._hash = hash(frozenset(counts.items()))

    def count(self, place: str) -> int:
        return self._tokens.get(place, 0)

    def total(self) -> int:
        return sum(self._tokens.values())

    def places(self) -> frozenset[str]:
        """Places currently holding at least one token."""
        return frozenset(self._tokens)

    def as_dict(self) -> dict[str, int]:
        return dict(self._tokens)

    def __iter__(self) -> Iterator[str]:
        return iter(self._tokens)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Marking):
            return NotImplemented
        return self._tokens == other._tokens

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        inner = ", ".join(f"{p}: {n}" for p, n in sorted(self._tokens.items()))
        return f"Marking({{{inner}}})"


@dataclass(frozen=True)
class PetriNet:
    """A validated place/transition net.

    ``places`` and ``transitions`` keep insertion order, which fixes the
    row/column order of the incidence matrix and the exploration order of
    reachability.  ``flow`` maps (source, target) pairs to positive arc
    weights.  Construct through :func:`build_net`, which enforces the
    structural invariants.
    """

    places: tuple[PlaceId, ...]
    transitions: tuple[TransitionId, ...]
    flow: dict[Arc, int]
    labels: dict[str, str] = field(default_factory=dict)

    def is_place(self, node: str) -> bool:
        return node in self._place_set()

    def is_transition(self, node: str) -> bool:
        return node in self._transition_set()

    def _place_set(self) -> frozenset[str]:
        return frozenset(self.places)

    def _transition_set(self) -> frozenset[str]:
        return frozenset(self.transitions)

    def label(self, node: str) -> str:
        return self.labels.get(node, node)

    def inputs(self, t: TransitionId) -> tuple[tuple[PlaceId, int], ...]:
        """Input places of ``t`` with arc weights, in place order."""
        self._require_transition(t)
        return tuple((p, self.flow[(p, t)]) for p in self.places if (p, t) in self.flow)

    def outputs(self, t: TransitionId) -> tuple[tuple[PlaceId, int], ...]:
        """Output places of ``t`` with arc weights, in place order."""
        self._require_transition(t)
        return tuple((p, self.flow[(t, p)]) for p in self.places if (t, p) in self.flow)

    def arcs_of(self, node: str) -> tuple[Arc, ...]:
        return tuple(a for a in self.flow if node in a)

    def _require_transition(self, t: str) -> None:
        if t not in self._transition_set():
            raise UnknownTransitionError(f"unknown transition {t!r}")


@dataclass(frozen=True)
class IncidenceMatrix:
    """Integer matrix C with C[p][t] = weight(t -> p) - weight(p -> t)."""

    rows: tuple[PlaceId, ...]
    cols: tuple[TransitionId, ...]
    entries: tuple[tuple[int, ...], ...]

    def entry(self, place: PlaceId, transition: TransitionId) -> int:
        return self.entries[self.rows.index(place)][self.cols.index(transition)]

    def column(self, transition: TransitionId) -> tuple[int, ...]:
        j = self.cols.index(transition)
        return tuple(row[j] for row in self.entries)


def build_net(
    places: Iterable[PlaceId],
    transitions: Iterable[TransitionId],
    arcs: Iterable[tuple] = (),
    labels: Mapping[str, str] | None = None,
) -> PetriNet:
    """Validate and construct a net.

    ``arcs`` entries are ``(source, target)`` or ``(source, target, weight)``
    with an implied weight of 1.  Each arc must connect a declared place
    with a declared transition, in either direction.
    """
    place_list = list(places)
    transition_list = list(transitions)

    place_set = set(place_list)
    if len(place_set) != len(place_list):
        raise DuplicateIdError("duplicate place id")
    transition_set = set(transition_list)
    if len(transition_set) != len(transition_list):
        raise DuplicateIdError("duplicate transition id")

    overlap = place_set & transition_set
    if overlap:
        raise PlaceTransitionOverlapError(
            f"ids used as both place and transition: {sorted(overlap)}"
        )
    if not place_list and not transition_list:
        raise EmptyNetError("a net needs at least one place or transition")

    flow: dict[Arc, int] = {}
    for arc in arcs:
        if len(arc) == 2:
            src, tgt = arc
            weight = 1
        else:
            src, tgt, weight = arc
        weight = int(weight)
        if weight < 1:
            raise InvalidWeightError(f"arc ({src!r}, {tgt!r}) has weight {weight}, need >= 1")
        src_is_place = src in place_set
        src_is_transition = src in transition_set
        if src_is_place:
            if tgt not in transition_set:
                raise DanglingArcError(f"arc ({src!r}, {tgt!r}): target is not a declared transition")
        elif src_is_transition:
            if tgt not in place_set:
                raise DanglingArcError(f"arc ({src!r}, {tgt!r}): target is not a declared place")
        else:
            raise DanglingArcError(f"arc ({src!r}, {tgt!r}): source is not declared")
        if (src, tgt) in flow:
            raise DuplicateIdError(f"arc ({src!r}, {tgt!r}) declared twice")
        flow[(src, tgt)] = weight

    net_labels = dict(labels) if labels else {}
    return PetriNet(tuple(place_list), tuple(transition_list), flow, net_labels)


def enabled(net: PetriNet, marking: Marking, t: TransitionId) -> bool:
    """True iff every input place of ``t`` holds at least the arc weight."""
    return all(marking.count(p) >= w for p, w in net.inputs(t))


def fire(net: PetriNet, marking: Marking, t: TransitionId) -> Marking:
    """Fire ``t``: consume input tokens, produce output tokens.

    Returns a new marking; the input marking is unchanged.
    """
    if not enabled(net, marking, t):
        raise NotEnabledError(f"transition {t!r} is not enabled")
    counts = marking.as_dict()
    for p, w in net.inputs(t):
        counts[p] = counts.get(p, 0) - w
    for p, w in net.outputs(t):
        counts[p] = counts.get(p, 0) + w
    return Marking(counts)


def incidence_matrix(net: PetriNet) -> IncidenceMatrix:
    """Incidence matrix over the net's insertion order of places/transitions."""
    entries = tuple(
        tuple(
            net.flow.get((t, p), 0) - net.flow.get((p, t), 0)
            for t in net.transitions
        )
        for p in net.places
    )
    return IncidenceMatrix(net.places, net.transitions, entries)


def reachable(
    net: PetriNet,
    m0: Marking,
    max_depth: int = DEFAULT_MAX_DEPTH,
    max_states: int = DEFAULT_MAX_STATES,
) -> frozenset[Marking]:
    """Breadth-first set of markings reachable from ``m0`` within bounds.

    Exploration is deterministic: transitions are tried in net order.
    If the full reachability set cannot be established within
    ``max_depth`` firings or ``max_states`` distinct markings, raises
    :class:`BoundExceededError` instead of truncating silently.
    """
    unknown = m0.places() - net._place_set()
    if unknown:
        raise UnknownPlaceError(f"marking references unknown places: {sorted(unknown)}")

    # precompute adjacency once; net accessors would rescan flow per call
    pre: dict[str, list[tuple[str, int]]] = {t: [] for t in net.transitions}
    post: dict[str, list[tuple[str, int]]] = {t: [] for t in net.transitions}
    for (src, tgt), w in net.flow.items():
        if src in pre:
            post[src].append((tgt, w))
        else:
            pre[tgt].append((src, w))

    seen: set[Marking] = {m0}
    queue: deque[tuple[Marking, int]] = deque([(m0, 0)])
    while queue:
        current, depth = queue.popleft()
        for t in net.transitions:
            if not all(current.count(p) >= w for p, w in pre[t]):
                continue
            counts = current.as_dict()
            for p, w in pre[t]:
                counts[p] -= w
            for p, w in post[t]:
                counts[p] = counts.get(p, 0) + w
            successor = Marking(counts)
            if successor in seen:
                continue
            if depth + 1 > max_depth:
                raise BoundExceededError(
                    f"reachability incomplete at depth {max_depth}"
                )
            if len(seen) + 1 > max_states:
                raise BoundExceededError(
                    f"reachability exceeds {max_states} states"
                )
            seen.add(successor)
            queue.append((successor, depth + 1))
    return frozenset(seen)
