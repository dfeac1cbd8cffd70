"""Autobiographical memory: a bounded short-term working set over an
unbounded long-term store.

The model keeps General Events (what happened, with an emotion and a
polarity) and per-event resources (tokens, fact triples, image paths).
Resources enter both the long-term store and short-term memory at creation.
Short-term memory holds at most STM_CAPACITY items; activations decay
logarithmically each tick, rehearsal resets them, and sleeping consolidates:
faded items get their weight reduced, anything under the weight floor is
forgotten, events with no surviving resources disappear, and short-term
memory is wiped.

Eviction from a full short-term memory discards items that never survived a
consolidation; they were never committed, so nothing remembers them.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Mapping, Sequence, Union

from .errors import IntegrityError, UnknownResourceError, ValidationError
from .text_pipeline import Stemmer, default_stemmer

STM_CAPACITY = 7  # classic working-memory span
ACTIVATION_FLOOR = 0.2  # resident items below this count as faded at sleep
WEIGHT_FLOOR = 0.2  # items below this do not survive a consolidation sweep
INITIAL_ACTIVATION = 1.0
DEFAULT_RETRIEVAL_LIMIT = 3


class EmotionLabel(str, Enum):
    """Emotions an event can carry and the agent can express."""

    ANGER = "anger"
    DISGUST = "disgust"
    DOUBT = "doubt"
    FEAR = "fear"
    JOY = "joy"
    SADNESS = "sadness"
    SURPRISE = "surprise"
    WORRY = "worry"
    NEUTRAL = "neutral"


# Shown while consolidating; it is an expression only, never an event emotion.
EXPRESSION_SLEEPING = "sleeping"


class EventType(str, Enum):
    MEET_NEW_PERSON = "meet_new_person"
    LEARN_THING = "learn_thing"
    INTERACTION = "interaction"


# How strongly each kind of event is held on first storage.
INITIAL_WEIGHTS: Mapping[EventType, float] = {
    EventType.MEET_NEW_PERSON: 0.9,
    EventType.LEARN_THING: 0.9,
    EventType.INTERACTION: 0.1,
}


class ResourceType(str, Enum):
    GRAMMATICAL = "grammatical"
    IMAGE = "image"
    AUDIO = "audio"


FactValue = Union[bool, int, str, tuple]

# The only attributes a fact triple may carry about a person.
FACT_ATTRIBUTES = (
    "age",
    "works",
    "studies",
    "has_children",
    "children_count",
    "children_names",
)


@dataclass(frozen=True, order=True)
class Timestamp:
    """Logical ordering (seq, never reset) plus a wall-clock instant."""

    seq: int
    wall: float


@dataclass(frozen=True)
class FactTriple:
    """(subject person, attribute, value) carried by a Grammatical resource."""

    subject: str
    attribute: str
    value: FactValue


@dataclass(frozen=True)
class Payload:
    """Input specification for one resource of a new event."""

    resource_type: ResourceType = ResourceType.GRAMMATICAL
    token: str | None = None
    fact: FactTriple | None = None
    path: str | None = None
    tag: str | None = None


def grammatical(token: str, fact: FactTriple | None = None) -> Payload:
    return Payload(resource_type=ResourceType.GRAMMATICAL, token=token, fact=fact)


def image(path: str) -> Payload:
    return Payload(resource_type=ResourceType.IMAGE, path=path)


@dataclass
class Resource:
    """One piece of event-specific knowledge.

    Activation is only meaningful while the resource sits in short-term
    memory; weight is its long-term strength. ``consolidated`` records that
    the resource survived at least one sleep, which is what makes it safe to
    evict from short-term memory without losing it.
    """

    id: int
    timestamp: Timestamp
    resource_type: ResourceType
    owner_event_id: int
    activation: float = INITIAL_ACTIVATION
    weight: float = 0.0
    token: str | None = None
    fact: FactTriple | None = None
    path: str | None = None
    tag: str | None = None
    consolidated: bool = False


@dataclass
class GeneralEvent:
    """An episode: type, emotion, polarity, and the resources it owns."""

    id: int
    timestamp: Timestamp
    event_type: EventType
    emotion: EmotionLabel
    polarity: float
    resource_ids: list[int] = field(default_factory=list)


@dataclass
class PersonProfile:
    """A known person; facts about them are derived from live resources."""

    name: str  # display form
    first_met: Timestamp
    met_event_id: int


@dataclass
class ShortTermMemory:
    """Bounded working set: resource ids in insertion order plus a tick count."""

    slots: list[int] = field(default_factory=list)
    tick_counter: int = 0


@dataclass
class LongTermMemory:
    """Unbounded store of events, resources, and people (keyed by folded name)."""

    events: dict[int, GeneralEvent] = field(default_factory=dict)
    resources: dict[int, Resource] = field(default_factory=dict)
    people: dict[str, PersonProfile] = field(default_factory=dict)


@dataclass(frozen=True)
class Eviction:
    """Outcome of displacing a resource from a full short-term memory."""

    resource_id: int
    dropped: bool  # True when the item was never consolidated and is gone


@dataclass(frozen=True)
class RetrievalMatch:
    event: GeneralEvent
    matched_cues: tuple[str, ...]
    score: int


@dataclass(frozen=True)
class ConsolidationReport:
    """What one sleep did: weight reductions, deletions, and the STM wipe."""

    reduced: tuple[tuple[int, float, float], ...]  # (resource id, old, new)
    forgotten_resources: tuple[int, ...]
    forgotten_events: tuple[int, ...]
    stm_cleared_count: int


def normalize_person(name: str) -> str:
    """Canonical lookup key for a person name."""
    return " ".join(name.split()).casefold()


def display_person(name: str) -> str:
    """Canonical display form for a person name."""
    return " ".join(part.capitalize() for part in name.split())


class CountingClock:
    """Deterministic stand-in for time.time(); each call advances by step."""

    def __init__(self, start: float = 0.0, step: float = 1.0) -> None:
        self._next = start
        self._step = step

    def __call__(self) -> float:
        value = self._next
        self._next += self._step
        return value


class MemoryCore:
    """Owns the short-term working set, the long-term store, and all
    operations that move information between them.

    Args:
        ltm: existing long-term store to continue from; empty when omitted.
        clock: callable returning the wall-clock component of timestamps.
            Inject a CountingClock for reproducible runs.
        stemmer: stemmer used to match retrieval cues against stored tokens.
    """

    def __init__(
        self,
        ltm: LongTermMemory | None = None,
        clock: Callable[[], float] | None = None,
        stemmer: Stemmer | None = None,
    ) -> None:
        self.ltm = ltm if ltm is not None else LongTermMemory()
        self.stm = ShortTermMemory()
        self._clock = clock if clock is not None else time.time
        self._stemmer = stemmer or default_stemmer()
        self._next_event_id = max(self.ltm.events, default=0) + 1
        self._next_resource_id = max(self.ltm.resources, default=0) + 1
        seqs = [e.timestamp.seq for e in self.ltm.events.values()]
        seqs += [r.timestamp.seq for r in self.ltm.resources.values()]
        seqs += [p.first_met.seq for p in self.ltm.people.values()]
        self._next_seq = max(seqs, default=0) + 1

    # ── construction helpers ──────────────────────────────────────────────

    def _stamp(self) -> Timestamp:
        ts = Timestamp(seq=self._next_seq, wall=float(self._clock()))
        self._next_seq += 1
        return ts

    @staticmethod
    def _check_payload(payload: Payload) -> None:
        if payload.resource_type is ResourceType.GRAMMATICAL and not payload.token:
            raise ValidationError("grammatical payload requires a token")
        if payload.resource_type is ResourceType.IMAGE and not payload.path:
            raise ValidationError("image payload requires a path")
        if payload.fact is not None:
            if payload.fact.attribute not in FACT_ATTRIBUTES:
                raise ValidationError(
                    f"unsupported fact attribute {payload.fact.attribute!r}"
                )
            if not normalize_person(payload.fact.subject):
                raise ValidationError("fact subject must be non-empty")

    # ── core operations ───────────────────────────────────────────────────

    def create_event(
        self,
        event_type: EventType,
        emotion: EmotionLabel = EmotionLabel.NEUTRAL,
        polarity: float = 0.0,
        payloads: Sequence[Union[str, Payload]] = (),
    ) -> GeneralEvent:
        """Store a new event with one resource per payload.

        Each resource starts at the event type's initial weight with full
        activation and is inserted into short-term memory, which may evict
        (and permanently drop) a never-consolidated resident.

        Args:
            event_type: what kind of episode this is; fixes initial weight.
            emotion: label attached to the event.
            polarity: sentiment in [-1, 1].
            payloads: one or more resource specifications; bare strings are
                shorthand for grammatical tokens.

        Returns:
            The stored event (live object from the store).
        """
        if not isinstance(event_type, EventType):
            raise ValidationError(f"unknown event type {event_type!r}")
        if not isinstance(emotion, EmotionLabel):
            raise ValidationError(f"unknown emotion {emotion!r}")
        if not -1.0 <= polarity <= 1.0:
            raise ValidationError(f"polarity {polarity} outside [-1, 1]")
        specs = [grammatical(p) if isinstance(p, str) else p for p in payloads]
        if not specs:
            raise ValidationError("an event requires at least one payload")
        for spec in specs:
            self._check_payload(spec)

        event = GeneralEvent(
            id=self._next_event_id,
            timestamp=self._stamp(),
            event_type=event_type,
            emotion=emotion,
            polarity=float(polarity),
        )
        self._next_event_id += 1
        self.ltm.events[event.id] = event
        weight = INITIAL_WEIGHTS[event_type]
        for spec in specs:
            self._add_resource(event, spec, weight)
        return event

    def _add_resource(self, event: GeneralEvent, spec: Payload, weight: float) -> Resource:
        resource = Resource(
            id=self._next_resource_id,
            timestamp=self._stamp(),
            resource_type=spec.resource_type,
            owner_event_id=event.id,
            activation=INITIAL_ACTIVATION,
            weight=weight,
            token=spec.token,
            fact=spec.fact,
            path=spec.path,
            tag=spec.tag,
        )
        self._next_resource_id += 1
        self.ltm.resources[resource.id] = resource
        event.resource_ids.append(resource.id)
        self.stm_insert(resource.id)
        return resource

    def append_resource(self, event_id: int, payload: Union[str, Payload]) -> Resource:
        """Attach one more resource to an existing event (e.g. a second image)."""
        event = self.ltm.events.get(event_id)
        if event is None:
            raise UnknownResourceError(f"unknown event id {event_id}")
        spec = grammatical(payload) if isinstance(payload, str) else payload
        self._check_payload(spec)
        return self._add_resource(event, spec, INITIAL_WEIGHTS[event.event_type])

    def stm_insert(self, resource_id: int) -> Eviction | None:
        """Bring a stored resource into short-term memory at full activation.

        A resource already resident is just reactivated (no duplicate slot).
        When all slots are taken the minimum-weight resident is evicted first
        (ties: older timestamp, then smaller id); an evicted resident that
        never survived a consolidation is deleted from the store outright.

        Returns:
            The eviction that made room, or None if none was needed.
        """
        resource = self._resource_or_raise(resource_id)
        if resource_id in self.stm.slots:
            resource.activation = INITIAL_ACTIVATION
            return None
        eviction = None
        if len(self.stm.slots) >= STM_CAPACITY:
            victim_id = min(
                self.stm.slots,
                key=lambda rid: (
                    self.ltm.resources[rid].weight,
                    self.ltm.resources[rid].timestamp,
                    rid,
                ),
            )
            self.stm.slots.remove(victim_id)
            victim = self.ltm.resources[victim_id]
            dropped = not victim.consolidated
            if dropped:
                self._delete_resource(victim_id)
            eviction = Eviction(resource_id=victim_id, dropped=dropped)
        self.stm.slots.append(resource_id)
        resource.activation = INITIAL_ACTIVATION
        return eviction

    def decay_tick(self, ticks: int = 1) -> None:
        """Apply A <- ln(A + 1) to every resident activation, ticks times."""
        if ticks < 1:
            raise ValidationError("decay requires at least one tick")
        for _ in range(ticks):
            for rid in self.stm.slots:
                resource = self.ltm.resources[rid]
                resource.activation = math.log(resource.activation + 1.0)
        self.stm.tick_counter += ticks

    def rehearse(self, resource_id: int) -> None:
        """Mark a resource as used again: full activation, resident in STM."""
        resource = self._resource_or_raise(resource_id)
        if resource_id in self.stm.slots:
            resource.activation = INITIAL_ACTIVATION
        else:
            self.stm_insert(resource_id)

    def consolidate(self) -> ConsolidationReport:
        """Sleep: commit or weaken residents, sweep the store, wipe STM.

        Residents whose activation faded below the activation floor get
        weight <- ln(weight + 1); everything resident is marked consolidated.
        The store sweep then forgets every resource below the weight floor,
        removes events with no surviving resources, and drops people whose
        introduction event was forgotten. Short-term memory is erased and the
        tick counter reset. The sweep runs even when STM is empty.
        """
        reduced: list[tuple[int, float, float]] = []
        for rid in list(self.stm.slots):
            resource = self.ltm.resources[rid]
            if resource.activation < ACTIVATION_FLOOR:
                old = resource.weight
                resource.weight = math.log(old + 1.0)
                reduced.append((rid, old, resource.weight))
            resource.consolidated = True

        forgotten_resources = sorted(
            rid for rid, r in self.ltm.resources.items() if r.weight < WEIGHT_FLOOR
        )
        for rid in forgotten_resources:
            resource = self.ltm.resources.pop(rid)
            owner = self.ltm.events.get(resource.owner_event_id)
            if owner is not None and rid in owner.resource_ids:
                owner.resource_ids.remove(rid)

        forgotten_events = sorted(
            eid for eid, event in self.ltm.events.items() if not event.resource_ids
        )
        for eid in forgotten_events:
            del self.ltm.events[eid]

        for key in [
            k for k, p in self.ltm.people.items() if p.met_event_id not in self.ltm.events
        ]:
            del self.ltm.people[key]

        cleared = len(self.stm.slots)
        self.stm.slots.clear()
        self.stm.tick_counter = 0
        return ConsolidationReport(
            reduced=tuple(reduced),
            forgotten_resources=tuple(forgotten_resources),
            forgotten_events=tuple(forgotten_events),
            stm_cleared_count=cleared,
        )

    def retrieve(
        self, cues: Sequence[str], k: int = DEFAULT_RETRIEVAL_LIMIT
    ) -> list[RetrievalMatch]:
        """Generative recall: rank events by how many distinct cues they match.

        Cues are normalized and stemmed (idempotent for already-stemmed
        input). An event matches a cue when any of its grammatical resources
        stems to the cue. Ranking: match count desc, mean resource weight
        desc, timestamp desc, id asc. The matched resources of the returned
        events are rehearsed, which can itself evict from short-term memory.

        Args:
            cues: candidate stems; must be non-empty after normalization.
            k: maximum number of events returned (>= 1).

        Returns:
            Ranked matches, strongest first; empty when nothing matches.
        """
        if k < 1:
            raise ValidationError("retrieval limit must be at least 1")
        normalized: list[str] = []
        for cue in cues:
            stemmed = self._stemmer.stem(str(cue).strip().lower())
            if stemmed and stemmed not in normalized:
                normalized.append(stemmed)
        if not normalized:
            raise ValidationError("retrieval requires at least one non-empty cue")

        scored: list[tuple[GeneralEvent, tuple[str, ...], int, float]] = []
        for eid in sorted(self.ltm.events):
            event = self.ltm.events[eid]
            stems = {
                self._stemmer.stem(r.token)
                for r in (self.ltm.resources[rid] for rid in event.resource_ids)
                if r.resource_type is ResourceType.GRAMMATICAL and r.token
            }
            matched = tuple(c for c in normalized if c in stems)
            if not matched:
                continue
            weights = [self.ltm.resources[rid].weight for rid in event.resource_ids]
            scored.append((event, matched, len(matched), sum(weights) / len(weights)))

        scored.sort(key=lambda row: (-row[2], -row[3], -row[0].timestamp.seq, row[0].id))
        top = scored[:k]

        # Rank first, rehearse after: rehearsal can delete never-consolidated
        # residents, which must not disturb the ranking just computed.
        matches = [RetrievalMatch(event=e, matched_cues=m, score=s) for e, m, s, _ in top]
        for match in matches:
            cue_set = set(match.matched_cues)
            for rid in list(match.event.resource_ids):
                resource = self.ltm.resources.get(rid)
                if resource is None or resource.resource_type is not ResourceType.GRAMMATICAL:
                    continue
                if resource.token and self._stemmer.stem(resource.token) in cue_set:
                    self.rehearse(rid)
        return matches

    def fact_lookup(self, person: str, attribute: str) -> FactValue | None:
        """Return the value of the most recent live fact triple, if any.

        Args:
            person: person name in any casing.
            attribute: one of FACT_ATTRIBUTES.

        Returns:
            The stored value, or None when no live triple backs the fact.
        """
        if attribute not in FACT_ATTRIBUTES:
            raise ValidationError(f"unsupported fact attribute {attribute!r}")
        key = normalize_person(person)
        if not key:
            raise ValidationError("person name must be non-empty")
        best: Resource | None = None
        for rid in sorted(self.ltm.resources):
            resource = self.ltm.resources[rid]
            fact = resource.fact
            if fact is None or fact.attribute != attribute:
                continue
            if normalize_person(fact.subject) != key:
                continue
            if best is None or (resource.timestamp, resource.id) > (best.timestamp, best.id):
                best = resource
        return best.fact.value if best else None

    # ── people ────────────────────────────────────────────────────────────

    def person_known(self, name: str) -> bool:
        return normalize_person(name) in self.ltm.people

    def person_profile(self, name: str) -> PersonProfile | None:
        return self.ltm.people.get(normalize_person(name))

    def meet_person(
        self,
        name: str,
        emotion: EmotionLabel = EmotionLabel.NEUTRAL,
        polarity: float = 0.0,
    ) -> PersonProfile:
        """First introduction: store a meet event and register the profile."""
        key = normalize_person(name)
        if not key:
            raise ValidationError("person name must be non-empty")
        if key in self.ltm.people:
            raise ValidationError(f"person {key!r} is already known")
        event = self.create_event(
            EventType.MEET_NEW_PERSON, emotion, polarity, payloads=[key]
        )
        profile = PersonProfile(
            name=display_person(name), first_met=event.timestamp, met_event_id=event.id
        )
        self.ltm.people[key] = profile
        return profile

    def facts_for(self, person: str) -> dict[str, FactValue]:
        """Profile view: most recent live value per attribute."""
        return {
            attribute: value
            for attribute in FACT_ATTRIBUTES
            if (value := self.fact_lookup(person, attribute)) is not None
        }

    # ── internals ─────────────────────────────────────────────────────────

    def _resource_or_raise(self, resource_id: int) -> Resource:
        resource = self.ltm.resources.get(resource_id)
        if resource is None:
            raise UnknownResourceError(f"unknown resource id {resource_id}")
        return resource

    def _delete_resource(self, resource_id: int) -> None:
        resource = self.ltm.resources.pop(resource_id)
        owner = self.ltm.events.get(resource.owner_event_id)
        if owner is None:
            return
        if resource_id in owner.resource_ids:
            owner.resource_ids.remove(resource_id)
        if not owner.resource_ids:
            del self.ltm.events[owner.id]
            for key in [
                k for k, p in self.ltm.people.items() if p.met_event_id == owner.id
            ]:
                del self.ltm.people[key]

    def validate(self) -> None:
        """Full-scan referential-integrity check; raises IntegrityError."""
        validate_ltm(self.ltm)
        if len(self.stm.slots) > STM_CAPACITY:
            raise IntegrityError(f"STM holds {len(self.stm.slots)} items")
        if len(set(self.stm.slots)) != len(self.stm.slots):
            raise IntegrityError("STM holds duplicate slots")
        if self.stm.tick_counter < 0:
            raise IntegrityError("negative tick counter")
        for rid in self.stm.slots:
            resource = self.ltm.resources.get(rid)
            if resource is None:
                raise IntegrityError(f"STM slot references missing resource {rid}")
            if not 0.0 <= resource.activation <= 1.0:
                raise IntegrityError(f"resource {rid} activation out of range")


def validate_ltm(ltm: LongTermMemory) -> None:
    """Referential-integrity check of a long-term store alone."""
    for eid, event in ltm.events.items():
        if event.id != eid:
            raise IntegrityError(f"event {eid} stored under wrong key")
        if not event.resource_ids:
            raise IntegrityError(f"event {eid} has no resources")
        if len(set(event.resource_ids)) != len(event.resource_ids):
            raise IntegrityError(f"event {eid} lists a resource twice")
        if not -1.0 <= event.polarity <= 1.0:
            raise IntegrityError(f"event {eid} polarity out of range")
        for rid in event.resource_ids:
            resource = ltm.resources.get(rid)
            if resource is None:
                raise IntegrityError(f"event {eid} references missing resource {rid}")
            if resource.owner_event_id != eid:
                raise IntegrityError(f"resource {rid} owner mismatch for event {eid}")
    for rid, resource in ltm.resources.items():
        if resource.id != rid:
            raise IntegrityError(f"resource {rid} stored under wrong key")
        owner = ltm.events.get(resource.owner_event_id)
        if owner is None:
            raise IntegrityError(f"resource {rid} references missing event")
        if rid not in owner.resource_ids:
            raise IntegrityError(f"resource {rid} missing from its owner event")
        if not 0.0 <= resource.weight <= 1.0:
            raise IntegrityError(f"resource {rid} weight out of range")
        if resource.fact is not None and resource.fact.attribute not in FACT_ATTRIBUTES:
            raise IntegrityError(f"resource {rid} carries unsupported fact attribute")
    for key, profile in ltm.people.items():
        if normalize_person(profile.name) != key:
            raise IntegrityError(f"person {key!r} stored under wrong key")
        if profile.met_event_id not in ltm.events:
            raise IntegrityError(f"person {key!r} references missing event")
