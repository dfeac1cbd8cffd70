"""Session orchestration shared by the CLI and the REST service.

The engine owns one memory core and one dialogue manager; sessions are
conversation states over that shared memory. All mutating entry points take
a lock so interleaved callers cannot corrupt the store. Time advances one
decay tick per dialogue turn in "turns" mode, or with the wall clock in
"seconds" mode.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass, field

from .chatbot import ChatbotClient, chatbot_from_config
from .dialogue_manager import (
    OBJECT_LEARNED,
    AgentReply,
    DialogueManager,
    DialogueState,
    Phase,
    TurnInput,
)
from .errors import UnknownSessionError
from .memory_core import (
    ConsolidationReport,
    CountingClock,
    EXPRESSION_SLEEPING,
    MemoryCore,
    ResourceType,
)
from .persistence import (
    AgentConfig,
    event_record,
    load_ltm,
    person_record,
    resource_record,
    save_ltm,
)
from .text_pipeline import Stemmer, load_lexicon, load_stemmer_rules, load_stopwords

SLEEP_SUMMARY = (
    "Zzz... {reduced} weights reduced, {resources} resources forgotten, "
    "{events} events forgotten."
)


@dataclass
class Session:
    id: str
    state: DialogueState = field(default_factory=DialogueState)
    turns: int = 0


def resource_label(resource) -> str:
    """Short human-readable handle for a resource in views."""
    if resource.resource_type is ResourceType.GRAMMATICAL:
        return resource.token or ""
    if resource.resource_type is ResourceType.IMAGE:
        return resource.path or ""
    return resource.tag or ""


class AgentEngine:
    """One agent: shared memory, dialogue policy, named sessions.

    Args:
        config: resolved runtime configuration.
        chatbot: fallback client override; built from config when omitted.
        clock: timestamp source override. By default "turns" mode uses a
            deterministic counter (reproducible runs) and "seconds" mode the
            wall clock.
    """

    def __init__(
        self,
        config: AgentConfig | None = None,
        chatbot: ChatbotClient | None = None,
        clock=None,
    ) -> None:
        self.config = config or AgentConfig()
        if clock is None:
            clock = time.time if self.config.tick_mode == "seconds" else CountingClock()
        self._clock = clock
        self._stemmer = Stemmer(
            load_stemmer_rules(self.config.stemmer_rules_path)
            if self.config.stemmer_rules_path
            else None
        )
        stopwords = load_stopwords(self.config.stopwords_path)
        lexicon = load_lexicon(self.config.lexicon_path)
        self.memory = MemoryCore(clock=clock, stemmer=self._stemmer)
        self.dialogue = DialogueManager(
            self.memory,
            chatbot=chatbot
            or chatbot_from_config(self.config.chatbot_url, self.config.chatbot_timeout),
            stopwords=stopwords,
            lexicon=lexicon,
            stemmer=self._stemmer,
        )
        self.sessions: dict[str, Session] = {}
        self._lock = threading.RLock()
        self._session_counter = 0
        self._last_decay = float(clock()) if self.config.tick_mode == "seconds" else 0.0
        self._wallclock = clock

    # ── persistence ───────────────────────────────────────────────────────

    def load(self) -> bool:
        """Load the store from the configured path; False when absent."""
        with self._lock:
            try:
                ltm = load_ltm(self.config.ltm_path)
            except FileNotFoundError:
                return False
            self.memory = MemoryCore(ltm=ltm, clock=self._clock, stemmer=self._stemmer)
            self.dialogue.memory = self.memory
            return True

    def save(self) -> int:
        with self._lock:
            return save_ltm(self.memory.ltm, self.config.ltm_path)

    # ── sessions ──────────────────────────────────────────────────────────

    def create_session(self) -> Session:
        with self._lock:
            self._session_counter += 1
            session = Session(id=f"s-{self._session_counter}")
            self.sessions[session.id] = session
            return session

    def session(self, session_id: str) -> Session:
        found = self.sessions.get(session_id)
        if found is None:
            raise UnknownSessionError(f"unknown session {session_id!r}")
        return found

    def list_sessions(self) -> list[dict[str, object]]:
        with self._lock:
            return [
                {"session_id": s.id, "turns": s.turns, "phase": s.state.phase.value}
                for s in sorted(self.sessions.values(), key=lambda s: s.id)
            ]

    # ── turns ─────────────────────────────────────────────────────────────

    def post_turn(self, session_id: str, turn: TurnInput) -> AgentReply:
        """Advance time, then run one dialogue turn inside the lock."""
        with self._lock:
            session = self.session(session_id)
            self._advance_time()
            session.state, reply = self.dialogue.handle_turn(session.state, turn)
            session.turns += 1
            return reply

    def identify(self, session_id: str, name: str | None) -> AgentReply:
        with self._lock:
            session = self.session(session_id)
            return self.dialogue.greet(session.state, name)

    def sleep(self, session_id: str | None = None) -> tuple[ConsolidationReport, AgentReply]:
        """Consolidate the shared memory; reply wears the sleeping face."""
        with self._lock:
            if session_id is not None:
                self.session(session_id)
            report = self.memory.consolidate()
            reply = AgentReply(
                text=SLEEP_SUMMARY.format(
                    reduced=len(report.reduced),
                    resources=len(report.forgotten_resources),
                    events=len(report.forgotten_events),
                ),
                expression=EXPRESSION_SLEEPING,
                actions=("consolidate",),
            )
            return report, reply

    def teach(self, term: str, image_path: str, session_id: str | None = None) -> AgentReply:
        """Direct teaching, outside the offer/await exchange."""
        with self._lock:
            event = self.dialogue.learn_object(term, image_path)
            if session_id is not None:
                # Teaching satisfies any pending picture request.
                state = self.session(session_id).state
                if state.phase in (Phase.OFFER_IMAGE, Phase.AWAIT_IMAGE):
                    state.phase = Phase.IDLE
                    state.phase_arg = None
            return AgentReply(
                text=OBJECT_LEARNED.format(term=term.strip().lower()),
                actions=(f"teach:{term.strip().lower()}", f"event:learn_thing:{event.id}"),
            )

    def tick(self, ticks: int = 1) -> None:
        with self._lock:
            self.memory.decay_tick(ticks)

    def _advance_time(self) -> None:
        if self.config.tick_mode == "seconds":
            now = float(self._wallclock())
            elapsed = now - self._last_decay
            ticks = int(elapsed // self.config.tick_seconds)
            if ticks > 0:
                self.memory.decay_tick(ticks)
                self._last_decay += ticks * self.config.tick_seconds
        else:
            self.memory.decay_tick(1)

    # ── views ─────────────────────────────────────────────────────────────

    def stm_view(self) -> dict[str, object]:
        with self._lock:
            slots = []
            for rid in self.memory.stm.slots:
                resource = self.memory.ltm.resources[rid]
                slots.append(
                    {
                        "resource_id": rid,
                        "label": resource_label(resource),
                        "activation": resource.activation,
                        "weight": resource.weight,
                    }
                )
            return {"tick_counter": self.memory.stm.tick_counter, "slots": slots}

    def ltm_view(self) -> dict[str, object]:
        with self._lock:
            ltm = self.memory.ltm
            return {
                "counts": {
                    "events": len(ltm.events),
                    "resources": len(ltm.resources),
                    "people": len(ltm.people),
                },
                "events": [event_record(ltm.events[eid]) for eid in sorted(ltm.events)],
                "resources": [
                    resource_record(ltm.resources[rid]) for rid in sorted(ltm.resources)
                ],
                "people": [person_record(ltm.people[key]) for key in sorted(ltm.people)],
            }

    def people_view(self) -> list[dict[str, object]]:
        with self._lock:
            people = []
            for key in sorted(self.memory.ltm.people):
                profile = self.memory.ltm.people[key]
                facts = {
                    attr: list(value) if isinstance(value, tuple) else value
                    for attr, value in self.memory.facts_for(key).items()
                }
                people.append(
                    {
                        "name": profile.name,
                        "first_met": {
                            "seq": profile.first_met.seq,
                            "wall": profile.first_met.wall,
                        },
                        "facts": facts,
                    }
                )
            return people

    def events_by_cue(self, cues: list[str], k: int = 3) -> list[dict[str, object]]:
        with self._lock:
            matches = self.memory.retrieve(cues, k=k)
            return [
                {
                    "event": event_record(m.event),
                    "matched_cues": list(m.matched_cues),
                    "score": m.score,
                }
                for m in matches
            ]
