"""Scripted dialogue control: intents, icebreaker questions, object teaching,
and the turn loop that wires utterances into memory.

The manager is a small finite-state machine. Every (phase, intent) pair has a
defined transition; anything the rule tables cannot interpret is either
recorded as a plain statement or, when it looks like a question, forwarded to
the fallback chatbot. Every turn stores exactly one event unless it is a pure
fact or object query answered from memory.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from enum import Enum

from .chatbot import CannedChatbotClient, ChatbotClient
from .errors import ChatbotError, ValidationError
from .memory_core import (
    EmotionLabel,
    EventType,
    FactTriple,
    GeneralEvent,
    MemoryCore,
    Payload,
    ResourceType,
    display_person,
    grammatical,
    image,
    normalize_person,
)
from .text_pipeline import (
    PolarityLexicon,
    Stemmer,
    default_lexicon,
    default_stemmer,
    default_stopwords,
    polarity,
    raw_tokens,
    tokenize,
)

# ── canonical reply strings ─────────────────────────────────────────────────

STRANGER_PROMPT = "Hello stranger! May I know your name?"
GREETING = "Greetings {name}!"
MEET_ACK = "Nice to meet you, {name}!"
NAME_REPROMPT = "I did not catch your name. May I know your name?"
FACT_ACK = "Thank you, I will remember that."
NOTED_ACK = "I see."
POSITIVE_ACK = "That sounds good!"
NEGATIVE_ACK = "I am sorry to hear that."
MEMORY_REF = "That reminds me of something: {tokens}."
OBJECT_UNKNOWN = (
    "No, I do not know what a {term} is. Would you like to show me a picture of one?"
)
OBJECT_SHOW = "Please show me a picture of a {term}."
OBJECT_ATTACH = "Please attach a picture of a {term}."
OBJECT_LEARNED = "Thank you! Now I know what a {term} looks like."
OBJECT_KNOWN = "Yes! A {term} looks like this: {path}"
OBJECT_KNOWN_NO_IMAGE = "Yes, I have heard of a {term}, but I cannot picture it."
IMAGE_MISSING = "I cannot find that picture ({path})."
OFFER_DECLINED = "Alright."
FALLBACK_APOLOGY = "I am sorry, I cannot answer that right now."

ICEBREAKER_QUESTIONS = {
    "age": "How old are you?",
    "work": "Do you work?",
    "study": "Do you study?",
    "children": "Do you have children?",
    "children_count": "How many children do you have?",
    "children_names": "What are their names?",
}
ICEBREAKER_ORDER = ("age", "work", "study", "children")
FOLLOW_UP_ORDER = ("children_count", "children_names")
# Which stored fact marks an icebreaker as answered.
QUESTION_FACT = {
    "age": "age",
    "work": "works",
    "study": "studies",
    "children": "has_children",
    "children_count": "children_count",
    "children_names": "children_names",
}

AFFIRMATIVE_WORDS = frozenset({"yes", "yeah", "yep", "sure", "ok", "okay", "certainly"})
NEGATIVE_WORDS = frozenset({"no", "nope", "nah", "not", "never", "dont"})
# Words that must not be mistaken for a bare name answer.
NON_NAME_WORDS = AFFIRMATIVE_WORDS | NEGATIVE_WORDS | frozenset(
    {"hello", "hi", "hey", "thanks", "thank", "bye", "goodbye", "maybe"}
)
INTERROGATIVE_STARTERS = frozenset(
    {
        "what", "who", "whom", "whose", "when", "where", "why", "how",
        "can", "could", "would", "will", "shall", "should", "may", "might",
        "do", "does", "did", "is", "are", "am", "was", "were",
    }
)


# ── dialogue state ──────────────────────────────────────────────────────────


class Phase(str, Enum):
    IDLE = "idle"
    AWAIT_NAME = "await_name"
    ICEBREAKER = "icebreaker"
    AWAIT_FOLLOW_UP = "await_follow_up"
    OFFER_IMAGE = "offer_image"
    AWAIT_IMAGE = "await_image"


@dataclass
class DialogueState:
    """Conversation-scoped state; long-term knowledge lives in memory."""

    phase: Phase = Phase.IDLE
    phase_arg: str | None = None  # pending question id or object term
    current_person: str | None = None  # normalized key
    asked: set[str] = field(default_factory=set)  # question ids asked this session
    pending_follow_ups: list[str] = field(default_factory=list)


@dataclass(frozen=True)
class TurnInput:
    """One user turn; at least one of text or attached_image is required."""

    text: str | None = None
    declared_person: str | None = None
    declared_emotion: EmotionLabel = EmotionLabel.NEUTRAL
    attached_image: str | None = None


@dataclass(frozen=True)
class AgentReply:
    text: str
    expression: str = EmotionLabel.NEUTRAL.value
    retrieved_event_ids: tuple[int, ...] = ()
    actions: tuple[str, ...] = ()


# ── intents ─────────────────────────────────────────────────────────────────


class IntentKind(Enum):
    FACT_QUERY = "fact_query"
    OBJECT_QUERY = "object_query"
    NAME_INTRO = "name_intro"
    STATEMENT = "statement"
    FALLBACK = "fallback"


@dataclass(frozen=True)
class Intent:
    kind: IntentKind
    person: str | None = None
    attribute: str | None = None
    term: str | None = None
    name: str | None = None


_NAME_INTRO_RE = re.compile(
    r"\b(?:my name is|i am called|call me)\s+([a-z][a-z'-]*(?:\s+[a-z][a-z'-]*)?)",
    re.IGNORECASE,
)
_FACT_QUERY_RES = (
    (re.compile(r"\bhow old is (\w+)", re.IGNORECASE), "age"),
    (re.compile(r"\bhow many children does (\w+) have", re.IGNORECASE), "children_count"),
    (re.compile(r"\bwhat are (\w+)'?s? children'?s? names", re.IGNORECASE), "children_names"),
    (re.compile(r"\bdoes (\w+) have (?:any )?(?:children|kids)", re.IGNORECASE), "has_children"),
    (re.compile(r"\bdoes (\w+) work", re.IGNORECASE), "works"),
    (re.compile(r"\bdoes (\w+) study", re.IGNORECASE), "studies"),
)
_OBJECT_QUERY_RES = (
    re.compile(r"\bdo you know what (?:a|an) ([\w-]+) is", re.IGNORECASE),
    re.compile(r"\bwhat(?: i|')s (?:a|an) ([\w-]+)", re.IGNORECASE),
    re.compile(r"\bwhat is (?:a|an) ([\w-]+)", re.IGNORECASE),
)


def parse_utterance(text: str, awaiting_name: bool = False) -> Intent:
    """Classify an utterance with ordered rule tables.

    Pattern queries win over the bare-name rule; the bare-name rule applies
    only while a name is being awaited. Unmatched text becomes a statement,
    or a fallback when it looks like a question.
    """
    stripped = text.strip()
    match = _NAME_INTRO_RE.search(stripped)
    if match:
        return Intent(kind=IntentKind.NAME_INTRO, name=match.group(1))
    for pattern, attribute in _FACT_QUERY_RES:
        match = pattern.search(stripped)
        if match:
            return Intent(
                kind=IntentKind.FACT_QUERY, person=match.group(1), attribute=attribute
            )
    for pattern in _OBJECT_QUERY_RES:
        match = pattern.search(stripped)
        if match:
            return Intent(kind=IntentKind.OBJECT_QUERY, term=match.group(1).lower())
    if awaiting_name:
        words = raw_tokens(stripped)
        if 1 <= len(words) <= 2 and all(w.isalpha() for w in words):
            if words[0] not in NON_NAME_WORDS:
                return Intent(kind=IntentKind.NAME_INTRO, name=" ".join(words))
    if _looks_like_question(stripped):
        return Intent(kind=IntentKind.FALLBACK)
    return Intent(kind=IntentKind.STATEMENT)


def _looks_like_question(text: str) -> bool:
    if text.rstrip().endswith("?"):
        return True
    words = raw_tokens(text)
    return bool(words) and words[0] in INTERROGATIVE_STARTERS


def _first_of(words: list[str], vocabulary: frozenset[str]) -> str | None:
    for word in words:
        if word in vocabulary:
            return word
    return None


def is_affirmative(text: str) -> bool:
    words = raw_tokens(text)
    yes = _first_of(words, AFFIRMATIVE_WORDS)
    no = _first_of(words, NEGATIVE_WORDS)
    if yes is None:
        return False
    return no is None or words.index(yes) < words.index(no)


def is_negative(text: str) -> bool:
    words = raw_tokens(text)
    no = _first_of(words, NEGATIVE_WORDS)
    yes = _first_of(words, AFFIRMATIVE_WORDS)
    if no is None:
        return False
    return yes is None or words.index(no) < words.index(yes)


# ── the manager ─────────────────────────────────────────────────────────────


class DialogueManager:
    """Turn orchestration over a MemoryCore.

    Args:
        memory: the memory this conversation reads and writes.
        chatbot: fallback client for unanswerable questions; defaults to the
            offline stub so everything runs without a network.
    """

    def __init__(
        self,
        memory: MemoryCore,
        chatbot: ChatbotClient | None = None,
        stopwords: frozenset[str] | None = None,
        lexicon: PolarityLexicon | None = None,
        stemmer: Stemmer | None = None,
    ) -> None:
        self.memory = memory
        self.chatbot = chatbot or CannedChatbotClient()
        self._stopwords = default_stopwords() if stopwords is None else stopwords
        self._lexicon = lexicon or default_lexicon()
        self._stemmer = stemmer or default_stemmer()

    # ── public operations ─────────────────────────────────────────────────

    def greet(self, state: DialogueState, person: str | None) -> AgentReply:
        """Resolve identity at session start or on an identity switch."""
        parts: list[str] = []
        actions: list[str] = []
        self._apply_identity(state, person, parts, actions)
        self._append_icebreaker(state, parts)
        return AgentReply(text=" ".join(parts), actions=tuple(actions))

    def handle_turn(
        self, state: DialogueState, turn: TurnInput
    ) -> tuple[DialogueState, AgentReply]:
        """Process one user turn and return the updated state and reply.

        Raises:
            ValidationError: when the turn carries neither text nor image.
        """
        if not (turn.text and turn.text.strip()) and not turn.attached_image:
            raise ValidationError("a turn requires text or an attached image")
        if not isinstance(turn.declared_emotion, EmotionLabel):
            raise ValidationError(f"unknown emotion {turn.declared_emotion!r}")

        parts: list[str] = []
        actions: list[str] = []
        retrieved: tuple[int, ...] = ()
        retrieved_emotion: EmotionLabel | None = None
        text = (turn.text or "").strip()

        switched_to_stranger = False
        if turn.declared_person:
            key = normalize_person(turn.declared_person)
            if key != state.current_person:
                self._apply_identity(state, turn.declared_person, parts, actions)
                switched_to_stranger = state.phase is Phase.AWAIT_NAME

        if switched_to_stranger or (
            state.current_person is None and state.phase is Phase.IDLE
        ):
            # First contact: prompt for a name; the utterance itself is still
            # remembered, but not interpreted as the name answer.
            if not switched_to_stranger:
                parts.append(STRANGER_PROMPT)
                actions.append("greet:stranger")
            state.phase = Phase.AWAIT_NAME
            state.phase_arg = None
            if text or turn.attached_image:
                self._store_interaction(turn, text, actions)
        else:
            intent = parse_utterance(text, awaiting_name=state.phase is Phase.AWAIT_NAME)
            retrieved, retrieved_emotion = self._dispatch(
                state, turn, text, intent, parts, actions
            )

        self._append_icebreaker(state, parts)
        expression = self._expression(retrieved_emotion, turn.declared_emotion)
        return state, AgentReply(
            text=" ".join(p for p in parts if p),
            expression=expression,
            retrieved_event_ids=retrieved,
            actions=tuple(actions),
        )

    def next_icebreaker(self, state: DialogueState) -> str | None:
        """First unanswered, not-yet-asked question for the current person.

        Follow-ups queued by a yes to the children question come first; they
        only exist while has_children is true. Questions whose fact already
        exists are never asked again.
        """
        if state.current_person is None:
            return None
        facts = self.memory.facts_for(state.current_person)
        if facts.get("has_children") is True:
            for qid in FOLLOW_UP_ORDER:
                if qid not in state.pending_follow_ups and QUESTION_FACT[qid] not in facts:
                    state.pending_follow_ups.append(qid)
        for qid in list(state.pending_follow_ups):
            if QUESTION_FACT[qid] in facts or qid in state.asked:
                continue
            return qid
        for qid in ICEBREAKER_ORDER:
            if QUESTION_FACT[qid] in facts or qid in state.asked:
                continue
            return qid
        return None

    def record_answer(
        self, state: DialogueState, question_id: str, text: str, turn: TurnInput | None = None
    ) -> dict[str, object]:
        """Extract the fact a question asked about and store it.

        Returns:
            The stored attribute/value pairs; empty when the answer did not
            parse (the raw tokens are then stored as a plain interaction).
        """
        if question_id not in ICEBREAKER_QUESTIONS:
            raise ValidationError(f"unknown question id {question_id!r}")
        turn = turn or TurnInput(text=text)
        person = state.current_person or ""
        facts = self._extract_answer(question_id, text)
        if not facts:
            self._store_interaction(turn, text, actions=[])
            return {}
        payloads = []
        for attribute, value in facts.items():
            token = self._fact_token(attribute, value)
            payloads.append(
                grammatical(token, fact=FactTriple(person, attribute, value))
            )
        self.memory.create_event(
            EventType.LEARN_THING,
            emotion=turn.declared_emotion,
            polarity=polarity(text, self._lexicon),
            payloads=payloads,
        )
        if facts.get("has_children") is True:
            for qid in FOLLOW_UP_ORDER:
                if qid not in state.pending_follow_ups:
                    state.pending_follow_ups.append(qid)
        return facts

    def learn_object(self, term: str, path: str, turn: TurnInput | None = None) -> GeneralEvent:
        """Store (or extend) the learn event binding a term to an image.

        Raises:
            ValidationError: empty term or missing image file.
        """
        term_token = self._stemmer.stem(term.strip().lower())
        if not term_token:
            raise ValidationError("term must be non-empty")
        if not path or not os.path.isfile(path):
            raise ValidationError(f"image file not found: {path}")
        emotion = turn.declared_emotion if turn else EmotionLabel.NEUTRAL
        existing = self._object_event(term_token)
        if existing is not None:
            self.memory.append_resource(existing.id, image(path))
            for rid in existing.resource_ids:
                resource = self.memory.ltm.resources[rid]
                if resource.resource_type is ResourceType.GRAMMATICAL:
                    self.memory.rehearse(rid)
            return existing
        return self.memory.create_event(
            EventType.LEARN_THING, emotion=emotion, payloads=[grammatical(term_token), image(path)]
        )

    def fallback(self, text: str) -> str:
        """Ask the fallback chatbot; degrade to an apology on failure."""
        try:
            return self.chatbot.reply(text)
        except ChatbotError:
            return FALLBACK_APOLOGY

    # ── phase dispatch ────────────────────────────────────────────────────

    def _dispatch(
        self,
        state: DialogueState,
        turn: TurnInput,
        text: str,
        intent: Intent,
        parts: list[str],
        actions: list[str],
    ) -> tuple[tuple[int, ...], EmotionLabel | None]:
        retrieved: tuple[int, ...] = ()
        retrieved_emotion: EmotionLabel | None = None

        if state.phase is Phase.AWAIT_NAME:
            if intent.kind is IntentKind.NAME_INTRO:
                self._introduce(state, intent.name or "", parts, actions)
            elif intent.kind is IntentKind.FACT_QUERY:
                parts.append(self._answer_fact(intent, actions))
            elif intent.kind is IntentKind.OBJECT_QUERY:
                # Answer, but do not open a teaching exchange mid-handshake.
                reply, _known = self._object_recall(intent.term or "", actions)
                parts.append(reply)
            else:
                self._store_interaction(turn, text, actions)
                parts.append(NAME_REPROMPT)
            return retrieved, retrieved_emotion

        if state.phase is Phase.OFFER_IMAGE:
            term = state.phase_arg or ""
            if turn.attached_image:
                # Attaching a picture is an implicit yes to the offer; fall
                # through to the AWAIT_IMAGE block, which consumes it.
                state.phase = Phase.AWAIT_IMAGE
            elif is_affirmative(text):
                state.phase = Phase.AWAIT_IMAGE
                parts.append(OBJECT_SHOW.format(term=term))
                self._store_interaction(turn, text, actions)
                return retrieved, retrieved_emotion
            elif is_negative(text):
                state.phase = Phase.IDLE
                state.phase_arg = None
                parts.append(OFFER_DECLINED)
                self._store_interaction(turn, text, actions)
                return retrieved, retrieved_emotion
            else:
                # Anything else abandons the offer and is handled normally.
                state.phase = Phase.IDLE
                state.phase_arg = None

        if state.phase is Phase.AWAIT_IMAGE:
            term = state.phase_arg or ""
            if turn.attached_image:
                state.phase = Phase.IDLE
                state.phase_arg = None
                try:
                    self.learn_object(term, turn.attached_image, turn)
                    parts.append(OBJECT_LEARNED.format(term=term))
                    actions.append(f"teach:{term}")
                except ValidationError:
                    parts.append(IMAGE_MISSING.format(path=turn.attached_image))
            elif is_negative(text):
                state.phase = Phase.IDLE
                state.phase_arg = None
                parts.append(OFFER_DECLINED)
                self._store_interaction(turn, text, actions)
            else:
                parts.append(OBJECT_ATTACH.format(term=term))
                self._store_interaction(turn, text, actions)
            return retrieved, retrieved_emotion

        if intent.kind is IntentKind.NAME_INTRO:
            self._introduce(state, intent.name or "", parts, actions)
        elif intent.kind is IntentKind.FACT_QUERY:
            parts.append(self._answer_fact(intent, actions))
        elif intent.kind is IntentKind.OBJECT_QUERY:
            term = intent.term or ""
            reply, known = self._object_recall(term, actions)
            parts.append(reply)
            if not known:
                state.phase = Phase.OFFER_IMAGE
                state.phase_arg = term
        elif intent.kind is IntentKind.FALLBACK:
            # Questions keep any pending icebreaker; statements answer it.
            parts.append(self.fallback(text))
            actions.append("fallback")
            self._store_interaction(turn, text, actions)
        elif state.phase in (Phase.ICEBREAKER, Phase.AWAIT_FOLLOW_UP):
            question_id = state.phase_arg or ""
            state.phase = Phase.IDLE
            state.phase_arg = None
            stored = self.record_answer(state, question_id, text, turn)
            actions.append(f"answer:{question_id}")
            parts.append(FACT_ACK if stored else NOTED_ACK)
        else:
            retrieved, retrieved_emotion = self._statement(turn, text, parts, actions)
        return retrieved, retrieved_emotion

    # ── helpers ───────────────────────────────────────────────────────────

    def _apply_identity(
        self, state: DialogueState, person: str | None, parts: list[str], actions: list[str]
    ) -> None:
        state.phase_arg = None
        if person and self.memory.person_known(person):
            profile = self.memory.person_profile(person)
            state.current_person = normalize_person(person)
            state.phase = Phase.IDLE
            parts.append(GREETING.format(name=profile.name))
            actions.append("greet:known")
        else:
            state.current_person = None
            state.phase = Phase.AWAIT_NAME
            parts.append(STRANGER_PROMPT)
            actions.append("greet:stranger")

    def _introduce(
        self, state: DialogueState, name: str, parts: list[str], actions: list[str]
    ) -> None:
        key = normalize_person(name)
        if not key:
            parts.append(NAME_REPROMPT)
            state.phase = Phase.AWAIT_NAME
            return
        if self.memory.person_known(key):
            profile = self.memory.person_profile(key)
            parts.append(GREETING.format(name=profile.name))
            actions.append("greet:known")
        else:
            profile = self.memory.meet_person(name)
            parts.append(MEET_ACK.format(name=profile.name))
            actions.append(f"event:meet_new_person:{profile.met_event_id}")
        state.current_person = key
        state.phase = Phase.IDLE
        state.phase_arg = None

    def _append_icebreaker(self, state: DialogueState, parts: list[str]) -> None:
        # At most one question per turn, and only when nothing is pending.
        if state.phase is not Phase.IDLE or state.current_person is None:
            return
        question_id = self.next_icebreaker(state)
        if question_id is None:
            return
        parts.append(ICEBREAKER_QUESTIONS[question_id])
        state.asked.add(question_id)
        state.phase = (
            Phase.AWAIT_FOLLOW_UP if question_id in FOLLOW_UP_ORDER else Phase.ICEBREAKER
        )
        state.phase_arg = question_id

    def _statement(
        self, turn: TurnInput, text: str, parts: list[str], actions: list[str]
    ) -> tuple[tuple[int, ...], EmotionLabel | None]:
        cues = tokenize(text, self._stopwords, self._stemmer)
        matches = self.memory.retrieve(cues) if cues else []
        if matches:
            actions.append(f"retrieve:{len(matches)}")
        score = polarity(text, self._lexicon)
        self._store_interaction(turn, text, actions, score)
        retrieved_emotion: EmotionLabel | None = None
        if matches:
            top = matches[0]
            tokens = [
                resource.token
                for resource in (
                    self.memory.ltm.resources.get(rid) for rid in top.event.resource_ids
                )
                if resource is not None
                and resource.resource_type is ResourceType.GRAMMATICAL
                and resource.token
            ]
            parts.append(MEMORY_REF.format(tokens=", ".join(tokens)))
            if top.event.emotion is not EmotionLabel.NEUTRAL:
                retrieved_emotion = top.event.emotion
        elif score > 0.25:
            parts.append(POSITIVE_ACK)
        elif score < -0.25:
            parts.append(NEGATIVE_ACK)
        else:
            parts.append(NOTED_ACK)
        return tuple(m.event.id for m in matches), retrieved_emotion

    def _store_interaction(
        self,
        turn: TurnInput,
        text: str,
        actions: list[str],
        score: float | None = None,
    ) -> GeneralEvent:
        payloads: list[Payload] = [
            grammatical(tok) for tok in tokenize(text, self._stopwords, self._stemmer)
        ]
        if not payloads and text:
            # Nothing survived the pipeline; keep the normalized utterance.
            payloads = [grammatical(" ".join(raw_tokens(text)) or text.lower())]
        if turn.attached_image:
            payloads.append(image(turn.attached_image))
        event = self.memory.create_event(
            EventType.INTERACTION,
            emotion=turn.declared_emotion,
            polarity=polarity(text, self._lexicon) if score is None else score,
            payloads=payloads,
        )
        actions.append(f"event:interaction:{event.id}")
        return event

    def _answer_fact(self, intent: Intent, actions: list[str]) -> str:
        person = intent.person or ""
        attribute = intent.attribute or ""
        actions.append(f"fact_lookup:{attribute}")
        profile = self.memory.person_profile(person)
        display = profile.name if profile else display_person(person)
        value = self.memory.fact_lookup(person, attribute)
        if value is None:
            return {
                "age": f"I do not know how old {display} is.",
                "works": f"I do not know whether {display} works.",
                "studies": f"I do not know whether {display} studies.",
                "has_children": f"I do not know whether {display} has children.",
                "children_count": f"I do not know how many children {display} has.",
                "children_names": f"I do not know the names of {display}'s children.",
            }[attribute]
        if attribute == "age":
            return f"{display} is {value} years old."
        if attribute == "works":
            if value is True:
                return f"Yes, {display} works."
            if value is False:
                return f"No, {display} does not work."
            return f"{display} works {value}."
        if attribute == "studies":
            if value is True:
                return f"Yes, {display} studies."
            if value is False:
                return f"No, {display} does not study."
            return f"{display} studies {value}."
        if attribute == "has_children":
            if value is True:
                return f"Yes, {display} has children."
            return f"No, {display} does not have children."
        if attribute == "children_count":
            return f"{display} has {value} children."
        names = ", ".join(value) if isinstance(value, tuple) else str(value)
        return f"{display}'s children are {names}."

    def _object_event(self, term_token: str) -> GeneralEvent | None:
        best: GeneralEvent | None = None
        for eid in sorted(self.memory.ltm.events):
            event = self.memory.ltm.events[eid]
            if event.event_type is not EventType.LEARN_THING:
                continue
            for rid in event.resource_ids:
                resource = self.memory.ltm.resources[rid]
                if (
                    resource.resource_type is ResourceType.GRAMMATICAL
                    and resource.token
                    and resource.fact is None
                    and self._stemmer.stem(resource.token) == term_token
                ):
                    if best is None or event.timestamp > best.timestamp:
                        best = event
                    break
        return best

    def _object_recall(self, term: str, actions: list[str]) -> tuple[str, bool]:
        term_token = self._stemmer.stem(term.strip().lower())
        actions.append(f"object_lookup:{term_token}")
        event = self._object_event(term_token)
        if event is None:
            return OBJECT_UNKNOWN.format(term=term), False
        newest_image = None
        for rid in event.resource_ids:
            resource = self.memory.ltm.resources[rid]
            if resource.resource_type is ResourceType.GRAMMATICAL:
                self.memory.rehearse(rid)
            elif resource.resource_type is ResourceType.IMAGE:
                if newest_image is None or resource.timestamp > newest_image.timestamp:
                    newest_image = resource
        if newest_image is None:
            return OBJECT_KNOWN_NO_IMAGE.format(term=term), True
        self.memory.rehearse(newest_image.id)
        return OBJECT_KNOWN.format(term=term, path=newest_image.path), True

    def _extract_answer(self, question_id: str, text: str) -> dict[str, object]:
        lower = text.lower()
        words = raw_tokens(text)
        if question_id == "age":
            match = re.search(r"\b(\d{1,3})\b", lower)
            return {"age": int(match.group(1))} if match else {}
        if question_id == "work":
            if is_negative(text):
                return {"works": False}
            match = re.search(r"\bwork(?:s|ing)? (?:as|at|in|for) ([\w\s'-]+)", lower)
            if match:
                return {"works": match.group(1).strip()}
            if is_affirmative(text) or any(w.startswith("work") for w in words):
                return {"works": True}
            return {}
        if question_id == "study":
            if is_negative(text):
                return {"studies": False}
            match = re.search(r"\bstud(?:y|ies|ying) (?:at|in) ([\w\s'-]+)", lower)
            if match:
                return {"studies": match.group(1).strip()}
            if is_affirmative(text) or any(w.startswith("stud") for w in words):
                return {"studies": True}
            return {}
        if question_id == "children":
            if is_negative(text):
                return {"has_children": False}
            if is_affirmative(text) or "children" in words or "kids" in words:
                facts: dict[str, object] = {"has_children": True}
                match = re.search(r"\b(\d{1,2})\b", lower)
                if match:
                    facts["children_count"] = int(match.group(1))
                return facts
            return {}
        if question_id == "children_count":
            match = re.search(r"\b(\d{1,2})\b", lower)
            if match:
                return {"children_count": int(match.group(1))}
            number_words = {
                "one": 1, "two": 2, "three": 3, "four": 4, "five": 5,
                "six": 6, "seven": 7, "eight": 8, "nine": 9, "ten": 10,
            }
            for word in words:
                if word in number_words:
                    return {"children_count": number_words[word]}
            return {}
        # children_names: strip filler words, split on separators.
        cleaned = re.sub(r"\b(their|names|name|are|is|and|called|they)\b", ",", lower)
        cleaned = re.sub(r"[^a-z',\s-]", "", cleaned)
        names = tuple(
            display_person(part.strip())
            for part in cleaned.replace(" and ", ",").split(",")
            if part.strip() and part.strip() not in NON_NAME_WORDS
        )
        return {"children_names": names} if names else {}

    @staticmethod
    def _fact_token(attribute: str, value: object) -> str:
        if attribute in ("age", "children_count"):
            return str(value)
        if attribute == "works":
            return value if isinstance(value, str) else "work"
        if attribute == "studies":
            return value if isinstance(value, str) else "study"
        if attribute == "has_children":
            return "children"
        if isinstance(value, tuple):
            return " ".join(v.lower() for v in value)
        return str(value).lower()

    @staticmethod
    def _expression(
        retrieved_emotion: EmotionLabel | None, declared: EmotionLabel
    ) -> str:
        if retrieved_emotion is not None and retrieved_emotion is not EmotionLabel.NEUTRAL:
            return retrieved_emotion.value
        if declared is not EmotionLabel.NEUTRAL:
            return declared.value
        return EmotionLabel.NEUTRAL.value
