"""Line-delimited JSON persistence for the long-term store, plus config.

Files are UTF-8 with LF line endings, one record per line, sorted by
(kind, id-or-name) with keys sorted inside each record, so saving the same
store twice produces byte-identical files. Writes go to a temp file in the
target directory and are renamed into place, so a failed save never damages
the previous file.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Mapping

from .errors import PersistenceError, ValidationError
from .memory_core import (
    EmotionLabel,
    EventType,
    FactTriple,
    GeneralEvent,
    LongTermMemory,
    PersonProfile,
    Resource,
    ResourceType,
    Timestamp,
    normalize_person,
    validate_ltm,
)

DEFAULT_LTM_PATH = "./arthur_ltm.jsonl"
ENV_LTM_PATH = "ARTHUR_LTM_PATH"
ENV_CHATBOT_URL = "ARTHUR_CHATBOT_URL"


# ── record serialization ────────────────────────────────────────────────────


def event_record(event: GeneralEvent) -> dict[str, Any]:
    return {
        "kind": "event",
        "id": event.id,
        "seq": event.timestamp.seq,
        "wall": event.timestamp.wall,
        "event_type": event.event_type.value,
        "emotion": event.emotion.value,
        "polarity": event.polarity,
        "resource_ids": list(event.resource_ids),
    }


def person_record(profile: PersonProfile) -> dict[str, Any]:
    return {
        "kind": "person",
        "name": profile.name,
        "seq": profile.first_met.seq,
        "wall": profile.first_met.wall,
        "met_event_id": profile.met_event_id,
    }


def resource_record(resource: Resource) -> dict[str, Any]:
    fact = resource.fact
    return {
        "kind": "resource",
        "id": resource.id,
        "seq": resource.timestamp.seq,
        "wall": resource.timestamp.wall,
        "resource_type": resource.resource_type.value,
        "owner_event_id": resource.owner_event_id,
        "activation": resource.activation,
        "weight": resource.weight,
        "token": resource.token,
        "fact": None
        if fact is None
        else {
            "subject": fact.subject,
            "attribute": fact.attribute,
            "value": list(fact.value) if isinstance(fact.value, tuple) else fact.value,
        },
        "path": resource.path,
        "tag": resource.tag,
        "consolidated": resource.consolidated,
    }


def _require(record: Mapping[str, Any], key: str, lineno: int) -> Any:
    if key not in record:
        raise PersistenceError(f"line {lineno}: record missing key {key!r}")
    return record[key]


def _timestamp(record: Mapping[str, Any], lineno: int) -> Timestamp:
    return Timestamp(
        seq=int(_require(record, "seq", lineno)),
        wall=float(_require(record, "wall", lineno)),
    )


def _event_from_record(record: Mapping[str, Any], lineno: int) -> GeneralEvent:
    try:
        return GeneralEvent(
            id=int(_require(record, "id", lineno)),
            timestamp=_timestamp(record, lineno),
            event_type=EventType(_require(record, "event_type", lineno)),
            emotion=EmotionLabel(_require(record, "emotion", lineno)),
            polarity=float(_require(record, "polarity", lineno)),
            resource_ids=[int(r) for r in _require(record, "resource_ids", lineno)],
        )
    except (TypeError, ValueError) as exc:
        raise PersistenceError(f"line {lineno}: bad event record: {exc}") from exc


def _person_from_record(record: Mapping[str, Any], lineno: int) -> PersonProfile:
    try:
        return PersonProfile(
            name=str(_require(record, "name", lineno)),
            first_met=_timestamp(record, lineno),
            met_event_id=int(_require(record, "met_event_id", lineno)),
        )
    except (TypeError, ValueError) as exc:
        raise PersistenceError(f"line {lineno}: bad person record: {exc}") from exc


def _resource_from_record(record: Mapping[str, Any], lineno: int) -> Resource:
    raw_fact = record.get("fact")
    fact = None
    if raw_fact is not None:
        value = raw_fact.get("value")
        if isinstance(value, list):
            value = tuple(value)
        fact = FactTriple(
            subject=str(raw_fact.get("subject", "")),
            attribute=str(raw_fact.get("attribute", "")),
            value=value,
        )
    try:
        return Resource(
            id=int(_require(record, "id", lineno)),
            timestamp=_timestamp(record, lineno),
            resource_type=ResourceType(_require(record, "resource_type", lineno)),
            owner_event_id=int(_require(record, "owner_event_id", lineno)),
            activation=float(_require(record, "activation", lineno)),
            weight=float(_require(record, "weight", lineno)),
            token=record.get("token"),
            fact=fact,
            path=record.get("path"),
            tag=record.get("tag"),
            consolidated=bool(_require(record, "consolidated", lineno)),
        )
    except (TypeError, ValueError) as exc:
        raise PersistenceError(f"line {lineno}: bad resource record: {exc}") from exc


# ── save / load ─────────────────────────────────────────────────────────────


def save_ltm(ltm: LongTermMemory, path: str | Path) -> int:
    """Write the store to ``path`` atomically.

    Returns:
        Number of bytes written.
    """
    records: list[dict[str, Any]] = []
    for eid in sorted(ltm.events):
        records.append(event_record(ltm.events[eid]))
    for key in sorted(ltm.people):
        records.append(person_record(ltm.people[key]))
    for rid in sorted(ltm.resources):
        records.append(resource_record(ltm.resources[rid]))
    lines = [
        json.dumps(record, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
        for record in records
    ]
    data = ("\n".join(lines) + "\n" if lines else "").encode("utf-8")

    target = Path(path)
    tmp_name = None
    try:
        fd, tmp_name = tempfile.mkstemp(
            prefix=target.name + ".", suffix=".tmp", dir=str(target.parent) or "."
        )
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
            handle.flush()
            os.fsync(handle.fileno())
        os.replace(tmp_name, target)
        tmp_name = None
    except OSError as exc:
        raise PersistenceError(f"cannot save store to {target}: {exc}") from exc
    finally:
        if tmp_name is not None and os.path.exists(tmp_name):
            os.unlink(tmp_name)
    return len(data)


def load_ltm(path: str | Path) -> LongTermMemory:
    """Read a store back; missing file raises FileNotFoundError.

    Malformed lines raise PersistenceError naming the line number; a store
    that parses but has dangling references raises IntegrityError.
    """
    target = Path(path)
    text = target.read_text(encoding="utf-8")  # FileNotFoundError propagates
    ltm = LongTermMemory()
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            raise PersistenceError(f"line {lineno}: blank line in store")
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise PersistenceError(f"line {lineno}: malformed JSON: {exc}") from exc
        if not isinstance(record, dict):
            raise PersistenceError(f"line {lineno}: record is not an object")
        kind = record.get("kind")
        if kind == "event":
            event = _event_from_record(record, lineno)
            if event.id in ltm.events:
                raise PersistenceError(f"line {lineno}: duplicate event id {event.id}")
            ltm.events[event.id] = event
        elif kind == "person":
            profile = _person_from_record(record, lineno)
            key = normalize_person(profile.name)
            if key in ltm.people:
                raise PersistenceError(f"line {lineno}: duplicate person {key!r}")
            ltm.people[key] = profile
        elif kind == "resource":
            resource = _resource_from_record(record, lineno)
            if resource.id in ltm.resources:
                raise PersistenceError(
                    f"line {lineno}: duplicate resource id {resource.id}"
                )
            ltm.resources[resource.id] = resource
        else:
            raise PersistenceError(f"line {lineno}: unknown record kind {kind!r}")
    validate_ltm(ltm)
    return ltm


# ── configuration ───────────────────────────────────────────────────────────


@dataclass(frozen=True)
class AgentConfig:
    """Runtime knobs; file values override defaults, env and flags override both."""

    ltm_path: str = DEFAULT_LTM_PATH
    tick_mode: str = "turns"  # turns | seconds
    tick_seconds: float = 2.0
    float_precision: int = 6  # display precision for activations and weights
    stopwords_path: str | None = None
    lexicon_path: str | None = None
    stemmer_rules_path: str | None = None
    chatbot_url: str | None = None
    chatbot_timeout: float = 3.0


_CONFIG_PARSERS = {
    "ltm_path": str,
    "tick_mode": str,
    "tick_seconds": float,
    "float_precision": int,
    "stopwords_path": str,
    "lexicon_path": str,
    "stemmer_rules_path": str,
    "chatbot_url": str,
    "chatbot_timeout": float,
}


def load_config(path: str | Path) -> AgentConfig:
    """Parse a key=value config file; '#' starts a comment line."""
    values: dict[str, Any] = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise PersistenceError(f"cannot read config {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ValidationError(f"config line {lineno}: expected key=value")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        parser = _CONFIG_PARSERS.get(key)
        if parser is None:
            raise ValidationError(f"config line {lineno}: unknown key {key!r}")
        try:
            values[key] = parser(raw.strip())
        except ValueError as exc:
            raise ValidationError(f"config line {lineno}: bad value for {key}") from exc
    config = AgentConfig(**values)
    if config.tick_mode not in ("turns", "seconds"):
        raise ValidationError(f"tick_mode must be turns or seconds, got {config.tick_mode!r}")
    return config


def apply_env(config: AgentConfig, env: Mapping[str, str] | None = None) -> AgentConfig:
    """Overlay the environment overrides onto a config."""
    env = os.environ if env is None else env
    updates: dict[str, Any] = {}
    if env.get(ENV_LTM_PATH):
        updates["ltm_path"] = env[ENV_LTM_PATH]
    if env.get(ENV_CHATBOT_URL):
        updates["chatbot_url"] = env[ENV_CHATBOT_URL]
    return replace(config, **updates) if updates else config
