"""Store serialization: byte-stable saves, strict loads, config parsing."""

import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arthur.errors import IntegrityError, PersistenceError, ValidationError
from arthur.memory_core import (
    CountingClock,
    EventType,
    FactTriple,
    MemoryCore,
    grammatical,
    image,
)
from arthur.persistence import (
    DEFAULT_LTM_PATH,
    ENV_CHATBOT_URL,
    ENV_LTM_PATH,
    AgentConfig,
    apply_env,
    load_config,
    load_ltm,
    save_ltm,
)

VOCAB = ("fish", "vacation", "dad", "glasgow", "cinema", "rain", "party", "dog")


def populated_core() -> MemoryCore:
    """A small store touching every record field at least once."""
    core = MemoryCore(clock=CountingClock(start=1000.0, step=0.25))
    core.meet_person("José Müller")
    core.create_event(
        EventType.MEET_NEW_PERSON,
        payloads=[
            grammatical("age", fact=FactTriple("josé müller", "age", 31)),
            grammatical(
                "children",
                fact=FactTriple("josé müller", "children_names", ("Ana", "Béla")),
            ),
        ],
    )
    core.create_event(
        EventType.LEARN_THING, payloads=[grammatical("cellphone"), image("cell.png")]
    )
    core.decay_tick(3)
    core.consolidate()
    core.create_event(EventType.INTERACTION, payloads=["rain", "party"])
    core.decay_tick(1)
    return core


class TestSaveFormat:
    def test_round_trip_is_exact(self, tmp_path):
        """Every field, including decayed activations, survives unchanged."""
        core = populated_core()
        path = tmp_path / "store.jsonl"
        save_ltm(core.ltm, path)
        assert load_ltm(path) == core.ltm

    def test_save_is_byte_deterministic(self, tmp_path):
        """Saving the same store twice writes identical bytes."""
        core = populated_core()
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        assert save_ltm(core.ltm, a) == save_ltm(core.ltm, b)
        assert a.read_bytes() == b.read_bytes()

    def test_load_save_cycle_is_byte_stable(self, tmp_path):
        core = populated_core()
        first = tmp_path / "first.jsonl"
        second = tmp_path / "second.jsonl"
        save_ltm(core.ltm, first)
        save_ltm(load_ltm(first), second)
        assert first.read_bytes() == second.read_bytes()

    def test_records_sorted_by_kind_then_key(self, tmp_path):
        """Events by id, then people by name, then resources by id."""
        core = populated_core()
        path = tmp_path / "store.jsonl"
        save_ltm(core.ltm, path)
        records = [json.loads(line) for line in path.read_text("utf-8").splitlines()]
        kinds = [r["kind"] for r in records]
        assert kinds == sorted(kinds)
        for kind, key in (("event", "id"), ("resource", "id"), ("person", "name")):
            keys = [r[key] for r in records if r["kind"] == kind]
            assert keys == sorted(keys)

    def test_lines_are_compact_sorted_utf8_lf(self, tmp_path):
        core = populated_core()
        path = tmp_path / "store.jsonl"
        save_ltm(core.ltm, path)
        data = path.read_bytes()
        assert b"\r" not in data
        assert data.endswith(b"\n")
        assert "José Müller".encode("utf-8") in data  # not \u-escaped
        for line in data.decode("utf-8").splitlines():
            record = json.loads(line)
            recoded = json.dumps(
                record, sort_keys=True, separators=(",", ":"), ensure_ascii=False
            )
            assert line == recoded

    def test_empty_store_is_empty_file(self, tmp_path):
        core = MemoryCore(clock=CountingClock())
        path = tmp_path / "store.jsonl"
        assert save_ltm(core.ltm, path) == 0
        assert path.read_bytes() == b""
        assert load_ltm(path) == core.ltm

    def test_failed_save_leaves_existing_file_alone(self, tmp_path, monkeypatch):
        core = populated_core()
        path = tmp_path / "store.jsonl"
        save_ltm(core.ltm, path)
        before = path.read_bytes()

        def boom(src, dst):
            raise OSError("disk full")

        monkeypatch.setattr("arthur.persistence.os.replace", boom)
        with pytest.raises(PersistenceError):
            save_ltm(core.ltm, path)
        assert path.read_bytes() == before
        assert list(tmp_path.glob("*.tmp")) == []

    def test_save_into_missing_directory_raises(self, tmp_path):
        with pytest.raises(PersistenceError):
            save_ltm(populated_core().ltm, tmp_path / "nowhere" / "store.jsonl")

    def test_irrational_floats_round_trip(self, tmp_path):
        """Shortest-repr JSON floats reload to the identical bits."""
        core = MemoryCore(clock=CountingClock(start=math.pi, step=math.e))
        event = core.create_event(EventType.MEET_NEW_PERSON, payloads=["fish"])
        core.decay_tick(9)
        core.consolidate()  # weight becomes ln(1.9)
        path = tmp_path / "store.jsonl"
        save_ltm(core.ltm, path)
        loaded = load_ltm(path)
        resource = loaded.resources[event.resource_ids[0]]
        assert resource.weight == core.ltm.resources[event.resource_ids[0]].weight
        assert resource.activation == core.ltm.resources[event.resource_ids[0]].activation
        assert loaded.events[event.id].timestamp.wall == math.pi

    @given(
        plan=st.lists(
            st.tuples(
                st.sampled_from(list(EventType)),
                st.lists(st.sampled_from(VOCAB), min_size=1, max_size=3),
                st.booleans(),  # sleep afterwards?
            ),
            min_size=1,
            max_size=8,
        )
    )
    @settings(max_examples=50, deadline=None)
    def test_generated_stores_round_trip(self, tmp_path_factory, plan):
        """Any reachable store state survives save/load exactly."""
        core = MemoryCore(clock=CountingClock())
        for event_type, tokens, sleep in plan:
            core.create_event(event_type, payloads=tokens)
            if sleep:
                core.consolidate()
        path = tmp_path_factory.mktemp("roundtrip") / "store.jsonl"
        save_ltm(core.ltm, path)
        assert load_ltm(path) == core.ltm


class TestLoadErrors:
    def write(self, tmp_path, text):
        path = tmp_path / "store.jsonl"
        path.write_text(text, encoding="utf-8")
        return path

    def test_missing_file_raises_file_not_found(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_ltm(tmp_path / "absent.jsonl")

    def test_malformed_json_names_the_line(self, tmp_path):
        path = self.write(tmp_path, '{"kind":"event"\n')
        with pytest.raises(PersistenceError, match="line 1"):
            load_ltm(path)

    def test_blank_line_rejected(self, tmp_path):
        core = populated_core()
        path = tmp_path / "store.jsonl"
        save_ltm(core.ltm, path)
        path.write_text("\n" + path.read_text("utf-8"), encoding="utf-8")
        with pytest.raises(PersistenceError, match="line 1"):
            load_ltm(path)

    def test_non_object_line_rejected(self, tmp_path):
        path = self.write(tmp_path, "[1, 2, 3]\n")
        with pytest.raises(PersistenceError, match="line 1"):
            load_ltm(path)

    def test_unknown_kind_rejected(self, tmp_path):
        path = self.write(tmp_path, '{"kind":"dream"}\n')
        with pytest.raises(PersistenceError, match="unknown record kind"):
            load_ltm(path)

    def test_missing_key_named(self, tmp_path):
        path = self.write(tmp_path, '{"kind":"event","id":1}\n')
        with pytest.raises(PersistenceError, match="seq"):
            load_ltm(path)

    def test_duplicate_ids_rejected(self, tmp_path):
        core = populated_core()
        path = tmp_path / "store.jsonl"
        save_ltm(core.ltm, path)
        lines = path.read_text("utf-8").splitlines()
        path.write_text("\n".join(lines + [lines[0]]) + "\n", encoding="utf-8")
        with pytest.raises(PersistenceError, match="duplicate"):
            load_ltm(path)

    def test_dangling_reference_fails_integrity(self, tmp_path):
        record = {
            "kind": "event",
            "id": 1,
            "seq": 1,
            "wall": 0.0,
            "event_type": "interaction",
            "emotion": "neutral",
            "polarity": 0.0,
            "resource_ids": [7],
        }
        path = self.write(tmp_path, json.dumps(record) + "\n")
        with pytest.raises(IntegrityError):
            load_ltm(path)

    def test_bad_enum_value_rejected(self, tmp_path):
        record = {
            "kind": "event",
            "id": 1,
            "seq": 1,
            "wall": 0.0,
            "event_type": "daydream",
            "emotion": "neutral",
            "polarity": 0.0,
            "resource_ids": [],
        }
        path = self.write(tmp_path, json.dumps(record) + "\n")
        with pytest.raises(PersistenceError, match="line 1"):
            load_ltm(path)


class TestConfig:
    def test_defaults(self):
        config = AgentConfig()
        assert config.ltm_path == DEFAULT_LTM_PATH
        assert config.tick_mode == "turns"
        assert config.tick_seconds == 2.0
        assert config.float_precision == 6
        assert config.chatbot_url is None

    def test_file_values_parsed_with_comments(self, tmp_path):
        path = tmp_path / "agent.conf"
        path.write_text(
            "# agent settings\n"
            "\n"
            "ltm_path = /tmp/mem.jsonl\n"
            "tick_mode=seconds\n"
            "tick_seconds = 0.5\n"
            "float_precision=3\n",
            encoding="utf-8",
        )
        config = load_config(path)
        assert config.ltm_path == "/tmp/mem.jsonl"
        assert config.tick_mode == "seconds"
        assert config.tick_seconds == 0.5
        assert config.float_precision == 3

    def test_unknown_key_names_the_line(self, tmp_path):
        path = tmp_path / "agent.conf"
        path.write_text("ltm_path=x\nvolume=11\n", encoding="utf-8")
        with pytest.raises(ValidationError, match="line 2"):
            load_config(path)

    def test_bad_value_and_bad_syntax_rejected(self, tmp_path):
        path = tmp_path / "agent.conf"
        path.write_text("tick_seconds=soon\n", encoding="utf-8")
        with pytest.raises(ValidationError, match="tick_seconds"):
            load_config(path)
        path.write_text("just words\n", encoding="utf-8")
        with pytest.raises(ValidationError, match="key=value"):
            load_config(path)

    def test_bad_tick_mode_rejected(self, tmp_path):
        path = tmp_path / "agent.conf"
        path.write_text("tick_mode=lunar\n", encoding="utf-8")
        with pytest.raises(ValidationError, match="tick_mode"):
            load_config(path)

    def test_missing_config_file_raises(self, tmp_path):
        with pytest.raises(PersistenceError):
            load_config(tmp_path / "absent.conf")

    def test_env_overrides_file_values(self):
        config = AgentConfig(ltm_path="from-file.jsonl")
        overlaid = apply_env(
            config,
            {ENV_LTM_PATH: "from-env.jsonl", ENV_CHATBOT_URL: "http://bot:1234"},
        )
        assert overlaid.ltm_path == "from-env.jsonl"
        assert overlaid.chatbot_url == "http://bot:1234"

    def test_empty_env_values_ignored(self):
        config = AgentConfig(ltm_path="keep.jsonl", chatbot_url="http://keep")
        overlaid = apply_env(config, {ENV_LTM_PATH: "", ENV_CHATBOT_URL: ""})
        assert overlaid == config
