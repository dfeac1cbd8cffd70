"""Command-line front end: script runs, commands, exit codes, determinism."""

import pytest

from arthur.cli_repl import EXIT_IO_ERROR, EXIT_OK, EXIT_SCRIPT_ERROR, Repl, main
from arthur.dialogue_manager import MEET_ACK, STRANGER_PROMPT
from arthur.engine import AgentEngine
from arthur.persistence import AgentConfig, load_ltm

INTRO_SCRIPT = """hello there
my name is knob
I am 31 years old
/quit
"""


def run_main(tmp_path, script_text, monkeypatch, capsys, name="run"):
    """Run the CLI on a script inside tmp_path; return (exit code, stdout)."""
    workdir = tmp_path / name
    workdir.mkdir()
    (workdir / "cell.png").write_bytes(b"png")
    script = workdir / "script.txt"
    script.write_text(script_text, encoding="utf-8")
    monkeypatch.chdir(workdir)
    monkeypatch.delenv("ARTHUR_LTM_PATH", raising=False)
    monkeypatch.delenv("ARTHUR_CHATBOT_URL", raising=False)
    code = main(["--script", "script.txt", "--ltm", "store.jsonl"])
    return code, capsys.readouterr().out, workdir


class TestScriptRuns:
    def test_intro_script_transcript(self, tmp_path, monkeypatch, capsys):
        code, out, _ = run_main(tmp_path, INTRO_SCRIPT, monkeypatch, capsys)
        assert code == EXIT_OK
        lines = out.splitlines()
        assert lines[0] == "> hello there"
        assert lines[1] == STRANGER_PROMPT
        assert lines[2] == "[neutral]"
        assert lines[3] == "> my name is knob"
        assert lines[4].startswith(MEET_ACK.format(name="Knob"))
        assert "> /quit" in lines

    def test_clean_exit_saves_the_store(self, tmp_path, monkeypatch, capsys):
        code, _, workdir = run_main(tmp_path, INTRO_SCRIPT, monkeypatch, capsys)
        assert code == EXIT_OK
        ltm = load_ltm(workdir / "store.jsonl")
        assert "knob" in ltm.people

    def test_store_carries_over_between_runs(self, tmp_path, monkeypatch, capsys):
        run_main(tmp_path, INTRO_SCRIPT, monkeypatch, capsys, name="first")
        workdir = tmp_path / "first"
        script = workdir / "again.txt"
        script.write_text("/name knob\nhow old is knob?\n/quit\n", encoding="utf-8")
        monkeypatch.chdir(workdir)
        code = main(["--script", "again.txt", "--ltm", "store.jsonl"])
        out = capsys.readouterr().out
        assert code == EXIT_OK
        assert "Greetings Knob!" in out
        assert "Knob is 31 years old." in out

    def test_identical_runs_are_byte_identical(self, tmp_path, monkeypatch, capsys):
        script = (
            "hello there\n"
            "my name is knob\n"
            "I am 31 years old\n"
            "I work as a plumber\n"
            "/emotion joy\n"
            "I am going on vacation with my dad to Glasgow\n"
            "/teach cellphone cell.png\n"
            "do you know what a cellphone is?\n"
            "/stm\n"
            "/sleep\n"
            "/ltm\n"
            "/quit\n"
        )
        _, out_a, dir_a = run_main(tmp_path, script, monkeypatch, capsys, name="a")
        _, out_b, dir_b = run_main(tmp_path, script, monkeypatch, capsys, name="b")
        assert out_a == out_b
        assert (dir_a / "store.jsonl").read_bytes() == (dir_b / "store.jsonl").read_bytes()

    def test_script_stops_at_quit(self, tmp_path, monkeypatch, capsys):
        code, out, _ = run_main(
            tmp_path, "hello\n/quit\nnever reached\n", monkeypatch, capsys
        )
        assert code == EXIT_OK
        assert "never reached" not in out


class TestCommands:
    def make_repl(self, tmp_path, capsys):
        engine = AgentEngine(AgentConfig(ltm_path=str(tmp_path / "s.jsonl")))
        return Repl(engine)

    def test_emotion_command_colours_later_turns(self, tmp_path, monkeypatch, capsys):
        script = (
            "hello\nmy name is knob\nI am 31\n/emotion sadness\nthe dog is gone\n/quit\n"
        )
        code, out, _ = run_main(tmp_path, script, monkeypatch, capsys)
        assert code == EXIT_OK
        assert "(emotion set to sadness)" in out
        assert "[sadness]" in out

    def test_sleep_prints_summary_and_face(self, tmp_path, monkeypatch, capsys):
        code, out, _ = run_main(tmp_path, "hello\n/sleep\n/quit\n", monkeypatch, capsys)
        assert code == EXIT_OK
        assert "Zzz..." in out
        assert "[sleeping]" in out

    def test_stm_and_ltm_views_print(self, tmp_path, monkeypatch, capsys):
        script = "hello\nmy name is knob\n/stm\n/ltm\n/tick 2\n/stm\n/quit\n"
        code, out, _ = run_main(tmp_path, script, monkeypatch, capsys)
        assert code == EXIT_OK
        assert "short-term memory (tick counter 2):" in out
        assert "short-term memory (tick counter 4):" in out
        assert "long-term memory:" in out
        assert "person Knob" in out
        assert "(time passes: 2 ticks)" in out

    def test_teach_command(self, tmp_path, monkeypatch, capsys):
        script = "/teach cellphone cell.png\n/quit\n"
        code, out, _ = run_main(tmp_path, script, monkeypatch, capsys)
        assert code == EXIT_OK
        assert "Now I know what a cellphone looks like." in out

    def test_empty_lines_are_skipped(self, tmp_path, monkeypatch, capsys):
        code, out, _ = run_main(tmp_path, "\n\n/quit\n", monkeypatch, capsys)
        assert code == EXIT_OK


class TestExitCodes:
    def test_script_error_is_one(self, tmp_path, monkeypatch, capsys):
        for bad in ("/name\n", "/emotion smug\n", "/nonsense\n", "/tick soon\n",
                    "/teach cellphone\n"):
            code, _, _ = run_main(
                tmp_path, bad, monkeypatch, capsys, name=f"bad{len(bad)}"
            )
            assert code == EXIT_SCRIPT_ERROR

    def test_missing_script_is_io_error(self, tmp_path, monkeypatch, capsys):
        monkeypatch.chdir(tmp_path)
        assert main(["--script", "absent.txt"]) == EXIT_IO_ERROR

    def test_corrupt_store_is_io_error(self, tmp_path, monkeypatch, capsys):
        monkeypatch.chdir(tmp_path)
        (tmp_path / "store.jsonl").write_text("garbage\n", encoding="utf-8")
        (tmp_path / "script.txt").write_text("/quit\n", encoding="utf-8")
        code = main(["--script", "script.txt", "--ltm", "store.jsonl"])
        assert code == EXIT_IO_ERROR
        assert "cannot load store" in capsys.readouterr().err

    def test_bad_config_file_is_script_error(self, tmp_path, monkeypatch, capsys):
        monkeypatch.chdir(tmp_path)
        (tmp_path / "agent.conf").write_text("bogus_key=1\n", encoding="utf-8")
        (tmp_path / "script.txt").write_text("/quit\n", encoding="utf-8")
        code = main(["--script", "script.txt", "--config", "agent.conf"])
        assert code == EXIT_SCRIPT_ERROR
        assert "configuration error" in capsys.readouterr().err

    def test_unwritable_store_is_io_error(self, tmp_path, monkeypatch, capsys):
        monkeypatch.chdir(tmp_path)
        (tmp_path / "script.txt").write_text("hello\n/quit\n", encoding="utf-8")
        code = main(["--script", "script.txt", "--ltm", "void/store.jsonl"])
        assert code == EXIT_IO_ERROR
        assert "cannot save store" in capsys.readouterr().err


class TestInteractive:
    def test_loop_reads_until_quit(self, tmp_path, monkeypatch, capsys):
        lines = iter(["hello", "/nonsense", "/quit"])
        monkeypatch.setattr("builtins.input", lambda prompt="": next(lines))
        monkeypatch.chdir(tmp_path)
        code = main(["--ltm", "store.jsonl"])
        out = capsys.readouterr().out
        assert code == EXIT_OK
        assert STRANGER_PROMPT in out
        assert "(error: unknown command /nonsense)" in out  # kept running

    def test_loop_ends_on_eof(self, tmp_path, monkeypatch, capsys):
        def raise_eof(prompt=""):
            raise EOFError

        monkeypatch.setattr("builtins.input", raise_eof)
        monkeypatch.chdir(tmp_path)
        assert main(["--ltm", "store.jsonl"]) == EXIT_OK
