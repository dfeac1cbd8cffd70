"""Interactive REPL and deterministic script runner.

Plain lines are dialogue turns; slash commands drive the rest:
/name, /emotion, /teach, /sleep, /tick, /stm, /ltm, /quit. Script mode
replays a file of the same lines and echoes inputs, so the same script
always produces byte-identical transcripts and stores.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .dialogue_manager import AgentReply, TurnInput
from .engine import AgentEngine
from .errors import ArthurError, PersistenceError, ValidationError
from .memory_core import EmotionLabel
from .persistence import AgentConfig, apply_env, load_config

EXIT_OK = 0
EXIT_SCRIPT_ERROR = 1
EXIT_IO_ERROR = 2

USAGE = """commands:
  /name <person>         identify yourself
  /emotion <label>       set the declared emotion for following turns
  /teach <term> <image>  teach what a term looks like
  /sleep                 consolidate memory
  /tick [n]              let time pass (decay)
  /stm                   show short-term memory
  /ltm                   show the long-term store
  /quit                  save and exit"""


def build_config(args: argparse.Namespace) -> AgentConfig:
    """defaults < config file < environment < command-line flags."""
    config = load_config(args.config) if args.config else AgentConfig()
    config = apply_env(config)
    if args.ltm:
        config = replace(config, ltm_path=args.ltm)
    if args.tick_mode:
        config = replace(config, tick_mode=args.tick_mode)
    return config


class Repl:
    """Binds an engine to one conversation and formats output lines."""

    def __init__(self, engine: AgentEngine, out=None) -> None:
        self.engine = engine
        self.out = out or sys.stdout
        self.session = engine.create_session()
        self.emotion = EmotionLabel.NEUTRAL
        self.precision = engine.config.float_precision

    def _print(self, line: str = "") -> None:
        self.out.write(line + "\n")

    def _print_reply(self, reply: AgentReply) -> None:
        self._print(reply.text)
        self._print(f"[{reply.expression}]")

    def handle_line(self, line: str) -> bool:
        """Process one input line; False means quit. Raises on script errors."""
        stripped = line.strip()
        if not stripped:
            return True
        if stripped.startswith("/"):
            return self._command(stripped)
        reply = self.engine.post_turn(
            self.session.id, TurnInput(text=stripped, declared_emotion=self.emotion)
        )
        self._print_reply(reply)
        return True

    def _command(self, line: str) -> bool:
        parts = line.split()
        command, args = parts[0].lower(), parts[1:]
        if command == "/quit":
            return False
        if command == "/name":
            if not args:
                raise ValidationError("/name requires a person name")
            self._print_reply(self.engine.identify(self.session.id, " ".join(args)))
        elif command == "/emotion":
            if not args:
                raise ValidationError("/emotion requires a label")
            try:
                self.emotion = EmotionLabel(args[0].lower())
            except ValueError:
                raise ValidationError(f"unknown emotion {args[0]!r}") from None
            self._print(f"(emotion set to {self.emotion.value})")
        elif command == "/teach":
            if len(args) != 2:
                raise ValidationError("/teach requires a term and an image path")
            self._print_reply(self.engine.teach(args[0], args[1], self.session.id))
        elif command == "/sleep":
            report, reply = self.engine.sleep(self.session.id)
            self._print_reply(reply)
        elif command == "/tick":
            ticks = 1
            if args:
                try:
                    ticks = int(args[0])
                except ValueError:
                    raise ValidationError(f"/tick requires an integer, got {args[0]!r}") from None
            self.engine.tick(ticks)
            self._print(f"(time passes: {ticks} tick{'s' if ticks != 1 else ''})")
        elif command == "/stm":
            self._show_stm()
        elif command == "/ltm":
            self._show_ltm()
        else:
            raise ValidationError(f"unknown command {command}")
        return True

    def _show_stm(self) -> None:
        view = self.engine.stm_view()
        self._print(f"short-term memory (tick counter {view['tick_counter']}):")
        for slot in view["slots"]:
            self._print(
                f"  {slot['resource_id']:>4}  "
                f"activation={slot['activation']:.{self.precision}f}  "
                f"weight={slot['weight']:.{self.precision}f}  {slot['label']}"
            )
        if not view["slots"]:
            self._print("  (empty)")

    def _show_ltm(self) -> None:
        view = self.engine.ltm_view()
        counts = view["counts"]
        self._print(
            f"long-term memory: {counts['events']} events, "
            f"{counts['resources']} resources, {counts['people']} people"
        )
        for event in view["events"]:
            self._print(
                f"  event {event['id']:>4}  {event['event_type']}  "
                f"emotion={event['emotion']}  polarity={event['polarity']:.{self.precision}f}  "
                f"resources={event['resource_ids']}"
            )
        for person in view["people"]:
            self._print(f"  person {person['name']}")


def run_script(repl: Repl, script_path: str) -> int:
    """Execute a script line by line, echoing inputs before replies."""
    try:
        lines = Path(script_path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        print(f"cannot read script {script_path}: {exc}", file=sys.stderr)
        return EXIT_IO_ERROR
    for line in lines:
        repl._print(f"> {line}")
        try:
            if not repl.handle_line(line):
                break
        except ArthurError as exc:
            print(f"script error: {exc}", file=sys.stderr)
            return EXIT_SCRIPT_ERROR
    return EXIT_OK


def run_interactive(repl: Repl) -> int:
    repl._print("(type /quit to exit)")
    while True:
        try:
            line = input("you> ")
        except EOFError:
            break
        except KeyboardInterrupt:
            break
        try:
            if not repl.handle_line(line):
                break
        except ArthurError as exc:
            repl._print(f"(error: {exc})")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="arthur", description="Conversational agent with autobiographical memory"
    )
    parser.add_argument("--ltm", help="path of the long-term store file")
    parser.add_argument("--config", help="key=value config file")
    parser.add_argument("--script", help="run this script instead of the interactive loop")
    parser.add_argument(
        "--tick-mode", choices=("turns", "seconds"), help="how decay time advances"
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = build_config(args)
    except ArthurError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_SCRIPT_ERROR

    engine = AgentEngine(config)
    try:
        engine.load()
    except ArthurError as exc:
        print(f"cannot load store: {exc}", file=sys.stderr)
        return EXIT_IO_ERROR

    repl = Repl(engine)
    if args.script:
        code = run_script(repl, args.script)
    else:
        code = run_interactive(repl)

    if code == EXIT_OK:
        try:
            engine.save()
        except PersistenceError as exc:
            print(f"cannot save store: {exc}", file=sys.stderr)
            return EXIT_IO_ERROR
    return code


if __name__ == "__main__":
    sys.exit(main())
