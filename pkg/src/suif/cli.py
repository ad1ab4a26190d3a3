"""Command-line interface.

Exit codes: 0 success, 1 domain error (printed as ``error[CODE]: message`` on
stderr), 2 usage error (argparse). Sessions are addressed by name; ``parse``
creates the session on first use.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .diffing import compute_diff, render_changelog
from .engine import ServiceConfig, StudioEngine
from .errors import SuifError
from .generation import DEFAULT_CONSTRAINTS, compile_prompt
from .model import format_path, state_to_document
from .store import SessionStore


def _load_config(args) -> ServiceConfig:
    config = ServiceConfig()
    if getattr(args, "config", None):
        doc = json.loads(Path(args.config).read_text("utf-8"))
        generation = doc.get("generation", {})
        provider = doc.get("provider", {})
        config.constraints_text = generation.get("constraints_text", config.constraints_text)
        config.provider_mode = provider.get("mode", config.provider_mode)
        if provider.get("fixture_dir"):
            config.fixture_dir = Path(provider["fixture_dir"])
        config.timeout = provider.get("timeout", config.timeout)
        if doc.get("data_dir"):
            config.data_dir = Path(doc["data_dir"])
        config.bind_address = doc.get("bind_address", config.bind_address)

    env_data = os.environ.get("SUIF_DATA_DIR")
    if env_data:
        config.data_dir = Path(env_data)
    config.provider_url = os.environ.get("SUIF_PROVIDER_URL", config.provider_url)
    config.provider_key = os.environ.get("SUIF_PROVIDER_KEY", config.provider_key)

    if getattr(args, "data_dir", None):
        config.data_dir = Path(args.data_dir)
    if getattr(args, "mode", None):
        config.provider_mode = args.mode
    if getattr(args, "fixture_dir", None):
        config.fixture_dir = Path(args.fixture_dir)
    if getattr(args, "timeout", None):
        config.timeout = args.timeout
    if getattr(args, "bind", None):
        config.bind_address = args.bind
    if config.provider_mode == "recorded" and config.fixture_dir is None:
        config.fixture_dir = Path("fixtures")
    return config


def _engine(config: ServiceConfig) -> StudioEngine:
    config.validate()
    return StudioEngine(
        SessionStore(config.data_dir), config.build_gateway(), config.constraints_text
    )


def _read_input(path: str | None) -> str:
    if path in (None, "-"):
        return sys.stdin.read().rstrip()
    return Path(path).read_text("utf-8").rstrip()


def _print_mutation(result) -> None:
    print(f"version {result.version}")
    for line in result.changelog:
        print(line)


def _version_number(text: str) -> int:
    return int(text[1:]) if text.startswith("v") else int(text)


def _add_common(sub: argparse.ArgumentParser, session: bool = True) -> None:
    if session:
        sub.add_argument("--session", required=True, help="session name")
    sub.add_argument("--data-dir", help="data directory (default ./data or SUIF_DATA_DIR)")
    sub.add_argument("--mode", choices=["live", "recorded", "mock"], help="provider mode")
    sub.add_argument("--fixture-dir", help="fixture directory for recorded/live-recording mode")
    sub.add_argument("--config", help="JSON config file")
    sub.add_argument("--timeout", type=float, help="provider timeout in seconds")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="suif", description="semantic-state mediated UI generation"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("parse", help="parse a brief into the session state")
    p.add_argument("--in", dest="infile", help="brief file (default stdin)")
    _add_common(p)

    p = commands.add_parser("compile", help="print the compiled prompt for the current state")
    _add_common(p)

    p = commands.add_parser("generate", help="generate (or regenerate) the artifact")
    _add_common(p)

    p = commands.add_parser("analyze", help="extract and merge augmented semantics")
    p.add_argument("--screenshot", help="optional screenshot file to attach")
    _add_common(p)

    p = commands.add_parser("relations", help="analyze the relation graph")
    _add_common(p)

    p = commands.add_parser("diff", help="print the changelog between two versions")
    p.add_argument("--from", dest="from_version", required=True, help="e.g. v1")
    p.add_argument("--to", dest="to_version", required=True, help="e.g. v2")
    _add_common(p)

    p = commands.add_parser("history", help="print the session history")
    _add_common(p)

    p = commands.add_parser("state", help="print the current state as canonical JSON")
    _add_common(p)

    p = commands.add_parser("export", help="export a session bundle")
    p.add_argument("--out", required=True, help="bundle path")
    _add_common(p)

    p = commands.add_parser("import", help="import a session bundle")
    p.add_argument("--in", dest="infile", required=True, help="bundle path")
    _add_common(p, session=False)

    p = commands.add_parser("serve", help="run the HTTP service")
    p.add_argument("--bind", help="host:port (default 127.0.0.1:8787)")
    _add_common(p, session=False)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _load_config(args)
        if args.command == "serve":
            from .service import serve

            serve(config)
            return 0

        engine = _engine(config)

        if args.command == "import":
            session = engine.store.import_session(args.infile)
            print(f"imported session {session.name!r} as {session.id}")
            return 0

        session = engine.open_by_name(args.session, create=(args.command == "parse"))

        if args.command == "parse":
            text = _read_input(args.infile)
            _print_mutation(engine.run_parse(session.id, text))
        elif args.command == "compile":
            prompt = compile_prompt(session.current_state, session.current_version)
            sys.stdout.write(prompt.markdown)
        elif args.command == "generate":
            _print_mutation(engine.run_generate(session.id))
        elif args.command == "analyze":
            screenshot = Path(args.screenshot).read_bytes() if args.screenshot else None
            _print_mutation(engine.run_analyze(session.id, screenshot))
        elif args.command == "relations":
            _print_mutation(engine.run_relations(session.id))
        elif args.command == "diff":
            a = session.record_at(_version_number(args.from_version)).state
            b = session.record_at(_version_number(args.to_version)).state
            for line in render_changelog(compute_diff(a, b)):
                print(line)
        elif args.command == "history":
            for row in engine.store.history(session):
                print(f"v{row['version']}  {row['created_at']}  {row['label']}")
                for line in row["changelog"]:
                    print(f"    {line}")
        elif args.command == "state":
            print(json.dumps(state_to_document(session.current_state), indent=2, ensure_ascii=False))
        elif args.command == "export":
            engine.store.export_session(session.id, args.out)
            print(f"exported {session.id} to {args.out}")
        return 0
    except SuifError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
