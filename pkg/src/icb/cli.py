"""Command-line entry points: validate, generate, chat, serve.

Exit codes: 0 success (warnings allowed), 1 validation errors or script
mismatch, 2 syntax errors, unreadable input or unwritable output.
"""

from __future__ import annotations

import json
import sys
from dataclasses import replace
from pathlib import Path

import click

from . import __version__
from .codegen import GeneratedArtifact, generate
from .dialogue import Phase, start, step
from .model import Platform
from .parser import DslSyntaxError, parse
from .serializer import serialize
from .validation import Severity, is_generatable, render_issues, validate

_PLATFORM_NAMES = [p.value for p in Platform]


@click.group()
@click.version_option(version=__version__, prog_name="icb")
def main() -> None:
    """Specify smart contracts conversationally; validate and generate code."""


def _load_model(path: str):
    source_path = Path(path)
    try:
        source = source_path.read_text(encoding="utf-8")
    except OSError as exc:
        click.echo(f"cannot read {path}: {exc}", err=True)
        sys.exit(2)
    try:
        return parse(source)
    except DslSyntaxError as exc:
        for issue in exc.issues:
            click.echo(f"{path}:{issue}", err=True)
        sys.exit(2)


@main.command(name="validate")
@click.argument("path", type=click.Path())
@click.option("--json", "as_json", is_flag=True, help="machine-readable output")
def validate_cmd(path: str, as_json: bool) -> None:
    """Check a .icb file against the consistency rules."""
    model = _load_model(path)
    issues = validate(model)
    if as_json:
        click.echo(
            json.dumps(
                {"issues": [i.to_dict() for i in issues], "generatable": is_generatable(issues)},
                indent=2,
            )
        )
    elif issues:
        click.echo(render_issues(issues))
    else:
        click.echo("ok, no issues")
    sys.exit(0 if is_generatable(issues) else 1)


def _write_artifacts(artifacts: list[GeneratedArtifact], out_dir: Path) -> list[str]:
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        for artifact in artifacts:
            target = out_dir / artifact.rel_path
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text(artifact.content, encoding="utf-8", newline="\n")
    except OSError as exc:
        click.echo(f"cannot write to {out_dir}: {exc}", err=True)
        sys.exit(2)
    return [artifact.rel_path for artifact in artifacts]


@main.command(name="generate")
@click.argument("path", type=click.Path())
@click.option("-o", "--out", "out_dir", required=True, type=click.Path(), help="output directory")
@click.option("--platform", "platform_name", type=click.Choice(_PLATFORM_NAMES), default=None)
@click.option("--json", "as_json", is_flag=True, help="machine-readable output")
def generate_cmd(path: str, out_dir: str, platform_name: str | None, as_json: bool) -> None:
    """Generate platform artifacts from a .icb file."""
    model = _load_model(path)
    if platform_name:
        model = replace(
            model, contract=replace(model.contract, platform=Platform(platform_name))
        )
    issues = validate(model)
    if not is_generatable(issues):
        click.echo(render_issues([i for i in issues if i.severity is Severity.ERROR]), err=True)
        sys.exit(1)
    artifacts = generate(model)
    written = _write_artifacts(artifacts, Path(out_dir))
    if as_json:
        click.echo(json.dumps({"files": written}, indent=2))
    else:
        for rel_path in written:
            click.echo(rel_path)


@main.command()
@click.option("--script", "script_path", type=click.Path(), default=None, help="replay a transcript")
@click.option("--out", "out_dir", type=click.Path(), default=None, help="artifact directory on completion")
def chat(script_path: str | None, out_dir: str | None) -> None:
    """Run the specification dialogue in the terminal."""
    if script_path:
        _run_script(Path(script_path), Path(out_dir) if out_dir else None)
        return
    state, turn = start()
    _print_turn(turn)
    while state.phase is not Phase.DONE:
        try:
            user_text = click.prompt("you", prompt_suffix="> ")
        except (EOFError, click.Abort):
            click.echo("conversation incomplete", err=True)
            sys.exit(1)
        state, turn = step(state, user_text)
        _print_turn(turn)
    if out_dir and turn.artifact_offer:
        for rel_path in _write_artifacts(list(turn.artifact_offer), Path(out_dir)):
            click.echo(f"wrote {rel_path}")


def _print_turn(turn) -> None:
    click.echo(f"bot> {turn.prompt}")
    if turn.quick_replies:
        click.echo(f"     [{' / '.join(turn.quick_replies)}]")


def _run_script(script_path: Path, out_dir: Path | None) -> None:
    try:
        lines = script_path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        click.echo(f"cannot read {script_path}: {exc}", err=True)
        sys.exit(2)

    state, turn = start()
    last_prompt = turn.prompt
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("B:"):
            expected = line[2:].strip()
            if not last_prompt.startswith(expected):
                click.echo(f"mismatch at line {lineno}:", err=True)
                click.echo(f"  script : {expected}", err=True)
                click.echo(f"  bot    : {last_prompt.splitlines()[0]}", err=True)
                sys.exit(1)
        elif line.startswith("U:"):
            if state.phase is Phase.DONE:
                click.echo(f"line {lineno}: user turn after the conversation ended", err=True)
                sys.exit(1)
            state, turn = step(state, line[2:].strip())
            last_prompt = turn.prompt
        else:
            click.echo(f"line {lineno}: expected 'U:' or 'B:' prefix", err=True)
            sys.exit(2)

    if state.phase is not Phase.DONE:
        click.echo("conversation incomplete", err=True)
        sys.exit(1)
    if out_dir and turn.artifact_offer:
        for rel_path in _write_artifacts(list(turn.artifact_offer), out_dir):
            click.echo(f"wrote {rel_path}")


@main.command()
@click.option("--port", envvar="ICB_PORT", default=8080, show_default=True, type=int)
@click.option("--data-dir", envvar="ICB_DATA_DIR", default="./icb_data", show_default=True)
@click.option("--cors-origin", envvar="ICB_CORS_ORIGIN", default="*", show_default=True)
@click.option("--web-dir", envvar="ICB_WEB_DIR", default=None, help="static webchat bundle")
def serve(port: int, data_dir: str, cors_origin: str, web_dir: str | None) -> None:
    """Run the HTTP session service."""
    import uvicorn

    from .service import create_app
    from .store import FileSessionStore

    if web_dir is None:
        bundled = Path(__file__).resolve().parents[2] / "frontend" / "dist"
        web_dir = str(bundled) if bundled.is_dir() else None
    app = create_app(FileSessionStore(data_dir), cors_origin=cors_origin, web_dir=web_dir)
    uvicorn.run(app, host="0.0.0.0", port=port)


if __name__ == "__main__":
    main()
