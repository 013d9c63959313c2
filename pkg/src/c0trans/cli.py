"""Command-line entry point ``c0trans``.

Exit status: 0 when a verdict was computed (negative verdicts included),
1 for malformed input or a failed precondition, 2 for an internal
inconsistency.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from typing import Sequence

from pydantic import ValidationError

from . import commands, probe
from .certify import InternalInconsistency
from .linking import DegenerateConfiguration
from .plcore import GeometryError
from .refute import RetryBudgetExhausted
from .render import PROJECTIONS, render_svg
from .schema import INPUTS, ExampleEntry, ExamplesResult

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2


class InputError(Exception):
    def __init__(self, kind: str, message: str, location: str | None = None):
        super().__init__(message)
        self.kind, self.message, self.location = kind, message, location


def example_index() -> dict:
    return json.loads(resources.files("c0trans.data").joinpath("index.json").read_text())


def example_text(name: str) -> str:
    index = example_index()
    if name not in index:
        raise InputError("unknown-example", f"no example named {name!r}; try one of {sorted(index)}")
    return resources.files("c0trans.data").joinpath(f"{name}.json").read_text()


def _read(path: str) -> tuple[str, str]:
    if path == "-":
        return sys.stdin.read(), "<stdin>"
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read(), path
    except OSError as exc:
        raise InputError("io", f"cannot read {path}: {exc.strerror}", path) from exc


def load_input(command: str, path: str):
    text, source = _read(path)
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError("malformed-json", exc.msg, f"{source}:{exc.lineno}:{exc.colno}") from exc
    model = INPUTS[command]
    if command == "probe" and isinstance(raw, dict) and "disk_images" in raw:
        model = INPUTS["certify"]  # probe the flat box against the disk map
    try:
        return model.model_validate(raw)
    except ValidationError as exc:
        first = exc.errors()[0]
        loc = ".".join(str(x) for x in first["loc"]) or "<root>"
        more = f" (and {exc.error_count() - 1} more)" if exc.error_count() > 1 else ""
        raise InputError("schema", f"{first['msg']}{more}", f"{source}:{loc}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=("json", "json-pretty"), default="json-pretty")
    common.add_argument("--svg", metavar="PATH", help="also draw the scene and result")
    common.add_argument("--project", choices=PROJECTIONS,
                        help="projection used to draw 3-D scenes")

    ap = argparse.ArgumentParser(prog="c0trans", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    for name, help_ in (("certify", "certificate for a flat chart scene"),
                        ("refute", "constructive refutation for sampled maps"),
                        ("link", "linking number of two cycles")):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("scene", help="scene JSON file, or - for stdin")
        p.add_argument("--seed", type=int, default=None)

    p = sub.add_parser("probe", parents=[common], help="random search for separating perturbations")
    p.add_argument("scene")
    p.add_argument("--delta", required=True, help="perturbation size, e.g. 1/16 or 0.05")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--strategy", choices=probe.STRATEGIES, default="uniform")

    p = sub.add_parser("sakai", parents=[common], help="disk-side check for planar curves")
    p.add_argument("scene")

    p = sub.add_parser("dim", parents=[common], help="covering-dimension upper bounds")
    p.add_argument("scene")

    p = sub.add_parser("examples", parents=[common], help="list or print bundled scenes")
    p.add_argument("--name", help="print this example scene")
    return ap


def _dispatch(args) -> commands.Outcome | None:
    if args.command == "examples":
        if args.name:
            sys.stdout.write(example_text(args.name))
            return None
        entries = [ExampleEntry(name=k, command=v["command"], description=v["description"])
                   for k, v in example_index().items()]
        return commands.Outcome(ExamplesResult(examples=entries), {})
    inp = load_input(args.command, args.scene)
    if getattr(args, "seed", None) is not None and hasattr(inp, "seed") and args.command != "probe":
        inp = inp.model_copy(update={"seed": args.seed})
    if args.command == "certify":
        return commands.run_certify(inp)
    if args.command == "refute":
        return commands.run_refute(inp)
    if args.command == "link":
        return commands.run_link(inp)
    if args.command == "probe":
        return commands.run_probe(inp, args.delta, args.trials, args.seed, args.strategy)
    if args.command == "sakai":
        return commands.run_sakai(inp)
    return commands.run_dim(inp)


def _emit(obj: dict, pretty: bool) -> None:
    if pretty:
        sys.stdout.write(json.dumps(obj, indent=2) + "\n")
    else:
        sys.stdout.write(json.dumps(obj, separators=(",", ":")) + "\n")


def _fail(kind: str, message: str, location: str | None, pretty: bool, code: int) -> int:
    _emit({"error": kind, "message": message, "location": location}, pretty)
    where = f" ({location})" if location else ""
    print(f"c0trans: {kind}: {message}{where}", file=sys.stderr)
    return code


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    pretty = args.output == "json-pretty"
    source = getattr(args, "scene", None)
    try:
        outcome = _dispatch(args)
        if outcome is None:
            return EXIT_OK
        if args.svg:
            render_svg(args.command, outcome.payload, args.svg, args.project)
    except InputError as exc:
        return _fail(exc.kind, exc.message, exc.location, pretty, EXIT_INPUT)
    except (InternalInconsistency, AssertionError) as exc:
        return _fail("internal-inconsistency", str(exc), source, pretty, EXIT_INTERNAL)
    except (GeometryError, DegenerateConfiguration, RetryBudgetExhausted, ValueError) as exc:
        kind = type(exc).__name__
        return _fail("precondition", f"{kind}: {exc}", source, pretty, EXIT_INPUT)
    _emit(outcome.result.model_dump(mode="json"), pretty)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
