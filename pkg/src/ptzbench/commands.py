"""The camera command DSL: grammar, lenient extraction, and validation.

The parser scans free-form model text for ``name(args)`` calls, tolerating
surrounding prose, whitespace, code fences, and list markers. It never
raises on arbitrary input; problems surface as diagnostics on the returned
:class:`ParseOutcome`. A sequence is accepted only when at least one
command was found and no diagnostic was recorded, which is exactly the
rule the dataset filter applies.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

from .camera import ZOOM_MAX, ZOOM_MIN

if TYPE_CHECKING:
    from .scene import Scene

COUNT_MIN = 1
COUNT_MAX = 72

# Diagnostic kinds.
UNKNOWN_COMMAND = "UnknownCommand"
BAD_ARITY = "BadArity"
OUT_OF_RANGE = "OutOfRange"
UNKNOWN_OBJECT = "UnknownObject"
MALFORMED_ARGUMENT = "MalformedArgument"
NO_COMMANDS_FOUND = "NoCommandsFound"

DIAGNOSTIC_KINDS = (
    UNKNOWN_COMMAND,
    BAD_ARITY,
    OUT_OF_RANGE,
    UNKNOWN_OBJECT,
    MALFORMED_ARGUMENT,
    NO_COMMANDS_FOUND,
)

# Parameter kinds: "count" (integer frames), "zoom" (decimal factor),
# "object" (scene object identifier).
@dataclass(frozen=True)
class CommandSpec:
    name: str
    params: tuple[str, ...]
    signature: str
    description: str
    param_ranges: str


COMMAND_TABLE: dict[str, CommandSpec] = {
    spec.name: spec
    for spec in (
        CommandSpec(
            "pan_left",
            ("count",),
            "pan_left(n)",
            "Pan the camera left by n frames of 5° each.",
            f"n: integer in [{COUNT_MIN}, {COUNT_MAX}]",
        ),
        CommandSpec(
            "pan_right",
            ("count",),
            "pan_right(n)",
            "Pan the camera right by n frames of 5° each.",
            f"n: integer in [{COUNT_MIN}, {COUNT_MAX}]",
        ),
        CommandSpec(
            "tilt_up",
            ("count",),
            "tilt_up(n)",
            "Tilt the camera up by n frames of 3° each.",
            f"n: integer in [{COUNT_MIN}, {COUNT_MAX}]",
        ),
        CommandSpec(
            "tilt_down",
            ("count",),
            "tilt_down(n)",
            "Tilt the camera down by n frames of 3° each.",
            f"n: integer in [{COUNT_MIN}, {COUNT_MAX}]",
        ),
        CommandSpec(
            "zoom",
            ("zoom",),
            "zoom(value)",
            "Set the zoom factor; the field of view is 60°/value by 33.75°/value.",
            f"value: decimal in [{ZOOM_MIN}, {ZOOM_MAX}]",
        ),
        CommandSpec(
            "zoom_to",
            ("object",),
            "zoom_to(object_id)",
            "Center on the object, then zoom until it fills most of the frame.",
            "object_id: an id from the observations, e.g. car_1",
        ),
        CommandSpec(
            "center",
            ("object",),
            "center(object_id)",
            "Pan and tilt smoothly until the object is centered.",
            "object_id: an id from the observations, e.g. car_1",
        ),
        CommandSpec(
            "hold",
            ("count",),
            "hold(n)",
            "Keep the current view for n frames.",
            f"n: integer in [{COUNT_MIN}, {COUNT_MAX}]",
        ),
        CommandSpec(
            "home",
            (),
            "home()",
            "Return to the home position: pan 0°, tilt 0°, zoom 1x.",
            "no parameters",
        ),
    )
}


@dataclass(frozen=True)
class Command:
    """One validated camera command: a name from the table plus typed args."""

    name: str
    args: tuple[int | float | str, ...] = ()

    def __post_init__(self) -> None:
        spec = COMMAND_TABLE.get(self.name)
        if spec is None:
            raise ValueError(f"unknown command name: {self.name!r}")
        if len(self.args) != len(spec.params):
            raise ValueError(
                f"{self.name} takes {len(spec.params)} argument(s), got {len(self.args)}"
            )
        for kind, value in zip(spec.params, self.args):
            if kind == "count":
                if not isinstance(value, int) or isinstance(value, bool):
                    raise ValueError(f"{self.name}: count argument must be an integer")
                if not (COUNT_MIN <= value <= COUNT_MAX):
                    raise ValueError(f"{self.name}: count {value} outside [{COUNT_MIN}, {COUNT_MAX}]")
            elif kind == "zoom":
                if not isinstance(value, (int, float)) or isinstance(value, bool):
                    raise ValueError(f"{self.name}: zoom argument must be a number")
                if not (ZOOM_MIN <= float(value) <= ZOOM_MAX):
                    raise ValueError(f"{self.name}: zoom {value} outside [{ZOOM_MIN}, {ZOOM_MAX}]")
            elif kind == "object":
                if not isinstance(value, str) or not _IDENT_RE.fullmatch(value):
                    raise ValueError(f"{self.name}: object argument must be an identifier")

    def render(self) -> str:
        parts = []
        for kind, value in zip(COMMAND_TABLE[self.name].params, self.args):
            if kind == "zoom":
                parts.append(repr(float(value)))
            else:
                parts.append(str(value))
        return f"{self.name}({', '.join(parts)})"


CommandSequence = tuple[Command, ...]


@dataclass(frozen=True)
class CommandDoc:
    name: str
    signature: str
    description: str
    param_ranges: str


@dataclass(frozen=True)
class Diagnostic:
    position: int
    kind: str
    text: str


@dataclass(frozen=True)
class ParseOutcome:
    commands: CommandSequence = ()
    diagnostics: tuple[Diagnostic, ...] = ()

    @property
    def accepted(self) -> bool:
        return bool(self.commands) and not self.diagnostics

    def diagnostic_kinds(self) -> list[str]:
        return [d.kind for d in self.diagnostics]


_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_CALL_RE = re.compile(r"\b([A-Za-z_][A-Za-z0-9_]*)\s*\(([^()]*)\)")
_INT_RE = re.compile(r"[+-]?\d+")
_DECIMAL_RE = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)")


def _split_args(raw: str) -> list[str]:
    raw = raw.strip()
    if not raw:
        return []
    return [part.strip() for part in raw.split(",")]


def parse_response(raw: str, scene: Scene) -> ParseOutcome:
    """Extract and validate camera commands from arbitrary model text.

    Total over any input string: always returns a ParseOutcome, never
    raises. Commands keep their order of appearance; every violation is
    collected as a diagnostic rather than stopping the scan.
    """
    if not isinstance(raw, str):
        raw = str(raw)
    commands: list[Command] = []
    diagnostics: list[Diagnostic] = []
    found_any_call = False
    for match in _CALL_RE.finditer(raw):
        found_any_call = True
        name = match.group(1)
        position = match.start()
        spec = COMMAND_TABLE.get(name)
        if spec is None:
            diagnostics.append(Diagnostic(position, UNKNOWN_COMMAND, match.group(0).strip()))
            continue
        arg_tokens = _split_args(match.group(2))
        if len(arg_tokens) != len(spec.params):
            diagnostics.append(
                Diagnostic(
                    position,
                    BAD_ARITY,
                    f"{name} takes {len(spec.params)} argument(s), got {len(arg_tokens)}",
                )
            )
            continue
        args: list[int | float | str] = []
        ok = True
        for kind, token in zip(spec.params, arg_tokens):
            if kind == "count":
                if not _INT_RE.fullmatch(token):
                    diagnostics.append(
                        Diagnostic(position, MALFORMED_ARGUMENT, f"{name}: expected integer, got {token!r}")
                    )
                    ok = False
                    break
                value = int(token)
                if not (COUNT_MIN <= value <= COUNT_MAX):
                    diagnostics.append(
                        Diagnostic(
                            position,
                            OUT_OF_RANGE,
                            f"{name}: {value} outside [{COUNT_MIN}, {COUNT_MAX}]",
                        )
                    )
                    ok = False
                    break
                args.append(value)
            elif kind == "zoom":
                if not _DECIMAL_RE.fullmatch(token):
                    diagnostics.append(
                        Diagnostic(position, MALFORMED_ARGUMENT, f"{name}: expected decimal, got {token!r}")
                    )
                    ok = False
                    break
                value = float(token)
                if not (ZOOM_MIN <= value <= ZOOM_MAX):
                    diagnostics.append(
                        Diagnostic(
                            position,
                            OUT_OF_RANGE,
                            f"{name}: {value:g} outside [{ZOOM_MIN}, {ZOOM_MAX}]",
                        )
                    )
                    ok = False
                    break
                args.append(value)
            else:  # object
                if not _IDENT_RE.fullmatch(token):
                    diagnostics.append(
                        Diagnostic(position, MALFORMED_ARGUMENT, f"{name}: expected identifier, got {token!r}")
                    )
                    ok = False
                    break
                if token not in scene.object_ids():
                    diagnostics.append(
                        Diagnostic(position, UNKNOWN_OBJECT, f"{name}: no object {token!r} in scene")
                    )
                    ok = False
                    break
                args.append(token)
        if ok:
            commands.append(Command(name, tuple(args)))
    if not commands and not found_any_call:
        diagnostics.append(Diagnostic(0, NO_COMMANDS_FOUND, "no command calls found in text"))
    return ParseOutcome(commands=tuple(commands), diagnostics=tuple(diagnostics))


def serialize(commands: Sequence[Command]) -> str:
    """Canonical text form: one command per line.

    Round-trips through :func:`parse_response` for any scene containing
    the referenced objects.
    """
    return "\n".join(cmd.render() for cmd in commands)


def api_docs() -> list[CommandDoc]:
    """The complete, ordered command documentation table."""
    return [
        CommandDoc(spec.name, spec.signature, spec.description, spec.param_ranges)
        for spec in COMMAND_TABLE.values()
    ]
