"""Template-based intent classification.

Each intent ships a set of expressions with `{slot}` placeholders.
Classification normalizes the utterance (case, whitespace, terminal
punctuation, spacing around `:`/`->`/comparison operators), then tries an
exact template match with greedy slot capture (score 1.0); failing that, a
token-overlap pass over the expressions' literal tokens picks the best
candidate at or above the 0.6 threshold. Below the threshold the result is
the `unrecognized` fallback. Everything is deterministic: ties go to the
more specific expression first, then to intent-table order.

Slot values keep the utterance's original casing for free-text slots; enum
and yes/no slots canonicalize ("Ethereum" → "ethereum", "yep" → "yes").
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping, Sequence

UNRECOGNIZED = "unrecognized"
GLOBAL_INTENTS = ("restart", "help")
SCORE_THRESHOLD = 0.6

_PLACEHOLDER = re.compile(r"\{(\w+)\}")


class SlotKind(Enum):
    FREE_TEXT = "free-text"
    ENUM = "enum"
    YES_NO = "yes-no"


YES_NO_SYNONYMS: Mapping[str, str] = {
    "y": "yes",
    "yeah": "yes",
    "yep": "yes",
    "yup": "yes",
    "sure": "yes",
    "ok": "yes",
    "okay": "yes",
    "correct": "yes",
    "true": "yes",
    "n": "no",
    "nope": "no",
    "nah": "no",
    "false": "no",
}


@dataclass(frozen=True)
class SlotSpec:
    name: str
    kind: SlotKind
    options: tuple[str, ...] = ()
    synonyms: tuple[tuple[str, str], ...] = ()

    def surfaces(self) -> list[str]:
        """Every accepted spelling, canonical options first."""
        if self.kind is SlotKind.YES_NO:
            return ["yes", "no", *YES_NO_SYNONYMS.keys()]
        return [*self.options, *(s for s, _ in self.synonyms)]

    def canonicalize(self, raw: str) -> str | None:
        value = raw.strip()
        if self.kind is SlotKind.FREE_TEXT:
            return value or None
        lowered = value.lower()
        if self.kind is SlotKind.YES_NO:
            return YES_NO_SYNONYMS.get(lowered, lowered if lowered in ("yes", "no") else None)
        if lowered in self.options:
            return lowered
        return dict(self.synonyms).get(lowered)


@dataclass(frozen=True)
class IntentDef:
    id: str
    slots: tuple[SlotSpec, ...]
    expressions: tuple[str, ...]

    def slot(self, name: str) -> SlotSpec:
        return next(s for s in self.slots if s.name == name)


@dataclass(frozen=True)
class IntentMatch:
    intent: str
    slots: dict[str, str] = field(default_factory=dict)
    score: float = 0.0


def normalize(text: str) -> str:
    """Normalized-for-matching form; keeps letter case for slot extraction."""
    s = re.sub(r"\s+", " ", text).strip()
    s = re.sub(r"\s*->\s*", " -> ", s)
    s = re.sub(r"\s*:\s*", " : ", s)
    s = re.sub(r"\s*(==|!=|<=|>=)\s*", r" \1 ", s)
    s = re.sub(r"(?<![-=<>!])\s*([<>])\s*(?![=>])", r" \1 ", s)
    s = re.sub(r"\s+", " ", s).strip()
    return re.sub(r"[\s.!?,;]+$", "", s)


def _slot_pattern(slot: SlotSpec) -> str:
    if slot.kind is SlotKind.FREE_TEXT:
        return f"(?P<{slot.name}>.+)"
    surfaces = sorted(slot.surfaces(), key=len, reverse=True)
    return f"(?P<{slot.name}>" + "|".join(re.escape(s) for s in surfaces) + ")"


def _template_parts(intent: IntentDef, expression: str) -> list[tuple[str, str]]:
    """Split a normalized template into ('lit', text) / ('slot', name) parts."""
    parts: list[tuple[str, str]] = []
    pos = 0
    for m in _PLACEHOLDER.finditer(expression):
        if m.start() > pos:
            parts.append(("lit", expression[pos : m.start()]))
        parts.append(("slot", m.group(1)))
        pos = m.end()
    if pos < len(expression):
        parts.append(("lit", expression[pos:]))
    return parts


def literal_tokens(expression: str) -> list[str]:
    """Lower-cased non-slot tokens of a template."""
    stripped = _PLACEHOLDER.sub(" ", normalize(expression))
    return stripped.lower().split()


def _exact_regex(intent: IntentDef, expression: str) -> re.Pattern[str]:
    body = "".join(
        re.escape(text) if kind == "lit" else _slot_pattern(intent.slot(text))
        for kind, text in _template_parts(intent, normalize(expression))
    )
    return re.compile("^" + body + "$", re.IGNORECASE)


def _relaxed_regex(intent: IntentDef, expression: str) -> re.Pattern[str]:
    """Exact template with extra filler tokens allowed around literals."""
    pieces: list[str] = [r"^(?:\S+\s+)*?"]
    parts = _template_parts(intent, normalize(expression))
    for i, (kind, text) in enumerate(parts):
        if kind == "slot":
            pieces.append(_slot_pattern(intent.slot(text)))
        else:
            tokens = [re.escape(t) for t in text.split()]
            joined = r"(?:\s+\S+)*?\s+".join(tokens)
            if i > 0:
                joined = r"\s+" + joined
            if i < len(parts) - 1:
                joined += r"\s+"
            pieces.append(joined)
    if parts and parts[-1][0] == "lit":
        pieces.append(r"(?:\s+\S+)*")
    pieces.append("$")
    return re.compile("".join(pieces), re.IGNORECASE)


def _bind_slots(intent: IntentDef, match: re.Match[str]) -> dict[str, str] | None:
    slots: dict[str, str] = {}
    captured = match.groupdict()
    for spec in intent.slots:
        raw = captured.get(spec.name)
        value = spec.canonicalize(raw) if raw is not None else None
        if value is None:
            return None  # a mandatory slot stayed unbound
        slots[spec.name] = value
    return slots


def classify(
    utterance: str,
    candidates: Iterable[str],
    table: Sequence[IntentDef] | None = None,
) -> IntentMatch:
    """Classify one utterance against the candidate intents.

    Pure function of its inputs; `restart` and `help` are always live, and
    `unrecognized` is the total fallback.
    """
    table = table if table is not None else shipped_intent_table()
    allowed = set(candidates) | set(GLOBAL_INTENTS)
    defs = [(i, d) for i, d in enumerate(table) if d.id in allowed]

    text = normalize(utterance)
    if not text:
        return IntentMatch(UNRECOGNIZED)

    # exact template matches; most specific expression wins, then table order
    exact: list[tuple[int, int, int, IntentDef, dict[str, str]]] = []
    for table_idx, intent in defs:
        for expr_idx, expression in enumerate(intent.expressions):
            m = _exact_regex(intent, expression).fullmatch(text)
            if not m:
                continue
            slots = _bind_slots(intent, m)
            if slots is None:
                continue
            specificity = len(literal_tokens(expression))
            exact.append((-specificity, table_idx, expr_idx, intent, slots))
    if exact:
        exact.sort(key=lambda e: e[:3])
        _, _, _, intent, slots = exact[0]
        return IntentMatch(intent.id, slots, 1.0)

    # token-overlap pass over expressions that carry literal tokens
    utterance_tokens = set(text.lower().split())
    scored: list[tuple[float, int, int, IntentDef, str]] = []
    for table_idx, intent in defs:
        for expr_idx, expression in enumerate(intent.expressions):
            literals = literal_tokens(expression)
            if not literals:
                continue
            overlap = len(set(literals) & utterance_tokens) / len(set(literals))
            if overlap >= SCORE_THRESHOLD:
                scored.append((-overlap, table_idx, expr_idx, intent, expression))
    scored.sort(key=lambda e: e[:3])
    for neg_score, _, _, intent, expression in scored:
        m = _relaxed_regex(intent, expression).fullmatch(text)
        if not m:
            continue
        slots = _bind_slots(intent, m)
        if slots is not None:
            return IntentMatch(intent.id, slots, -neg_score)

    return IntentMatch(UNRECOGNIZED)


# --------------------------------------------------------------------------
# Shipped intent table
# --------------------------------------------------------------------------

_PLATFORM_SLOT = SlotSpec(
    "platform",
    SlotKind.ENUM,
    options=("azure", "hyperledger-fabric", "ethereum"),
    synonyms=(
        ("hyperledger fabric", "hyperledger-fabric"),
        ("hyperledger", "hyperledger-fabric"),
        ("fabric", "hyperledger-fabric"),
    ),
)

_PTYPE_SLOT = SlotSpec(
    "ptype",
    SlotKind.ENUM,
    options=("text", "integer", "decimal", "boolean", "identity"),
    synonyms=(
        ("string", "text"),
        ("str", "text"),
        ("int", "integer"),
        ("number", "decimal"),
        ("float", "decimal"),
        ("bool", "boolean"),
        ("flag", "boolean"),
        ("address", "identity"),
        ("account", "identity"),
    ),
)

_REL_KIND_SLOT = SlotSpec(
    "kind",
    SlotKind.ENUM,
    options=("tranrel", "assetrel"),
    synonyms=(("participant", "tranrel"), ("asset", "assetrel")),
)

_OP_SLOT = SlotSpec(
    "op",
    SlotKind.ENUM,
    options=("==", "!=", "<", "<=", ">", ">="),
    synonyms=(("equals", "=="), ("at least", ">="), ("at most", "<=")),
)


def _free(name: str) -> SlotSpec:
    return SlotSpec(name, SlotKind.FREE_TEXT)


_SHIPPED: tuple[IntentDef, ...] = (
    IntentDef(
        "create_contract",
        (_free("name"),),
        (
            "create a contract called {name}",
            "i want a contract called {name}",
            "make a contract named {name}",
            "new contract {name}",
            "call the contract {name}",
            "{name}",
        ),
    ),
    IntentDef(
        "choose_platform",
        (_PLATFORM_SLOT,),
        (
            "use {platform}",
            "deploy on {platform}",
            "target {platform}",
            "platform {platform}",
            "{platform}",
        ),
    ),
    IntentDef(
        "add_participant",
        (_free("name"),),
        (
            "add participant {name}",
            "add a participant called {name}",
            "participant {name}",
            "new participant {name}",
        ),
    ),
    IntentDef(
        "mark_creator",
        (SlotSpec("creator", SlotKind.YES_NO),),
        (
            "{creator}",
            "{creator} it is",
            "{creator} it is not",
            "{creator} please",
        ),
    ),
    IntentDef(
        "add_param",
        (_free("name"), _PTYPE_SLOT),
        (
            "{name} : {ptype}",
            "add parameter {name} of type {ptype}",
            "add field {name} of type {ptype}",
            "add a {ptype} parameter called {name}",
            "add a {ptype} field called {name}",
            "parameter {name} is {ptype}",
        ),
    ),
    IntentDef(
        "add_asset",
        (_free("name"),),
        (
            "add asset {name}",
            "add an asset called {name}",
            "asset {name}",
            "new asset {name}",
        ),
    ),
    IntentDef(
        "add_transaction",
        (_free("name"),),
        (
            "add transaction {name}",
            "add a transaction called {name}",
            "transaction {name}",
            "new transaction {name}",
        ),
    ),
    IntentDef(
        "add_relationship",
        (_REL_KIND_SLOT, _free("transaction"), _free("target")),
        (
            "link {transaction} to {kind} {target}",
            "relate {transaction} to {kind} {target}",
            "connect {transaction} to {kind} {target}",
            "{kind} {transaction} -> {target}",
        ),
    ),
    IntentDef(
        "add_condition",
        (_free("transaction"), _free("lhs"), _OP_SLOT, _free("rhs")),
        (
            "require {lhs} {op} {rhs} on {transaction}",
            "on {transaction} require {lhs} {op} {rhs}",
            "condition on {transaction} : {lhs} {op} {rhs}",
            "add condition {lhs} {op} {rhs} on {transaction}",
        ),
    ),
    IntentDef(
        "done_section",
        (),
        (
            "done",
            "that is all",
            "that's all",
            "no more",
            "finished",
            "next section",
        ),
    ),
    IntentDef(
        "confirm",
        (SlotSpec("answer", SlotKind.YES_NO),),
        (
            "{answer}",
            "{answer} generate it",
            "{answer} go ahead",
            "confirm {answer}",
        ),
    ),
    IntentDef(
        "restart",
        (),
        ("restart", "start over", "start again", "reset"),
    ),
    IntentDef(
        "help",
        (),
        ("help", "what can i say", "what are my options", "options"),
    ),
)


def shipped_intent_table() -> tuple[IntentDef, ...]:
    """The built-in intent table; order matters for tie-breaking."""
    return _SHIPPED


# --------------------------------------------------------------------------
# Declarative intent-table files (see docs/intents.md)
# --------------------------------------------------------------------------


def render_intent_table(table: Sequence[IntentDef]) -> str:
    """Write a table in the declarative file format (inverse of load)."""
    lines: list[str] = []
    for intent in table:
        lines.append(f"[{intent.id}]")
        for slot in intent.slots:
            if slot.kind is SlotKind.ENUM:
                lines.append(f"slot.{slot.name} = enum({', '.join(slot.options)})")
            else:
                lines.append(f"slot.{slot.name} = {slot.kind.value}")
            for surface, canonical in slot.synonyms:
                lines.append(f"synonym.{slot.name} = {surface} -> {canonical}")
        for expression in intent.expressions:
            lines.append(f"expr = {expression}")
        lines.append("")
    return "\n".join(lines)


def parse_intent_table(text: str) -> tuple[IntentDef, ...]:
    intents: list[IntentDef] = []
    current_id: str | None = None
    slots: list[SlotSpec] = []
    expressions: list[str] = []

    def flush() -> None:
        nonlocal slots, expressions
        if current_id is None:
            return
        if not expressions:
            raise ValueError(f"intent '{current_id}' has no expressions")
        intent = IntentDef(current_id, tuple(slots), tuple(expressions))
        _check_placeholders(intent)
        intents.append(intent)
        slots, expressions = [], []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            flush()
            current_id = line[1:-1].strip()
            continue
        if current_id is None:
            raise ValueError(f"line {lineno}: expected an [intent] section first")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key.startswith("slot."):
            slots.append(_parse_slot_spec(key[5:], value, lineno))
        elif key.startswith("synonym."):
            slot_name = key[8:]
            surface, _, canonical = value.partition("->")
            slots = [
                s
                if s.name != slot_name
                else SlotSpec(
                    s.name,
                    s.kind,
                    s.options,
                    s.synonyms + ((surface.strip().lower(), canonical.strip()),),
                )
                for s in slots
            ]
        elif key == "expr":
            expressions.append(value)
        else:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
    flush()
    return tuple(intents)


def load_intent_table(path: str | Path) -> tuple[IntentDef, ...]:
    return parse_intent_table(Path(path).read_text(encoding="utf-8"))


def _parse_slot_spec(name: str, value: str, lineno: int) -> SlotSpec:
    if value == SlotKind.FREE_TEXT.value:
        return SlotSpec(name, SlotKind.FREE_TEXT)
    if value == SlotKind.YES_NO.value:
        return SlotSpec(name, SlotKind.YES_NO)
    m = re.fullmatch(r"enum\((.*)\)", value)
    if not m:
        raise ValueError(f"line {lineno}: bad slot spec {value!r}")
    options = tuple(o.strip() for o in m.group(1).split(",") if o.strip())
    return SlotSpec(name, SlotKind.ENUM, options=options)


def _check_placeholders(intent: IntentDef) -> None:
    declared = {s.name for s in intent.slots}
    for expression in intent.expressions:
        used = _PLACEHOLDER.findall(expression)
        missing = set(used) - declared
        if missing:
            raise ValueError(
                f"intent '{intent.id}': expression {expression!r} uses"
                f" undeclared slot(s) {sorted(missing)}"
            )
        if len(used) != len(set(used)):
            raise ValueError(
                f"intent '{intent.id}': expression {expression!r} repeats a slot"
            )
