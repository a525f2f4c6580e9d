"""Canonical textual rendering of intention models.

The output is the normative `.icb` form: fixed block order (participants,
assets, transactions, relationships, conditions), two-space indentation, one
declaration per line, LF endings, single trailing newline. Rendering the same
model always yields identical bytes, and parsing the rendering reproduces the
model structurally.
"""

from __future__ import annotations

from .model import (
    Asset,
    Condition,
    FieldPath,
    IntentionModel,
    Literal,
    Operand,
    Param,
    Participant,
    Relationship,
    Transaction,
)

_INDENT = "  "


def quote(text: str) -> str:
    """Render a display string as a double-quoted DSL string."""
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def render_operand(operand: Operand) -> str:
    if isinstance(operand, FieldPath):
        return str(operand)
    value = operand.value
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, str):
        return quote(value)
    return str(value)  # int and Decimal keep their literal spelling


def _entity_lines(keyword: str, name: str, params: tuple[Param, ...], extra: str = "") -> list[str]:
    head = f"{_INDENT}{keyword} {quote(name)}{extra}"
    if not params:
        return [head + " { }"]
    lines = [head + " {"]
    lines.extend(f"{_INDENT * 2}{p.name}: {p.ptype.value}" for p in params)
    lines.append(_INDENT + "}")
    return lines


def serialize(model: IntentionModel) -> str:
    """Render a shape-valid model; the header must be complete."""
    header = model.contract
    if not header.is_complete:
        raise ValueError("cannot serialize a model without a name and platform")

    lines = [f"contract {quote(header.name)} on {header.platform.value} {{"]
    for p in model.participants:
        lines.extend(_participant_lines(p))
    for a in model.assets:
        lines.extend(_asset_lines(a))
    for t in model.transactions:
        lines.extend(_transaction_lines(t))
    for r in model.relationships:
        lines.append(_relationship_line(r))
    for c in model.conditions:
        lines.append(_condition_line(c))
    lines.append("}")
    return "\n".join(lines) + "\n"


def _participant_lines(p: Participant) -> list[str]:
    return _entity_lines("participant", p.name, p.params, " creator" if p.creator else "")


def _asset_lines(a: Asset) -> list[str]:
    return _entity_lines("asset", a.name, a.fields)


def _transaction_lines(t: Transaction) -> list[str]:
    return _entity_lines("transaction", t.name, t.params)


def _relationship_line(r: Relationship) -> str:
    return f"{_INDENT}{r.kind.value} {quote(r.transaction)} -> {quote(r.target)}"


def _condition_line(c: Condition) -> str:
    guard = c.guard
    return (
        f"{_INDENT}condition on {quote(c.transaction)}: "
        f"{render_operand(guard.lhs)} {guard.op.value} {render_operand(guard.rhs)}"
    )
