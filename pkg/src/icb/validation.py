"""Consistency rules for intention models.

Nine rules, V1–V9, each documented in docs/validation.md. Everything that
would make generated code non-compilable or ambiguous is an Error; stylistic
incompleteness (a transaction that touches no asset) is a Warning. validate()
never short-circuits: the full issue list comes back, sorted by
(severity, rule, path) so output is stable.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any, Iterable

from .model import (
    Asset,
    FieldPath,
    IntentionModel,
    Param,
    ParamType,
    Participant,
    RelationshipKind,
)
from .naming import is_code_identifier, mangle, reserved_words


class Severity(Enum):
    ERROR = "Error"
    WARNING = "Warning"


@dataclass(frozen=True)
class ValidationIssue:
    rule: str
    severity: Severity
    path: str
    message: str

    def render(self) -> str:
        return f"{self.severity.value} {self.rule} {self.path}: {self.message}"

    def to_dict(self) -> dict[str, str]:
        return {
            "rule": self.rule,
            "severity": self.severity.value,
            "path": self.path,
            "message": self.message,
        }


def render_issues(issues: Iterable[ValidationIssue]) -> str:
    return "\n".join(i.render() for i in issues)


def is_generatable(issues: Iterable[ValidationIssue]) -> bool:
    """Warnings never block generation; any Error does."""
    return all(i.severity is not Severity.ERROR for i in issues)


def resolve_field_path(model: IntentionModel, path: FieldPath) -> tuple[str, str, Param] | None:
    """Resolve `Entity.attribute` against declared participants and assets.

    The entity segment matches either the display name or its mangled form.
    Returns (entity_kind, entity_name, param) or None.
    """
    if len(path.segments) != 2:
        return None
    head, attr = path.segments
    for kind, entities in (("participant", model.participants), ("asset", model.assets)):
        for entity in entities:
            if entity.name == head or mangle(entity.name) == head:
                attrs = entity.params if isinstance(entity, Participant) else entity.fields
                for param in attrs:
                    if param.name == attr or mangle(param.name) == attr:
                        return kind, entity.name, param
    return None


def validate(model: IntentionModel) -> list[ValidationIssue]:
    issues: list[ValidationIssue] = []
    _check_header(model, issues)
    _check_participants(model, issues)
    _check_name_uniqueness(model, issues)
    _check_relationships(model, issues)
    _check_conditions(model, issues)
    _check_identifiers(model, issues)
    _check_param_types(model, issues)
    _check_asset_coverage(model, issues)
    return sorted(issues, key=lambda i: (i.severity.value, i.rule, i.path))


def _error(issues: list[ValidationIssue], rule: str, path: str, message: str) -> None:
    issues.append(ValidationIssue(rule, Severity.ERROR, path, message))


def _warning(issues: list[ValidationIssue], rule: str, path: str, message: str) -> None:
    issues.append(ValidationIssue(rule, Severity.WARNING, path, message))


def _check_header(model: IntentionModel, issues: list[ValidationIssue]) -> None:
    """V1: contract header complete, platform one of the supported three."""
    if not model.contract.name.strip():
        _error(issues, "V1", "contract", "the contract has no name")
    if model.contract.platform is None:
        _error(issues, "V1", "contract", "no target platform selected")


def _check_participants(model: IntentionModel, issues: list[ValidationIssue]) -> None:
    """V2: at least one participant, at least one marked creator."""
    if not model.participants:
        _error(issues, "V2", "participants", "the contract declares no participant")
        return
    if not any(p.creator for p in model.participants):
        _error(
            issues,
            "V2",
            "participants",
            "no participant is marked as the contract creator",
        )


def _check_name_uniqueness(model: IntentionModel, issues: list[ValidationIssue]) -> None:
    """V3: mangled names unique across entities and within each entity's attributes."""
    seen: dict[str, tuple[str, str]] = {}
    named = [
        *(("participant", p.name) for p in model.participants),
        *(("asset", a.name) for a in model.assets),
        *(("transaction", t.name) for t in model.transactions),
    ]
    for kind, name in named:
        key = mangle(name)
        if key in seen:
            other_kind, other_name = seen[key]
            _error(
                issues,
                "V3",
                f'{kind}s["{name}"]',
                f'{kind} "{name}" clashes with {other_kind} "{other_name}"'
                f' (both become "{key}" in code)',
            )
        else:
            seen[key] = (kind, name)

    owners = [
        *((f'participants["{p.name}"]', p.params) for p in model.participants),
        *((f'assets["{a.name}"]', a.fields) for a in model.assets),
        *((f'transactions["{t.name}"]', t.params) for t in model.transactions),
    ]
    for owner_path, params in owners:
        taken: dict[str, str] = {}
        for param in params:
            key = mangle(param.name)
            if key in taken:
                _error(
                    issues,
                    "V3",
                    f'{owner_path}.params["{param.name}"]',
                    f'parameter "{param.name}" duplicates "{taken[key]}" within {owner_path}',
                )
            else:
                taken[key] = param.name


def _check_relationships(model: IntentionModel, issues: list[ValidationIssue]) -> None:
    """V4: every transaction is linked; V5: every link resolves with the right kind."""
    linked = {r.transaction for r in model.relationships}
    for t in model.transactions:
        if t.name not in linked:
            _error(
                issues,
                "V4",
                f'transactions["{t.name}"]',
                f'transaction "{t.name}" has no relationship to a participant or an asset',
            )

    transaction_names = {t.name for t in model.transactions}
    participant_names = {p.name for p in model.participants}
    asset_names = {a.name for a in model.assets}
    for i, rel in enumerate(model.relationships):
        path = f"relationships[{i}]"
        if rel.transaction not in transaction_names:
            _error(
                issues,
                "V5",
                path,
                f'relationship names unknown transaction "{rel.transaction}"',
            )
        if rel.kind is RelationshipKind.TRANREL and rel.target not in participant_names:
            _error(
                issues,
                "V5",
                path,
                f'tranrel target "{rel.target}" is not a declared participant',
            )
        if rel.kind is RelationshipKind.ASSETREL and rel.target not in asset_names:
            _error(
                issues,
                "V5",
                path,
                f'assetrel target "{rel.target}" is not a declared asset',
            )


def _check_conditions(model: IntentionModel, issues: list[ValidationIssue]) -> None:
    """V6: conditions reference a known transaction and resolvable field paths."""
    transaction_names = {t.name for t in model.transactions}
    for i, cond in enumerate(model.conditions):
        path = f"conditions[{i}]"
        if cond.transaction not in transaction_names:
            _error(
                issues,
                "V6",
                path,
                f'condition names unknown transaction "{cond.transaction}"',
            )
        for side, operand in (("left", cond.guard.lhs), ("right", cond.guard.rhs)):
            if isinstance(operand, FieldPath) and resolve_field_path(model, operand) is None:
                _error(
                    issues,
                    "V6",
                    path,
                    f'condition on "{cond.transaction}": {side}-hand path "{operand}" does not'
                    " resolve to a declared parameter or field",
                )


def _check_identifiers(model: IntentionModel, issues: list[ValidationIssue]) -> None:
    """V7: every name mangles to a usable identifier that is not reserved."""
    reserved = reserved_words(model.contract.platform)
    named: list[tuple[str, str]] = []
    if model.contract.name.strip():
        named.append(("contract", model.contract.name))
    for p in model.participants:
        named.append((f'participants["{p.name}"]', p.name))
        named.extend((f'participants["{p.name}"].params["{x.name}"]', x.name) for x in p.params)
    for a in model.assets:
        named.append((f'assets["{a.name}"]', a.name))
        named.extend((f'assets["{a.name}"].params["{x.name}"]', x.name) for x in a.fields)
    for t in model.transactions:
        named.append((f'transactions["{t.name}"]', t.name))
        named.extend((f'transactions["{t.name}"].params["{x.name}"]', x.name) for x in t.params)

    for path, name in named:
        ident = mangle(name)
        if not is_code_identifier(ident):
            _error(
                issues,
                "V7",
                path,
                f'"{name}" does not mangle to a usable identifier'
                " (it must start with a letter)",
            )
        elif ident in reserved:
            _error(
                issues,
                "V7",
                path,
                f'"{name}" becomes "{ident}", a reserved word on'
                f" {model.contract.platform.value}",
            )


def _check_param_types(model: IntentionModel, issues: list[ValidationIssue]) -> None:
    """V8: parameter types come from the closed set."""
    owners = [
        *((f'participants["{p.name}"]', p.params) for p in model.participants),
        *((f'assets["{a.name}"]', a.fields) for a in model.assets),
        *((f'transactions["{t.name}"]', t.params) for t in model.transactions),
    ]
    for owner_path, params in owners:
        for param in params:
            if not isinstance(param.ptype, ParamType):
                _error(
                    issues,
                    "V8",
                    f'{owner_path}.params["{param.name}"]',
                    f'parameter "{param.name}" has unsupported type {param.ptype!r}',
                )


def _check_asset_coverage(model: IntentionModel, issues: list[ValidationIssue]) -> None:
    """V9: a transaction that touches no asset is suspicious but generatable."""
    with_assetrel = {
        r.transaction for r in model.relationships if r.kind is RelationshipKind.ASSETREL
    }
    for t in model.transactions:
        if t.name not in with_assetrel:
            _warning(
                issues,
                "V9",
                f'transactions["{t.name}"]',
                f'transaction "{t.name}" has no assetrel, so it modifies no asset',
            )
