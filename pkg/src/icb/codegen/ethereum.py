"""Solidity contract generation.

Layout of the emitted contract:
  - one struct per asset (an `exists` flag first, then its declared fields),
    stored in a uint256-keyed registry mapping;
  - one `is<Role>` address registry per participant, plus a data struct and
    per-address mapping when the participant declares parameters;
  - a constructor registering the deployer under every creator role;
  - one function per transaction that first requires the caller roles from
    its tranrels, then requires each condition guard, then touches the
    registries of its assetrel targets and emits the transaction's event.

Conditions reference participant parameters through msg.sender's data record
and asset fields through the asset key parameter the function receives.
"""

from __future__ import annotations

from ..model import (
    ComparisonOp,
    FieldPath,
    IntentionModel,
    Literal,
    Operand,
    ParamType,
    RelationshipKind,
    Transaction,
)
from ..naming import ManglingTable, mangle
from ..validation import resolve_field_path
from . import ArtifactKind, GeneratedArtifact, generator_stamp

PRAGMA = "pragma solidity ^0.8.20;"

_STRUCT_TYPES = {
    ParamType.TEXT: "string",
    ParamType.INTEGER: "int256",
    ParamType.DECIMAL: "int256",  # fixed-point by convention; no native decimals
    ParamType.BOOLEAN: "bool",
    ParamType.IDENTITY: "address",
}

_ARG_TYPES = {**_STRUCT_TYPES, ParamType.TEXT: "string memory"}


def generate_ethereum(model: IntentionModel) -> list[GeneratedArtifact]:
    table = ManglingTable.for_model(model)
    source = _contract_source(model, table)
    readme = _readme(model, table)
    return [
        GeneratedArtifact(
            rel_path=f"contracts/{table.contract_identifier()}.sol",
            content=source,
            kind=ArtifactKind.CONTRACT_SOURCE,
        ),
        GeneratedArtifact(rel_path="README.md", content=readme, kind=ArtifactKind.README),
    ]


def _records_var(asset_id: str) -> str:
    return f"{asset_id}_records"


def _data_var(participant_id: str) -> str:
    return f"{participant_id}_data"


def _key_arg(asset_id: str) -> str:
    return f"{asset_id}_key"


def _contract_source(model: IntentionModel, table: ManglingTable) -> str:
    contract_id = table.contract_identifier()
    lines: list[str] = [
        "// SPDX-License-Identifier: MIT",
        f"// {generator_stamp(model)}",
        PRAGMA,
        "",
        f"contract {contract_id} {{",
    ]

    for asset in model.assets:
        asset_id = table.identifier(asset.name)
        lines.append(f"    struct {asset_id} {{")
        lines.append("        bool exists;")
        lines.extend(
            f"        {_STRUCT_TYPES[f.ptype]} {mangle(f.name)};" for f in asset.fields
        )
        lines.append("    }")
        lines.append("")
        lines.append(
            f"    mapping(uint256 => {asset_id}) public {_records_var(asset_id)};"
        )
        lines.append("")

    for participant in model.participants:
        pid = table.identifier(participant.name)
        lines.append(f"    mapping(address => bool) public is{pid};")
        if participant.params:
            lines.append("")
            lines.append(f"    struct {pid}Data {{")
            lines.extend(
                f"        {_STRUCT_TYPES[p.ptype]} {mangle(p.name)};"
                for p in participant.params
            )
            lines.append("    }")
            lines.append("")
            lines.append(
                f"    mapping(address => {pid}Data) public {_data_var(pid)};"
            )
        lines.append("")

    for transaction in model.transactions:
        tid = table.identifier(transaction.name)
        lines.append(f"    event {tid}Executed(address indexed actor);")
    if model.transactions:
        lines.append("")

    lines.append("    constructor() {")
    for participant in model.participants:
        if participant.creator:
            pid = table.identifier(participant.name)
            lines.append(f"        is{pid}[msg.sender] = true;")
    lines.append("    }")

    for transaction in model.transactions:
        lines.append("")
        lines.extend(_function_lines(model, table, transaction))

    lines.append("}")
    return "\n".join(lines) + "\n"


def _function_lines(
    model: IntentionModel, table: ManglingTable, transaction: Transaction
) -> list[str]:
    tid = table.identifier(transaction.name)
    tranrels = [
        r
        for r in model.relationships
        if r.transaction == transaction.name and r.kind is RelationshipKind.TRANREL
    ]
    assetrels = [
        r
        for r in model.relationships
        if r.transaction == transaction.name and r.kind is RelationshipKind.ASSETREL
    ]
    conditions = [c for c in model.conditions if c.transaction == transaction.name]

    keyed_assets = _keyed_assets(model, assetrels, conditions)

    args = [f"{_ARG_TYPES[p.ptype]} {mangle(p.name)}" for p in transaction.params]
    args.extend(f"uint256 {_key_arg(table.identifier(a))}" for a in keyed_assets)

    lines = [f"    function {tid}({', '.join(args)}) public {{"]
    for rel in tranrels:
        role = table.identifier(rel.target)
        lines.append(
            f'        require(is{role}[msg.sender], "caller is not registered as {role}");'
        )
    for condition in conditions:
        expr = _guard_expression(model, table, condition.guard.lhs, condition.guard.op, condition.guard.rhs)
        lines.append(f'        require({expr}, "access condition not met");')
    for rel in assetrels:
        asset_id = table.identifier(rel.target)
        lines.append(
            f"        {_records_var(asset_id)}[{_key_arg(asset_id)}].exists = true;"
        )
    lines.append(f"        emit {tid}Executed(msg.sender);")
    lines.append("    }")
    return lines


def _keyed_assets(model, assetrels, conditions) -> list[str]:
    """Asset names the function needs a key parameter for, in declaration order."""
    wanted = {r.target for r in assetrels}
    for condition in conditions:
        for operand in (condition.guard.lhs, condition.guard.rhs):
            if isinstance(operand, FieldPath):
                resolved = resolve_field_path(model, operand)
                if resolved and resolved[0] == "asset":
                    wanted.add(resolved[1])
    return [a.name for a in model.assets if a.name in wanted]


def _guard_expression(
    model: IntentionModel,
    table: ManglingTable,
    lhs: Operand,
    op: ComparisonOp,
    rhs: Operand,
) -> str:
    left, left_text = _operand_expression(model, table, lhs)
    right, right_text = _operand_expression(model, table, rhs)
    if (left_text or right_text) and op in (ComparisonOp.EQ, ComparisonOp.NE):
        compare = f"keccak256(bytes({left})) {op.value} keccak256(bytes({right}))"
        return compare
    return f"{left} {op.value} {right}"


def _operand_expression(
    model: IntentionModel, table: ManglingTable, operand: Operand
) -> tuple[str, bool]:
    """Render an operand; the flag reports whether it is string-typed."""
    if isinstance(operand, Literal):
        value = operand.value
        if isinstance(value, bool):
            return ("true" if value else "false"), False
        if isinstance(value, str):
            escaped = value.replace("\\", "\\\\").replace('"', '\\"')
            return f'"{escaped}"', True
        return str(value), False
    resolved = resolve_field_path(model, operand)
    if resolved is None:  # cannot happen on a validated model
        raise ValueError(f"unresolvable field path {operand}")
    kind, entity_name, param = resolved
    entity_id = table.identifier(entity_name)
    field = mangle(param.name)
    is_text = param.ptype is ParamType.TEXT
    if kind == "participant":
        return f"{_data_var(entity_id)}[msg.sender].{field}", is_text
    return f"{_records_var(entity_id)}[{_key_arg(entity_id)}].{field}", is_text


def _readme(model: IntentionModel, table: ManglingTable) -> str:
    contract_id = table.contract_identifier()
    roles = ", ".join(table.identifier(p.name) for p in model.participants)
    lines = [
        f"<!-- {generator_stamp(model)} -->",
        f"# {model.contract.name}",
        "",
        "Deployment artifacts for the Ethereum platform.",
        "",
        "## Files",
        "",
        f"- `contracts/{contract_id}.sol`: Solidity contract source",
        "",
        "## Notes",
        "",
        f"Participant roles: {roles}.",
        "The deployer is registered under every creator role by the constructor;",
        "each transaction function checks its caller roles before running.",
        "",
        "Compile with a solc matching the pragma, e.g.:",
        "",
        f"    solc --bin contracts/{contract_id}.sol",
    ]
    return "\n".join(lines) + "\n"
