"""Hyperledger Composer artifact generation: model, logic stub, ACL.

The model definition declares every participant, asset and transaction under
a namespace derived from the contract name. Identity-typed attributes become
the identifying key; entities without one get a generated String key. The
ACL grants each tranrel's participant the right to submit its transaction
and ends with a deny-all rule.
"""

from __future__ import annotations

from ..model import IntentionModel, Param, ParamType, RelationshipKind
from ..naming import ManglingTable, mangle
from . import ArtifactKind, GeneratedArtifact, generator_stamp

_CTO_TYPES = {
    ParamType.TEXT: "String",
    ParamType.INTEGER: "Integer",
    ParamType.DECIMAL: "Double",
    ParamType.BOOLEAN: "Boolean",
    ParamType.IDENTITY: "String",
}


def generate_composer(model: IntentionModel) -> list[GeneratedArtifact]:
    table = ManglingTable.for_model(model)
    namespace = table.contract_identifier().lower()
    return [
        GeneratedArtifact(
            rel_path="models/model.cto",
            content=_model_cto(model, table, namespace),
            kind=ArtifactKind.MODEL_DEFINITION,
        ),
        GeneratedArtifact(
            rel_path="lib/logic.js",
            content=_logic_js(model, table, namespace),
            kind=ArtifactKind.CONTRACT_SOURCE,
        ),
        GeneratedArtifact(
            rel_path="permissions.acl",
            content=_permissions_acl(model, table, namespace),
            kind=ArtifactKind.ACCESS_CONTROL,
        ),
    ]


def _identifying_key(params: tuple[Param, ...], fallback: str) -> tuple[str, bool]:
    """(key field name, whether it is auto-generated)."""
    for param in params:
        if param.ptype is ParamType.IDENTITY:
            return mangle(param.name), False
    key = fallback
    taken = {mangle(p.name) for p in params}
    while key in taken:
        key += "_"
    return key, True


def _declaration(keyword: str, type_id: str, params: tuple[Param, ...], key_fallback: str) -> list[str]:
    key, generated = _identifying_key(params, key_fallback)
    lines = [f"{keyword} {type_id} identified by {key} {{"]
    if generated:
        lines.append(f"  o String {key}")
    lines.extend(f"  o {_CTO_TYPES[p.ptype]} {mangle(p.name)}" for p in params)
    lines.append("}")
    return lines


def _model_cto(model: IntentionModel, table: ManglingTable, namespace: str) -> str:
    lines = [f"// {generator_stamp(model)}", f"namespace {namespace}", ""]
    for participant in model.participants:
        pid = table.identifier(participant.name)
        lines.extend(_declaration("participant", pid, participant.params, "participantId"))
        lines.append("")
    for asset in model.assets:
        aid = table.identifier(asset.name)
        lines.extend(_declaration("asset", aid, asset.fields, "assetId"))
        lines.append("")
    for transaction in model.transactions:
        tid = table.identifier(transaction.name)
        lines.append(f"transaction {tid} {{")
        lines.extend(f"  o {_CTO_TYPES[p.ptype]} {mangle(p.name)}" for p in transaction.params)
        lines.append("}")
        lines.append("")
    return "\n".join(lines).rstrip("\n") + "\n"


def _logic_js(model: IntentionModel, table: ManglingTable, namespace: str) -> str:
    lines = [f"// {generator_stamp(model)}", "'use strict';", ""]
    for transaction in model.transactions:
        tid = table.identifier(transaction.name)
        display = transaction.name.replace("\\", "\\\\").replace('"', '\\"')
        lines.extend(
            [
                "/**",
                f' * Processor stub for the "{display}" transaction.',
                f" * @param {{{namespace}.{tid}}} tx - the submitted transaction",
                " * @transaction",
                " */",
                f"async function on{tid}(tx) {{",
                f'    // business logic for "{display}" goes here',
                "}",
                "",
            ]
        )
    return "\n".join(lines).rstrip("\n") + "\n"


def _permissions_acl(model: IntentionModel, table: ManglingTable, namespace: str) -> str:
    lines = [f"// {generator_stamp(model)}", ""]
    used_names: set[str] = set()
    for rel in model.relationships:
        if rel.kind is not RelationshipKind.TRANREL:
            continue
        tid = table.identifier(rel.transaction)
        pid = table.identifier(rel.target)
        rule = f"{tid}_by_{pid}"
        suffix = 2
        while rule in used_names:
            rule = f"{tid}_by_{pid}_{suffix}"
            suffix += 1
        used_names.add(rule)
        lines.extend(
            [
                f"rule {rule} {{",
                f'    description: "Allow {pid} to submit {tid}"',
                f'    participant: "{namespace}.{pid}"',
                "    operation: CREATE",
                f'    resource: "{namespace}.{tid}"',
                "    action: ALLOW",
                "}",
                "",
            ]
        )
    lines.extend(
        [
            "rule DenyEverythingElse {",
            '    description: "Deny anything not explicitly allowed"',
            '    participant: "ANY"',
            "    operation: ALL",
            f'    resource: "{namespace}.**"',
            "    action: DENY",
            "}",
        ]
    )
    return "\n".join(lines) + "\n"
