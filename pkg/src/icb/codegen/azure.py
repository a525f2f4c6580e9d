"""Azure target: the Solidity source plus a workbench-style configuration.

The configuration descriptor declares the application, one role per
participant, and a single workflow whose functions mirror the transactions
with allowed-roles lists projected from the tranrels.
"""

from __future__ import annotations

import json

from ..model import IntentionModel, RelationshipKind
from ..naming import ManglingTable
from . import ArtifactKind, GeneratedArtifact, generator_stamp
from .ethereum import _contract_source


def generate_azure(model: IntentionModel) -> list[GeneratedArtifact]:
    table = ManglingTable.for_model(model)
    contract_id = table.contract_identifier()
    return [
        GeneratedArtifact(
            rel_path=f"contracts/{contract_id}.sol",
            content=_contract_source(model, table),
            kind=ArtifactKind.CONTRACT_SOURCE,
        ),
        GeneratedArtifact(
            rel_path="azure/application.json",
            content=_application_config(model, table),
            kind=ArtifactKind.PLATFORM_CONFIG,
        ),
        GeneratedArtifact(
            rel_path="README.md",
            content=_azure_readme(model, table),
            kind=ArtifactKind.README,
        ),
    ]


def _application_config(model: IntentionModel, table: ManglingTable) -> str:
    contract_id = table.contract_identifier()
    functions = []
    for transaction in model.transactions:
        allowed = [
            table.identifier(r.target)
            for r in model.relationships
            if r.transaction == transaction.name and r.kind is RelationshipKind.TRANREL
        ]
        functions.append(
            {"name": table.identifier(transaction.name), "allowedRoles": allowed}
        )
    config = {
        "generatedBy": generator_stamp(model),
        "applicationName": contract_id,
        "displayName": model.contract.name,
        "roles": [table.identifier(p.name) for p in model.participants],
        "workflow": {"name": contract_id, "functions": functions},
    }
    return json.dumps(config, indent=2) + "\n"


def _azure_readme(model: IntentionModel, table: ManglingTable) -> str:
    contract_id = table.contract_identifier()
    lines = [
        f"<!-- {generator_stamp(model)} -->",
        f"# {model.contract.name}",
        "",
        "Deployment artifacts for the Azure platform.",
        "",
        "## Files",
        "",
        f"- `contracts/{contract_id}.sol`: Solidity contract source",
        "- `azure/application.json`: application, roles and workflow descriptor",
        "",
        "Upload both to an Azure blockchain workbench-style environment;",
        "the descriptor's allowed-roles lists mirror the contract's caller checks.",
    ]
    return "\n".join(lines) + "\n"
