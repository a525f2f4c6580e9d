"""Deterministic mangling of display names into code-safe identifiers.

Display names may carry spaces and hyphens ("Vehicle Auction", "Place-bid");
generated code cannot. Spaces and hyphens become underscores, anything else
that is not alphanumeric is dropped. Whether the result is actually a usable
identifier (non-empty, starts with a letter, not reserved) is the validator's
rule V7; `mangle` itself is total.
"""

from __future__ import annotations

import re

from .model import IntentionModel, Platform

_SEPARATORS = re.compile(r"[\s\-]+")
_ILLEGAL = re.compile(r"[^A-Za-z0-9_]")
_IDENTIFIER = re.compile(r"[A-Za-z][A-Za-z0-9_]*")

# Keywords that would make generated sources unparseable if used verbatim.
SOLIDITY_RESERVED = frozenset(
    """
    abstract address anonymous assembly bool break bytes calldata constant
    constructor continue contract delete do else emit enum event external
    fallback false for function if immutable import indexed interface
    internal is library mapping memory modifier new override payable pragma
    private public pure receive require return returns revert storage string
    struct super this true try type uint uint256 int int256 using view
    virtual while
    """.split()
)

COMPOSER_RESERVED = frozenset(
    """
    abstract asset concept enum event extends identified import namespace
    optional participant transaction default range regex
    async await break case catch class const continue debugger delete do
    else export false finally for function if in instanceof let new null
    return static super switch this throw true try typeof var void while
    with yield
    """.split()
)


def reserved_words(platform: Platform | None) -> frozenset[str]:
    if platform is Platform.HYPERLEDGER_FABRIC:
        return COMPOSER_RESERVED
    if platform in (Platform.ETHEREUM, Platform.AZURE):
        return SOLIDITY_RESERVED
    return frozenset()


def mangle(name: str) -> str:
    """Best-effort identifier for a display name; may be empty or invalid."""
    return _ILLEGAL.sub("", _SEPARATORS.sub("_", name.strip()))


def is_code_identifier(text: str) -> bool:
    return bool(_IDENTIFIER.fullmatch(text))


class ManglingTable:
    """Injective display-name → identifier map for one model.

    Identifiers are claimed in declaration order (contract first, then
    participants, assets, transactions); a name whose mangled form is already
    taken gets a numeric suffix. The contract name has its own slot so an
    entity that shares its display name still gets a distinct identifier.
    """

    def __init__(self) -> None:
        self._entities: dict[str, str] = {}
        self._used: set[str] = set()
        self._contract: str = ""

    @classmethod
    def for_model(cls, model: IntentionModel) -> ManglingTable:
        table = cls()
        table._contract = table._claim(mangle(model.contract.name))
        for entity in (*model.participants, *model.assets, *model.transactions):
            table.add(entity.name)
        return table

    def _claim(self, base: str) -> str:
        candidate = base
        suffix = 2
        while candidate in self._used:
            candidate = f"{base}_{suffix}"
            suffix += 1
        self._used.add(candidate)
        return candidate

    def add(self, name: str) -> str:
        if name not in self._entities:
            self._entities[name] = self._claim(mangle(name))
        return self._entities[name]

    def contract_identifier(self) -> str:
        return self._contract

    def identifier(self, name: str) -> str:
        return self._entities[name]
