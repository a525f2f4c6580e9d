"""Shared oracles for the test suite.

Three generators live here: random shape-valid models (for parser round
trips), random valid conversations (for dialogue walks), and the seeded
single-defect mutation harness (for the validator). Plus a token-level
structural checker for generated Solidity that stands in when no solc is
on PATH.
"""

from __future__ import annotations

import random
import re
from dataclasses import replace
from decimal import Decimal

from icb.model import (
    Asset,
    Comparison,
    ComparisonOp,
    Condition,
    ContractHeader,
    FieldPath,
    IntentionModel,
    Literal,
    Param,
    ParamType,
    Participant,
    Platform,
    Relationship,
    RelationshipKind,
    Transaction,
)
from icb.naming import COMPOSER_RESERVED, SOLIDITY_RESERVED, mangle

# words that would collide with intents, DSL keywords or target-platform
# reserved words in generated conversations
_FORBIDDEN = (
    {
        "done", "yes", "no", "help", "restart", "reset", "finished", "next",
        "options", "true", "false",
    }
    | SOLIDITY_RESERVED
    | COMPOSER_RESERVED
)

_LETTERS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"


# --------------------------------------------------------------------------
# random shape-valid models
# --------------------------------------------------------------------------


def _display_name(rng: random.Random, fancy: bool = True) -> str:
    chars = [rng.choice(_LETTERS)]
    for _ in range(rng.randint(1, 9)):
        pool = _LETTERS + "0123456789"
        if fancy:
            pool += " -_"
            if rng.random() < 0.05:
                pool += '"\\'
        chars.append(rng.choice(pool))
    chars.append(rng.choice(_LETTERS))
    return "".join(chars)


def _bare_name(rng: random.Random) -> str:
    head = rng.choice(_LETTERS)
    tail = "".join(rng.choice(_LETTERS.lower() + "0123456789_-") for _ in range(rng.randint(1, 7)))
    name = head + tail
    return name if name.lower() not in _FORBIDDEN else name + "x"


def _params(rng: random.Random, limit: int = 3) -> tuple[Param, ...]:
    names: set[str] = set()
    params = []
    for _ in range(rng.randint(0, limit)):
        name = _bare_name(rng)
        if name in names:
            continue
        names.add(name)
        params.append(Param(name=name, ptype=rng.choice(list(ParamType))))
    return tuple(params)


def _operand(rng: random.Random) -> FieldPath | Literal:
    roll = rng.random()
    if roll < 0.45:
        segments = tuple(_bare_name(rng) for _ in range(rng.randint(1, 3)))
        return FieldPath(segments)
    if roll < 0.6:
        return Literal(rng.randint(-1000, 1000))
    if roll < 0.75:
        return Literal(Decimal(f"{rng.randint(-99, 99)}.{rng.randint(0, 99):02d}"))
    if roll < 0.9:
        return Literal(rng.random() < 0.5)
    return Literal(_display_name(rng))


def random_model(rng: random.Random) -> IntentionModel:
    """Shape-valid but not necessarily consistent (references may dangle)."""
    participants = tuple(
        Participant(name=_display_name(rng), creator=rng.random() < 0.4, params=_params(rng))
        for _ in range(rng.randint(0, 4))
    )
    assets = tuple(
        Asset(name=_display_name(rng), fields=_params(rng)) for _ in range(rng.randint(0, 3))
    )
    transactions = tuple(
        Transaction(name=_display_name(rng), params=_params(rng, limit=2))
        for _ in range(rng.randint(0, 3))
    )

    def any_name(pool: tuple, fallback_fancy: bool = True) -> str:
        if pool and rng.random() < 0.7:
            return rng.choice(pool).name
        return _display_name(rng, fancy=fallback_fancy)

    relationships = []
    for _ in range(rng.randint(0, 4)):
        kind = rng.choice(list(RelationshipKind))
        target_pool = participants if kind is RelationshipKind.TRANREL else assets
        relationships.append(
            Relationship(kind=kind, transaction=any_name(transactions), target=any_name(target_pool))
        )

    conditions = []
    for _ in range(rng.randint(0, 3)):
        lhs, rhs = _operand(rng), _operand(rng)
        if not isinstance(lhs, FieldPath) and not isinstance(rhs, FieldPath):
            lhs = FieldPath((_bare_name(rng), _bare_name(rng)))
        conditions.append(
            Condition(
                transaction=any_name(transactions),
                guard=Comparison(lhs=lhs, op=rng.choice(list(ComparisonOp)), rhs=rhs),
            )
        )

    return IntentionModel(
        contract=ContractHeader(name=_display_name(rng), platform=rng.choice(list(Platform))),
        participants=participants,
        assets=assets,
        transactions=transactions,
        relationships=tuple(relationships),
        conditions=tuple(conditions),
    )


# --------------------------------------------------------------------------
# random valid conversations
# --------------------------------------------------------------------------


def _fresh_name(rng: random.Random, used: set[str]) -> str:
    while True:
        name = "".join(rng.choice(_LETTERS) for _ in range(rng.randint(4, 8)))
        if rng.random() < 0.3:
            name += " " + "".join(rng.choice(_LETTERS) for _ in range(rng.randint(3, 6)))
        key = mangle(name).lower()
        if name.lower() not in _FORBIDDEN and key not in used and key:
            used.add(key)
            return name


def random_conversation(rng: random.Random) -> list[str]:
    """A user-turn script that must reach Done with a clean model."""
    used: set[str] = set()
    contract = _fresh_name(rng, used)
    platform = rng.choice([p.value for p in Platform])

    participants: list[tuple[str, list[Param]]] = []
    for i in range(rng.randint(1, 3)):
        pname = _fresh_name(rng, used)
        params = []
        for _ in range(rng.randint(0, 2)):
            params.append(Param(_bare_name(rng).lower(), rng.choice(list(ParamType))))
        participants.append((pname, params))

    assets = [_fresh_name(rng, used) for _ in range(rng.randint(0, 2))]
    transactions = [_fresh_name(rng, used) for _ in range(rng.randint(1, 3))]

    script: list[str] = [f"create a contract called {contract}", platform]
    for i, (pname, params) in enumerate(participants):
        script.append(f"add participant {pname}")
        script.append("yes" if i == 0 else rng.choice(["yes", "no"]))
        seen: set[str] = set()
        for param in params:
            if param.name in seen:
                continue
            seen.add(param.name)
            script.append(f"{param.name} : {param.ptype.value}")
    script.append("done")
    for aname in assets:
        script.append(f"add asset {aname}")
        if rng.random() < 0.5:
            script.append(f"{_bare_name(rng).lower()} : text")
    script.append("done")
    for tname in transactions:
        script.append(f"add transaction {tname}")
    script.append("done")
    for tname in transactions:
        _, pname = 0, rng.choice(participants)[0]
        script.append(f"link {tname} to participant {pname}")
        if assets and rng.random() < 0.5:
            script.append(f"link {tname} to asset {rng.choice(assets)}")
    script.append("done")

    conditionable = [(p, prm) for p, prms in participants for prm in prms]
    if conditionable and rng.random() < 0.5:
        pname, param = rng.choice(conditionable)
        path = f"{mangle(pname)}.{param.name}"
        script.append(f"require {path} >= {rng.randint(0, 100)} on {rng.choice(transactions)}")
    script.append("done")
    script.append("yes")
    return script


# --------------------------------------------------------------------------
# mutation harness
# --------------------------------------------------------------------------


def enriched_golden(golden: IntentionModel) -> IntentionModel:
    """Golden model plus a participant parameter, a condition and an assetrel.

    Still validates with zero errors; gives condition/assetrel mutations
    something to break.
    """
    owner = golden.participant("Owner")
    model = golden.replace_participant(
        "Owner", replace(owner, params=(Param("balance", ParamType.INTEGER),))
    )
    model = replace(
        model,
        relationships=model.relationships
        + (Relationship(RelationshipKind.ASSETREL, "Place-bid", "Vehicle"),),
        conditions=(
            Condition(
                "Withdraw",
                Comparison(FieldPath(("Owner", "balance")), ComparisonOp.GE, Literal(0)),
            ),
        ),
    )
    return model


def _with_condition(model: IntentionModel, **changes) -> IntentionModel:
    condition = model.conditions[0]
    guard = condition.guard
    if "transaction" in changes:
        condition = replace(condition, transaction=changes["transaction"])
    if "lhs" in changes:
        condition = replace(condition, guard=replace(guard, lhs=changes["lhs"]))
    return replace(model, conditions=(condition,) + model.conditions[1:])


def _mutate_drop_relationship(model, rng):
    # only transactions with a single link lose V4 coverage when it goes
    counts: dict[str, int] = {}
    for r in model.relationships:
        counts[r.transaction] = counts.get(r.transaction, 0) + 1
    singles = [r for r in model.relationships if counts[r.transaction] == 1]
    victim = rng.choice(singles)
    rels = tuple(r for r in model.relationships if r != victim)
    return replace(model, relationships=rels), "V4", set()


def _mutate_dangle_rel_transaction(model, rng):
    index = rng.randrange(len(model.relationships))
    rels = list(model.relationships)
    rels[index] = replace(rels[index], transaction=f"Ghost {rng.randint(0, 999)}")
    return replace(model, relationships=tuple(rels)), "V5", {"V4"}


def _mutate_dangle_rel_target(model, rng):
    index = rng.randrange(len(model.relationships))
    rels = list(model.relationships)
    rels[index] = replace(rels[index], target=f"Ghost {rng.randint(0, 999)}")
    return replace(model, relationships=tuple(rels)), "V5", set()


def _mutate_flip_rel_kind(model, rng):
    index = rng.randrange(len(model.relationships))
    rels = list(model.relationships)
    flipped = (
        RelationshipKind.ASSETREL
        if rels[index].kind is RelationshipKind.TRANREL
        else RelationshipKind.TRANREL
    )
    rels[index] = replace(rels[index], kind=flipped)
    return replace(model, relationships=tuple(rels)), "V5", {"V4"}


def _mutate_duplicate_name(model, rng):
    entity = rng.choice(["participant", "asset", "transaction"])
    if entity == "participant":
        clone = replace(model.participants[rng.randrange(len(model.participants))], creator=False)
        return replace(model, participants=model.participants + (clone,)), "V3", set()
    if entity == "asset":
        clone = model.assets[rng.randrange(len(model.assets))]
        return replace(model, assets=model.assets + (clone,)), "V3", set()
    clone = model.transactions[rng.randrange(len(model.transactions))]
    # the clone inherits the original's relationships by name, so no V4
    return replace(model, transactions=model.transactions + (clone,)), "V3", set()


def _mutate_mangle_collision(model, rng):
    # a participant "Place bid" collides with transaction "Place-bid" once mangled
    hyphenated = [t for t in model.transactions if "-" in t.name]
    source = rng.choice(hyphenated) if hyphenated else model.transactions[0]
    twin = source.name.replace("-", " ") if "-" in source.name else source.name
    clone = Participant(name=twin)
    return replace(model, participants=model.participants + (clone,)), "V3", set()


def _mutate_blank_name(model, rng):
    return replace(model, contract=replace(model.contract, name="   ")), "V1", set()


def _mutate_clear_platform(model, rng):
    return replace(model, contract=replace(model.contract, platform=None)), "V1", set()


def _mutate_drop_participants(model, rng):
    return replace(model, participants=()), "V2", {"V5", "V6"}


def _mutate_no_creator(model, rng):
    stripped = tuple(replace(p, creator=False) for p in model.participants)
    return replace(model, participants=stripped), "V2", set()


def _mutate_condition_transaction(model, rng):
    return _with_condition(model, transaction=f"Ghost {rng.randint(0, 999)}"), "V6", set()


def _mutate_condition_entity(model, rng):
    bad = FieldPath((f"Ghost{rng.randint(0, 999)}", "balance"))
    return _with_condition(model, lhs=bad), "V6", set()


def _mutate_condition_attribute(model, rng):
    bad = FieldPath(("Owner", f"ghost{rng.randint(0, 999)}"))
    return _with_condition(model, lhs=bad), "V6", set()


def _mutate_unmanglable_name(model, rng):
    index = rng.randrange(len(model.assets))
    assets = list(model.assets)
    assets[index] = replace(assets[index], name=rng.choice(["123", "!!!", "9 lives", "__x"]))
    return replace(model, assets=tuple(assets)), "V7", {"V5"}


def _mutate_bad_param_name(model, rng):
    participant = model.participants[rng.randrange(len(model.participants))]
    bad = Param(name=rng.choice(["1st", "$", "42"]), ptype=ParamType.TEXT)
    mutated = replace(participant, params=participant.params + (bad,))
    return model.replace_participant(participant.name, mutated), "V7", set()


def _mutate_reserved_name(model, rng):
    index = rng.randrange(len(model.assets))
    assets = list(model.assets)
    reserved = rng.choice(["mapping", "contract", "struct", "function"])
    assets[index] = replace(assets[index], name=reserved)
    return replace(model, assets=tuple(assets)), "V7", {"V5"}


def _mutate_bad_param_type(model, rng):
    asset = model.assets[rng.randrange(len(model.assets))]
    bogus = Param(name=f"f{rng.randint(0, 99)}", ptype=rng.choice(["float", "date", None]))
    mutated = replace(asset, fields=asset.fields + (bogus,))
    return model.replace_asset(asset.name, mutated), "V8", set()


def _mutate_drop_assetrel(model, rng):
    assetrels = [r for r in model.relationships if r.kind is RelationshipKind.ASSETREL]
    victim = rng.choice(assetrels)
    rels = tuple(r for r in model.relationships if r != victim)
    return replace(model, relationships=rels), "V9", set()


MUTATIONS = (
    _mutate_drop_relationship,
    _mutate_dangle_rel_transaction,
    _mutate_dangle_rel_target,
    _mutate_flip_rel_kind,
    _mutate_duplicate_name,
    _mutate_mangle_collision,
    _mutate_blank_name,
    _mutate_clear_platform,
    _mutate_drop_participants,
    _mutate_no_creator,
    _mutate_condition_transaction,
    _mutate_condition_entity,
    _mutate_condition_attribute,
    _mutate_unmanglable_name,
    _mutate_bad_param_name,
    _mutate_reserved_name,
    _mutate_bad_param_type,
    _mutate_drop_assetrel,
)


def mutate(base: IntentionModel, index: int, rng: random.Random):
    """Apply the index-th mutation kind (mod table); returns
    (mutant, designated_rule, allowed_extra_error_rules)."""
    return MUTATIONS[index % len(MUTATIONS)](base, rng)


# --------------------------------------------------------------------------
# structural checker for generated Solidity
# --------------------------------------------------------------------------


def check_sol_structure(model: IntentionModel, source: str) -> None:
    """Token-level assertions that stand in for compiling the contract."""
    assert len(re.findall(r"^contract\s+\w+\s*\{", source, re.MULTILINE)) == 1
    functions = re.findall(r"function\s+(\w+)\s*\(", source)
    assert len(functions) == len(model.transactions)
    assert len(re.findall(r"\bstruct\s+\w+", source)) >= len(model.assets)
    tranrels = [r for r in model.relationships if r.kind is RelationshipKind.TRANREL]
    role_requires = re.findall(r"require\(is(\w+)\[msg\.sender\]", source)
    assert len(role_requires) >= len(tranrels)
    guard_requires = re.findall(r'require\(.*"access condition not met"\);', source)
    assert len(guard_requires) == len(model.conditions)
    assert source.endswith("\n") and "\r" not in source
