from __future__ import annotations

from pathlib import Path

import pytest

from icb import IntentionModel, parse

TESTS_DIR = Path(__file__).parent
GOLDEN_DIR = TESTS_DIR / "golden"
SAMPLES_DIR = TESTS_DIR.parent / "samples"


@pytest.fixture(scope="session")
def golden_source() -> str:
    return (SAMPLES_DIR / "vehicle_auction.icb").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def golden_model(golden_source: str) -> IntentionModel:
    return parse(golden_source)


@pytest.fixture(scope="session")
def chat_script() -> list[str]:
    """User turns of the canonical 14-turn vehicle-auction conversation."""
    lines = (SAMPLES_DIR / "vehicle_auction_chat.txt").read_text(encoding="utf-8").splitlines()
    return [line[2:].strip() for line in lines if line.startswith("U:")]
