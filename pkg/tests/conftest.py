import json
from pathlib import Path

import pytest
from jsonschema import Draft202012Validator
from referencing import Registry, Resource

SCHEMA_DIR = Path(__file__).resolve().parent.parent / "docs" / "schemas"


def _registry() -> Registry:
    resources = []
    for path in sorted(SCHEMA_DIR.glob("*.schema.json")):
        doc = json.loads(path.read_text())
        resources.append((doc["$id"], Resource.from_contents(doc)))
    return Registry().with_resources(resources)


@pytest.fixture(scope="session")
def validate():
    """validate(name, instance) checks instance against docs/schemas/<name>.schema.json."""
    registry = _registry()

    def check(name: str, instance) -> None:
        schema = json.loads((SCHEMA_DIR / f"{name}.schema.json").read_text())
        Draft202012Validator(schema, registry=registry).validate(instance)

    return check


_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_report():
    """report(criterion, title, passed, detail, seconds) prints and records one line."""

    def report(cid: int, title: str, passed: bool, detail: str, seconds: float) -> None:
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {cid}: {title} | {detail} | {seconds:.2f}s"
        print(line)
        _ACCEPTANCE_LINES.append(line)

    return report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
