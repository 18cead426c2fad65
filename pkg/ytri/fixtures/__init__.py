import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml
from pydantic import BaseModel, Field

from ytri.cli import RunOptions, run_command
from ytri.parsing import parse_point
from ytri.reports import Report, render, report_tree
from ytri.settings import Settings

logger = logging.getLogger(__name__)


class FixtureCommand(BaseModel):
    command: str
    exit: int = 0
    budget: Optional[int] = None
    seed: Optional[int] = None
    at: Optional[str] = None
    assume_nonsingular: bool = False
    # dotted report paths, e.g. ``result.status``, and the values they must hold
    expect: Dict[str, Any] = Field(default_factory=dict)


class FixtureCase(BaseModel):
    name: str
    map: str
    commands: List[FixtureCommand] = Field(default_factory=list)


def load_cases(path: Path) -> List[FixtureCase]:
    data = yaml.safe_load(Path(path).read_text(encoding="utf-8")) or {}
    return [FixtureCase(**entry) for entry in data.get("fixtures", []) or []]


def run_fixture(
    case: FixtureCase, entry: FixtureCommand, settings: Optional[Settings] = None
) -> Report:
    settings = settings or Settings()
    options = RunOptions.from_settings(
        settings,
        at=parse_point(entry.at) if entry.at else None,
        budget=entry.budget,
        seed=entry.seed,
        assume_nonsingular=entry.assume_nonsingular,
    )
    return run_command(entry.command, case.map, options)


def _lookup(tree: Dict[str, Any], dotted: str) -> Any:
    value: Any = tree
    for key in dotted.split("."):
        if not isinstance(value, dict) or key not in value:
            return None
        value = value[key]
    return value


def mismatches(report: Report, entry: FixtureCommand) -> List[str]:
    """Every way the report departs from the recorded exit code and fields."""
    found = []
    if report.exit_code != entry.exit:
        found.append(f"exit_code: expected {entry.exit}, got {report.exit_code}")
    tree = report_tree(report, include_timing=False)
    for dotted, expected in entry.expect.items():
        actual = _lookup(tree, dotted)
        if actual != expected:
            found.append(f"{dotted}: expected {expected!r}, got {actual!r}")
    return found


def fixture_path(out_dir: Path, case: FixtureCase, entry: FixtureCommand) -> Path:
    return Path(out_dir) / f"{case.name}.{entry.command}.yaml"


def regenerate(
    seeds_path: Path, out_dir: Path, settings: Optional[Settings] = None
) -> List[Path]:
    """Rewrite every fixture report; timing is left out so the files are stable."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for case in load_cases(seeds_path):
        for entry in case.commands:
            report = run_fixture(case, entry, settings)
            for problem in mismatches(report, entry):
                logger.warning("%s %s: %s", case.name, entry.command, problem)
            path = fixture_path(out_dir, case, entry)
            text = render(report, "tree", include_timing=False)
            path.write_text(text, encoding="utf-8")
            written.append(path)
    return written
