"""Run directories and their manifests."""

import json
import re
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Optional

from pydantic import BaseModel, Field

from . import __version__
from .config import settings

MANIFEST = "manifest.json"
TRIAL_LOG = "trial_log.jsonl"
BEST_CONFIG = "best_config.json"
SCHEDULE = "schedule.json"
LEDGER = "ledger.json"
ROUNDS = "rounds.json"
CHECKPOINT = "model.ckpt"
REPORT = "report.json"


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat()


class RunManifest(BaseModel):
    """What was run, with every default materialized."""

    command: str
    argv: list[str]
    config: dict[str, Any]
    dataset: Optional[str] = None
    dataset_hash: Optional[str] = None
    seeds: dict[str, int] = Field(default_factory=dict)
    version: str = __version__
    started_at: str = Field(default_factory=_utc_now)
    finished_at: Optional[str] = None
    status: str = "running"
    error: Optional[str] = None


def create_run_dir(command: str, run_dir: Optional[Path] = None) -> Path:
    """Create a fresh run directory.

    Without an explicit path, a ``<command>-<UTC timestamp>`` directory is
    created under ``settings.runs_dir``; a numeric suffix avoids collisions.
    """
    if run_dir is not None:
        path = Path(run_dir)
        path.mkdir(parents=True, exist_ok=True)
        return path

    stamp = datetime.now(timezone.utc).strftime("%Y%m%dT%H%M%S")
    base = settings.runs_dir / f"{re.sub(r'[^a-z0-9]+', '-', command)}-{stamp}"
    path, suffix = base, 1
    while path.exists():
        suffix += 1
        path = base.with_name(f"{base.name}-{suffix}")
    path.mkdir(parents=True)
    return path


def write_json(path: Path, data: Any) -> Path:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=2, sort_keys=False, default=str)
        f.write("\n")
    return path


def write_manifest(run_dir: Path, manifest: RunManifest) -> Path:
    return write_json(Path(run_dir) / MANIFEST, manifest.model_dump(mode="json"))


def finish_manifest(
    run_dir: Path, manifest: RunManifest, status: str, error: Optional[str] = None
) -> Path:
    manifest.finished_at = _utc_now()
    manifest.status = status
    manifest.error = error
    return write_manifest(run_dir, manifest)


def read_manifest(run_dir: Path) -> RunManifest:
    with open(Path(run_dir) / MANIFEST, encoding="utf-8") as f:
        return RunManifest(**json.load(f))
