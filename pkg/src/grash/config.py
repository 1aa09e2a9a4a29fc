"""Configuration management for grash."""

import json
import os
from pathlib import Path
from typing import Any

from dotenv import load_dotenv
from pydantic import BaseModel

load_dotenv()


class Settings(BaseModel):
    """Application settings."""

    # Where run directories (manifest, trial log, checkpoints) are created
    runs_dir: Path = Path(os.getenv("GRASH_RUNS_DIR", "runs"))

    # CoreLadder cache, keyed by graph fingerprint
    cache_dir: Path = Path(os.getenv("GRASH_CACHE_DIR", ".grash_cache"))

    log_level: str = os.getenv("GRASH_LOG_LEVEL", "INFO")

    # Concurrent trials per round
    workers: int = int(os.getenv("GRASH_WORKERS", "1"))

    # Validation split sizing
    valid_size: int = int(os.getenv("GRASH_VALID_SIZE", "5000"))
    valid_fraction_cap: float = float(os.getenv("GRASH_VALID_FRACTION_CAP", "0.2"))

    # Vectorization limits
    eval_batch_size: int = int(os.getenv("GRASH_EVAL_BATCH_SIZE", "256"))
    train_chunk_elements: int = int(os.getenv("GRASH_TRAIN_CHUNK_ELEMENTS", "4000000"))


settings = Settings()


def load_config_file(path: Path) -> dict[str, Any]:
    """Load a JSON config file into flag-name keyed values.

    Keys may use dashes or underscores; both map to the argparse destination
    name.

    Args:
        path: Path to a JSON object file

    Returns:
        Dictionary of destination name -> value

    Raises:
        ValueError: If the file is not a JSON object
    """
    with open(path, encoding="utf-8") as f:
        data = json.load(f)
    if not isinstance(data, dict):
        raise ValueError(f"Config file {path} must contain a JSON object")
    return {key.replace("-", "_"): value for key, value in data.items()}
