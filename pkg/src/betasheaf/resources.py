"""Location of shipped fixtures; ``BETASHEAF_DATA`` overrides the directory."""
from __future__ import annotations

import os
from pathlib import Path

ENV_VAR = "BETASHEAF_DATA"


def data_dir() -> Path:
    override = os.environ.get(ENV_VAR)
    if override:
        return Path(override)
    return Path(__file__).resolve().parent / "data"


def data_path(*parts: str) -> Path:
    path = data_dir().joinpath(*parts)
    if not path.exists():
        raise FileNotFoundError(f"fixture {'/'.join(parts)} not found under {data_dir()}")
    return path
