"""Service and pipeline configuration from a JSON file.

Secrets never live here; remote providers read credentials from environment
variables only.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .engine import GenerationConfig, PromptProfile

_KNOWN_KEYS = {
    "port",
    "corpus",
    "index",
    "log",
    "static_dir",
    "provider",
    "prompt_profile",
    "sharper_profile",
    "temperature",
    "max_new_tokens",
    "k",
    "chunk_size",
    "overlap",
    "embedding_dim",
}


@dataclass(frozen=True)
class ServiceConfig:
    corpus: str
    index: str
    log: str | None = None
    port: int = 8000
    static_dir: str | None = None
    provider: str = "echo"
    prompt_profile: PromptProfile = PromptProfile.CONDENSED
    sharper_profile: bool = False
    temperature: float = 0.0
    max_new_tokens: int | None = None
    k: int = 4
    chunk_size: int = 1000
    overlap: int = 50
    embedding_dim: int = 256

    def generation_config(self) -> GenerationConfig:
        return GenerationConfig(
            temperature=self.temperature,
            max_new_tokens=self.max_new_tokens,
            prompt_profile=self.prompt_profile,
            sharper_profile=self.sharper_profile,
        )


def load_config(path: str | Path) -> ServiceConfig:
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(raw, dict):
        raise ValueError(f"{path}: config must be a JSON object")
    unknown = set(raw) - _KNOWN_KEYS
    if unknown:
        raise ValueError(f"{path}: unknown config keys: {sorted(unknown)}")
    for key in ("corpus", "index"):
        if key not in raw:
            raise ValueError(f"{path}: missing required config key {key!r}")
    data = dict(raw)
    if "prompt_profile" in data:
        data["prompt_profile"] = PromptProfile(data["prompt_profile"])
    return ServiceConfig(**data)
