import json

import pytest

from ragforge.config import ServiceConfig, load_config
from ragforge.engine import PromptProfile


def write_config(tmp_path, **overrides):
    body = {"corpus": "corpus.jsonl", "index": "index.vidx"}
    body.update(overrides)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(body), encoding="utf-8")
    return path


def test_config_defaults(tmp_path):
    config = load_config(write_config(tmp_path))
    assert config == ServiceConfig(corpus="corpus.jsonl", index="index.vidx")
    assert config.prompt_profile is PromptProfile.CONDENSED
    assert config.k == 4 and config.chunk_size == 1000 and config.overlap == 50


def test_config_full_round_trip(tmp_path):
    path = write_config(
        tmp_path,
        port=9001,
        log="events.jsonl",
        provider="extractive",
        prompt_profile="custom",
        sharper_profile=True,
        temperature=0.0,
        max_new_tokens=256,
        k=2,
    )
    config = load_config(path)
    assert config.port == 9001
    assert config.prompt_profile is PromptProfile.CUSTOM_ONLY
    assert config.sharper_profile is True
    assert config.generation_config().max_new_tokens == 256


def test_config_rejects_unknown_keys(tmp_path):
    path = write_config(tmp_path, api_key="never-here")
    with pytest.raises(ValueError, match="unknown config keys"):
        load_config(path)


def test_config_requires_corpus_and_index(tmp_path):
    path = tmp_path / "config.json"
    path.write_text('{"corpus": "c.jsonl"}', encoding="utf-8")
    with pytest.raises(ValueError, match="index"):
        load_config(path)
