"""Command-line entry point for every pipeline stage.

Exit codes: 0 success, 1 operational failure, 2 usage error. File-producing
commands write atomically and are byte-stable given identical inputs, so
re-runs are safe.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import corpus as corpus_mod
from .config import load_config
from .embedding import LocalHashEmbedder, RemoteEmbedder
from .engine import ChatSession, GenerationConfig, PromptProfile, RagEngine
from .evaluation import (
    bundled_golden_path,
    format_report_table,
    load_golden,
    run_comparison,
    write_report,
)
from .judge import LLMJudge, ScriptedJudge
from .providers import RemoteLLMProvider, build_provider
from .retrieval import Retriever, build_index


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ragforge", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-corpus", help="render a corpus variant from course and info records")
    p.add_argument("--courses", required=True, help="course record file (JSONL)")
    p.add_argument("--info", required=True, help="future-students info documents (JSONL)")
    p.add_argument("--variant", required=True, choices=["clear", "full", "emb"])
    p.add_argument("--out", required=True, help="output corpus file (JSONL)")

    p = sub.add_parser("build-index", help="chunk and embed a corpus into a vector index")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--dim", type=int, default=256)
    p.add_argument("--provider", choices=["local", "remote"], default="local")
    p.add_argument("--model", default="default", help="remote embedding model name")
    p.add_argument("--chunk-size", type=int, default=1000)
    p.add_argument("--overlap", type=int, default=50)

    p = sub.add_parser("chat", help="interactive terminal chat over an indexed corpus")
    p.add_argument("--index", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--profile", choices=["custom", "condensed"], default="condensed")
    p.add_argument("--sharper", action="store_true", help="use the sharper prompt revision")
    p.add_argument("--provider", default="echo", help="echo, extractive or remote[:model]")
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--dim", type=int, default=256)
    p.add_argument("--chunk-size", type=int, default=1000)
    p.add_argument("--overlap", type=int, default=50)

    p = sub.add_parser("serve", help="run the HTTP chat service")
    p.add_argument("--config", required=True)

    p = sub.add_parser("eval", help="compare providers on the golden QA set")
    p.add_argument("--golden", default=None, help="golden QA file (JSONL); bundled fixture by default")
    p.add_argument("--providers", required=True, help="comma-separated providers (echo, extractive, remote[:model])")
    p.add_argument("--judge", choices=["scripted", "remote"], default="scripted")
    p.add_argument("--judge-model", default="default")
    p.add_argument("--max-new-tokens", type=int, default=256)
    p.add_argument("--out", required=True)
    p.add_argument("--index", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--dim", type=int, default=256)
    p.add_argument("--chunk-size", type=int, default=1000)
    p.add_argument("--overlap", type=int, default=50)

    p = sub.add_parser("export-finetune", help="re-emit a fine-tune pair file in canonical form")
    p.add_argument("--pairs", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("stats", help="print the usage report of a service log")
    p.add_argument("--log", required=True)

    return parser


def _embedder(provider: str, dim: int, model: str = "default"):
    if provider == "remote":
        return RemoteEmbedder(model=model, dim=dim)
    return LocalHashEmbedder(dim=dim)


def _retriever(args) -> Retriever:
    return Retriever.from_files(
        corpus_path=args.corpus,
        index_path=args.index,
        embedder=LocalHashEmbedder(dim=args.dim),
        chunk_size=args.chunk_size,
        overlap=args.overlap,
    )


def _cmd_build_corpus(args) -> int:
    courses = corpus_mod.load_courses(args.courses)
    info_docs = corpus_mod.load_documents(args.info)
    docs = corpus_mod.build_variant(courses, info_docs, corpus_mod.Variant(args.variant))
    corpus_mod.save_documents(args.out, docs)
    stats = corpus_mod.corpus_stats(docs)
    for section, kind, count in stats.rows():
        if count:
            print(f"{section:<16} {kind:<16} {count:>6}")
    print(f"{'total':<33} {stats.total:>6}")
    return 0


def _cmd_build_index(args) -> int:
    docs = corpus_mod.load_documents(args.corpus)
    embedder = _embedder(args.provider, args.dim, args.model)
    index = build_index(docs, embedder, chunk_size=args.chunk_size, overlap=args.overlap)
    written = index.save(args.out)
    print(f"indexed {len(index)} chunks from {len(docs)} documents ({written} bytes)")
    return 0


def _cmd_chat(args) -> int:
    retriever = _retriever(args)
    provider = build_provider(args.provider)
    cfg = GenerationConfig(prompt_profile=PromptProfile(args.profile), sharper_profile=args.sharper)
    engine = RagEngine(retriever, provider, cfg, k=args.k)
    session = ChatSession(session_id="terminal")
    print("ragforge chat; empty line or Ctrl-D exits")
    for line in sys.stdin:
        question = line.strip()
        if not question or question in {"exit", "quit"}:
            break
        outcome = engine.ask(session, question)
        print(f"assistant> {outcome.answer}")
        if outcome.doc_ids:
            print(f"sources: {', '.join(outcome.doc_ids)}")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import SessionStore, create_app

    config = load_config(args.config)
    retriever = Retriever.from_files(
        corpus_path=config.corpus,
        index_path=config.index,
        embedder=LocalHashEmbedder(dim=config.embedding_dim),
        chunk_size=config.chunk_size,
        overlap=config.overlap,
    )
    engine = RagEngine(retriever, build_provider(config.provider), config.generation_config(), k=config.k)
    store = SessionStore(config.log)
    app = create_app(engine, store, static_dir=config.static_dir)
    uvicorn.run(app, host="0.0.0.0", port=config.port)
    return 0


def _cmd_eval(args) -> int:
    golden_path = Path(args.golden) if args.golden else bundled_golden_path()
    golden = load_golden(golden_path)
    retriever = _retriever(args)
    providers = [build_provider(name.strip()) for name in args.providers.split(",") if name.strip()]
    if args.judge == "remote":
        judge = LLMJudge(RemoteLLMProvider(model=args.judge_model))
    else:
        judge = ScriptedJudge()
    embedder = LocalHashEmbedder(dim=args.dim)
    report = run_comparison(
        providers,
        golden,
        retriever,
        judge,
        embedder,
        max_new_tokens=args.max_new_tokens,
        k=args.k,
    )
    write_report(report, args.out)
    print(format_report_table(report))
    if report.failed_rows:
        print(f"{report.failed_rows} row(s) failed; partial run", file=sys.stderr)
        return 1
    return 0


def _cmd_export_finetune(args) -> int:
    pairs = corpus_mod.import_finetune(args.pairs)
    written = corpus_mod.export_finetune(pairs, args.out)
    print(f"wrote {len(pairs)} pairs ({written} bytes)")
    return 0


def _cmd_stats(args) -> int:
    from .service import SessionStore

    if not Path(args.log).exists():
        raise FileNotFoundError(f"no service log at {args.log}")
    store = SessionStore(args.log)
    stats = store.stats()
    print(f"questions: {stats.total_questions}")
    for name, count in stats.categories.items():
        print(f"  {name:<26} {count:>6}")
    print(f"  {'untagged':<26} {stats.untagged:>6}")
    print(f"feedback: {stats.feedback_count}")
    for rating, count in stats.ratings.items():
        print(f"  rating {rating:<19} {count:>6}")
    for role, count in stats.roles.items():
        print(f"  {role:<26} {count:>6}")
    return 0


_COMMANDS = {
    "build-corpus": _cmd_build_corpus,
    "build-index": _cmd_build_index,
    "chat": _cmd_chat,
    "serve": _cmd_serve,
    "eval": _cmd_eval,
    "export-finetune": _cmd_export_finetune,
    "stats": _cmd_stats,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except KeyboardInterrupt:
        return 1
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
