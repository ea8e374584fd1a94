"""Command-line entry point. Stages communicate exclusively through files so
any stage can be re-run or human-reviewed in isolation."""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from pathlib import Path
from typing import Optional

from .errors import ConfigError, KgConflictError


def _load_config_file(path: str) -> dict:
    text = Path(path).read_text(encoding="utf-8")
    if path.endswith((".yaml", ".yml")):
        import yaml

        data = yaml.safe_load(text)
    else:
        data = json.loads(text)
    if not isinstance(data, dict):
        raise ConfigError([f"config file {path} must hold a mapping at top level"])
    return data


_KNOWN_CONFIG_KEYS = {
    "seed",
    "workers",
    "gateway",
    "cache_dir",
    "model",
    "max_edges",
    "max_edges_per_node",
    "depth_min",
    "depth_max",
    "top_degree_cutoff",
    "n_instances",
    "max_conflicts",
    "agg",
    "threshold",
    "strategy",
    "group_by",
    "bins",
}

_DEFAULTS = {
    "seed": 0,
    "workers": 1,
    "gateway": "replay",
    "cache_dir": "gateway-cache",
    "model": "offline",
    "max_edges": 15,
    "max_edges_per_node": 5,
    "depth_min": 2,
    "depth_max": 5,
    "top_degree_cutoff": 30,
    "n_instances": 10,
    "max_conflicts": 4,
    "agg": "all_runs",
    "threshold": 0.6,
    "strategy": "multi_step",
    "group_by": "conflict_type",
    "bins": 4,
}


def resolve_config(args: argparse.Namespace) -> dict:
    """File config under flag overrides; every problem is reported, not just
    the first."""
    config = dict(_DEFAULTS)
    problems: list[str] = []
    if getattr(args, "config", None):
        try:
            loaded = _load_config_file(args.config)
        except FileNotFoundError:
            raise ConfigError([f"config file not found: {args.config}"])
        except (ValueError, ConfigError) as exc:
            raise ConfigError([f"config file unreadable: {exc}"])
        for key, value in loaded.items():
            if key not in _KNOWN_CONFIG_KEYS:
                problems.append(f"unknown config key: {key}")
            else:
                config[key] = value
    for key in _KNOWN_CONFIG_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            config[key] = value

    if config["gateway"] not in ("live", "record", "replay"):
        problems.append(f"gateway must be live|record|replay, got {config['gateway']!r}")
    for key in ("seed", "workers", "max_edges", "max_edges_per_node", "n_instances", "bins"):
        if not isinstance(config[key], int) or (key != "seed" and config[key] < 1):
            problems.append(f"{key} must be a positive integer, got {config[key]!r}")
    if not isinstance(config["depth_min"], int) or not isinstance(config["depth_max"], int):
        problems.append("depth_min and depth_max must be integers")
    elif not 1 <= config["depth_min"] <= config["depth_max"]:
        problems.append(
            f"depth range invalid: ({config['depth_min']}, {config['depth_max']})"
        )
    if config["agg"] not in ("all_runs", "any_run", "majority"):
        problems.append(f"agg must be all_runs|any_run|majority, got {config['agg']!r}")
    if config["strategy"] not in ("multi_step", "binary"):
        problems.append(f"strategy must be multi_step|binary, got {config['strategy']!r}")
    if not isinstance(config["max_conflicts"], int) or not 1 <= config["max_conflicts"] <= 4:
        problems.append(f"max_conflicts must be in [1, 4], got {config['max_conflicts']!r}")
    try:
        t = float(config["threshold"])
        if not 0.0 <= t <= 1.0:
            problems.append(f"threshold must be in [0, 1], got {t}")
        else:
            config["threshold"] = t
    except (TypeError, ValueError):
        problems.append(f"threshold must be a number, got {config['threshold']!r}")
    if problems:
        raise ConfigError(problems)
    return config


def _build_gateway(config: dict):
    from .gateway import ModelGateway

    return ModelGateway(
        mode=config["gateway"],
        cache_dir=config["cache_dir"],
        max_in_flight=config["workers"],
    )


def _load_graph_file(path: str):
    from .kgstore import deserialize_graph

    return deserialize_graph(Path(path).read_text(encoding="utf-8"))


def _registry_for(args: argparse.Namespace):
    from .registry import default_registry, load_registry

    if getattr(args, "registry", None):
        return load_registry(args.registry)
    return default_registry()


# --------------------------------------------------------------------------
# Subcommands


def cmd_ingest(args, config) -> dict:
    from .kgstore import FilterConfig, apply_filters, load_graph, serialize_graph

    def lines(path: Optional[str]):
        if not path:
            return ()
        return Path(path).read_text(encoding="utf-8").splitlines()

    graph, report = load_graph(
        lines(args.triplets), lines(args.entity_aliases), lines(args.relation_aliases)
    )
    registry = _registry_for(args)
    filtered = apply_filters(
        graph,
        FilterConfig(
            top_degree_cutoff=config["top_degree_cutoff"],
            relation_whitelist=registry.relation_ids if args.whitelist else None,
            denylist_pattern=args.denylist_pattern,
        ),
    )
    Path(args.out).write_text(serialize_graph(filtered), encoding="utf-8")
    return {
        "entities": filtered.entity_count,
        "triplets": filtered.triplet_count,
        "malformed_lines": report.malformed_lines,
        "self_loops_dropped": report.self_loops_dropped,
        "duplicates_dropped": report.duplicates_dropped,
        "dangling": report.dangling_count,
        "out": args.out,
    }


def cmd_extract(args, config) -> dict:
    from .extractor import ExtractionConfig, extract, sample_seed, validate_constraints

    graph = _load_graph_file(args.graph)
    registry = _registry_for(args)
    extraction = ExtractionConfig(
        max_edges=config["max_edges"],
        max_edges_per_node=config["max_edges_per_node"],
        depth_range=(config["depth_min"], config["depth_max"]),
        rng_seed=config["seed"],
    )
    out = []
    for i in range(config["n_instances"]):
        rng = random.Random(config["seed"] + i)
        seed = sample_seed(graph, registry, rng)
        sg = extract(graph, seed, extraction, rng, registry)
        violations = validate_constraints(sg, extraction)
        if violations:
            raise KgConflictError(
                f"extraction produced constraint violations: {[v.detail for v in violations]}"
            )
        out.append(sg.to_dict())
    with open(args.out, "w", encoding="utf-8") as fh:
        for sg in out:
            fh.write(json.dumps(sg) + "\n")
    return {"subgraphs": len(out), "out": args.out}


def cmd_generate(args, config) -> dict:
    from .pipeline import run_offline_generation
    from .records import write_records
    from .extractor import ExtractionConfig

    graph = _load_graph_file(args.graph)
    registry = _registry_for(args)
    records = run_offline_generation(
        graph,
        registry,
        n_instances=config["n_instances"],
        rng_seed=config["seed"],
        extraction=ExtractionConfig(
            max_edges=config["max_edges"],
            max_edges_per_node=config["max_edges_per_node"],
            depth_range=(config["depth_min"], config["depth_max"]),
            rng_seed=config["seed"],
        ),
        max_conflicts=config["max_conflicts"],
    )
    count = write_records(records, args.out)
    return {"records": count, "out": args.out}


def cmd_verbalize(args, config) -> dict:
    # Offline path re-verbalizes stored records through the template engine.
    from .conflicts import SurfaceTriplet
    from .records import read_records, write_records
    from .verbalizer import template_verbalize

    records = read_records(args.records)
    registry = _registry_for(args)
    rng = random.Random(config["seed"])
    for record in records:
        triplets = [SurfaceTriplet(*t) for t in record.subgraph_triplets]
        if triplets:
            record.context_a = template_verbalize(triplets, registry, rng).text
    count = write_records(records, args.out)
    return {"records": count, "out": args.out}


def cmd_verify(args, config) -> dict:
    from .conflicts import SurfaceTriplet
    from .records import read_records
    from .verbalizer import VerbalizedContext, coverage_check, split_sentences

    records = read_records(args.records)
    registry = _registry_for(args)
    results = []
    for record in records:
        groups = record.perturbation_groups()
        conflict_surfaces = [t for g in groups for t in g.replacement_triplets]
        context = VerbalizedContext(
            text=record.context_b,
            sentences=split_sentences(record.context_b),
            triplet_sentence_map={},
            source="model",
        )
        report = coverage_check(conflict_surfaces, [], context, None, registry)
        results.append(
            {
                "id": record.id,
                "conflict_covered": report.conflict_covered,
                "missing": report.missing_triplets,
            }
        )
    covered = sum(1 for r in results if r["conflict_covered"])
    if args.out:
        Path(args.out).write_text(
            json.dumps(results, ensure_ascii=False, indent=2), encoding="utf-8"
        )
    return {"records": len(results), "conflict_covered": covered}


def cmd_review_serve(args, config) -> dict:
    import uvicorn

    from .review import ReviewStore, create_app

    store = ReviewStore(args.data_dir)
    if args.enqueue:
        from .records import read_records

        items = [
            {"kind": args.kind, "item_id": r.id, "payload": r.to_dict()}
            for r in read_records(args.enqueue)
        ]
        store.enqueue(items)
    app = create_app(store, console_dir=args.console_dir)
    uvicorn.run(app, host=args.host, port=args.port)
    return {"served": True}


def cmd_evaluate(args, config) -> dict:
    from .harness import whitespace_token_count
    from .pipeline import attach_length_bins, evaluate_records, perfect_responder
    from .records import read_records

    records = read_records(args.records)
    if args.mock_model:
        from .gateway import ScriptedGateway

        gateway = ScriptedGateway(
            responder=perfect_responder(records, config["strategy"])
        )
    else:
        gateway = _build_gateway(config)
    sheets = evaluate_records(
        records,
        gateway,
        model_name=config["model"],
        strategy=config["strategy"],
        agg=config["agg"],
        threshold=config["threshold"],
    )
    attach_length_bins(records, sheets, config["bins"])
    with open(args.out, "w", encoding="utf-8") as fh:
        for sheet in sheets:
            fh.write(json.dumps(sheet.to_dict(), ensure_ascii=False) + "\n")
    return {
        "instances": len(sheets),
        "mean_id": round(sum(s.id_score for s in sheets) / max(len(sheets), 1), 4),
        "mean_loc": round(sum(s.loc_score for s in sheets) / max(len(sheets), 1), 4),
        "out": args.out,
    }


def cmd_report(args, config) -> dict:
    from .harness import ScoreSheet, aggregate, format_report

    sheets = []
    with open(args.scores, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                sheets.append(ScoreSheet.from_dict(json.loads(line)))
    rows = aggregate(sheets, config["group_by"])
    table = format_report(rows, config["group_by"])
    if args.out:
        Path(args.out).write_text(table + "\n", encoding="utf-8")
    else:
        print(table)
    return {
        "groups": len(rows),
        "rows": [
            {"group": r.group, "id": r.mean_id, "loc": r.mean_loc, "n": r.n} for r in rows
        ],
    }


def cmd_probe(args, config) -> dict:
    from .harness import probe_parametric
    from .kgstore import Triplet
    from .records import read_records

    registry = _registry_for(args)
    gateway = _build_gateway(config)
    records = read_records(args.records)
    outcomes: dict[str, int] = {}
    results = []
    for record in records:
        for st in record.seed_triplets:
            label = probe_parametric(
                Triplet(*st), registry, gateway, model_name=config["model"]
            )
            outcomes[label] = outcomes.get(label, 0) + 1
            results.append({"id": record.id, "triplet": st, "split": label})
    if args.out:
        Path(args.out).write_text(
            json.dumps(results, ensure_ascii=False, indent=2), encoding="utf-8"
        )
    return {"records": len(records), "splits": outcomes}


def cmd_quality(args, config) -> dict:
    from .harness import rate_quality
    from .records import read_records

    gateway = _build_gateway(config)
    records = read_records(args.records)
    ratings = []
    for record in records:
        row = {"id": record.id}
        for dim in ("naturalness", "realism"):
            row[dim] = rate_quality(record.context_b, dim, gateway, config["model"])
        ratings.append(row)
    if args.out:
        Path(args.out).write_text(
            json.dumps(ratings, ensure_ascii=False, indent=2), encoding="utf-8"
        )
    means = {
        dim: round(sum(r[dim] for r in ratings) / max(len(ratings), 1), 3)
        for dim in ("naturalness", "realism")
    }
    return {"records": len(ratings), "means": means}


def cmd_adapt(args, config) -> dict:
    from .records import adapt_external, load_rows, write_records

    outcome = adapt_external(load_rows(args.rows), args.source, dedup=args.dedup)
    count = write_records(outcome.records, args.out)
    return {
        "records": count,
        "errors": outcome.errors,
        "deduplicated": outcome.deduplicated,
        "out": args.out,
    }


# --------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kgconflict",
        description="Synthesize and evaluate inter-context knowledge-conflict benchmarks.",
    )
    parser.add_argument("--config", help="YAML or JSON config file")
    parser.add_argument("--seed", type=int, help="base RNG seed")
    parser.add_argument("--workers", type=int, help="max in-flight model calls")
    parser.add_argument("--gateway", choices=("live", "record", "replay"))
    parser.add_argument("--cache-dir", dest="cache_dir", help="response cache directory")
    parser.add_argument("--model", help="model name passed to the gateway")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="load, filter, and index a triplet graph")
    p.add_argument("--triplets", required=True)
    p.add_argument("--entity-aliases", dest="entity_aliases")
    p.add_argument("--relation-aliases", dest="relation_aliases")
    p.add_argument("--registry")
    p.add_argument("--whitelist", action="store_true", help="keep only registry relations")
    p.add_argument("--denylist-pattern", dest="denylist_pattern")
    p.add_argument("--top-degree-cutoff", dest="top_degree_cutoff", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("extract", help="sample seeds and extract subgraphs")
    p.add_argument("--graph", required=True)
    p.add_argument("--registry")
    p.add_argument("--n-instances", dest="n_instances", type=int)
    p.add_argument("--max-edges", dest="max_edges", type=int)
    p.add_argument("--max-edges-per-node", dest="max_edges_per_node", type=int)
    p.add_argument("--depth-min", dest="depth_min", type=int)
    p.add_argument("--depth-max", dest="depth_max", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("generate", help="run the offline generation pipeline")
    p.add_argument("--graph", required=True)
    p.add_argument("--registry")
    p.add_argument("--n-instances", dest="n_instances", type=int)
    p.add_argument("--max-conflicts", dest="max_conflicts", type=int)
    p.add_argument("--max-edges", dest="max_edges", type=int)
    p.add_argument("--max-edges-per-node", dest="max_edges_per_node", type=int)
    p.add_argument("--depth-min", dest="depth_min", type=int)
    p.add_argument("--depth-max", dest="depth_max", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("verbalize", help="re-verbalize record subgraphs (template path)")
    p.add_argument("--records", required=True)
    p.add_argument("--registry")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_verbalize)

    p = sub.add_parser("verify", help="coverage-check stored records")
    p.add_argument("--records", required=True)
    p.add_argument("--registry")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("review-serve", help="serve the human review API")
    p.add_argument("--data-dir", dest="data_dir", required=True)
    p.add_argument("--enqueue", help="records file to enqueue before serving")
    p.add_argument("--kind", choices=("demonstration", "instance"), default="instance")
    p.add_argument("--console-dir", dest="console_dir")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_review_serve)

    p = sub.add_parser("evaluate", help="run detection over records and score ID/LOC")
    p.add_argument("--records", required=True)
    p.add_argument("--strategy", choices=("multi_step", "binary"))
    p.add_argument("--agg", choices=("all_runs", "any_run", "majority"))
    p.add_argument("--threshold", type=float)
    p.add_argument("--bins", type=int)
    p.add_argument("--mock-model", dest="mock_model", action="store_true",
                   help="score against a scripted perfect responder (no gateway)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("report", help="aggregate score sheets into a table")
    p.add_argument("--scores", required=True)
    p.add_argument("--group-by", dest="group_by",
                   choices=("conflict_type", "domain", "relation", "domain_count",
                            "length_bin", "parametric_split"))
    p.add_argument("--out")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("probe", help="probe parametric knowledge of seed triplets")
    p.add_argument("--records", required=True)
    p.add_argument("--registry")
    p.add_argument("--out")
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("quality", help="model-rated naturalness/realism of contexts")
    p.add_argument("--records", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_quality)

    p = sub.add_parser("adapt", help="convert external dataset rows into records")
    p.add_argument("--rows", required=True)
    p.add_argument("--source", required=True)
    p.add_argument("--dedup", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_adapt)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.monotonic()
    try:
        config = resolve_config(args)
        summary = args.func(args, config)
    except ConfigError as exc:
        print(
            json.dumps({"status": "error", "kind": "config", "problems": exc.problems}),
            file=sys.stderr,
        )
        return 2
    except KgConflictError as exc:
        print(
            json.dumps(
                {"status": "error", "kind": type(exc).__name__, "message": str(exc)}
            ),
            file=sys.stderr,
        )
        return 1
    summary = {"status": "ok", "command": args.command, **summary}
    summary["elapsed_s"] = round(time.monotonic() - started, 3)
    print(json.dumps(summary, ensure_ascii=False))
    return 0


if __name__ == "__main__":
    sys.exit(main())
