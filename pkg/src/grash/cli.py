"""Command-line interface for grash."""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Optional, Sequence

from pydantic import ValidationError

from . import __version__
from .config import load_config_file, settings
from .analysis.correlation import TECHNIQUES
from .errors import GrashError
from .kg import (
    dataset_files,
    dataset_fingerprint,
    generate_clustered_kg,
    holdout_split,
    load_dataset,
    stats,
    write_split,
    write_triples,
)
from .runs import (
    BEST_CONFIG,
    CHECKPOINT,
    LEDGER,
    REPORT,
    ROUNDS,
    SCHEDULE,
    TRIAL_LOG,
    RunManifest,
    create_run_dir,
    finish_manifest,
    write_json,
    write_manifest,
)

logger = logging.getLogger(__name__)

USAGE_EXIT = 2
ERROR_EXIT = 1


class UsageError(Exception):
    """Invalid command-line input."""


class GrashArgumentParser(argparse.ArgumentParser):
    """ArgumentParser whose errors are a single ``grash: error:`` line."""

    def error(self, message: str):
        raise UsageError(message)


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _words(text: str) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def _add_dataset_args(parser: argparse.ArgumentParser, flag: bool = True) -> None:
    if flag:
        parser.add_argument("--dataset", help="Dataset directory or triple file")
    parser.add_argument(
        "--valid-size",
        type=int,
        default=settings.valid_size,
        help=f"Validation triples when splitting a single file (default: {settings.valid_size})",
    )
    parser.add_argument(
        "--test-size", type=int, default=0, help="Test triples when splitting a single file"
    )
    parser.add_argument("--split-seed", type=int, default=0, help="Seed for single-file splits")


def _add_model_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--model", choices=["complex", "transe", "rotate"], default="complex", help="Scorer"
    )
    parser.add_argument("--dim", type=int, default=128, help="Embedding dimension")
    parser.add_argument("--p-norm", type=int, choices=[1, 2], default=2, help="TransE norm")
    parser.add_argument("--seed", type=int, default=0, help="Search/training seed")


def _add_run_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--run-dir", type=Path, help="Write outputs here instead of a new run dir")


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    """The full grammar plus each leaf subcommand's parser, keyed by command name."""
    parser = GrashArgumentParser(
        prog="grash",
        description="grash - successive-halving hyperparameter search for KG embeddings",
    )
    parser.add_argument("--version", action="version", version=f"grash {__version__}")
    parser.add_argument("--config", type=Path, help="JSON file of flag defaults")
    parser.add_argument("--log-level", default=settings.log_level, help="Logging level")
    commands = parser.add_subparsers(dest="command", metavar="COMMAND")
    leaves: dict[str, argparse.ArgumentParser] = {}

    def leaf(group, name: str, key: str, help: str) -> argparse.ArgumentParser:
        sub = group.add_parser(name, help=help, description=help)
        sub.set_defaults(command_key=key)
        leaves[key] = sub
        return sub

    # dataset
    dataset = commands.add_parser("dataset", help="Inspect, split or generate datasets")
    dataset_commands = dataset.add_subparsers(dest="dataset_command", metavar="ACTION")
    p = leaf(dataset_commands, "stats", "dataset stats", "Print dataset statistics")
    p.add_argument("path", type=Path, help="Dataset directory or triple file")
    _add_dataset_args(p, flag=False)
    _add_run_args(p)

    p = leaf(
        dataset_commands, "split", "dataset split", "Split a triple file into train/valid/test"
    )
    p.add_argument("path", type=Path, help="Triple file")
    p.add_argument("--out", type=Path, required=True, help="Output directory")
    _add_dataset_args(p, flag=False)
    _add_run_args(p)

    p = leaf(dataset_commands, "generate", "dataset generate", "Generate a synthetic KG")
    p.add_argument("--out", type=Path, required=True, help="Output directory")
    p.add_argument("--entities", type=int, default=5000)
    p.add_argument("--relations", type=int, default=20)
    p.add_argument("--triples", type=int, default=50000)
    p.add_argument("--clusters", type=int, default=10)
    p.add_argument("--zipf", type=float, default=1.0, help="Popularity exponent")
    p.add_argument("--noise", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--valid-size", type=int, default=5000)
    p.add_argument("--test-size", type=int, default=5000)
    _add_run_args(p)

    # reduce
    p = leaf(commands, "reduce", "reduce", "Reduce a dataset's training graph")
    _add_dataset_args(p)
    p.add_argument("--method", choices=["triple", "walk", "kcore"], default="kcore")
    p.add_argument("--target", type=float, help="Target triple fraction")
    p.add_argument("--k", type=int, help="Core number (kcore)")
    p.add_argument("--starts", type=int, help="Walk start entities (walk)")
    p.add_argument("--length", type=int, help="Walk length (walk)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, help="Write the reduced triples here")
    p.add_argument("--ladder", action="store_true", help="Print the k-core ladder")
    _add_run_args(p)

    # space
    space = commands.add_parser("space", help="Search space utilities")
    space_commands = space.add_subparsers(dest="space_command", metavar="ACTION")
    p = leaf(space_commands, "sample", "space sample", "Sample hyperparameter configs")
    p.add_argument("-n", "--num", type=int, default=64, help="Number of configs")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--model", choices=["complex", "transe", "rotate"], default="complex")
    p.add_argument("--space", type=Path, help="JSON search-space overrides")
    _add_run_args(p)

    # search
    p = leaf(commands, "search", "search", "Run a successive-halving search")
    _add_dataset_args(p)
    _add_model_args(p)
    p.add_argument("--budget", type=float, default=3.0, help="Budget B in full runs")
    p.add_argument("--trials", type=int, default=64, help="Initial configs n")
    p.add_argument("--eta", type=int, default=4, help="Reduction factor")
    p.add_argument(
        "--variant", choices=["epoch", "graph", "combined"], default="combined"
    )
    p.add_argument("--max-epochs", type=float, default=20.0, help="Full-fidelity epochs E")
    p.add_argument("--workers", type=int, default=settings.workers)
    p.add_argument("--space", type=Path, help="JSON search-space overrides")
    p.add_argument("--plan-only", action="store_true", help="Write the schedule and stop")
    p.add_argument("--skip-final", action="store_true", help="Do not train the winner fully")
    _add_run_args(p)

    # train
    p = leaf(commands, "train", "train", "Train one config at full fidelity")
    _add_dataset_args(p)
    _add_model_args(p)
    p.add_argument("--config-file", type=Path, help="best_config.json of a search")
    p.add_argument("--epochs", type=float, default=20.0)
    _add_run_args(p)

    # eval
    p = leaf(commands, "eval", "eval", "Evaluate a checkpoint")
    p.add_argument("checkpoint", type=Path)
    p.add_argument("dataset_path", type=Path, metavar="dataset")
    p.add_argument("--split", choices=["valid", "test"], default="test")
    _add_dataset_args(p, flag=False)
    _add_run_args(p)

    # transfer
    p = leaf(commands, "transfer", "transfer", "Rank correlation of low-fidelity techniques")
    _add_dataset_args(p)
    _add_model_args(p)
    p.add_argument("--configs", type=int, default=30)
    p.add_argument("--techniques", type=_words, default=list(TECHNIQUES))
    p.add_argument("--budgets", type=_floats, default=[0.01, 0.05, 0.1, 0.25, 0.5])
    p.add_argument("--max-epochs", type=float, default=20.0)
    p.add_argument("--space", type=Path)
    _add_run_args(p)

    # rounds
    p = leaf(commands, "rounds", "rounds", "Compare searches with different round counts")
    _add_dataset_args(p)
    _add_model_args(p)
    p.add_argument("--etas", type=_ints, default=[2, 4, 8, 64])
    p.add_argument("--trials", type=int, default=64)
    p.add_argument("--budget", type=float, default=3.0)
    p.add_argument("--variant", choices=["epoch", "graph", "combined"], default="combined")
    p.add_argument("--max-epochs", type=float, default=20.0)
    p.add_argument("--space", type=Path)
    _add_run_args(p)

    return parser, leaves


def parse_args(argv: Sequence[str]) -> argparse.Namespace:
    """Parse argv, applying a ``--config`` file as defaults of the chosen subcommand."""
    parser, leaves = build_parser()
    args = parser.parse_args(argv)
    key = getattr(args, "command_key", None)
    if key is None:
        parser.print_help()
        raise UsageError("a command is required")
    if args.config is None:
        return args

    try:
        values = load_config_file(args.config)
    except (OSError, ValueError) as e:
        raise UsageError(f"cannot read config file: {e}") from e
    sub = leaves[key]
    known = {action.dest for action in sub._actions}
    unknown = sorted(set(values) - known)
    if unknown:
        raise UsageError(f"unknown config keys for '{key}': {', '.join(unknown)}")
    sub.set_defaults(**values)
    return parser.parse_args(argv)


def _require(args: argparse.Namespace, name: str) -> Any:
    value = getattr(args, name)
    if value is None:
        raise UsageError(f"--{name.replace('_', '-')} is required")
    return value


def _load(args: argparse.Namespace, path: Path):
    if not Path(path).exists():
        raise UsageError(f"dataset not found: {path}")
    return load_dataset(path, args.valid_size, args.test_size, args.split_seed)


def _space(args: argparse.Namespace):
    from .space import default_space, load_space

    return load_space(args.space) if getattr(args, "space", None) else default_space()


def _search_params(args: argparse.Namespace, **extra):
    from .search import SearchParams

    return SearchParams(
        budget=args.budget,
        num_configs=args.trials,
        eta=extra.pop("eta", getattr(args, "eta", 2)),
        max_epochs=args.max_epochs,
        variant=args.variant,
        valid_size=args.valid_size,
        model=args.model,
        dim=args.dim,
        p_norm=args.p_norm,
        seed=args.seed,
        workers=getattr(args, "workers", 1),
        **extra,
    )


def _print(text: str = "") -> None:
    print(text)


# --- handlers ---------------------------------------------------------------


def cmd_dataset_stats(args, run_dir: Path, manifest: RunManifest) -> None:
    split = _load(args, args.path)
    summary = stats(split.train_graph()).model_dump()
    summary.update(valid=len(split.valid), test=len(split.test))
    write_json(run_dir / REPORT, summary)
    for key, value in summary.items():
        _print(f"{key:12s} {value}")


def cmd_dataset_split(args, run_dir: Path, manifest: RunManifest) -> None:
    split = _load(args, args.path)
    write_split(args.out, split)
    _print(
        f"train={len(split.train)} valid={len(split.valid)} test={len(split.test)} -> {args.out}"
    )


def cmd_dataset_generate(args, run_dir: Path, manifest: RunManifest) -> None:
    graph = generate_clustered_kg(
        num_entities=args.entities,
        num_relations=args.relations,
        num_triples=args.triples,
        num_clusters=args.clusters,
        zipf_exponent=args.zipf,
        noise=args.noise,
        seed=args.seed,
    )
    split = holdout_split(graph, args.valid_size, args.test_size, args.seed)
    write_split(args.out, split)
    manifest.seeds["generator"] = args.seed
    _print(
        f"{graph.num_entities} entities, {graph.num_relations} relations, "
        f"{graph.num_triples} triples -> {args.out}"
    )


def cmd_reduce(args, run_dir: Path, manifest: RunManifest) -> None:
    from .reduction import (
        LadderCache,
        k_core,
        random_walk_for_fraction,
        random_walk_sample,
        select_core_for_fidelity,
        triple_sample,
    )

    split = _load(args, _require(args, "dataset"))
    graph = split.train_graph()
    if args.method == "kcore":
        ladder = LadderCache().get_or_compute(graph)
        if args.ladder:
            for level in ladder.levels:
                _print(f"k={level.k}\ttriples={level.triples}\tentities={level.entities}")
        if args.k is not None:
            k = args.k
        elif args.target is not None:
            k = select_core_for_fidelity(ladder, args.target).k
        else:
            raise UsageError("kcore needs --k or --target")
        subgraph = k_core(graph, k, ladder)
    elif args.method == "triple":
        subgraph = triple_sample(graph, _require(args, "target"), args.seed)
    elif args.starts is not None and args.length is not None:
        subgraph = random_walk_sample(graph, args.starts, args.length, args.seed)
    elif args.target is not None:
        subgraph = random_walk_for_fraction(graph, args.target, args.seed)
    else:
        raise UsageError("walk needs --starts and --length, or --target")

    out = args.out or run_dir / "reduced.txt"
    write_triples(out, subgraph.graph.labeled_triples())
    summary = {
        "provenance": subgraph.provenance.model_dump(),
        "entities": subgraph.graph.num_entities,
        "relations": subgraph.graph.num_relations,
        "triples": subgraph.graph.num_triples,
        "triple_fraction": subgraph.triple_fraction,
        "entity_fraction": subgraph.entity_fraction,
        "output": str(out),
    }
    write_json(run_dir / REPORT, summary)
    _print(json.dumps(summary))


def cmd_space_sample(args, run_dir: Path, manifest: RunManifest) -> None:
    from .space import sample_configs

    configs = sample_configs(_space(args), args.num, args.seed, args.model)
    data = [c.model_dump() for c in configs]
    write_json(run_dir / "configs.json", data)
    for item in data:
        _print(json.dumps(item))


def _print_schedule(schedule) -> None:
    _print(
        f"{schedule.num_rounds} rounds, R={schedule.round_budget:g}, "
        f"planned cost {schedule.planned_total_cost:.6g} of B={schedule.budget:g}"
    )
    _print("round\tconfigs\tfidelity\tepochs\tgraph\ttriples\ttrial_cost")
    for r in schedule.rounds:
        _print(
            f"{r.round}\t{r.num_configs}\t{r.fidelity:.6g}\t{r.epochs:.6g}\t"
            f"{r.graph_label}\t{r.triples}\t{r.planned_trial_cost:.6g}"
        )


def _print_report(name: str, report) -> None:
    record = report.to_record()
    _print(
        f"{name}\tMRR={record['mrr']:.4f}\tHits@1={record['hits@1']:.4f}\t"
        f"Hits@3={record['hits@3']:.4f}\tHits@10={record['hits@10']:.4f}"
    )


def _final(args, split, config, run_dir: Path, epochs: float) -> dict:
    from .model import save_checkpoint
    from .search import final_train

    final = final_train(
        split, config, epochs, args.dim, model=args.model, seed=args.seed, p_norm=args.p_norm
    )
    save_checkpoint(run_dir / CHECKPOINT, final.model, split.vocabulary_fingerprint())
    report = {
        "config_id": config.config_id,
        "train_config": final.train_config.model_dump(),
        "epoch_losses": final.trace.epoch_losses,
        "valid": final.valid_report.to_record() if final.valid_report else None,
        "test": final.test_report.to_record() if final.test_report else None,
    }
    write_json(run_dir / REPORT, report)
    for name, r in (("valid", final.valid_report), ("test", final.test_report)):
        if r is not None:
            _print_report(name, r)
    return report


def _schedule_summary(schedule) -> dict:
    return {
        "num_rounds": schedule.num_rounds,
        "round_budget": schedule.round_budget,
        "pool_sizes": [r.num_configs for r in schedule.rounds],
        "planned_total_cost": schedule.planned_total_cost,
    }


def cmd_search(args, run_dir: Path, manifest: RunManifest) -> None:
    from .reduction import LadderCache
    from .search import TrialLogger, plan_schedule, run_search

    params = _search_params(args)
    split = _load(args, _require(args, "dataset"))
    graph = split.train_graph()
    ladder = None if params.variant == "epoch" else LadderCache().get_or_compute(graph)
    schedule = plan_schedule(params, ladder, graph.num_triples, graph.num_entities)
    manifest.seeds.update(search=args.seed, split=args.split_seed)
    manifest.config["resolved_params"] = params.model_dump()
    manifest.config["schedule"] = _schedule_summary(schedule)
    write_manifest(run_dir, manifest)

    if args.plan_only:
        write_json(run_dir / SCHEDULE, schedule.model_dump())
        _print_schedule(schedule)
        return

    result = run_search(
        split, _space(args), params, trial_logger=TrialLogger(run_dir / TRIAL_LOG), ladder=ladder
    )
    write_json(run_dir / SCHEDULE, result.schedule.model_dump())
    write_json(run_dir / ROUNDS, [r.to_dict() for r in result.rounds])
    best = {"model": params.model, "dim": params.dim, **result.best.model_dump()}
    write_json(run_dir / BEST_CONFIG, best)
    _print_schedule(result.schedule)
    _print(f"best config {result.best.config_id}: {json.dumps(result.best.values)}")

    if not args.skip_final:
        _final(args, split, result.best, run_dir, params.max_epochs)
        result.ledger.record_final_run(result.best.config_id)
    write_json(run_dir / LEDGER, result.ledger.to_dict())
    status = result.ledger.get_status()
    _print(f"search cost {status['realized_total']:.6g} of B={params.budget:g}")


def cmd_train(args, run_dir: Path, manifest: RunManifest) -> None:
    from .space import HyperparamConfig, default_space, sample_configs

    split = _load(args, _require(args, "dataset"))
    if args.config_file is not None:
        with open(args.config_file, encoding="utf-8") as f:
            data = json.load(f)
        config = HyperparamConfig(config_id=data.get("config_id", 0), values=data["values"])
    else:
        config = sample_configs(default_space(), 1, args.seed, args.model)[0]
    manifest.seeds["train"] = args.seed
    _final(args, split, config, run_dir, args.epochs)


def cmd_eval(args, run_dir: Path, manifest: RunManifest) -> None:
    from .evaluation import evaluate
    from .model import load_checkpoint

    split = _load(args, args.dataset_path)
    if not args.checkpoint.exists():
        raise UsageError(f"checkpoint not found: {args.checkpoint}")
    model, _ = load_checkpoint(args.checkpoint, split.vocabulary_fingerprint())
    triples = split.test if args.split == "test" else split.valid
    report = evaluate(model, triples, split.known_triples())
    write_json(run_dir / REPORT, report.to_record())
    _print_report(args.split, report)


def cmd_transfer(args, run_dir: Path, manifest: RunManifest) -> None:
    from .analysis import format_table, transferability_sweep
    from .search import SearchParams

    split = _load(args, _require(args, "dataset"))
    params = SearchParams(
        num_configs=max(args.configs, 2),
        eta=2,
        max_epochs=args.max_epochs,
        valid_size=args.valid_size,
        model=args.model,
        dim=args.dim,
        p_norm=args.p_norm,
        seed=args.seed,
    )
    reports = transferability_sweep(
        split, _space(args), args.configs, args.techniques, args.budgets, args.max_epochs, params
    )
    write_json(run_dir / REPORT, [r.model_dump() for r in reports])
    _print(format_table(reports))


def cmd_rounds(args, run_dir: Path, manifest: RunManifest) -> None:
    from .analysis import round_count_study

    split = _load(args, _require(args, "dataset"))
    params = _search_params(args, eta=min(args.etas))
    results = round_count_study(split, _space(args), args.etas, params)
    write_json(run_dir / REPORT, [r.to_dict() for r in results])
    _print("eta\trounds\tconfig\tcost\tvalid_mrr")
    for r in results:
        mrr = "-" if r.final_valid_mrr is None else f"{r.final_valid_mrr:.4f}"
        _print(f"{r.eta}\t{r.rounds}\t{r.best_config_id}\t{r.search_cost:.6g}\t{mrr}")


HANDLERS = {
    "dataset stats": cmd_dataset_stats,
    "dataset split": cmd_dataset_split,
    "dataset generate": cmd_dataset_generate,
    "reduce": cmd_reduce,
    "space sample": cmd_space_sample,
    "search": cmd_search,
    "train": cmd_train,
    "eval": cmd_eval,
    "transfer": cmd_transfer,
    "rounds": cmd_rounds,
}


def _dataset_path(args) -> Optional[Path]:
    for name in ("dataset", "dataset_path", "path"):
        value = getattr(args, name, None)
        if value is not None:
            return Path(value)
    return None


def _fail(error: BaseException) -> str:
    line = f"grash: error: {type(error).__name__}: {error}".replace("\n", " ")
    print(line, file=sys.stderr)
    return line


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point for the CLI; returns the process exit status."""
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parse_args(argv)
    except UsageError as e:
        _fail(e)
        return USAGE_EXIT

    logging.basicConfig(
        level=getattr(logging, str(args.log_level).upper(), logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    config = {
        k: (str(v) if isinstance(v, Path) else v)
        for k, v in vars(args).items()
        if k not in ("command", "dataset_command", "space_command")
    }
    dataset = _dataset_path(args)
    manifest = RunManifest(command=args.command_key, argv=argv, config=config)
    if dataset is not None and dataset.exists():
        manifest.dataset = str(dataset)
        manifest.dataset_hash = dataset_fingerprint(dataset_files(dataset))
    if "seed" in config:
        manifest.seeds["seed"] = config["seed"]

    run_dir = create_run_dir(args.command_key, args.run_dir)
    write_manifest(run_dir, manifest)
    logger.info(f"Run directory: {run_dir}")

    try:
        HANDLERS[args.command_key](args, run_dir, manifest)
    except (UsageError, ValidationError, FileNotFoundError) as e:
        finish_manifest(run_dir, manifest, "failed", _fail(e))
        return USAGE_EXIT
    except GrashError as e:
        finish_manifest(run_dir, manifest, "failed", _fail(e))
        return ERROR_EXIT

    finish_manifest(run_dir, manifest, "ok")
    return 0


if __name__ == "__main__":
    sys.exit(main())
