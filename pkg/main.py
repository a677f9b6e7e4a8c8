import argparse
import datetime
import json
import logging
import os
import sys

from pydantic import ValidationError

import config
from errors import ConfigError, EndpointUnavailable, MutagenError
from utils import atomic_write_json, atomic_write_text, read_jsonl, sha256_file, write_jsonl

logger = logging.getLogger("main")

# Descriptions of each subcommand for CLI documentation
COMMAND_DOCS = {
    "extract": "Harvest intermediate proof steps of a corpus as new seed theorems.",
    "mutate": "Drop hypotheses of seed theorems to build counterexample problems.",
    "iterate": "Run expert iteration (propose, prove, verify, reward, emit datasets).",
    "evaluate": "Score generators with pass@k on a set of problems.",
    "simulate": "Run the reward-dynamics simulator, or compare two reward settings.",
    "check": "Verify a JSONL batch of proof jobs.",
}

EXIT_OK, EXIT_ITEM_FAILURES, EXIT_CONFIG = 0, 1, 2


class Defaults(argparse.ArgumentDefaultsHelpFormatter):
    pass


def _global_args(parser: argparse.ArgumentParser, suppress: bool) -> None:
    def d(value):
        return argparse.SUPPRESS if suppress else value

    g = parser.add_argument_group("global options")
    g.add_argument("--config", type=str, default=d(None), help="JSON config file (RunConfig for iterate, SimConfig for simulate)")
    g.add_argument("--seed", type=int, default=d(None), help="Run seed (overrides the config file)")
    g.add_argument("--run-dir", type=str, default=d(config.RUN_DIR), help="Directory for run outputs")
    g.add_argument("--log-level", type=str, default=d(config.LOG_LEVEL), help="Logging level")
    g.add_argument("--parallelism", type=int, default=d(None), help=f"Concurrent generator/verifier calls (default {config.PARALLELISM})")
    g.add_argument("--timeout-s", dest="timeout", type=float, default=d(None),
                   help=f"Per-proof verification timeout in seconds (default {config.TIMEOUT_S})")
    g.add_argument("--alpha", type=float, default=d(None), help=f"Reward trade-off α (default {config.ALPHA})")
    g.add_argument("--temperature", type=float, default=d(None), help=f"Generator sampling temperature (default {config.TEMPERATURE})")
    g.add_argument("--max-tokens", type=int, default=d(None), help=f"Generator maximum tokens (default {config.MAX_TOKENS})")
    g.add_argument("--strict", action="store_true", default=d(False), help="Exit with code 1 when any item failed")
    g.add_argument("--json-errors", action="store_true", default=d(False), help="Print errors to stderr as JSON objects")
    g.add_argument("--no-progress", action="store_true", default=d(False), help="Disable progress bars")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Counterexample problem generation and multi-reward expert iteration for Lean 4.",
        formatter_class=Defaults,
    )
    _global_args(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name):
        p = sub.add_parser(name, help=COMMAND_DOCS[name], description=COMMAND_DOCS[name], formatter_class=Defaults)
        _global_args(p, suppress=True)
        return p

    p = add("extract")
    p.add_argument("--in", dest="inputs", nargs="+", required=True, help=".lean files or directories")
    p.add_argument("--out", required=True, help="Output .lean file of extracted theorems")
    p.add_argument("--states", default=None, help="JSONL proof-state rows (optional)")

    p = add("mutate")
    p.add_argument("--in", dest="inputs", nargs="+", required=True, help=".lean files or directories")
    p.add_argument("--out", required=True, help="Output JSONL of mutation records (a .lean twin is written too)")
    p.add_argument("--form", default="conj", choices=["conj", "impl", "conjunction", "implication"], help="Body form")
    p.add_argument("--oracle", default="structural", choices=["structural", "checker"], help="Unused-hypothesis oracle")
    p.add_argument("--backend", default="toy", choices=["toy", "repl"], help="Checker backend for --oracle checker and re-checks")
    p.add_argument("--recheck", action="store_true", help="Elaborate every printed problem with the checker")

    p = add("iterate")
    p.add_argument("--mock", default=None, help="Mock script JSONL used for both generator roles")
    p.add_argument("--toy", type=int, default=None, metavar="N", help="Build an N-problem toy workload in the run dir and run it")
    p.add_argument("--proposer", default=None, help="Proposer endpoint (overrides the config)")
    p.add_argument("--prover", default=None, help="Prover endpoint (overrides the config)")

    p = add("evaluate")
    p.add_argument("--problems", required=True, help="JSONL of mutation records")
    p.add_argument("--proposer", default=config.PROPOSER_ADDR, help="Proposer endpoint")
    p.add_argument("--prover", default=config.PROVER_ADDR, help="Prover endpoint")
    p.add_argument("--mock", default=None, help="Mock script JSONL used for both roles")
    p.add_argument("--backend", default="toy", choices=["toy", "repl"], help="Checker backend")
    p.add_argument("--ks", default="1,4,9", help="Comma-separated k values")
    p.add_argument("--n-propose", type=int, default=3, help="Witnesses per problem")
    p.add_argument("--n-prove", type=int, default=3, help="Proofs per witness")
    p.add_argument("--limit", type=int, default=None, help="Evaluate only the first N problems")

    p = add("simulate")
    p.add_argument("--compare", nargs=2, metavar="LABEL:ALPHA", default=None, help="Two settings, e.g. single:1.0 multi:0.8")
    p.add_argument("--runs", type=int, default=20, help="Paired runs for --compare")
    p.add_argument("--iterations", type=int, default=None, help="Iterations per run (default 56)")
    p.add_argument("--eta", type=float, default=None, help="Learning rate (default 0.35)")

    p = add("check")
    p.add_argument("--jobs", required=True, help="JSONL of jobs {id, statement, proof[, timeout_s]}")
    p.add_argument("--out", required=True, help="Output JSONL of results")
    p.add_argument("--backend", default="toy", choices=["toy", "repl"], help="Checker backend")
    return parser


# ---------- wiring ----------


def make_verifier(backend: str, bound: int = config.TOY_BOUND):
    if backend == "toy":
        from verifiers.ToyVerifier import ToyVerifier
        return ToyVerifier(bound)
    from verifiers.ReplVerifier import ReplVerifier
    verifier = ReplVerifier()
    verifier.probe()
    return verifier


def make_generators(proposer_endpoint, prover_endpoint, temperature, max_tokens, archive_dir):
    from generators.CounterexampleProposer import CounterexampleProposer
    from generators.GeneratorConfig import GeneratorConfig, GeneratorRole
    from generators.ProofWriter import ProofWriter
    from generators.ResponseArchive import ResponseArchive
    from llm.ClientFactory import make_client

    archive = ResponseArchive(archive_dir)
    pcfg = GeneratorConfig(role=GeneratorRole.PROPOSER, endpoint=proposer_endpoint, temperature=temperature, max_tokens=max_tokens)
    qcfg = GeneratorConfig(role=GeneratorRole.PROVER, endpoint=prover_endpoint, temperature=temperature, max_tokens=max_tokens)
    proposer = CounterexampleProposer(make_client(proposer_endpoint, "proposer", pcfg.retries), pcfg, archive)
    prover = ProofWriter(make_client(prover_endpoint, "prover", qcfg.retries), qcfg, archive)
    return proposer, prover


# Global flags left unset fall back to these (.env) values; iterate falls back to its config file instead.
FLAG_DEFAULTS = {
    "parallelism": config.PARALLELISM,
    "timeout": config.TIMEOUT_S,
    "temperature": config.TEMPERATURE,
    "max_tokens": config.MAX_TOKENS,
}


def or_default(value, default):
    return default if value is None else value


def flag(args, name: str):
    return or_default(getattr(args, name), FLAG_DEFAULTS[name])


def run_seed(args) -> int:
    return or_default(args.seed, 0)


def write_manifest(path: str, args, inputs, outputs, stats: dict, seed: int) -> None:
    """`seed` is the seed the command actually ran with; directories among `inputs` are hashed file by file."""
    from loaders.LeanFileLoader import lean_files
    from processors.ExpertIterationProcessor import versions
    files = [p for p in lean_files(inputs) if os.path.isfile(p)]
    atomic_write_json(path, {
        "command": args.command,
        "arguments": {k: v for k, v in vars(args).items() if k != "command"},
        "seed": seed,
        "versions": versions(),
        "inputs": {p: sha256_file(p) for p in files},
        "outputs": outputs,
        "stats": stats,
        "finished_at": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    })


# ---------- commands ----------


def cmd_extract(args) -> int:
    from extractors.SeedExtractor import SeedExtractor
    from loaders.ProofStateLoader import ProofStateLoader

    states = ProofStateLoader(args.states).index() if args.states else {}
    extractor = SeedExtractor(states, parallelism=flag(args, "parallelism"), show_progress=not args.no_progress)
    result = extractor.extract(args.inputs)
    atomic_write_text(args.out, result.to_lean())
    stem = os.path.splitext(args.out)[0]
    write_jsonl(result.manifest, stem + ".extracted.jsonl")
    write_jsonl((s.model_dump(mode="json") for s in result.skipped), stem + ".skipped.jsonl")
    write_manifest(stem + ".manifest.json", args, args.inputs, [args.out],
                   {"theorems": len(result.theorems), "skipped": len(result.skipped)}, run_seed(args))
    print(f"[INFO] Extracted {len(result.theorems)} theorems ({len(result.skipped)} steps skipped) into {args.out}")
    return EXIT_ITEM_FAILURES if args.strict and result.skipped else EXIT_OK


def cmd_mutate(args) -> int:
    from loaders.LeanFileLoader import LeanFileLoader
    from mutators.CheckerUsageOracle import CheckerUsageOracle
    from mutators.HypothesisMutator import HypothesisMutator
    from mutators.StructuralUsageOracle import StructuralUsageOracle
    from parsers.LeanPrinter import print_problem
    from statements.ExistentialProblem import BodyForm

    verifier = make_verifier(args.backend) if (args.oracle == "checker" or args.recheck) else None
    oracle = CheckerUsageOracle(verifier) if args.oracle == "checker" else StructuralUsageOracle()
    loader = LeanFileLoader(args.inputs)
    seeds = loader.load_all()
    mutator = HypothesisMutator(oracle, BodyForm.parse(args.form), verifier if args.recheck else None,
                                show_progress=not args.no_progress)
    records, stats = mutator.run(seeds)

    write_jsonl((r.to_dict() for r in records), args.out)
    stem = os.path.splitext(args.out)[0]
    lean = "\n\n".join(f"{print_problem(r.mutated)}\n\n{print_problem(r.dropped)}" for r in records)
    atomic_write_text(stem + ".lean", lean + ("\n" if lean else ""))
    write_jsonl((s.to_dict() for s in loader.skipped), stem + ".skipped.jsonl")
    write_manifest(stem + ".manifest.json", args, loader.files, [args.out, stem + ".lean"],
                   {**stats.to_dict(), "skipped_declarations": len(loader.skipped),
                    "duplicate_declarations": loader.duplicates, "errors": mutator.errors}, run_seed(args))
    print(f"[INFO] {stats.seeds} seeds -> {stats.records} problems (ratio {stats.ratio:.2f}) in {args.out}")
    failed = bool(mutator.errors) or stats.invalid > 0
    return EXIT_ITEM_FAILURES if args.strict and failed else EXIT_OK


def cmd_iterate(args) -> int:
    from processors.ExpertIterationProcessor import run_training
    from processors.RunConfig import RunConfig

    config_path = args.config
    if args.toy:
        from workloads.ToyWorkload import build_workload
        holdout = max(1, args.toy // 10)
        workload = build_workload(os.path.join(args.run_dir, "workload"), n_problems=args.toy, seed=run_seed(args),
                                  batch_size=max(1, (args.toy - holdout) // 9), holdout=holdout)
        config_path = config_path or workload.config_path
    if not config_path:
        raise ConfigError("iterate needs --config (or --toy N)")
    overrides = {
        "seed": args.seed, "alpha": args.alpha, "proposer": args.proposer, "prover": args.prover,
        "parallelism": args.parallelism, "timeout_s": args.timeout,
        "temperature": args.temperature, "max_tokens": args.max_tokens,
    }
    if args.mock:
        overrides.update(proposer=f"mock:{args.mock}", prover=f"mock:{args.mock}")
    cfg = RunConfig.from_file(config_path, **overrides)

    verifier = make_verifier(cfg.verifier, cfg.toy_bound)
    proposer, prover = make_generators(cfg.proposer, cfg.prover, cfg.temperature, cfg.max_tokens,
                                       os.path.join(args.run_dir, "transcripts"))
    with verifier:
        manifest = run_training(cfg, proposer, prover, verifier, args.run_dir, show_progress=not args.no_progress)
    errors = sum(len(r["errors"]) for r in manifest["iterations"])
    print(f"[INFO] {len(manifest['iterations'])} iterations done in {args.run_dir} ({errors} per-problem errors)")
    return EXIT_ITEM_FAILURES if args.strict and errors else EXIT_OK


def cmd_evaluate(args) -> int:
    from evaluators.BenchmarkEvaluator import evaluate_benchmark
    from loaders.MutationRecordLoader import MutationRecordLoader
    from verifiers.ProofJob import ProofLimits

    ks = [int(k) for k in args.ks.split(",") if k.strip()]
    records = MutationRecordLoader(args.problems).load_all()
    problems = [r.mutated for r in records][: args.limit] if args.limit else [r.mutated for r in records]
    proposer_ep = f"mock:{args.mock}" if args.mock else args.proposer
    prover_ep = f"mock:{args.mock}" if args.mock else args.prover
    out_dir = os.path.join(args.run_dir, "evaluate")
    proposer, prover = make_generators(proposer_ep, prover_ep, flag(args, "temperature"), flag(args, "max_tokens"),
                                       os.path.join(out_dir, "transcripts"))
    with make_verifier(args.backend) as verifier:
        report = evaluate_benchmark(
            problems, proposer, prover, verifier, ks=ks, n_propose=args.n_propose, n_prove=args.n_prove,
            seed=run_seed(args), parallelism=flag(args, "parallelism"), limits=ProofLimits(timeout_s=flag(args, "timeout")),
            show_progress=not args.no_progress,
        )
    paths = report.write(out_dir)
    write_manifest(os.path.join(out_dir, "manifest.json"), args, [args.problems], list(paths.values()),
                   {s.k: s.model_dump() for s in report.summary}, run_seed(args))
    print(report.to_text())
    failed = any(r.errors for r in report.rows)
    return EXIT_ITEM_FAILURES if args.strict and failed else EXIT_OK


def _setting(text: str):
    label, _, alpha = text.partition(":")
    if not alpha:
        raise ConfigError(f"expected LABEL:ALPHA, got '{text}'")
    try:
        return label, float(alpha)
    except ValueError as e:
        raise ConfigError(f"bad alpha in '{text}'") from e


def cmd_simulate(args) -> int:
    from evaluators.CurveEmitter import emit_curves
    from simulators.RewardDynamicsSimulator import compare_settings, simulate
    from simulators.SimConfig import SimConfig

    overrides = {"seed": args.seed, "iterations": args.iterations, "eta": args.eta, "alpha": args.alpha}
    if args.config:
        base = SimConfig.from_file(args.config, **overrides)
    else:
        base = SimConfig(**{k: v for k, v in overrides.items() if v is not None})
    out_dir = os.path.join(args.run_dir, "simulate")
    if args.compare:
        (label_a, alpha_a), (label_b, alpha_b) = (_setting(s) for s in args.compare)
        report = compare_settings(
            base.model_copy(update={"alpha": alpha_a}), base.model_copy(update={"alpha": alpha_b}),
            runs=args.runs, seed=base.seed, labels=(label_a, label_b), out_dir=out_dir,
            parallelism=flag(args, "parallelism"), show_progress=not args.no_progress,
        )
        print(report.to_text())
        stats = report.to_dict()
    else:
        result = simulate(base)
        emit_curves(result.curve, os.path.join(out_dir, "curve.csv"), os.path.join(out_dir, "curve.png"),
                    label=f"alpha={base.alpha}")
        stats = {"final_pass1": result.final_pass1, "iterations_to_90": result.iterations_to(0.9)}
        print(f"[INFO] final pass@1 {result.final_pass1:.4f}, 90% of it reached at iteration {stats['iterations_to_90']}")
    write_manifest(os.path.join(out_dir, "manifest.json"), args, [args.config] if args.config else [],
                   [out_dir], {"config": base.to_dict(), **stats}, base.seed)
    return EXIT_OK


def cmd_check(args) -> int:
    from verifiers.BatchVerifier import run_batch
    from verifiers.CheckpointStore import CheckpointStore
    from verifiers.ProofJob import ProofJob, ProofLimits

    jobs = []
    for row in read_jsonl(args.jobs):
        limits = ProofLimits(timeout_s=row.get("timeout_s", flag(args, "timeout")))
        jobs.append(ProofJob(id=str(row["id"]), statement=row["statement"], proof=row["proof"], limits=limits))
    checkpoint = CheckpointStore(os.path.splitext(args.out)[0] + ".checkpoint.jsonl")
    with make_verifier(args.backend) as verifier:
        results = run_batch(jobs, verifier, flag(args, "parallelism"), checkpoint, show_progress=not args.no_progress)
    write_jsonl((r.to_dict() for r in results), args.out)
    counts = {}
    for r in results:
        counts[str(r.status)] = counts.get(str(r.status), 0) + 1
    write_manifest(os.path.splitext(args.out)[0] + ".manifest.json", args, [args.jobs], [args.out], counts, run_seed(args))
    print(f"[INFO] Checked {len(results)} jobs: {counts}")
    failed = counts.get("protocol-error", 0) > 0
    return EXIT_ITEM_FAILURES if args.strict and failed else EXIT_OK


COMMANDS = {
    "extract": cmd_extract,
    "mutate": cmd_mutate,
    "iterate": cmd_iterate,
    "evaluate": cmd_evaluate,
    "simulate": cmd_simulate,
    "check": cmd_check,
}


def _report_error(args, exc: BaseException) -> None:
    if getattr(args, "json_errors", False):
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}, ensure_ascii=False), file=sys.stderr)
    else:
        print(f"[ERROR] {exc}", file=sys.stderr)


def main(argv=None) -> int:
    """Main entry point. Returns the process exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=getattr(logging, str(args.log_level).upper(), logging.INFO))

    try:
        return COMMANDS[args.command](args)
    except (ConfigError, ValidationError, FileNotFoundError, EndpointUnavailable) as e:
        _report_error(args, e)
        return EXIT_CONFIG
    except MutagenError as e:
        _report_error(args, e)
        return EXIT_ITEM_FAILURES
    except KeyboardInterrupt:
        logging.warning("Keyboard interrupt received. Partial outputs are kept in %s", args.run_dir)
        return EXIT_ITEM_FAILURES


if __name__ == "__main__":
    sys.exit(main())
