import json
import logging
import os
import platform
import shlex
import subprocess
import time
from importlib import metadata
from typing import Dict, List, Optional, Sequence, Tuple, TypeVar

from sklearn.model_selection import train_test_split
from tqdm import tqdm

from errors import ConfigError, HoldoutTooLarge, HookFailed
from evaluators.BenchmarkEvaluator import BenchmarkEvaluator
from evaluators.CurveEmitter import CurvePoint, emit_curves
from generators.CounterexampleCandidate import CounterexampleCandidate
from generators.CounterexampleProposer import CounterexampleProposer
from generators.ProofScript import ProofScript, ProofTarget
from generators.ProofWriter import ProofWriter
from loaders.MutationRecordLoader import MutationRecordLoader
from mutators.MutationRecord import MutationRecord
from processors.IterationReport import ErrorRecord, IterationCounts, IterationReport
from processors.RunConfig import RunConfig
from rewards.DatasetBuilder import (
    build_counterexample_sft, build_proof_sft, build_retrain_set, load_examples, write_examples,
)
from rewards.ProblemOutcome import ProblemOutcome
from rewards.RewardCalculator import compute_reward, nonzero_count, reward_mass
from rewards.RewardConfig import RewardConfig
from utils import atomic_write_json, derive_seed, dump_json_line, map_bounded, sha256_file
from verifiers.AbstractVerifier import AbstractVerifier
from verifiers.BatchVerifier import run_batch
from verifiers.CheckpointStore import CheckpointStore
from verifiers.ProofJob import ProofLimits, VerificationStatus

logger = logging.getLogger(__name__)

T = TypeVar("T")

PACKAGES = ("pydantic", "numpy", "pandas", "scikit-learn", "tqdm", "requests")


def split_dataset(items: Sequence[T], holdout: int, seed: int) -> Tuple[List[T], List[T]]:
    """
    Seeded, disjoint (train, validation) split with `holdout` validation items.

    Raises:
        HoldoutTooLarge: if `holdout` is not smaller than the number of items.
    """
    items = list(items)
    if holdout >= len(items) and holdout > 0:
        raise HoldoutTooLarge(f"holdout {holdout} needs more than {len(items)} problems")
    if holdout == 0:
        return items, []
    train, validation = train_test_split(items, test_size=holdout, random_state=seed % (2 ** 32), shuffle=True)
    return list(train), list(validation)


def versions() -> Dict[str, str]:
    out = {"python": platform.python_version()}
    for pkg in PACKAGES:
        try:
            out[pkg] = metadata.version(pkg)
        except metadata.PackageNotFoundError:
            out[pkg] = "missing"
    return out


class ExpertIterationProcessor:
    """
    Runs expert iteration over mutation records.

    Each iteration takes a fresh batch of training problems through three bounded-parallel
    phases (propose a witness, prove the mutated and the dropped-hypothesis problems with it,
    verify every proof), then rewards each problem and writes the two weighted datasets.
    Everything lands in the run directory:

        run.json                 config and seed
        manifest.json            split, iteration reports, hook outcomes, validation points
        timings.jsonl            wall times
        transcripts/<role>.jsonl raw generator responses (also a cache)
        iter_<k>/report.json, ce_sft.jsonl, proof_sft.jsonl, verify.jsonl
        retrain_sft.jsonl        verified mutated-problem proofs of the whole run
    """

    def __init__(
        self,
        cfg: RunConfig,
        proposer: CounterexampleProposer,
        prover: ProofWriter,
        verifier: AbstractVerifier,
        run_dir: str,
        show_progress: bool = True,
    ):
        self.cfg = cfg
        self.proposer = proposer
        self.prover = prover
        self.verifier = verifier
        self.run_dir = run_dir
        self.show_progress = show_progress
        self.rewards = RewardConfig(alpha=cfg.alpha)
        self.limits = ProofLimits(timeout_s=cfg.timeout_s)

    # ---------- paths ----------

    def _path(self, *parts) -> str:
        return os.path.join(self.run_dir, *parts)

    def _rel(self, path: str) -> str:
        return os.path.relpath(path, self.run_dir)

    # ---------- one iteration ----------

    def _propose(self, record: MutationRecord) -> List[CounterexampleCandidate]:
        return self.proposer.propose(
            record.mutated, n=self.cfg.n_propose, seed=derive_seed(self.cfg.seed, "propose", record.id)
        )

    def _prove(self, item) -> Tuple[List[ProofScript], List[ProofScript]]:
        record, cand = item
        scripts = []
        for target, problem in ((ProofTarget.MUTATED, record.mutated), (ProofTarget.DROPPED, record.dropped)):
            seed = derive_seed(self.cfg.seed, "prove", str(target), record.id, cand.sample_index)
            scripts.append(self.prover.prove(problem, cand.witness, target, n=self.cfg.n_prove, seed=seed))
        return scripts[0], scripts[1]

    def run_iteration(self, k: int, batch: Sequence[MutationRecord]) -> IterationReport:
        """
        Run one iteration over `batch`. A failing problem is recorded in the report's errors and
        the iteration goes on.
        """
        if not batch:
            raise ValueError("an iteration needs at least one problem")
        started = time.monotonic()
        iter_dir = self._path(f"iter_{k}")
        os.makedirs(iter_dir, exist_ok=True)
        errors: List[ErrorRecord] = []

        proposals = map_bounded(self._propose, batch, self.cfg.parallelism, f"Proposing [{k}]", self.show_progress)
        candidates: List[Tuple[MutationRecord, CounterexampleCandidate]] = []
        for record, result in zip(batch, proposals):
            if isinstance(result, Exception):
                errors.append(ErrorRecord(problem_id=record.id, stage="propose", message=str(result)))
                continue
            for cand in result:
                candidates.append((record, cand))
                if not cand.ok:
                    errors.append(ErrorRecord(problem_id=record.id, stage="extract", message=cand.error or ""))

        provable = [(r, c) for r, c in candidates if c.ok]
        proofs = map_bounded(self._prove, provable, self.cfg.parallelism, f"Proving [{k}]", self.show_progress)
        scripts: Dict[Tuple[str, int], Tuple[List[ProofScript], List[ProofScript]]] = {}
        jobs = []
        for (record, cand), result in zip(provable, proofs):
            if isinstance(result, Exception):
                errors.append(ErrorRecord(problem_id=record.id, stage="prove", message=str(result)))
                continue
            scripts[(record.id, cand.sample_index)] = result
            for script in result[0] + result[1]:
                if script.ok:
                    jobs.append(script.to_job(self._job_id(record, cand, script), self.limits))
                else:
                    errors.append(ErrorRecord(problem_id=script.problem_id, stage="proof-extract", message=script.error or ""))

        checkpoint = CheckpointStore(os.path.join(iter_dir, "verify.jsonl"))
        results = {r.id: r for r in run_batch(jobs, self.verifier, self.cfg.parallelism, checkpoint, self.show_progress)}
        for r in results.values():
            if r.status == VerificationStatus.PROTOCOL_ERROR:
                errors.append(ErrorRecord(problem_id=r.id, stage="verify", message="; ".join(r.errors())))

        outcomes = []
        for record, cand in candidates:
            proof_M, v_M = self._first_verified(record, cand, scripts, 0, results)
            proof_H, v_H = self._first_verified(record, cand, scripts, 1, results)
            outcomes.append(
                ProblemOutcome(
                    record=record, candidate=cand, proof_M=proof_M, proof_H=proof_H,
                    reward=compute_reward(v_M, v_H, self.rewards, problem_id=record.id),
                )
            )

        ce_path = os.path.join(iter_dir, "ce_sft.jsonl")
        proof_path = os.path.join(iter_dir, "proof_sft.jsonl")
        write_examples(build_counterexample_sft(outcomes), ce_path)
        write_examples(build_proof_sft(outcomes), proof_path)

        report = IterationReport(
            iteration=k,
            counts=self._count(batch, outcomes),
            reward_mass=reward_mass([o.reward for o in outcomes]),
            nonzero_rewards=nonzero_count([o.reward for o in outcomes]),
            alpha=self.cfg.alpha,
            datasets={"ce": self._rel(ce_path), "proof": self._rel(proof_path)},
            errors=errors,
            wall_time=time.monotonic() - started,
        )
        atomic_write_json(os.path.join(iter_dir, "report.json"), report.to_dict())
        tqdm.write(
            f"[INFO] Iteration {k}: {report.counts.problems} problems, v_M={report.counts.v_M} "
            f"v_H={report.counts.v_H} both={report.counts.both} mass={report.reward_mass:.2f}"
        )
        return report

    @staticmethod
    def _job_id(record: MutationRecord, cand: CounterexampleCandidate, script: ProofScript) -> str:
        return f"{record.id}#{cand.sample_index}.{script.target}.{script.sample_index}"

    def _first_verified(self, record, cand, scripts, side: int, results) -> Tuple[Optional[ProofScript], bool]:
        pair = scripts.get((record.id, cand.sample_index))
        if pair is None:
            return None, False
        for script in pair[side]:
            res = results.get(self._job_id(record, cand, script)) if script.ok else None
            if res is not None and res.verified:
                return script, True
        return (pair[side][0] if pair[side] else None), False

    @staticmethod
    def _count(batch, outcomes: List[ProblemOutcome]) -> IterationCounts:
        per_problem = {}
        for o in outcomes:
            v_M, v_H = per_problem.get(o.problem_id, (False, False))
            per_problem[o.problem_id] = (v_M or o.v_M, v_H or o.v_H)
        flags = [per_problem.get(r.id, (False, False)) for r in batch]
        return IterationCounts(
            problems=len(batch),
            proposed=sum(1 for o in outcomes if o.candidate.ok),
            v_M=sum(1 for m, _ in flags if m),
            v_H=sum(1 for _, h in flags if h),
            both=sum(1 for m, h in flags if m and h),
            neither=sum(1 for m, h in flags if not m and not h),
        )

    # ---------- the whole run ----------

    def load_problems(self) -> List[MutationRecord]:
        records, seen = [], set()
        for path in self.cfg.problems:
            if not os.path.exists(path):
                raise ConfigError(f"problem file not found: {path}")
            for record in MutationRecordLoader(path).iter_items():
                if record.id in seen:
                    logger.warning("Duplicate problem %s ignored", record.id)
                    continue
                seen.add(record.id)
                records.append(record)
        return records

    def batches(self, train: Sequence[MutationRecord]) -> List[List[MutationRecord]]:
        size, total = self.cfg.batch_size, self.cfg.iterations * self.cfg.batch_size
        if self.cfg.single_pass:
            if total > len(train):
                raise ConfigError(
                    f"{self.cfg.iterations} iterations x batch {size} need {total} training problems, have {len(train)}"
                )
            return [list(train[k * size:(k + 1) * size]) for k in range(self.cfg.iterations)]
        if not train:
            raise ConfigError("no training problems")
        return [[train[(k * size + i) % len(train)] for i in range(size)] for k in range(self.cfg.iterations)]

    def _start(self) -> dict:
        run_json = self._path("run.json")
        current = {"config": self.cfg.to_dict(), "seed": self.cfg.seed}
        if os.path.exists(run_json):
            with open(run_json, "r", encoding="utf-8") as f:
                previous = json.load(f)
            if previous != current:
                raise ConfigError(f"{self.run_dir} holds a run with a different config")
        else:
            atomic_write_json(run_json, current)
        manifest_path = self._path("manifest.json")
        if os.path.exists(manifest_path):
            with open(manifest_path, "r", encoding="utf-8") as f:
                return json.load(f)
        return {}

    def _hook(self, k: int, report: IterationReport) -> dict:
        if not self.cfg.hook:
            return {"iteration": k, "status": "skipped", "note": "datasets emitted, no hook"}
        cmd = shlex.split(self.cfg.hook) + [
            "--ce", self._path(report.datasets["ce"]),
            "--proof", self._path(report.datasets["proof"]),
            "--iter", str(k),
        ]
        try:
            proc = subprocess.run(cmd, capture_output=True, text=True)
            code = proc.returncode
        except OSError as e:
            code, proc = -1, None
            logger.error("Hook could not start: %s", e)
        if code != 0:
            logger.error("Hook failed at iteration %d with exit code %d", k, code)
            if proc is not None and proc.stderr:
                logger.error("%s", proc.stderr.strip()[-2000:])
            if self.cfg.hook_fail_fast:
                raise HookFailed(f"hook exited with {code} at iteration {k}")
            return {"iteration": k, "status": "failed", "returncode": code}
        return {"iteration": k, "status": "ok", "returncode": 0}

    def _validate(self, k: int, validation: Sequence[MutationRecord]) -> CurvePoint:
        problems = [r.mutated for r in validation]
        if self.cfg.eval_limit:
            problems = problems[: self.cfg.eval_limit]
        evaluator = BenchmarkEvaluator(
            self.proposer, self.prover, self.verifier, n_propose=3, n_prove=3,
            seed=derive_seed(self.cfg.seed, "validation", k), parallelism=self.cfg.parallelism,
            limits=self.limits, show_progress=self.show_progress,
            checkpoint=CheckpointStore(self._path(f"iter_{k}", "eval_verify.jsonl")),
        )
        report = evaluator.evaluate(problems)
        report.write(self._path(f"iter_{k}"), stem="eval")
        return CurvePoint.from_report(k, report)

    def _write_manifest(self, manifest: dict):
        atomic_write_json(self._path("manifest.json"), manifest)

    def run(self) -> dict:
        """
        Run (or resume) every iteration and return the final manifest.

        Iterations already listed in `manifest.json` are not run again.
        """
        os.makedirs(self.run_dir, exist_ok=True)
        manifest = self._start()
        records = self.load_problems()
        train, validation = split_dataset(records, self.cfg.holdout, self.cfg.seed)
        batches = self.batches(train)

        done = {r["iteration"]: r for r in manifest.get("iterations", [])}
        if done:
            logger.info("Resuming %s: iterations %s already done", self.run_dir, sorted(done))
        logger.info("%s reward, alpha=%s", "Single" if self.rewards.single_reward else "Multi", self.cfg.alpha)
        manifest = {
            "config": self.cfg.to_dict(),
            "seed": self.cfg.seed,
            "versions": versions(),
            "inputs": {p: sha256_file(p) for p in self.cfg.problems},
            "split": {"train": [r.id for r in train], "validation": [r.id for r in validation]},
            "iterations": [done[k] for k in sorted(done)],
            "hooks": manifest.get("hooks", []),
            "validation": manifest.get("validation", []),
            "complete": False,
        }
        self._write_manifest(manifest)

        for k, batch in enumerate(batches):
            if k in done:
                continue
            report = self.run_iteration(k, batch)
            with open(self._path("timings.jsonl"), "a", encoding="utf-8") as f:
                f.write(dump_json_line({"iteration": k, "wall_time": round(report.wall_time, 3)}) + "\n")
            manifest["iterations"].append(report.to_dict())
            manifest["hooks"].append(self._hook(k, report))
            if self.cfg.eval_every and (k + 1) % self.cfg.eval_every == 0 and validation:
                manifest["validation"].append(self._validate(k, validation).model_dump())
            self._write_manifest(manifest)

        if manifest["validation"]:
            emit_curves(
                [CurvePoint(**p) for p in manifest["validation"]],
                self._path("curves.csv"), self._path("curves.png"),
            )
        retrain = []
        for report in manifest["iterations"]:
            retrain += build_retrain_set(load_examples(self._path(report["datasets"]["proof"])))
        write_examples(retrain, self._path("retrain_sft.jsonl"))
        manifest["retrain"] = "retrain_sft.jsonl"
        manifest["complete"] = True
        self._write_manifest(manifest)
        logger.info("Run finished: %d iterations in %s", len(manifest["iterations"]), self.run_dir)
        return manifest


def run_training(cfg: RunConfig, proposer, prover, verifier, run_dir: str, show_progress: bool = True) -> dict:
    return ExpertIterationProcessor(cfg, proposer, prover, verifier, run_dir, show_progress).run()
