import json
import logging
import os
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
from pydantic import BaseModel

import config
from evaluators.PassAtK import AttemptRow, pass_at_k_usable
from generators.CounterexampleProposer import CounterexampleProposer
from generators.ProofWriter import ProofWriter
from generators.ProofScript import ProofTarget
from statements.ExistentialProblem import ExistentialProblem
from utils import atomic_write_json, atomic_write_text, derive_seed, map_bounded
from verifiers.AbstractVerifier import AbstractVerifier
from verifiers.BatchVerifier import run_batch
from verifiers.CheckpointStore import CheckpointStore
from verifiers.ProofJob import ProofLimits, VerificationStatus

logger = logging.getLogger(__name__)

DEFAULT_KS = (1, 4, 9)


class KSummary(BaseModel):
    k: int
    solved: int
    mean_pass: float
    problems: int


class BenchmarkReport(BaseModel):
    """Per-problem attempt counts plus, for every k, the solved count and the mean pass@k."""

    seed: int = 0
    rows: List[AttemptRow]
    summary: List[KSummary]

    def mean(self, k: int) -> float:
        return next(s.mean_pass for s in self.summary if s.k == k)

    def solved(self, k: int) -> int:
        return next(s.solved for s in self.summary if s.k == k)

    @property
    def solved_any(self) -> int:
        """Problems with at least one successful attempt out of all of them."""
        return sum(1 for r in self.rows if r.c > 0)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([s.model_dump() for s in self.summary], columns=["k", "solved", "mean_pass", "problems"])

    def to_text(self) -> str:
        table = self.to_frame().to_string(index=False, float_format=lambda v: f"{v:.4f}")
        return f"{table}\nsolved by any attempt: {self.solved_any}/{len(self.rows)}"

    def to_dict(self) -> dict:
        return {**self.model_dump(mode="json"), "solved_any": self.solved_any}

    def write(self, directory: str, stem: str = "benchmark") -> Dict[str, str]:
        os.makedirs(directory, exist_ok=True)
        paths = {
            "json": os.path.join(directory, f"{stem}.json"),
            "csv": os.path.join(directory, f"{stem}.csv"),
            "text": os.path.join(directory, f"{stem}.txt"),
        }
        atomic_write_json(paths["json"], self.to_dict())
        self.to_frame().to_csv(paths["csv"], index=False)
        atomic_write_text(paths["text"], self.to_text() + "\n")
        return paths


def solved_at(row: AttemptRow, k: int, seed: int) -> bool:
    """Whether a seeded random subset of k usable attempts holds a success (all of them when fewer)."""
    usable = [o for o in row.outcomes if o is not None] if row.outcomes else [True] * row.c + [False] * (row.n - row.c)
    if not usable:
        return False
    rng = np.random.default_rng(derive_seed(seed, "subset", row.problem_id, k))
    picked = rng.choice(len(usable), size=min(k, len(usable)), replace=False)
    return any(usable[i] for i in picked)


def summarize_attempts(rows: Sequence[AttemptRow], ks: Sequence[int] = DEFAULT_KS, seed: int = 0) -> BenchmarkReport:
    summary = []
    for k in ks:
        total = sum((pass_at_k_usable(r.n, r.c, k) if r.n else Fraction(0) for r in rows), Fraction(0))
        summary.append(
            KSummary(
                k=k,
                solved=sum(1 for r in rows if r.c and solved_at(r, k, seed)),
                mean_pass=float(total / len(rows)) if rows else 0.0,
                problems=len(rows),
            )
        )
    return BenchmarkReport(seed=seed, rows=list(rows), summary=summary)


class BenchmarkEvaluator:
    """
    Runs `n_propose` witnesses × `n_prove` proofs per problem and scores pass@k.

    An attempt fails when the model fails (no boxed answer, no proof, proof rejected or timed
    out). Attempts lost to the infrastructure (unreachable endpoint, protocol error) are
    dropped from n and listed in the row's errors.
    """

    def __init__(
        self,
        proposer: CounterexampleProposer,
        prover: ProofWriter,
        verifier: AbstractVerifier,
        n_propose: int = 3,
        n_prove: int = 3,
        ks: Sequence[int] = DEFAULT_KS,
        seed: int = 0,
        parallelism: int = config.PARALLELISM,
        limits: Optional[ProofLimits] = None,
        checkpoint: Optional[CheckpointStore] = None,
        show_progress: bool = True,
    ):
        self.proposer = proposer
        self.prover = prover
        self.verifier = verifier
        self.n_propose = n_propose
        self.n_prove = n_prove
        self.ks = tuple(ks)
        self.seed = seed
        self.parallelism = parallelism
        self.limits = limits or ProofLimits()
        self.checkpoint = checkpoint
        self.show_progress = show_progress

    def _propose(self, problem: ExistentialProblem):
        return self.proposer.propose(problem, n=self.n_propose, seed=derive_seed(self.seed, "eval-propose", problem.name))

    def _prove(self, item):
        problem, cand = item
        return self.prover.prove(
            problem, cand.witness, ProofTarget.MUTATED, n=self.n_prove,
            seed=derive_seed(self.seed, "eval-prove", problem.name, cand.sample_index),
        )

    def evaluate(self, problems: Sequence[ExistentialProblem]) -> BenchmarkReport:
        problems = list(problems)
        proposals = map_bounded(self._propose, problems, self.parallelism, "Proposing", self.show_progress)

        # Keyed by position: two problems may share a name.
        grid = [[[False] * self.n_prove for _ in range(self.n_propose)] for _ in problems]
        errors = [[] for _ in problems]
        to_prove, owner = [], []
        for pos, (problem, cands) in enumerate(zip(problems, proposals)):
            if isinstance(cands, Exception):
                grid[pos] = [[None] * self.n_prove for _ in range(self.n_propose)]
                errors[pos].append(f"propose: {cands}")
                continue
            for c in cands:
                if c.ok:
                    to_prove.append((problem, c))
                    owner.append(pos)

        proofs = map_bounded(self._prove, to_prove, self.parallelism, "Proving", self.show_progress)
        jobs, where = [], {}
        for pos, (problem, cand), scripts in zip(owner, to_prove, proofs):
            if isinstance(scripts, Exception):
                grid[pos][cand.sample_index] = [None] * self.n_prove
                errors[pos].append(f"prove #{cand.sample_index}: {scripts}")
                continue
            for script in scripts:
                if not script.ok:
                    continue
                job_id = f"{pos}:{problem.name}#{cand.sample_index}.{script.sample_index}"
                jobs.append(script.to_job(job_id, self.limits))
                where[job_id] = (pos, cand.sample_index, script.sample_index)

        results = run_batch(jobs, self.verifier, self.parallelism, self.checkpoint, self.show_progress)
        for res in results:
            pos, i, j = where[res.id]
            if res.status == VerificationStatus.PROTOCOL_ERROR:
                grid[pos][i][j] = None
                errors[pos].append(f"verify {res.id}: {'; '.join(res.errors())}")
            else:
                grid[pos][i][j] = res.verified

        rows = []
        for pos, p in enumerate(problems):
            outcomes = tuple(o for line in grid[pos] for o in line)
            usable = [o for o in outcomes if o is not None]
            rows.append(
                AttemptRow(problem_id=p.name, n=len(usable), c=sum(usable), outcomes=outcomes, errors=tuple(errors[pos]))
            )
        report = summarize_attempts(rows, self.ks, self.seed)
        logger.info("Benchmark over %d problems: %s", len(rows),
                    ", ".join(f"pass@{s.k}={s.mean_pass:.3f} solved={s.solved}" for s in report.summary))
        return report


def evaluate_benchmark(problems, proposer, prover, verifier, ks: Sequence[int] = DEFAULT_KS, **kwargs) -> BenchmarkReport:
    return BenchmarkEvaluator(proposer, prover, verifier, ks=ks, **kwargs).evaluate(problems)
