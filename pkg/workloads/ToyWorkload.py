import logging
import os
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel

from errors import MutagenError
from mutators.HypothesisMutator import HypothesisMutator
from mutators.MutationRecord import MutationRecord
from parsers.LeanParser import parse_source
from parsers.LeanPrinter import problem_header
from processors.RunConfig import RunConfig
from statements.ExistentialProblem import ExistentialProblem
from utils import atomic_write_json, atomic_write_text, write_jsonl
from verifiers.ToyVerifier import toy_check

logger = logging.getLogger(__name__)

SEARCH_LIMIT = 200


def toy_seed(i: int, rng: np.random.Generator) -> str:
    """A true ℕ theorem whose hypotheses can each be dropped."""
    if i % 2 == 0:
        a = int(rng.integers(0, 20))
        b = a + int(rng.integers(0, 30))
        e = int(rng.integers(0, b + 10))
        c = int(rng.integers(1, 10))
        return (
            f"theorem toy_{i} (n : ℕ) (h₀ : n ≥ {a}) (h₁ : n ≤ {b}) (h₂ : n ≠ {e}) :\n"
            f"    n + {c} ≠ {e} + {c} := by\n  omega\n"
        )
    m = int(rng.integers(2, 9))
    r = int(rng.integers(0, m))
    b = int(rng.integers(m + 1, 60))
    t = next(x for x in range(b) if x % m != r)
    return (
        f"theorem toy_{i} (x : ℕ) (h₀ : x % {m} = {r}) (h₁ : x < {b}) :\n"
        f"    x ≠ {t} := by\n  omega\n"
    )


def solutions(problem: ExistentialProblem, limit: int = SEARCH_LIMIT) -> List[int]:
    """Single-binder witnesses in [0, limit) that the toy checker accepts."""
    if len(problem.binders) != 1:
        return []
    name = problem.binders[0].name
    found = []
    for w in range(limit):
        try:
            if toy_check(problem, {name: w}).verified:
                found.append(w)
        except MutagenError:
            return []
    return found


class ToyWorkload(BaseModel):
    directory: str
    seeds_path: str
    problems_path: str
    script_path: str
    config_path: str
    records: int


def _proposer_response(record: MutationRecord, rng: np.random.Generator) -> str:
    good = solutions(record.mutated)
    easy = [w for w in solutions(record.dropped) if w not in good]
    roll = rng.random()
    if roll < 0.45 and good:
        w = good[int(rng.integers(len(good)))]
    elif roll < 0.8 and easy:
        w = easy[int(rng.integers(len(easy)))]
    elif roll < 0.9:
        w = int(rng.integers(0, 60))
    else:
        return "I could not settle on a concrete value for this one."
    var = record.mutated.binders[0].name
    return f"Checking the constraints one by one, {var} = {w} satisfies all of them.\nThe answer is \\boxed{{{w}}}."


def _prover_response(problem: ExistentialProblem, rng: np.random.Generator) -> str:
    if rng.random() < 0.1:
        return f"```lean4\n{problem_header(problem)}\n  sorry\n```"
    return f"```lean4\n{problem_header(problem)}\n  use {{witness}}\n  norm_num\n```"


def build_workload(directory: str, n_problems: int = 100, seed: int = 0, iterations: int = 9,
                   batch_size: int = 10, holdout: int = 10, eval_every: int = 3) -> ToyWorkload:
    """
    Write an offline workload: toy seed theorems, their mutation records (`n_problems` of them),
    a mock script covering both generator roles, and a run config wired to the mocks and the
    toy checker.
    """
    rng = np.random.default_rng(seed)
    os.makedirs(directory, exist_ok=True)

    records: List[MutationRecord] = []
    texts = []
    i = 0
    while len(records) < n_problems:
        text = toy_seed(i, rng)
        texts.append(text)
        unit = parse_source(text, file=f"toy_{i}")
        produced, _ = HypothesisMutator(show_progress=False).run(unit.theorems)
        records += produced
        i += 1
    records = records[:n_problems]

    script: List[Dict] = []
    for record in records:
        script.append({"problem_id": record.mutated.name, "role": "proposer",
                       "response": _proposer_response(record, rng)})
        for problem in (record.mutated, record.dropped):
            script.append({"problem_id": problem.name, "role": "prover",
                           "response": _prover_response(problem, rng)})

    seeds_path = os.path.join(directory, "seeds.lean")
    problems_path = os.path.join(directory, "problems.jsonl")
    script_path = os.path.join(directory, "script.jsonl")
    config_path = os.path.join(directory, "run.json")
    atomic_write_text(seeds_path, "\n".join(texts))
    write_jsonl((r.to_dict() for r in records), problems_path)
    write_jsonl(script, script_path)
    cfg = RunConfig(
        problems=[problems_path],
        holdout=holdout,
        iterations=iterations,
        batch_size=batch_size,
        seed=seed,
        eval_every=eval_every,
        proposer=f"mock:{script_path}",
        prover=f"mock:{script_path}",
        verifier="toy",
        parallelism=4,
    )
    atomic_write_json(config_path, cfg.to_dict())
    logger.info("Toy workload with %d problems written to %s", len(records), directory)
    return ToyWorkload(directory=directory, seeds_path=seeds_path, problems_path=problems_path,
                       script_path=script_path, config_path=config_path, records=len(records))
