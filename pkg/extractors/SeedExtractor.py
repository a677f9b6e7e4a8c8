import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel
from tqdm import tqdm

import config
from errors import MutagenError, ScopeError, StatesMissing, UnparseableProof
from extractors.ProofSplitter import split_proof
from extractors.ProofStep import ProofState, ProofStep, StepStyle
from loaders.LeanFileLoader import lean_files, parse_corpus
from parsers.LeanParser import is_hypothesis, parse_term
from parsers.LeanPrinter import print_theorem
from statements.Term import Term
from statements.TheoremStatement import Binder, Hypothesis, Provenance, SourceTag, TheoremStatement

logger = logging.getLogger(__name__)

NO_GOALS = ("", "no goals", "⊢ no goals")


def extracted_name(seed: str, k: int, id: int) -> str:
    return f"{seed}_g{k}_extracted_{id}"


def _from_state(seed: TheoremStatement, state: ProofState):
    binders: List[Binder] = []
    hyps: List[Tuple[str, Term]] = []
    for name, type_text in state.context:
        t = parse_term(type_text)
        if is_hypothesis(name, t):
            hyps.append((name, t))
        else:
            binders.append(Binder(name=name, type=t))
    return binders, hyps


def _fresh(base: str, taken) -> str:
    name, i = base, 0
    while name in taken:
        i += 1
        name = f"{base}{i}"
    return name


def step_to_theorem(seed: TheoremStatement, step: ProofStep, k: int, id: Optional[int] = None) -> TheoremStatement:
    """
    Turn one proof step into a standalone theorem proved by `sorry`.

    Declarative steps keep the seed's binders and named hypotheses plus every fact
    established by an earlier declarative step; the goal becomes the conclusion. A
    procedural step needs its recorded proof states: the theorem asserts the goal before
    the step from the context and the goal left after it.

    Raises:
        StatesMissing: procedural step without recorded states.
        ScopeError: the step's context was altered by an earlier tactic and no states were
            recorded, or an established fact collides with a binder name.
    """
    id = k if id is None else id
    name = extracted_name(seed.name, k, id)
    if step.style == StepStyle.DECLARATIVE and step.states is None:
        if step.context_altered:
            raise ScopeError(f"step {k} of {seed.name} follows a context-altering tactic")
        binder_names = {b.name for b in seed.binders}
        facts: Dict[str, Term] = {h.name: h.proposition for h in seed.hypotheses if not h.anonymous}
        for entry in step.context:
            if entry.name in binder_names:
                raise ScopeError(f"fact '{entry.name}' shadows a binder of {seed.name}")
            facts.pop(entry.name, None)
            facts[entry.name] = entry.type
        binders = list(seed.binders)
        hyps = list(facts.items())
        conclusion = step.goal
        best_effort = False
    else:
        if step.states is None:
            raise StatesMissing(f"procedural step {k} of {seed.name} has no recorded proof states")
        binders, hyps = _from_state(seed, step.states)
        if step.style == StepStyle.DECLARATIVE:
            conclusion = step.goal
        else:
            conclusion = parse_term(step.states.before_goal)
            if step.states.after_goal.strip() not in NO_GOALS:
                taken = {b.name for b in binders} | {n for n, _ in hyps}
                hyps.append((_fresh("h_after", taken), parse_term(step.states.after_goal)))
        best_effort = step.style == StepStyle.PROCEDURAL
    return TheoremStatement(
        name=name,
        binders=tuple(binders),
        hypotheses=tuple(Hypothesis(name=n, proposition=p, index=i) for i, (n, p) in enumerate(hyps)),
        conclusion=conclusion,
        proof="by\n  sorry",
        provenance=Provenance(
            source=SourceTag.EXTRACTED,
            seed=seed.name,
            step_id=f"{seed.name}#{step.index}",
            best_effort=best_effort,
        ),
    )


class ExtractionSkip(BaseModel):
    seed: str
    step_index: Optional[int] = None
    reason: str


class ExtractionResult(BaseModel):
    theorems: List[TheoremStatement] = []
    manifest: List[dict] = []
    skipped: List[ExtractionSkip] = []

    def to_lean(self) -> str:
        return "\n\n".join(print_theorem(t) for t in self.theorems) + ("\n" if self.theorems else "")


class SeedExtractor:
    """
    Harvests step theorems from every proof of a corpus.

    Files are split in parallel; ids and deduplication are assigned afterwards in a single
    sequential pass so the output order does not depend on scheduling.
    """

    def __init__(self, states: Optional[Dict[Tuple[str, int], ProofState]] = None,
                 parallelism: int = config.PARALLELISM, show_progress: bool = True):
        self.states = states or {}
        self.parallelism = max(1, parallelism)
        self.show_progress = show_progress

    def steps_of(self, seed: TheoremStatement) -> List[ProofStep]:
        steps = split_proof(seed.proof)
        return [
            s.model_copy(update={"states": self.states.get((seed.name, s.index))}) for s in steps
        ]

    def _candidates(self, path: str):
        candidates, skipped = [], []
        try:
            unit = parse_corpus(path)
        except (OSError, MutagenError) as e:
            logger.error("Cannot read %s: %s", path, e)
            return candidates, [ExtractionSkip(seed=os.path.basename(path), reason=str(e))]
        for seed in unit.theorems:
            if seed.proof is None:
                continue
            try:
                steps = self.steps_of(seed)
            except UnparseableProof as e:
                skipped.append(ExtractionSkip(seed=seed.name, reason=str(e)))
                continue
            candidates += [(seed, step) for step in steps]
        return candidates, skipped

    def extract(self, paths: List[str]) -> ExtractionResult:
        files = lean_files(paths)
        with ThreadPoolExecutor(max_workers=self.parallelism) as pool:
            per_file = list(pool.map(self._candidates, files))

        result = ExtractionResult()
        seen = set()
        counter = 0
        pending = [c for cands, _ in per_file for c in cands]
        for _, skips in per_file:
            result.skipped += skips
        for seed, step in tqdm(pending, desc="Extracting", unit="step", disable=not self.show_progress):
            try:
                stmt = step_to_theorem(seed, step, step.index, counter)
            except (StatesMissing, ScopeError) as e:
                result.skipped.append(ExtractionSkip(seed=seed.name, step_index=step.index, reason=str(e)))
                continue
            except MutagenError as e:
                logger.debug("Step %d of %s: %s", step.index, seed.name, e)
                result.skipped.append(ExtractionSkip(seed=seed.name, step_index=step.index, reason=str(e)))
                continue
            key = stmt.shape_key()
            if key in seen:
                continue
            seen.add(key)
            counter += 1
            result.theorems.append(stmt)
            result.manifest.append({
                "name": stmt.name,
                "seed": seed.name,
                "step_index": step.index,
                "style": str(step.style),
                "tactic": step.tactic,
                "provenance": stmt.provenance.model_dump(mode="json"),
            })
        logger.info("Extracted %d theorems from %d files (%d steps skipped)",
                    len(result.theorems), len(files), len(result.skipped))
        return result


def extract_corpus(paths: List[str], states_file: Optional[str] = None) -> List[TheoremStatement]:
    from loaders.ProofStateLoader import ProofStateLoader
    states = ProofStateLoader(states_file).index() if states_file else {}
    return SeedExtractor(states, show_progress=False).extract(paths).theorems
