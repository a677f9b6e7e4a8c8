import logging
import re
import time
from typing import Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel
from tqdm import tqdm

from errors import MutagenError, NotDroppable
from mutators.MutationRecord import MutationRecord
from mutators.StructuralUsageOracle import StructuralUsageOracle
from mutators.UsageOracle import UsageOracle
from statements.ExistentialProblem import BodyForm, ExistentialProblem, ProblemKind, ProblemProvenance
from statements.Term import Term, fold_right, free_variables
from statements.TheoremStatement import Binder, BinderMode, TheoremStatement

logger = logging.getLogger(__name__)

EXTRACTED_RE = re.compile(r"^(?P<base>.*?)(?:_g\d+)?_extracted_(?P<k>\d+)$")


def problem_names(seed: str, j: int) -> Tuple[str, str]:
    """Names of the mutated and dropped problems obtained from `seed` by dropping hypothesis `j`."""
    m = EXTRACTED_RE.match(seed)
    if m:
        base, k = m.group("base"), m.group("k")
        return f"{base}_mut_{k}_drop{j}", f"{base}_{k}_drop{j}"
    return f"{seed}_mut_drop{j}", f"{seed}_drop{j}"


def prune_redundant(t: TheoremStatement, usage: UsageOracle) -> TheoremStatement:
    """
    Remove hypotheses the oracle reports unused. Hypotheses that something else names are kept.

    Raises:
        OracleUnavailable: propagated from the oracle.
    """
    unused = usage.unused_hypotheses(t)
    removable = set()
    for h in t.hypotheses:
        if h.name in unused and t.hypothesis_dependents(h.index).is_empty():
            removable.add(h.name)
    if removable:
        logger.debug("Pruning %s from %s", sorted(removable), t.name)
    return t.without_hypotheses(removable)


def _mentions_hypotheses(terms: Sequence[Term], names) -> bool:
    names = set(names)
    return any(free_variables(term) & names for term in terms)


def droppable_hypotheses(t: TheoremStatement) -> List[int]:
    """
    Indices j such that nothing names hypothesis j and, once j is gone, the remaining
    propositions mention no hypothesis by name (otherwise the flattened body is ill-scoped).
    """
    out = []
    names = [h.name for h in t.hypotheses]
    for h in t.hypotheses:
        if not t.hypothesis_dependents(h.index).is_empty():
            continue
        rest = [g.proposition for g in t.hypotheses if g.index != h.index] + [t.conclusion]
        if _mentions_hypotheses(rest, [n for n in names if n != h.name]):
            continue
        out.append(h.index)
    return out


def negate(p: Term) -> Tuple[Term, bool]:
    """
    `¬p`, with `a ≠ b` turned into `a = b` and `a = b` into `a ≠ b`.
    The flag tells whether a double negation was eliminated.
    """
    if p.is_op("≠"):
        return Term.infix("=", *p.children), True
    if p.is_op("="):
        return Term.infix("≠", *p.children), False
    return Term.neg(p), False


def mutate(
    t: TheoremStatement,
    j: int,
    form: BodyForm = BodyForm.CONJUNCTION,
    names: Optional[Tuple[str, str]] = None,
) -> MutationRecord:
    """
    Drop hypothesis `j` of `t`: the mutated problem closes the remaining hypotheses and the
    conclusion under ∃ over every binder; the dropped problem is ∃ binders, ¬(hypothesis j).

    Raises:
        NotDroppable: if `j` is not in `droppable_hypotheses(t)`.
    """
    if j not in droppable_hypotheses(t):
        raise NotDroppable(f"hypothesis {j} of '{t.name}' cannot be dropped")
    mutated_name, dropped_name = names or problem_names(t.name, j)
    binders = tuple(Binder(name=b.name, type=b.type, mode=BinderMode.EXPLICIT) for b in t.binders)
    remaining = [h.proposition for h in t.hypotheses if h.index != j]
    op = "∧" if form == BodyForm.CONJUNCTION else "→"
    body = fold_right(op, remaining + [t.conclusion])
    dropped_body, eliminated = negate(t.hypotheses[j].proposition)

    prov = ProblemProvenance(seed=t.name, drop_index=j, form=form)
    mutated = ExistentialProblem(
        name=mutated_name, binders=binders, body=body, kind=ProblemKind.MUTATED, provenance=prov,
    )
    dropped = ExistentialProblem(
        name=dropped_name,
        binders=binders,
        body=dropped_body,
        kind=ProblemKind.DROPPED,
        provenance=prov.model_copy(update={"double_negation_eliminated": eliminated}),
    )
    return MutationRecord(seed=t.name, drop_index=j, form=form, mutated=mutated, dropped=dropped)


def mutate_all(t: TheoremStatement, form: BodyForm = BodyForm.CONJUNCTION) -> List[MutationRecord]:
    return [mutate(t, j, form) for j in droppable_hypotheses(t)]


class MutationStats(BaseModel):
    seeds: int = 0
    records: int = 0
    invalid: int = 0
    seconds: float = 0.0

    @property
    def ratio(self) -> float:
        return self.records / self.seeds if self.seeds else 0.0

    @property
    def seconds_per_seed(self) -> float:
        return self.seconds / self.seeds if self.seeds else 0.0

    def to_dict(self) -> dict:
        return {
            "seeds": self.seeds,
            "records": self.records,
            "invalid": self.invalid,
            "ratio": round(self.ratio, 4),
            "seconds_per_seed": self.seconds_per_seed,
        }


class HypothesisMutator:
    """
    Corpus runner: prune each seed with a usage oracle, then emit every mutation.

    With a verifier attached, every printed problem is also elaborated by the checker and
    problems it rejects are dropped; otherwise problems are only re-parsed.
    """

    def __init__(
        self,
        oracle: Optional[UsageOracle] = None,
        form: BodyForm = BodyForm.CONJUNCTION,
        verifier=None,
        show_progress: bool = True,
    ):
        self.oracle = oracle or StructuralUsageOracle()
        self.form = form
        self.verifier = verifier
        self.show_progress = show_progress
        self.errors: Dict[str, str] = {}

    def process(self, seed: TheoremStatement) -> Tuple[List[MutationRecord], int]:
        """Valid records for one seed, and how many mutations were attempted."""
        pruned = prune_redundant(seed, self.oracle)
        candidates = mutate_all(pruned, self.form)
        return [r for r in candidates if self.is_valid(r)], len(candidates)

    def is_valid(self, record: MutationRecord) -> bool:
        from parsers.LeanParser import parse_problem
        from parsers.LeanPrinter import print_problem, problem_statement

        for problem in (record.mutated, record.dropped):
            try:
                parse_problem(print_problem(problem), problem.kind, problem.provenance)
            except (MutagenError, ValueError) as e:
                logger.warning("Printed problem %s does not re-parse: %s", problem.name, e)
                return False
            if self.verifier is not None:
                from verifiers.ProofJob import ProofJob
                job = ProofJob(
                    id=f"wf:{problem.name}",
                    statement=f"theorem {problem.name} : {problem_statement(problem)}",
                    proof="by sorry",
                )
                result = self.verifier.elaborate(job)
                if not result.well_formed():
                    logger.warning("Checker rejected %s: %s", problem.name, result.errors())
                    return False
        return True

    def run(self, seeds: Sequence[TheoremStatement]) -> Tuple[List[MutationRecord], MutationStats]:
        stats = MutationStats()
        records: List[MutationRecord] = []
        start = time.perf_counter()
        iterator = tqdm(seeds, desc="Mutating seeds", disable=not self.show_progress)
        for seed in iterator:
            stats.seeds += 1
            try:
                produced, attempted = self.process(seed)
            except MutagenError as e:
                self.errors[seed.name] = str(e)
                tqdm.write(f"[WARNING] Seed {seed.name} skipped: {e}")
                continue
            stats.invalid += attempted - len(produced)
            records.extend(produced)
        stats.records = len(records)
        stats.seconds = time.perf_counter() - start
        logger.info(
            "Mutated %d seeds into %d problems (ratio %.2f, %.4f s/seed)",
            stats.seeds, stats.records, stats.ratio, stats.seconds_per_seed,
        )
        return records, stats
