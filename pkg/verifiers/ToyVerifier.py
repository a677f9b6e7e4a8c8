import logging
import time
from typing import Dict, List, Optional

import config
from errors import MutagenError, OutsideFragment
from parsers.LeanLexer import match_brackets, strip_comments, tokenize
from parsers.LeanParser import TermParser, parse_problem
from statements.ExistentialProblem import ExistentialProblem
from verifiers.AbstractVerifier import AbstractVerifier
from verifiers.ProofJob import Diagnostic, ProofJob, Severity, VerificationResult, VerificationStatus
from verifiers.ToyEvaluator import NAT, ToyEvaluator, domain_of, ground_value

logger = logging.getLogger(__name__)


def _split_top_level(text: str) -> List[str]:
    """Comma-separated items of `text`, ignoring commas nested in brackets."""
    tokens = tokenize(text, strip=False)
    pairs = match_brackets(tokens)
    items, start, i = [], 0, 0
    while i < len(tokens) - 1:
        if i in pairs:
            i = pairs[i] + 1
            continue
        if tokens[i].is_sym(","):
            items.append(text[start:tokens[i].start])
            start = tokens[i].end
        i += 1
    items.append(text[start:])
    return [s.strip() for s in items if s.strip()]


def _anonymous_constructor(text: str) -> Optional[str]:
    """Contents of the first top-level `⟨…⟩` in `text`."""
    open_at = text.find("⟨")
    if open_at < 0:
        return None
    depth = 0
    for i in range(open_at, len(text)):
        if text[i] == "⟨":
            depth += 1
        elif text[i] == "⟩":
            depth -= 1
            if depth == 0:
                return text[open_at + 1:i]
    return None


def witness_texts(proof: str) -> List[str]:
    """
    The witness terms a proof commits to: `use a, b`, `exists a`, or the leading
    components of `exact ⟨a, b, …⟩` / `refine ⟨a, …⟩` / a term-mode `⟨a, …⟩`.
    """
    clean = strip_comments(proof)
    for line in clean.split("\n"):
        stripped = line.strip()
        if stripped.startswith("by "):
            stripped = stripped[3:].strip()
        for keyword in ("use", "exists"):
            if stripped.startswith(keyword + " "):
                return _split_top_level(stripped[len(keyword) + 1:])
        if stripped.startswith(("exact", "refine", "⟨")):
            inner = _anonymous_constructor(stripped)
            if inner is not None:
                return _split_top_level(inner)
    return []


def parse_witness(problem: ExistentialProblem, proof: str) -> Dict[str, int]:
    texts = witness_texts(proof)
    if len(texts) < len(problem.binders):
        raise OutsideFragment(f"proof names {len(texts)} witnesses for {len(problem.binders)} binders")
    witness = {}
    for binder, text in zip(problem.binders, texts):
        tokens = tokenize(text, strip=False)
        term = TermParser(text, tokens, match_brackets(tokens)).parse_slice(0, len(tokens) - 1)
        witness[binder.name] = ground_value(term)
    return witness


def toy_check(problem: ExistentialProblem, witness: Dict[str, int], bound: int = config.TOY_BOUND,
              job_id: Optional[str] = None) -> VerificationResult:
    """
    Decide `problem` at the given witness.

    Raises:
        OutsideFragment: binder types other than ℕ/ℤ, missing witness values, or a body
            outside ground integer arithmetic.
    """
    start = time.perf_counter()
    env = {}
    for b in problem.binders:
        dom = domain_of(b.type)
        if b.name not in witness:
            raise OutsideFragment(f"no witness for '{b.name}'")
        value = int(witness[b.name])
        if dom == NAT and value < 0:
            return VerificationResult(
                id=job_id or problem.name,
                status=VerificationStatus.FAILED,
                diagnostics=[Diagnostic(message=f"witness {b.name} = {value} is not a natural number")],
                elapsed=time.perf_counter() - start,
            )
        env[b.name] = (dom, value)
    evaluator = ToyEvaluator(bound)
    truth = evaluator.evaluate(problem.body, env)
    if truth is True:
        status, diagnostics = VerificationStatus.VERIFIED, []
    elif truth is None:
        status, diagnostics = VerificationStatus.FAILED, [Diagnostic(message="bound exceeded")]
    else:
        status, diagnostics = VerificationStatus.FAILED, [Diagnostic(message="witness does not satisfy the statement")]
    return VerificationResult(
        id=job_id or problem.name,
        status=status,
        diagnostics=diagnostics,
        elapsed=time.perf_counter() - start,
    )


class ToyVerifier(AbstractVerifier):
    """Built-in checker for existential problems over ℕ/ℤ: reads the witness from the proof."""

    name = "toy"

    def __init__(self, bound: int = config.TOY_BOUND):
        self.bound = bound

    def _problem(self, job: ProofJob) -> ExistentialProblem:
        return parse_problem(job.statement)

    def _check(self, job: ProofJob) -> VerificationResult:
        try:
            problem = self._problem(job)
            witness = parse_witness(problem, job.proof)
            return toy_check(problem, witness, self.bound, job_id=job.id)
        except MutagenError as e:
            logger.debug("Job %s outside the toy fragment: %s", job.id, e)
            return VerificationResult(
                id=job.id,
                status=VerificationStatus.FAILED,
                diagnostics=[Diagnostic(severity=Severity.ERROR, message=f"outside the toy fragment: {e}")],
            )

    def elaborate(self, job: ProofJob) -> VerificationResult:
        try:
            problem = self._problem(job)
            for b in problem.binders:
                domain_of(b.type)
        except MutagenError as e:
            return VerificationResult(
                id=job.id, status=VerificationStatus.FAILED,
                diagnostics=[Diagnostic(severity=Severity.ERROR, message=str(e))],
            )
        return VerificationResult(
            id=job.id, status=VerificationStatus.FAILED,
            diagnostics=[Diagnostic(severity=Severity.WARNING, message="declaration uses 'sorry'")],
        )
