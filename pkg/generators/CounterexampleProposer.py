import logging
from typing import List, Optional

from errors import ExtractionFailed
from generators.BaseLLMGenerator import BaseLLMGenerator
from generators.CounterexampleCandidate import CounterexampleCandidate
from generators.GeneratorConfig import GeneratorRole
from parsers.LeanPrinter import print_problem
from statements.ExistentialProblem import ExistentialProblem

logger = logging.getLogger(__name__)

PROPOSER_TEMPLATE = (
    "Find a concrete example to prove the following existential problem.\n"
    "Note that:\n"
    "1. Please reason the problem and give the final answer in Natural Language.\n"
    "2. The final answer should be in the format \\boxed{{...}}.\n"
    "The problem is: {formal_statement}"
)

BOXED = "\\boxed{"


def build_proposer_prompt(problem: ExistentialProblem) -> str:
    return PROPOSER_TEMPLATE.format(formal_statement=print_problem(problem))


def extract_boxed(text: str) -> Optional[str]:
    """Content of the last balanced `\\boxed{…}` in `text`, braces inside it included."""
    found = None
    pos = text.find(BOXED)
    while pos >= 0:
        depth, i = 1, pos + len(BOXED)
        while i < len(text) and depth:
            if text[i] == "{":
                depth += 1
            elif text[i] == "}":
                depth -= 1
            i += 1
        if depth == 0:
            found = text[pos + len(BOXED):i - 1]
        pos = text.find(BOXED, pos + 1)
    return found


def witness_of(response: str) -> str:
    answer = extract_boxed(response)
    if answer is None:
        raise ExtractionFailed("no \\boxed{...} answer in the response")
    answer = answer.strip()
    if not answer:
        raise ExtractionFailed("empty \\boxed{} answer")
    return answer


class CounterexampleProposer(BaseLLMGenerator):
    """Asks the proposer model for a concrete witness of an existential problem."""

    role = GeneratorRole.PROPOSER

    def build_prompt(self, problem: ExistentialProblem) -> str:
        return build_proposer_prompt(problem)

    def propose(self, problem: ExistentialProblem, n: int = 1, seed: int = 0) -> List[CounterexampleCandidate]:
        responses = self.sample(problem.name, self.build_prompt(problem), n, seed)
        candidates = []
        for idx, response in enumerate(responses):
            try:
                witness, error = witness_of(response), None
            except ExtractionFailed as e:
                witness, error = None, str(e)
                logger.debug("%s sample %d: %s", problem.name, idx, e)
            candidates.append(
                CounterexampleCandidate(
                    problem_id=problem.name, sample_index=idx, seed=seed,
                    reasoning=response, witness=witness, error=error,
                )
            )
        return candidates
