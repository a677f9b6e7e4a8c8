import logging
import re
from typing import List, Optional, Tuple

import config
from errors import ExtractionFailed, MutagenError
from generators.BaseLLMGenerator import BaseLLMGenerator
from generators.GeneratorConfig import GeneratorRole
from generators.ProofScript import ProofScript, ProofTarget
from parsers.LeanLexer import TokenKind, match_brackets, strip_comments, tokenize
from parsers.LeanParser import normalize_proof
from parsers.LeanPrinter import print_problem, problem_header
from statements.ExistentialProblem import ExistentialProblem
from utils import strip_ws

logger = logging.getLogger(__name__)

PROVER_TEMPLATE = (
    "Complete the following Lean 4 code using the given concrete example {example}:\n"
    "```lean4\n"
    "{header}\n"
    "{formal_statement}\n"
    "```"
)

FENCE_RE = re.compile(r"```[ \t]*(?:lean4|lean)?[ \t]*\n(.*?)(?:```|\Z)", re.DOTALL)
DECL_KEYWORDS = ("theorem", "lemma", "example")


def build_prover_prompt(problem: ExistentialProblem, witness: str, header: str = None) -> str:
    header = config.LEAN_HEADER if header is None else header
    return PROVER_TEMPLATE.format(example=witness, header=header, formal_statement=problem_header(problem))


def extract_code(response: str) -> str:
    """Contents of the last code fence; the whole response when there is none."""
    blocks = FENCE_RE.findall(response)
    return blocks[-1] if blocks else response


def split_declaration(code: str) -> Tuple[Optional[str], str]:
    """
    (declaration up to `:=`, proof text after it) for the first theorem in `code`. A bare proof
    with no declaration comes back as (None, proof).
    """
    clean = strip_comments(code)
    tokens = tokenize(clean, strip=False)
    pairs = match_brackets(tokens)
    start = next((i for i, t in enumerate(tokens) if t.is_kw(*DECL_KEYWORDS)), None)
    if start is None:
        proof = normalize_proof(clean, 0)
        if proof is None or not (proof == "by" or proof.startswith("by\n")):
            raise ExtractionFailed("no proof found in the response")
        return None, proof
    i = start
    while tokens[i].kind != TokenKind.EOF:
        if tokens[i].is_sym(":="):
            proof = normalize_proof(clean, tokens[i].end)
            if proof is None:
                raise ExtractionFailed("declaration without a proof")
            return clean[tokens[start].start:tokens[i].start].strip(), proof
        i = pairs[i] + 1 if i in pairs else i + 1
    raise ExtractionFailed("declaration without `:=`")


class ProofWriter(BaseLLMGenerator):
    """
    Asks the prover for a Lean proof of a problem using a given witness. Whatever theorem the
    response declares, the proof is re-attached to the problem's own statement.
    """

    role = GeneratorRole.PROVER

    def build_prompt(self, problem: ExistentialProblem, witness: str) -> str:
        return build_prover_prompt(problem, witness)

    def parse_output(self, problem: ExistentialProblem, target: ProofTarget, idx: int, raw: str) -> ProofScript:
        statement = print_problem(problem, with_proof=False)
        try:
            declared, proof = split_declaration(extract_code(raw))
        except MutagenError as e:
            return ProofScript(problem_id=problem.name, target=target, sample_index=idx,
                               statement=statement, raw=raw, error=str(e))
        rewritten = declared is not None and strip_ws(declared) != strip_ws(statement)
        if rewritten:
            logger.info("%s: prover declared a different statement, header normalized (%s)",
                        problem.name, declared.split("\n")[0][:120])
        return ProofScript(problem_id=problem.name, target=target, sample_index=idx, statement=statement,
                           proof=proof, raw=raw, header_rewritten=rewritten)

    def prove(self, problem: ExistentialProblem, witness: str, target: ProofTarget = ProofTarget.MUTATED,
              n: int = 1, seed: int = 0) -> List[ProofScript]:
        responses = self.sample(problem.name, self.build_prompt(problem, witness), n, seed, witness=witness)
        return [self.parse_output(problem, target, idx, raw) for idx, raw in enumerate(responses)]
