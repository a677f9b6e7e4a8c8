import logging
from typing import List, Optional, Tuple

from errors import MutagenError, UnparseableProof
from extractors.ProofStep import ContextEntry, ProofStep, StepStyle
from parsers.LeanLexer import TokenKind, match_brackets, strip_comments, tokenize
from parsers.LeanParser import TermParser, normalize_proof

logger = logging.getLogger(__name__)

# procedural tactics after which later goals may mention names the statement does not bind
CONTEXT_ALTERING = {
    "intro", "intros", "rintro", "obtain", "rcases", "cases", "cases'", "induction", "induction'",
    "by_contra", "by_cases", "set", "subst", "generalize", "revert", "clear", "interval_cases",
    "fin_cases", "specialize", "replace", "wlog", "choose", "lift", "ext", "funext", "contrapose",
    "rename_i", "next", "case",
}


def _top_level_lines(body: List[str]) -> List[str]:
    steps: List[str] = []
    for line in body:
        stripped = line.lstrip()
        indent = len(line) - len(stripped)
        if indent == 0 and not stripped.startswith(("<;>", "|")) or not steps:
            steps.append(line)
        else:
            steps[-1] += "\n" + line
    return steps


def _split_semicolons(step: str) -> List[str]:
    if "\n" in step:
        return [step]
    tokens = tokenize(step, strip=False)
    pairs = match_brackets(tokens)
    cuts, i = [], 0
    while i < len(tokens) - 1:
        if i in pairs:
            i = pairs[i] + 1
            continue
        if tokens[i].is_sym(";"):
            cuts.append(tokens[i].start)
        i += 1
    if not cuts:
        return [step]
    pieces, prev = [], 0
    for c in cuts:
        pieces.append(step[prev:c])
        prev = c + 1
    pieces.append(step[prev:])
    return [p.strip() for p in pieces if p.strip()]


def _goal_slice(tokens, pairs, start: int, stops) -> int:
    i = start
    while tokens[i].kind != TokenKind.EOF:
        if tokens[i].is_sym(":=") or tokens[i].is_kw(*stops):
            return i
        if i in pairs:
            i = pairs[i] + 1
            continue
        i += 1
    return i


def classify_step(text: str) -> Tuple[StepStyle, str, Optional[str], Optional[object]]:
    """(style, tactic, name, goal) of one step; non-declarative steps have no name or goal."""
    tokens = tokenize(text, strip=False)
    pairs = match_brackets(tokens)
    first = tokens[0]
    tactic = first.text
    if first.is_kw("have", "suffices"):
        i = 1
        name = "this"
        if tokens[i].kind == TokenKind.IDENT:
            name = tokens[i].text
            i += 1
        if tokens[i].is_sym(":"):
            stops = ("by", "from") if first.text == "suffices" else ()
            end = _goal_slice(tokens, pairs, i + 1, stops)
            if end > i + 1:
                try:
                    goal = TermParser(text, tokens, pairs).parse_slice(i + 1, end)
                except MutagenError:
                    return StepStyle.PROCEDURAL, tactic, None, None
                return StepStyle.DECLARATIVE, tactic, name, goal
    return StepStyle.PROCEDURAL, tactic, None, None


def _alters_context(text: str, tactic: str) -> bool:
    if tactic in CONTEXT_ALTERING or tactic.rstrip("!?") in CONTEXT_ALTERING:
        return True
    tokens = tokenize(text, strip=False)
    pairs = match_brackets(tokens)
    i = 0
    while i < len(tokens) - 1:
        if i in pairs:
            i = pairs[i] + 1
            continue
        if tokens[i].is_kw("at"):
            return True
        i += 1
    return False


def split_proof(proof: str) -> List[ProofStep]:
    """
    Split a tactic proof into its top-level steps, in source order.

    Nested steps inside a `have … := by` block stay part of that step. A top-level `;`
    also separates steps.

    Raises:
        UnparseableProof: for term-mode proofs or text that does not tokenize.
    """
    text = proof if proof.startswith("by\n") else normalize_proof(strip_comments(proof), 0)
    if text is None or not text.startswith("by"):
        raise UnparseableProof("not a tactic proof")
    body = [line[2:] if line.startswith("  ") else line for line in text.split("\n")[1:]]
    steps: List[ProofStep] = []
    established: List[ContextEntry] = []
    altered = False
    try:
        pieces = [p for line in _top_level_lines(body) for p in _split_semicolons(line)]
        for index, piece in enumerate(pieces):
            style, tactic, name, goal = classify_step(piece)
            steps.append(
                ProofStep(
                    style=style,
                    index=index,
                    text=piece,
                    tactic=tactic,
                    name=name,
                    goal=goal,
                    context=tuple(established),
                    context_altered=altered,
                )
            )
            if style == StepStyle.DECLARATIVE:
                established = [e for e in established if e.name != name]
                established.append(ContextEntry(name=name, type=goal))
            elif _alters_context(piece, tactic):
                altered = True
    except MutagenError as e:
        raise UnparseableProof(f"cannot split proof: {e}") from e
    return steps
