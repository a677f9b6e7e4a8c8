import logging
import re
from typing import Set

from mutators.UsageOracle import UsageOracle
from parsers.LeanLexer import identifier_roots, strip_comments
from statements.TheoremStatement import TheoremStatement
from verifiers.ProofJob import contains_sorry

logger = logging.getLogger(__name__)

# tactics that may use any hypothesis of the local context without naming it
CONTEXT_TACTICS = {
    "linarith", "linarith!", "nlinarith", "nlinarith!", "omega", "assumption", "assumption'",
    "assumption_mod_cast", "simp_all", "simp_all?", "aesop", "aesop?", "tauto", "positivity",
    "polyrith", "grind", "gcongr", "trivial", "contradiction", "solve_by_elim", "exact?", "apply?",
    "cc", "bound", "fun_prop", "continuity", "measurability", "subst_vars", "decide?", "hint",
}
STAR_RE = re.compile(r"\[\s*\*|,\s*\*\s*[\],]|\bat\s+\*|‹")


class StructuralUsageOracle(UsageOracle):
    """
    Conservative text-level oracle: a named hypothesis is unused only when its name never
    occurs in the proof. Nothing is reported for missing or `sorry` proofs, for proofs that
    call a tactic able to consume the whole context, or for anonymous hypotheses.
    """

    name = "structural"

    def unused_hypotheses(self, stmt: TheoremStatement) -> Set[str]:
        proof = stmt.proof
        if not proof or contains_sorry(proof):
            return set()
        clean = strip_comments(proof)
        roots = identifier_roots(clean, strip=False)
        if STAR_RE.search(clean) or any(r in CONTEXT_TACTICS for r in roots):
            logger.debug("Proof of %s may use its whole context; nothing pruned", stmt.name)
            return set()
        used = set(roots)
        return {h.name for h in stmt.hypotheses if not h.anonymous and h.name not in used}
