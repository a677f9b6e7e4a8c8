import logging
import re
from typing import Set

from errors import OracleUnavailable
from mutators.UsageOracle import UsageOracle
from statements.TheoremStatement import TheoremStatement
from verifiers.AbstractVerifier import AbstractVerifier
from verifiers.ProofJob import ProofJob, ProofLimits

logger = logging.getLogger(__name__)

UNUSED_RE = re.compile(r"unused variable [`'‘]([^`'’]+)[`'’]")


class CheckerUsageOracle(UsageOracle):
    """Asks the external checker for its `unused variable` linter diagnostics on the proof."""

    name = "checker"

    def __init__(self, verifier: AbstractVerifier, limits: ProofLimits = None):
        self.verifier = verifier
        self.limits = limits or ProofLimits()

    def unused_hypotheses(self, stmt: TheoremStatement) -> Set[str]:
        if not stmt.proof:
            raise OracleUnavailable(f"theorem '{stmt.name}' has no proof to analyze")
        from parsers.LeanPrinter import print_theorem
        text = print_theorem(stmt.model_copy(update={"proof": None}))
        job = ProofJob(id=f"usage:{stmt.name}", statement=text, proof=stmt.proof, limits=self.limits)
        result = self.verifier.check_proof(job)
        if not result.verified:
            logger.info("Proof of %s did not verify (%s); nothing pruned", stmt.name, result.status)
            return set()
        flagged = set()
        for d in result.diagnostics:
            flagged.update(UNUSED_RE.findall(d.message))
        return {h.name for h in stmt.hypotheses if h.name in flagged}
