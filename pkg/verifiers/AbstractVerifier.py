from abc import ABC, abstractmethod

from verifiers.ProofJob import (
    Diagnostic, ProofJob, Severity, VerificationResult, VerificationStatus,
)


class AbstractVerifier(ABC):
    """
    Backend that decides whether a proof checks.

    `check_proof` never raises for a malformed backend reply; it reports `protocol-error`.
    Implementations must be safe to call from several threads.
    """

    name = "abstract"

    def check_proof(self, job: ProofJob) -> VerificationResult:
        if job.contains_sorry():
            return VerificationResult(
                id=job.id,
                status=VerificationStatus.FAILED,
                diagnostics=[Diagnostic(severity=Severity.ERROR, message="proof contains sorry")],
                contains_sorry=True,
                fingerprint=job.fingerprint(),
            )
        result = self._check(job)
        if result.fingerprint is None:
            result = result.model_copy(update={"fingerprint": job.fingerprint()})
        return result

    def elaborate(self, job: ProofJob) -> VerificationResult:
        """Check that a statement is well formed; placeholder proofs are allowed here."""
        return self._check(job)

    @abstractmethod
    def _check(self, job: ProofJob) -> VerificationResult:
        pass

    def close(self) -> None:
        pass

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
