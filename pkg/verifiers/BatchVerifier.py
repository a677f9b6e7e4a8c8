import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import List, Optional, Sequence

from tqdm import tqdm

import config
from utils import natural_key
from verifiers.AbstractVerifier import AbstractVerifier
from verifiers.CheckpointStore import CheckpointStore
from verifiers.ProofJob import Diagnostic, ProofJob, VerificationResult, VerificationStatus

logger = logging.getLogger(__name__)


def _isolated(verifier: AbstractVerifier, job: ProofJob) -> VerificationResult:
    try:
        return verifier.check_proof(job)
    except Exception as e:
        logger.exception("Job %s crashed the verifier", job.id)
        return VerificationResult(
            id=job.id,
            status=VerificationStatus.PROTOCOL_ERROR,
            diagnostics=[Diagnostic(message=f"{type(e).__name__}: {e}")],
            fingerprint=job.fingerprint(),
        )


def run_batch(
    jobs: Sequence[ProofJob],
    verifier: AbstractVerifier,
    parallelism: int = config.PARALLELISM,
    checkpoint: Optional[CheckpointStore] = None,
    show_progress: bool = True,
) -> List[VerificationResult]:
    """
    Check every job exactly once with at most `parallelism` in flight.

    Results come back ordered by job id. With a checkpoint, finished jobs are read back
    instead of re-run, and each new result is appended as soon as it arrives.

    Raises:
        ValueError: if `parallelism` < 1 or two jobs share an id.
    """
    if parallelism < 1:
        raise ValueError("parallelism must be at least 1")
    ids = [job.id for job in jobs]
    if len(set(ids)) != len(ids):
        raise ValueError("job ids must be unique within a batch")

    results = {}
    pending = []
    for job in jobs:
        cached = checkpoint.lookup(job) if checkpoint else None
        if cached is not None:
            results[job.id] = cached
        else:
            pending.append(job)
    if results:
        logger.info("Reusing %d checkpointed results, %d jobs to run", len(results), len(pending))

    with ThreadPoolExecutor(max_workers=parallelism) as pool:
        futures = {pool.submit(_isolated, verifier, job): job for job in pending}
        for future in tqdm(as_completed(futures), total=len(futures), desc="Verifying", disable=not show_progress):
            result = future.result()
            results[result.id] = result
            if checkpoint is not None:
                checkpoint.record(result)

    return [results[i] for i in sorted(results, key=natural_key)]
