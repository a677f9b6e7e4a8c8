import shlex
import sys
import threading
from pathlib import Path

import pytest

from errors import ConfigError, EndpointUnavailable
from verifiers.ProofJob import ProofJob, ProofLimits, VerificationStatus
from verifiers.ReplVerifier import ReplVerifier

FAKE = Path(__file__).parent / "fixtures" / "fake_checker.py"


@pytest.fixture
def stdio_verifier():
    cmd = f"{shlex.quote(sys.executable)} {shlex.quote(str(FAKE))}"
    verifier = ReplVerifier(cmd=cmd, addr=None, header=None, grace_s=0.2)
    yield verifier
    verifier.close()


@pytest.fixture
def tcp_verifier():
    sys.path.insert(0, str(FAKE.parent))
    from fake_checker import Handler, Server
    server = Server(("127.0.0.1", 0), Handler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    host, port = server.server_address
    verifier = ReplVerifier(cmd=None, addr=f"{host}:{port}", header=None, grace_s=0.2)
    yield verifier
    verifier.close()
    server.shutdown()
    server.server_close()


def _job(proof, job_id="j", timeout=5.0):
    return ProofJob(id=job_id, statement="theorem t : True", proof=proof, limits=ProofLimits(timeout_s=timeout))


@pytest.mark.parametrize("fixture", ["stdio_verifier", "tcp_verifier"])
def test_statuses(request, fixture):
    verifier = request.getfixturevalue(fixture)
    assert verifier.check_proof(_job("by trivial")).status == VerificationStatus.VERIFIED
    failed = verifier.check_proof(_job("by bad"))
    assert failed.status == VerificationStatus.FAILED
    assert failed.errors() == ["unsolved goals"]
    assert verifier.check_proof(_job("by oom")).status == VerificationStatus.RESOURCE_EXHAUSTED
    assert verifier.check_proof(_job("by weird")).status == VerificationStatus.PROTOCOL_ERROR


def test_malformed_reply_is_a_protocol_error(stdio_verifier):
    assert stdio_verifier.check_proof(_job("by garbage")).status == VerificationStatus.PROTOCOL_ERROR


def test_sorry_never_reaches_the_backend():
    verifier = ReplVerifier(cmd="/nonexistent/checker", addr=None)
    result = verifier.check_proof(_job("by sorry"))
    assert result.status == VerificationStatus.FAILED
    assert result.contains_sorry


def test_timeout_restarts_session(stdio_verifier):
    result = stdio_verifier.check_proof(_job("by slow", timeout=0.001))
    assert result.status == VerificationStatus.TIMEOUT
    assert stdio_verifier.check_proof(_job("by trivial", "k")).verified


def test_warnings_do_not_fail(tcp_verifier):
    result = tcp_verifier.check_proof(_job("by unused"))
    assert result.verified
    assert "unused variable" in result.diagnostics[0].message


def test_unreachable_endpoint():
    verifier = ReplVerifier(cmd=None, addr="127.0.0.1:1")
    with pytest.raises(EndpointUnavailable):
        verifier.probe()


def test_needs_a_backend():
    with pytest.raises(ConfigError):
        ReplVerifier(cmd=None, addr=None)
