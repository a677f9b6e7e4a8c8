import json
import logging
import queue
import shlex
import socket
import subprocess
import threading
import time
from abc import ABC, abstractmethod
from typing import List, Optional

import config
from errors import ConfigError, EndpointUnavailable
from verifiers.AbstractVerifier import AbstractVerifier
from verifiers.ProofJob import Diagnostic, ProofJob, Severity, VerificationResult, VerificationStatus

logger = logging.getLogger(__name__)

MEMORY_MARKERS = ("out of memory", "memory limit", "heap exhausted", "memory exhausted")
STATUS_ALIASES = {
    "ok": VerificationStatus.VERIFIED,
    "success": VerificationStatus.VERIFIED,
    "verified": VerificationStatus.VERIFIED,
    "error": VerificationStatus.FAILED,
    "failed": VerificationStatus.FAILED,
    "fail": VerificationStatus.FAILED,
    "timeout": VerificationStatus.TIMEOUT,
    "resource-exhausted": VerificationStatus.RESOURCE_EXHAUSTED,
    "oom": VerificationStatus.RESOURCE_EXHAUSTED,
}


class Transport(ABC):
    """One line-oriented session with a checker."""

    @abstractmethod
    def send(self, line: str) -> None:
        pass

    @abstractmethod
    def recv(self, timeout: float) -> str:
        """Next line without its newline. Raises TimeoutError, or EOFError when the peer is gone."""
        pass

    @abstractmethod
    def close(self) -> None:
        pass


class SubprocessTransport(Transport):
    def __init__(self, cmd: str):
        try:
            self.proc = subprocess.Popen(
                shlex.split(cmd),
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                stderr=subprocess.DEVNULL,
                text=True,
                encoding="utf-8",
                bufsize=1,
            )
        except OSError as e:
            raise EndpointUnavailable(f"cannot start checker '{cmd}': {e}") from e
        self.lines: "queue.Queue[Optional[str]]" = queue.Queue()
        self.reader = threading.Thread(target=self._pump, daemon=True)
        self.reader.start()

    def _pump(self):
        for line in self.proc.stdout:
            self.lines.put(line.rstrip("\n"))
        self.lines.put(None)

    def send(self, line: str) -> None:
        try:
            self.proc.stdin.write(line + "\n")
            self.proc.stdin.flush()
        except (BrokenPipeError, ValueError) as e:
            raise EOFError("checker process closed its input") from e

    def recv(self, timeout: float) -> str:
        try:
            line = self.lines.get(timeout=max(timeout, 0.0))
        except queue.Empty:
            raise TimeoutError()
        if line is None:
            raise EOFError("checker process exited")
        return line

    def close(self) -> None:
        if self.proc.poll() is None:
            self.proc.kill()
        try:
            self.proc.wait(timeout=5)
        except subprocess.TimeoutExpired:
            logger.warning("Checker process %d did not exit", self.proc.pid)


class TcpTransport(Transport):
    def __init__(self, addr: str, connect_timeout: float = 10.0):
        host, _, port = addr.rpartition(":")
        if not host or not port.isdigit():
            raise ConfigError(f"verifier address must be HOST:PORT, got '{addr}'")
        try:
            self.sock = socket.create_connection((host, int(port)), timeout=connect_timeout)
        except OSError as e:
            raise EndpointUnavailable(f"cannot connect to checker at {addr}: {e}") from e
        self.buffer = b""

    def send(self, line: str) -> None:
        try:
            self.sock.sendall((line + "\n").encode("utf-8"))
        except OSError as e:
            raise EOFError(f"connection lost: {e}") from e

    def recv(self, timeout: float) -> str:
        deadline = time.monotonic() + timeout
        while b"\n" not in self.buffer:
            remaining = deadline - time.monotonic()
            if remaining <= 0:
                raise TimeoutError()
            self.sock.settimeout(remaining)
            try:
                chunk = self.sock.recv(1 << 16)
            except socket.timeout:
                raise TimeoutError()
            except OSError as e:
                raise EOFError(f"connection lost: {e}") from e
            if not chunk:
                raise EOFError("checker closed the connection")
            self.buffer += chunk
        line, self.buffer = self.buffer.split(b"\n", 1)
        return line.decode("utf-8", errors="replace")

    def close(self) -> None:
        try:
            self.sock.close()
        except OSError:
            pass


class ReplVerifier(AbstractVerifier):
    """
    Client for an external checker speaking newline-delimited JSON.

    Request: `{"id", "cmd": "check", "statement", "proof", "timeout_s", "memory_bytes"}` (plus
    `header` when configured). Reply: `{"id", "status", "messages", "elapsed_s"}`.

    Sessions are pooled, one request in flight per session. A session that misses its
    deadline (job timeout plus `grace_s`) is killed and replaced on next use.
    """

    name = "repl"

    def __init__(
        self,
        cmd: Optional[str] = config.VERIFIER_CMD,
        addr: Optional[str] = config.VERIFIER_ADDR,
        header: Optional[str] = config.VERIFIER_HEADER,
        grace_s: float = 5.0,
    ):
        if not cmd and not addr:
            raise ConfigError("set VERIFIER_CMD or VERIFIER_ADDR to use the external checker")
        self.cmd = cmd
        self.addr = addr
        self.header = header
        self.grace_s = grace_s
        self.idle: List[Transport] = []
        self.lock = threading.Lock()

    def _open(self) -> Transport:
        if self.cmd:
            return SubprocessTransport(self.cmd)
        return TcpTransport(self.addr)

    def _acquire(self) -> Transport:
        with self.lock:
            if self.idle:
                return self.idle.pop()
        return self._open()

    def _release(self, session: Transport) -> None:
        with self.lock:
            self.idle.append(session)

    def probe(self) -> None:
        """Open one session now so an unreachable checker fails fast."""
        self._release(self._acquire())

    def request(self, job: ProofJob) -> dict:
        payload = {
            "id": job.id,
            "cmd": "check",
            "statement": job.statement,
            "proof": job.proof,
            "timeout_s": job.limits.timeout_s,
            "memory_bytes": job.limits.memory_bytes,
        }
        if self.header:
            payload["header"] = self.header
        return payload

    def _check(self, job: ProofJob) -> VerificationResult:
        session = self._acquire()
        start = time.monotonic()
        deadline = start + job.limits.timeout_s + self.grace_s
        try:
            session.send(json.dumps(self.request(job), ensure_ascii=False))
            while True:
                line = session.recv(deadline - time.monotonic())
                if not line.strip():
                    continue
                try:
                    reply = json.loads(line)
                except json.JSONDecodeError:
                    self._release(session)
                    return self._protocol_error(job, f"malformed reply: {line[:200]}", start)
                if not isinstance(reply, dict):
                    self._release(session)
                    return self._protocol_error(job, "reply is not an object", start)
                if reply.get("id") != job.id:
                    logger.warning("Discarding stale reply for %s while waiting for %s", reply.get("id"), job.id)
                    continue
                self._release(session)
                return self.parse_reply(job, reply, time.monotonic() - start)
        except TimeoutError:
            logger.warning("Job %s exceeded %.1f s; restarting session", job.id, job.limits.timeout_s)
            session.close()
            return VerificationResult(
                id=job.id,
                status=VerificationStatus.TIMEOUT,
                diagnostics=[Diagnostic(severity=Severity.ERROR, message="timeout")],
                elapsed=time.monotonic() - start,
            )
        except EOFError as e:
            session.close()
            return self._protocol_error(job, str(e), start)

    @staticmethod
    def _protocol_error(job: ProofJob, message: str, start: float) -> VerificationResult:
        logger.error("Protocol error on %s: %s", job.id, message)
        return VerificationResult(
            id=job.id,
            status=VerificationStatus.PROTOCOL_ERROR,
            diagnostics=[Diagnostic(severity=Severity.ERROR, message=message)],
            elapsed=time.monotonic() - start,
        )

    @staticmethod
    def parse_reply(job: ProofJob, reply: dict, elapsed: float) -> VerificationResult:
        raw_status = str(reply.get("status", "")).lower()
        status = STATUS_ALIASES.get(raw_status)
        messages = reply.get("messages") or []
        if not isinstance(messages, list):
            messages = [messages]
        try:
            diagnostics = [Diagnostic.from_wire(m) for m in messages]
        except (AttributeError, ValueError) as e:
            status, diagnostics = None, [Diagnostic(message=f"bad diagnostics: {e}")]
        if status is None:
            return VerificationResult(
                id=job.id,
                status=VerificationStatus.PROTOCOL_ERROR,
                diagnostics=diagnostics + [Diagnostic(message=f"unknown status '{raw_status}'")],
                elapsed=elapsed,
            )
        if any(marker in d.message.lower() for d in diagnostics for marker in MEMORY_MARKERS):
            status = VerificationStatus.RESOURCE_EXHAUSTED
        if status == VerificationStatus.VERIFIED and any(d.severity == Severity.ERROR for d in diagnostics):
            status = VerificationStatus.FAILED
        try:
            elapsed = float(reply.get("elapsed_s", elapsed))
        except (TypeError, ValueError):
            pass
        return VerificationResult(id=job.id, status=status, diagnostics=diagnostics, elapsed=elapsed)

    def close(self) -> None:
        with self.lock:
            sessions, self.idle = self.idle, []
        for s in sessions:
            s.close()
