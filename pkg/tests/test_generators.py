import json
import logging
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest

from errors import EndpointUnavailable
from generators.CounterexampleProposer import CounterexampleProposer, build_proposer_prompt, extract_boxed
from generators.GeneratorConfig import GeneratorConfig, GeneratorRole
from generators.ProofScript import ProofTarget
from generators.ProofWriter import ProofWriter, build_prover_prompt, extract_code, split_declaration
from generators.ResponseArchive import ResponseArchive
from llm.ClientFactory import make_client
from llm.HttpClient import HttpClient
from llm.LLMClient import LLMClient
from llm.MockClient import MockClient
from parsers.LeanParser import parse_problem

PROBLEM = parse_problem("theorem small : ∃ n : ℕ, ¬n ≥ 1")


class CountingClient(LLMClient):
    def __init__(self, text):
        self.text = text
        self.calls = 0

    def __call__(self, prompt, **kwargs):
        self.calls += 1
        return self.text


def _proposer(client, archive=None):
    return CounterexampleProposer(client, GeneratorConfig(role=GeneratorRole.PROPOSER), archive)


def _prover(client, archive=None):
    return ProofWriter(client, GeneratorConfig(role=GeneratorRole.PROVER), archive)


def test_proposer_prompt_is_verbatim():
    assert build_proposer_prompt(PROBLEM) == (
        "Find a concrete example to prove the following existential problem.\n"
        "Note that:\n"
        "1. Please reason the problem and give the final answer in Natural Language.\n"
        "2. The final answer should be in the format \\boxed{...}.\n"
        "The problem is: theorem small : ∃ n : ℕ, ¬n ≥ 1 := by sorry"
    )


def test_proposer_prompt_contains_statement_once():
    prompt = build_proposer_prompt(PROBLEM)
    assert prompt.startswith("Find a concrete example to prove the following existential problem.")
    assert prompt.count("∃ n : ℕ, ¬n ≥ 1") == 1


def test_prover_prompt_embeds_witness_and_header():
    prompt = build_prover_prompt(PROBLEM, "0", header="import Mathlib\n")
    assert prompt == (
        "Complete the following Lean 4 code using the given concrete example 0:\n"
        "```lean4\n"
        "import Mathlib\n\n"
        "theorem small : ∃ n : ℕ, ¬n ≥ 1 := by\n"
        "```"
    )


@pytest.mark.parametrize(
    "text, expected",
    [
        ("so \\boxed{3} or rather \\boxed{4}", "4"),
        ("\\boxed{\\frac{1}{2}}", "\\frac{1}{2}"),
        ("x = \\boxed{ {a, b} }", " {a, b} "),
        ("no answer here", None),
        ("\\boxed{5} and a broken \\boxed{6", "5"),
    ],
)
def test_extract_boxed(text, expected):
    assert extract_boxed(text) == expected


def test_propose_records_extraction_failures():
    cands = _proposer(CountingClient("I have no idea.")).propose(PROBLEM, n=2)
    assert len(cands) == 2
    assert all(not c.ok and c.error for c in cands)


def test_propose_from_mock_script():
    client = MockClient({("small", "proposer"): ["Take n = 0. \\boxed{0}"]})
    (cand,) = _proposer(client).propose(PROBLEM)
    assert cand.witness == "0"
    assert cand.problem_id == "small"


def test_archive_serves_resumed_runs(tmp_path):
    client = CountingClient("\\boxed{0}")
    archive = ResponseArchive(str(tmp_path))
    first = _proposer(client, archive).propose(PROBLEM, n=3, seed=7)
    assert client.calls == 3

    again = _proposer(client, ResponseArchive(str(tmp_path))).propose(PROBLEM, n=3, seed=7)
    assert client.calls == 3
    assert [c.witness for c in again] == [c.witness for c in first]
    rows = (tmp_path / "proposer.jsonl").read_text(encoding="utf-8").splitlines()
    assert {json.loads(r)["index"] for r in rows} == {0, 1, 2}


def test_mock_is_deterministic(tmp_path):
    script = tmp_path / "script.jsonl"
    script.write_text(
        "\n".join(
            json.dumps({"problem_id": "small", "role": "prover", "response": r}, ensure_ascii=False)
            for r in ["by\n  use {witness}", "by\n  sorry"]
        ),
        encoding="utf-8",
    )
    client = make_client(f"mock:{script}", role="prover")
    ctx = {"problem_id": "small", "role": "prover", "witness": "0"}
    assert client.generate("p", n=3, context=ctx) == client.generate("p", n=3, context=ctx)
    assert client.generate("p", n=3, context=ctx) == ["by\n  use 0", "by\n  sorry", "by\n  use 0"]


def test_prove_extracts_fenced_proof():
    response = "Here you go.\n```lean4\ntheorem small : ∃ n : ℕ, ¬n ≥ 1 := by\n  exact ⟨0, by decide⟩\n```"
    (script,) = _prover(CountingClient(response)).prove(PROBLEM, "0")
    assert script.ok
    assert script.proof == "by\n  exact ⟨0, by decide⟩"
    assert not script.header_rewritten
    assert script.statement == "theorem small : ∃ n : ℕ, ¬n ≥ 1"


def test_prove_normalizes_a_foreign_header(caplog):
    response = "```lean4\nimport Mathlib\n\ntheorem my_answer : ∃ n : ℕ, n = 7 := by\n  use 7\n```"
    with caplog.at_level(logging.INFO, logger="generators.ProofWriter"):
        (script,) = _prover(CountingClient(response)).prove(PROBLEM, "0", ProofTarget.DROPPED)
    assert script.header_rewritten
    assert script.statement.startswith("theorem small :")
    assert script.proof == "by\n  use 7"
    assert "header normalized" in caplog.text


def test_prove_n_scripts():
    scripts = _prover(CountingClient("no code at all")).prove(PROBLEM, "0", n=3)
    assert len(scripts) == 3
    assert all(not s.ok and s.error for s in scripts)


def test_bare_proof_without_declaration():
    assert split_declaration(extract_code("by\n  norm_num")) == (None, "by\n  norm_num")


def test_unreachable_http_endpoint():
    client = HttpClient("127.0.0.1:1", retries=1, backoff_s=0.0, timeout_s=1.0)
    with pytest.raises(EndpointUnavailable):
        client.generate("hello")


@pytest.fixture
def completion_server():
    seen = []

    class Handler(BaseHTTPRequestHandler):
        def do_POST(self):
            body = json.loads(self.rfile.read(int(self.headers["Content-Length"])))
            seen.append(body)
            reply = json.dumps({"choices": [{"text": f"\\boxed{{{i}}}"} for i in range(body["n"])]}).encode()
            self.send_response(200)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(reply)))
            self.end_headers()
            self.wfile.write(reply)

        def log_message(self, *args):
            pass

    server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_address[1]}/v1/completions", seen
    server.shutdown()
    server.server_close()


def test_http_endpoint_round_trip(completion_server):
    url, seen = completion_server
    cands = _proposer(make_client(url, "proposer")).propose(PROBLEM, n=3)
    assert [c.witness for c in cands] == ["0", "1", "2"]
    assert seen[0]["n"] == 3
    assert seen[0]["temperature"] == 0.9
    assert seen[0]["max_tokens"] == 4096


def test_llama_completion_text():
    pytest.importorskip("llama_cpp")
    from llm.LlamaCppClient import completion_text
    assert completion_text({"choices": [{"text": "use 3"}]}) == "use 3"
    assert completion_text("plain") == "plain"
    with pytest.raises(ValueError):
        completion_text({"choices": []})
