"""Scripted stand-in for an external checker, speaking the NDJSON protocol on stdio or TCP."""
import json
import socketserver
import sys
import time


def answer(request: dict) -> str:
    proof = request.get("proof", "")
    if "garbage" in proof:
        return "this is not json"
    if "slow" in proof:
        time.sleep(3)
    reply = {"id": request["id"], "status": "ok", "messages": [], "elapsed_s": 0.01}
    if "oom" in proof:
        reply["status"] = "error"
        reply["messages"] = [{"severity": "error", "message": "out of memory"}]
    elif "bad" in proof:
        reply["status"] = "error"
        reply["messages"] = [{"severity": "error", "message": "unsolved goals"}]
    elif "weird" in proof:
        reply["status"] = "maybe"
    elif "unused" in proof:
        reply["messages"] = [{"severity": "warning", "message": "unused variable `h₂`"}]
    return json.dumps(reply, ensure_ascii=False)


def serve_stdio():
    for line in sys.stdin:
        if line.strip():
            sys.stdout.write(answer(json.loads(line)) + "\n")
            sys.stdout.flush()


class Handler(socketserver.StreamRequestHandler):
    def handle(self):
        for raw in self.rfile:
            line = raw.decode("utf-8")
            if line.strip():
                self.wfile.write((answer(json.loads(line)) + "\n").encode("utf-8"))
                self.wfile.flush()


class Server(socketserver.ThreadingTCPServer):
    daemon_threads = True
    allow_reuse_address = True


if __name__ == "__main__":
    serve_stdio()
