import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

import hypothesis
import pytest

from mappergpt.ontology import load_obo

hypothesis.settings.register_profile("ci", deadline=None, max_examples=100)
hypothesis.settings.load_profile("ci")

DATA = Path(__file__).parent / "data"

ACCEPTANCE_RESULTS = []


@pytest.fixture(scope="session")
def data_dir():
    return DATA


@pytest.fixture(scope="session")
def fly():
    return load_obo(DATA / "fbbt.obo")


@pytest.fixture(scope="session")
def zfa():
    return load_obo(DATA / "zfa.obo")


class StubServer:
    """Chat-completions endpoint that replays queued (status, body) replies.

    When the queue is empty the last ``default`` reply is used.
    """

    def __init__(self):
        self.requests = []
        self.queue = []
        self.default = (200, {"choices": [{"message": {"role": "assistant", "content": "stub reply"}}]})
        self.responder = None
        stub = self

        class Handler(BaseHTTPRequestHandler):
            def do_POST(self):
                length = int(self.headers.get("Content-Length", 0))
                body = json.loads(self.rfile.read(length) or b"{}")
                stub.requests.append({"path": self.path, "headers": dict(self.headers), "body": body})
                if stub.responder is not None:
                    status, payload = stub.responder(body)
                elif stub.queue:
                    status, payload = stub.queue.pop(0)
                else:
                    status, payload = stub.default
                data = payload.encode() if isinstance(payload, str) else json.dumps(payload).encode()
                self.send_response(status)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(data)))
                self.end_headers()
                self.wfile.write(data)

            def log_message(self, *args):
                pass

        self.server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self.thread = threading.Thread(target=self.server.serve_forever, daemon=True)
        self.thread.start()

    @property
    def url(self):
        host, port = self.server.server_address
        return f"http://{host}:{port}/v1"

    def reply_with(self, content):
        self.default = (200, {"choices": [{"message": {"role": "assistant", "content": content}}]})

    def close(self):
        self.server.shutdown()
        self.server.server_close()


@pytest.fixture
def stub_server():
    server = StubServer()
    yield server
    server.close()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(line)
