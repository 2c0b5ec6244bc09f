from __future__ import annotations

import threading
from dataclasses import dataclass
from functools import partial
from http.server import SimpleHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

import pytest

from openanno.config import ServiceConfig
from openanno.service import AnnotationService


@dataclass
class RunningService:
    service: AnnotationService
    base: str


@pytest.fixture
def running_service(tmp_path):
    config = ServiceConfig(listen="127.0.0.1:0", data_dir=tmp_path / "data")
    service = AnnotationService(config)
    server = service.make_server()
    port = server.server_address[1]
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield RunningService(service, f"http://127.0.0.1:{port}")
    server.shutdown()
    server.server_close()


@dataclass
class FileServer:
    root: Path
    base: str

    def write(self, name: str, text: str) -> str:
        (self.root / name).write_text(text, encoding="utf-8")
        return f"{self.base}/{name}"


class _QuietFileHandler(SimpleHTTPRequestHandler):
    extensions_map = {
        **SimpleHTTPRequestHandler.extensions_map,
        ".ttl": "text/turtle",
        ".nt": "application/n-triples",
    }

    def log_message(self, *args):
        pass


@pytest.fixture
def file_server(tmp_path):
    root = tmp_path / "wwwroot"
    root.mkdir()
    handler = partial(_QuietFileHandler, directory=str(root))
    server = ThreadingHTTPServer(("127.0.0.1", 0), handler)
    port = server.server_address[1]
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield FileServer(root, f"http://127.0.0.1:{port}")
    server.shutdown()
    server.server_close()
