"""Read-only HTTP asset service for replication overlays.

Serves scene lists, overlay bundle metadata, reference renders, and
silhouette layers out of a pipeline output directory, plus a single
writable endpoint that appends replication confirmations to a log.
Responses carry ETags from the bundle digests so clients cache correctly.
"""

from __future__ import annotations

import hashlib
import json
import re
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path


class AssetService:
    """Filesystem-backed asset lookup for a pipeline output directory.

    Expects ``<root>/overlays/<scene_id>/`` bundles as written by
    ``export_overlay_asset``.  Confirmations append to
    ``<root>/confirmations.jsonl``.
    """

    def __init__(self, root: str | Path, confirmations: str | Path | None = None):
        self.root = Path(root)
        self.overlays = self.root / "overlays"
        self.confirmations_path = (
            Path(confirmations) if confirmations else self.root / "confirmations.jsonl"
        )
        self._lock = threading.Lock()

    def scene_ids(self) -> list[str]:
        if not self.overlays.is_dir():
            return []
        return sorted(
            d.name for d in self.overlays.iterdir() if (d / "metadata.json").is_file()
        )

    def metadata(self, scene_id: str) -> dict | None:
        path = self.overlays / scene_id / "metadata.json"
        if not path.is_file():
            return None
        return json.loads(path.read_text())

    def asset_path(self, scene_id: str, filename: str) -> Path | None:
        if "/" in filename or "\\" in filename or filename.startswith("."):
            return None
        path = self.overlays / scene_id / filename
        return path if path.is_file() else None

    def digest(self, scene_id: str, filename: str) -> str | None:
        meta = self.metadata(scene_id)
        if meta is None:
            return None
        return meta.get("digests", {}).get(filename)

    def record_confirmation(self, scene_id: str, note: str = "") -> int:
        """Append one confirmation record; returns the record count."""
        record = {
            "scene_id": scene_id,
            "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
            "note": note,
        }
        with self._lock:
            with self.confirmations_path.open("a") as f:
                f.write(json.dumps(record, sort_keys=True) + "\n")
            with self.confirmations_path.open() as f:
                return sum(1 for line in f if line.strip())


_SCENE_ROUTE = re.compile(r"^/scenes/([^/]+)(?:/(overlay|image|confirm|masks/(\d+)))?$")


class _Handler(BaseHTTPRequestHandler):
    server_version = "sceneforge-assets/0.1"

    @property
    def service(self) -> AssetService:
        return self.server.service  # type: ignore[attr-defined]

    def log_message(self, fmt, *args):  # quiet by default
        if getattr(self.server, "verbose", False):
            super().log_message(fmt, *args)

    def _cors(self):
        self.send_header("Access-Control-Allow-Origin", "*")

    def _send(self, status: int, body: bytes, content_type: str, etag: str | None = None):
        if etag and self.headers.get("If-None-Match") == etag:
            self.send_response(304)
            self._cors()
            self.send_header("ETag", etag)
            self.end_headers()
            return
        self.send_response(status)
        self._cors()
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        if etag:
            self.send_header("ETag", etag)
            self.send_header("Cache-Control", "max-age=31536000, immutable")
        self.end_headers()
        self.wfile.write(body)

    def _send_json(self, status: int, doc, etag: str | None = None):
        body = (json.dumps(doc, indent=2, sort_keys=True) + "\n").encode()
        self._send(status, body, "application/json", etag)

    def _not_found(self, what: str):
        self._send_json(404, {"error": f"{what} not found"})

    def do_OPTIONS(self):
        self.send_response(204)
        self._cors()
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.end_headers()

    def do_GET(self):
        path = self.path.split("?", 1)[0]
        if path == "/scenes":
            ids = self.service.scene_ids()
            doc = [
                {
                    "id": sid,
                    "overlay": f"/scenes/{sid}/overlay",
                    "image": f"/scenes/{sid}/image",
                }
                for sid in ids
            ]
            body = (json.dumps(doc, indent=2, sort_keys=True) + "\n").encode()
            etag = hashlib.sha256(body).hexdigest()
            self._send(200, body, "application/json", etag)
            return

        m = _SCENE_ROUTE.match(path)
        if not m:
            self._not_found("route")
            return
        scene_id, action, mask_idx = m.group(1), m.group(2), m.group(3)
        meta = self.service.metadata(scene_id)
        if meta is None:
            self._not_found(f"scene {scene_id}")
            return

        if action == "overlay" or action is None:
            etag = hashlib.sha256(
                json.dumps(meta.get("digests", {}), sort_keys=True).encode()
            ).hexdigest()
            self._send_json(200, meta, etag)
        elif action == "image":
            self._send_file(scene_id, meta["files"]["color"])
        elif action and action.startswith("masks/"):
            k = int(mask_idx)
            name = f"silhouette_{k:02d}"
            if name not in meta["files"]:
                self._not_found(f"mask {k}")
                return
            self._send_file(scene_id, meta["files"][name])
        else:
            self._not_found("route")

    def _send_file(self, scene_id: str, filename: str):
        path = self.service.asset_path(scene_id, filename)
        if path is None:
            self._not_found(filename)
            return
        etag = self.service.digest(scene_id, filename) or hashlib.sha256(
            path.read_bytes()
        ).hexdigest()
        self._send(200, path.read_bytes(), "image/png", etag)

    def do_POST(self):
        path = self.path.split("?", 1)[0]
        m = _SCENE_ROUTE.match(path)
        if not m or m.group(2) != "confirm":
            self._not_found("route")
            return
        scene_id = m.group(1)
        if self.service.metadata(scene_id) is None:
            self._not_found(f"scene {scene_id}")
            return
        length = int(self.headers.get("Content-Length") or 0)
        note = ""
        if length:
            try:
                payload = json.loads(self.rfile.read(length) or b"{}")
                note = str(payload.get("note", ""))
            except json.JSONDecodeError:
                self._send_json(400, {"error": "body must be JSON"})
                return
        count = self.service.record_confirmation(scene_id, note)
        self._send_json(200, {"ok": True, "scene_id": scene_id, "confirmations": count})


def make_server(
    root: str | Path,
    host: str = "127.0.0.1",
    port: int = 8000,
    verbose: bool = False,
) -> ThreadingHTTPServer:
    server = ThreadingHTTPServer((host, port), _Handler)
    server.service = AssetService(root)  # type: ignore[attr-defined]
    server.verbose = verbose  # type: ignore[attr-defined]
    return server
