import json
import threading
import urllib.error
import urllib.request

import pytest

from sceneforge.cli import run_command
from sceneforge.serve import make_server


@pytest.fixture(scope="module")
def bundle_root(tmp_path_factory):
    root = tmp_path_factory.mktemp("serve_root")
    assert run_command(
        [
            "pipeline",
            "--seed", "41",
            "--candidates", "10",
            "--k", "2",
            "--count-min", "0",
            "--count-max", "3",
            "--num-sets", "2000",
            "--out-dir", str(root),
        ]
    ) == 0
    return root


@pytest.fixture(scope="module")
def server(bundle_root):
    srv = make_server(bundle_root, host="127.0.0.1", port=0)
    thread = threading.Thread(target=srv.serve_forever, daemon=True)
    thread.start()
    yield srv
    srv.shutdown()
    srv.server_close()


def url(server, path):
    host, port = server.server_address[:2]
    return f"http://{host}:{port}{path}"


def get(server, path, headers=None):
    req = urllib.request.Request(url(server, path), headers=headers or {})
    with urllib.request.urlopen(req) as resp:
        return resp.status, dict(resp.headers), resp.read()


def post(server, path, payload=None):
    data = json.dumps(payload or {}).encode()
    req = urllib.request.Request(
        url(server, path), data=data, headers={"Content-Type": "application/json"}
    )
    with urllib.request.urlopen(req) as resp:
        return resp.status, json.loads(resp.read())


class TestEndpoints:
    def test_scene_list(self, server):
        status, headers, body = get(server, "/scenes")
        assert status == 200
        doc = json.loads(body)
        assert len(doc) == 2
        assert all("id" in entry and "overlay" in entry for entry in doc)

    def test_overlay_metadata(self, server):
        _, _, body = get(server, "/scenes")
        scene_id = json.loads(body)[0]["id"]
        status, headers, body = get(server, f"/scenes/{scene_id}/overlay")
        assert status == 200
        meta = json.loads(body)
        assert meta["scene_id"] == scene_id
        assert len(meta["objects"]) == 5
        assert "ETag" in headers

    def test_image_bytes_match_disk(self, server, bundle_root):
        _, _, body = get(server, "/scenes")
        scene_id = json.loads(body)[0]["id"]
        status, headers, img = get(server, f"/scenes/{scene_id}/image")
        assert status == 200
        assert headers["Content-Type"] == "image/png"
        disk = (bundle_root / "overlays" / scene_id / "color.png").read_bytes()
        assert img == disk

    def test_mask_layers(self, server):
        _, _, body = get(server, "/scenes")
        scene_id = json.loads(body)[0]["id"]
        for k in range(5):
            status, headers, img = get(server, f"/scenes/{scene_id}/masks/{k}")
            assert status == 200
            assert img[:8] == b"\x89PNG\r\n\x1a\n"
        with pytest.raises(urllib.error.HTTPError) as exc:
            get(server, f"/scenes/{scene_id}/masks/9")
        assert exc.value.code == 404

    def test_etag_304(self, server):
        _, _, body = get(server, "/scenes")
        scene_id = json.loads(body)[0]["id"]
        status, headers, img = get(server, f"/scenes/{scene_id}/image")
        etag = headers["ETag"]
        req = urllib.request.Request(
            url(server, f"/scenes/{scene_id}/image"),
            headers={"If-None-Match": etag},
        )
        with pytest.raises(urllib.error.HTTPError) as exc:
            urllib.request.urlopen(req)
        assert exc.value.code == 304

    def test_unknown_scene_404(self, server):
        with pytest.raises(urllib.error.HTTPError) as exc:
            get(server, "/scenes/not-a-scene/image")
        assert exc.value.code == 404

    def test_unknown_route_404(self, server):
        with pytest.raises(urllib.error.HTTPError) as exc:
            get(server, "/teapot")
        assert exc.value.code == 404

    def test_confirmation_appends_to_log(self, server, bundle_root):
        _, _, body = get(server, "/scenes")
        scene_id = json.loads(body)[0]["id"]
        status, doc = post(server, f"/scenes/{scene_id}/confirm", {"note": "replicated"})
        assert status == 200
        assert doc["ok"] is True
        log = bundle_root / "confirmations.jsonl"
        lines = [json.loads(l) for l in log.read_text().splitlines()]
        assert lines[-1]["scene_id"] == scene_id
        assert lines[-1]["note"] == "replicated"
        # a second confirmation appends another record
        before = len(lines)
        post(server, f"/scenes/{scene_id}/confirm")
        lines = log.read_text().splitlines()
        assert len(lines) == before + 1

    def test_confirm_unknown_scene_404(self, server):
        with pytest.raises(urllib.error.HTTPError) as exc:
            post(server, "/scenes/ghost/confirm")
        assert exc.value.code == 404

    def test_cors_preflight(self, server):
        req = urllib.request.Request(
            url(server, "/scenes"), method="OPTIONS"
        )
        with urllib.request.urlopen(req) as resp:
            assert resp.status == 204
            assert resp.headers["Access-Control-Allow-Origin"] == "*"
            assert "POST" in resp.headers["Access-Control-Allow-Methods"]
