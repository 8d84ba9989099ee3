import numpy as np
import pytest
from fastapi.testclient import TestClient

from hopf4d.scene import build_scene, read_scene, write_scene
from hopf4d.service import create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


def test_health(client):
    r = client.get("/health")
    assert r.status_code == 200
    assert r.json() == {"status": "ok"}


def test_scene_response_is_canonical_bytes(client):
    req = {"request": "fiber", "phi": 0.3, "psi": 1.2, "samples": 32}
    r = client.post("/scene", json=req)
    assert r.status_code == 200
    assert r.content == write_scene(build_scene(req))
    doc = read_scene(r.content)
    assert doc.by_id("fiber-stereo").meta["group"] == "fiber"


def test_math_domain_error_maps_to_422_with_name(client):
    r = client.post("/scene", json={"request": "torus", "mode": "kappa", "psi": 0.0})
    assert r.status_code == 422
    assert r.json()["error"] == "DegenerateTorus"


def test_unknown_request_kind(client):
    r = client.post("/scene", json={"request": "wormhole"})
    assert r.status_code == 422
    assert r.json()["error"] == "UnknownRequest"


def test_malformed_body(client):
    r = client.post("/scene", content=b"not json", headers={"content-type": "application/json"})
    assert r.status_code == 422
    assert r.json()["error"] == "ParseError"
    r = client.post("/scene", json=[1, 2, 3])
    assert r.status_code == 422
    assert r.json()["error"] == "BadRequest"


def test_missing_parameters(client):
    r = client.post("/scene", json={"request": "fiber", "phi": 0.3})
    assert r.status_code == 422
    assert r.json()["error"] == "BadRequest"


def test_viewer_reconstruction_matches_engine(client):
    # the viewer reconstructs 4-space points from the xi/omega pair; check the
    # reconstruction really is exact on served documents
    req = {"request": "fiber", "phi": 1.1, "psi": 0.9, "samples": 64}
    doc = read_scene(client.post("/scene", json=req).content)
    xi = doc.by_id("fiber-xi").vertices
    om = doc.by_id("fiber-omega").vertices
    rebuilt = np.stack([xi[:, 0], xi[:, 1], xi[:, 2], -om[:, 1]], axis=1)
    core = rebuilt - np.array([0.0, 1.0, 0.0, 1.0])
    assert np.max(np.abs(np.linalg.norm(core, axis=1) - 1.0)) < 1e-12
