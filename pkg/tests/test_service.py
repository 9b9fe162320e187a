import json
import threading
import urllib.error
import urllib.request

import pytest

from icecluster.generators import triangle_example
from icecluster.service import make_server

PORT = 8452


@pytest.fixture(scope="module")
def server():
    srv = make_server(PORT)
    thread = threading.Thread(target=srv.serve_forever, daemon=True)
    thread.start()
    yield srv
    srv.shutdown()


def request(method, path, body=None):
    data = json.dumps(body).encode() if body is not None else None
    req = urllib.request.Request(
        "http://127.0.0.1:%d%s" % (PORT, path), data=data, method=method,
        headers={"Content-Type": "application/json"})
    try:
        with urllib.request.urlopen(req) as resp:
            return resp.status, json.loads(resp.read())
    except urllib.error.HTTPError as err:
        return err.code, json.loads(err.read())


@pytest.fixture
def session_id(server):
    entry = triangle_example()
    status, out = request("POST", "/sessions", {
        "quiver": entry.quiver.to_json(),
        "potential": entry.potential.to_json()})
    assert status == 201
    return out["id"]


def test_create_and_fetch(session_id):
    status, out = request("GET", "/sessions/" + session_id)
    assert status == 200
    assert out["yhat"]["1"] == {
        "num": [{"coeff": "1", "exponents": [0, 1, 0]}],
        "den": [{"coeff": "1", "exponents": [0, 0, 1]}]}


def test_mutate_returns_exchange_relation(session_id):
    status, out = request("POST", "/sessions/%s/mutate" % session_id,
                          {"vertex": 1})
    assert status == 200
    assert out["result"]["kind"] == "exchange"
    assert out["result"]["added"] == [
        {"coeff": "1", "exponents": [-1, 0, 1]},
        {"coeff": "1", "exponents": [-1, 1, 0]}]


def test_frozen_mutation_attaches_psi(session_id):
    status, out = request("POST", "/sessions/%s/mutate" % session_id,
                          {"vertex": 3})
    assert status == 200
    assert out["result"]["kind"] == "frozen"
    assert out["result"]["role"] == "frozenSource"
    assert out["result"]["psi"]["p2"] == [
        {"coeff": "1", "exponents": [0, 1, -1]}]


def test_frozen_role_mismatch_409(session_id):
    status, out = request("POST", "/sessions/%s/mutate" % session_id,
                          {"vertex": 2, "role": "plus"})
    assert status == 409
    assert out["witness"]["role"] == "frozenSink"


def test_unknown_session_404(server):
    status, _ = request("GET", "/sessions/beef00000000")
    assert status == 404


def test_malformed_json_422(server, session_id):
    req = urllib.request.Request(
        "http://127.0.0.1:%d/sessions/%s/mutate" % (PORT, session_id),
        data=b"{not json", method="POST",
        headers={"Content-Type": "application/json"})
    try:
        with urllib.request.urlopen(req) as resp:
            status = resp.status
    except urllib.error.HTTPError as err:
        status = err.code
    assert status == 422


def test_undo_restores_previous_state(session_id):
    _, before = request("GET", "/sessions/" + session_id)
    status, mutated = request("POST", "/sessions/%s/mutate" % session_id,
                              {"vertex": 1})
    assert status == 200
    status, out = request("POST", "/sessions/%s/undo" % session_id)
    assert status == 200
    assert out["session"]["current"] == before["current"]


def test_variables_endpoint(session_id):
    status, out = request("GET",
                          "/sessions/%s/variables?depth=3" % session_id)
    assert status == 200
    assert sorted(out["pretty"]) == ["(p2 + p1)/x1", "x1"]
    assert out["stabilized"]


def test_cc_endpoint(server):
    entry = triangle_example()
    status, out = request("POST", "/cc", {
        "quiver": entry.quiver.to_json(),
        "g": [-1, 0, 1],
        "rep": {"dims": [1], "maps": {}},
    })
    assert status == 200
    assert out["pretty"] == "(p2 + p1)/x1"


def test_history_replay_determinism(tmp_path):
    """Serializing, reloading, and replaying a session reproduces the current
    seed JSON bit for bit."""
    state_dir = str(tmp_path / "state")
    srv = make_server(8453, state_dir)
    thread = threading.Thread(target=srv.serve_forever, daemon=True)
    thread.start()
    try:
        def req2(method, path, body=None):
            data = json.dumps(body).encode() if body is not None else None
            r = urllib.request.Request(
                "http://127.0.0.1:8453" + path, data=data, method=method,
                headers={"Content-Type": "application/json"})
            with urllib.request.urlopen(r) as resp:
                return json.loads(resp.read())

        entry = triangle_example()
        out = req2("POST", "/sessions", {
            "quiver": entry.quiver.to_json(),
            "potential": entry.potential.to_json()})
        sid = out["id"]
        req2("POST", "/sessions/%s/mutate" % sid, {"vertex": 1})
        req2("POST", "/sessions/%s/mutate" % sid, {"vertex": 1})
        before = req2("GET", "/sessions/" + sid)
        snapshot = json.dumps(before["current"], sort_keys=True)
    finally:
        srv.shutdown()

    # a fresh server over the same state dir replays the event log
    srv2 = make_server(8454, state_dir)
    thread = threading.Thread(target=srv2.serve_forever, daemon=True)
    thread.start()
    try:
        r = urllib.request.Request("http://127.0.0.1:8454/sessions/" + sid)
        with urllib.request.urlopen(r) as resp:
            after = json.loads(resp.read())
        assert json.dumps(after["current"], sort_keys=True) == snapshot
        assert after["history"] == before["history"]
    finally:
        srv2.shutdown()


def test_concurrent_sessions_do_not_interfere(server):
    entry = triangle_example()
    ids = []
    for _ in range(4):
        _, out = request("POST", "/sessions",
                         {"quiver": entry.quiver.to_json(),
                          "potential": entry.potential.to_json()})
        ids.append(out["id"])

    errors = []

    def hammer(sid):
        try:
            for _ in range(4):
                request("POST", "/sessions/%s/mutate" % sid, {"vertex": 1})
            _, out = request("GET", "/sessions/" + sid)
            # an even number of involutive mutations restores the cluster
            assert out["current"]["cluster"][0] == [
                {"coeff": "1", "exponents": [1, 0, 0]}]
        except Exception as exc:  # noqa: BLE001 - surfaced via the list
            errors.append(exc)

    threads = [threading.Thread(target=hammer, args=(sid,)) for sid in ids]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert errors == []
