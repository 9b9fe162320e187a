"""JSON/HTTP service for interactive seed exploration.

Sessions hold a root seed plus potential and an append-only event history;
replaying the history from the root reproduces the current seed exactly.
Mutations are serialized per session; distinct sessions proceed in parallel.
State directories persist sessions as JSON plus JSON-lines event logs.
"""

import json
import os
import re
import threading
import uuid
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlsplit

from .character import CharacterInput, CoefficientRule, cc
from .errors import DomainError, GuardError
from .laurent import LaurentPoly
from .mutation import FROZEN_SINK, FROZEN_SOURCE, detect_frozen_role, mutate
from .potential import Potential
from .quasi import build_psi
from .quiver import IceQuiver
from .reps import QuiverRep
from .seeds import Seed, enumerate_pattern, hatted_y_fraction, depth_guard


class ApiError(Exception):
    def __init__(self, status, message, witness=None):
        super().__init__(message)
        self.status = status
        self.witness = witness

    def payload(self):
        return {"code": self.status, "message": str(self),
                "witness": self.witness}


class Session:
    """A root seed with potential and the mutation events applied so far."""

    def __init__(self, session_id, root_seed, potential):
        self.id = session_id
        self.root_seed = root_seed
        self.root_potential = potential
        self.history = []
        self.current_seed = root_seed
        self.current_potential = potential
        self.lock = threading.Lock()

    def snapshot(self):
        seed = self.current_seed
        yhat = {}
        for v in seed.quiver.vertices:
            if v in seed.quiver.frozen_vertices:
                continue
            num, den = hatted_y_fraction(seed, v)
            yhat[str(v)] = {"num": num.term_list_json(),
                            "den": den.term_list_json()}
        return {
            "id": self.id,
            "current": seed.to_json(),
            "potential": self.current_potential.to_json(),
            "yhat": yhat,
            "history": list(self.history),
        }

    def replay(self, events):
        for event in events:
            self.apply_event(event)

    def apply_event(self, event):
        vertex = int(event["vertex"])
        seed, potential, extra = mutate_session_state(
            self.current_seed, self.current_potential, vertex,
            event.get("role"))
        self.current_seed = seed
        self.current_potential = potential
        self.history.append({"op": "mutate", "vertex": vertex,
                             **({"role": event["role"]} if event.get("role")
                                else {})})
        return extra

    def undo(self):
        if not self.history:
            raise ApiError(409, "nothing to undo")
        events = self.history[:-1]
        self.history = []
        self.current_seed = self.root_seed
        self.current_potential = self.root_potential
        self.replay(events)


def mutate_session_state(seed, potential, vertex, role_request=None):
    """One mutation step of a session: cluster entry, quiver, and potential.

    Unfrozen vertices exchange by the standard relation; frozen sources and
    sinks use the frozen-mutation rule, with the quasi-cluster map attached
    to the response.  The quiver and potential mutate together.
    """
    q = seed.quiver
    if vertex not in q.vertices:
        raise ApiError(404, "unknown vertex %d" % vertex)
    names = seed.names
    if vertex in q.frozen_vertices:
        role = detect_frozen_role(q, vertex)
        if role is None:
            raise ApiError(
                409, "frozen vertex %d is neither a source nor a sink of the "
                     "frozen subquiver" % vertex,
                witness={"vertex": vertex, "role": None})
        if role_request is not None:
            expected = FROZEN_SOURCE if role_request == "plus" else FROZEN_SINK
            if role != expected:
                raise ApiError(
                    409, "vertex %d has role %s, request asked for %s"
                         % (vertex, role, expected),
                    witness={"vertex": vertex, "role": role,
                             "requested": role_request})
        direction = "plus" if role == FROZEN_SOURCE else "minus"
        psi = build_psi(vertex, direction, q)
        if role == FROZEN_SOURCE:
            neighbours = [a.tgt for a in q.arrows_from(vertex) if a.frozen]
        else:
            neighbours = [a.src for a in q.arrows_to(vertex) if a.frozen]
        product = LaurentPoly.one(names)
        for u in neighbours:
            product = product * seed.entry(u)
        new_entry = product.exact_div(seed.entry(vertex))
        extra = {
            "kind": "frozen",
            "role": role,
            "psi": {name: img.term_list_json()
                    for name, img in sorted(psi.images.items())},
        }
    else:
        problems = q.mutable_at(vertex)
        if problems:
            raise ApiError(409, "vertex %d is not mutable: %s"
                           % (vertex, "; ".join(problems)), witness=problems)
        out_prod = LaurentPoly.one(names)
        for a in q.arrows_from(vertex):
            out_prod = out_prod * seed.entry(a.tgt)
        in_prod = LaurentPoly.one(names)
        for a in q.arrows_to(vertex):
            in_prod = in_prod * seed.entry(a.src)
        new_entry = (out_prod + in_prod).exact_div(seed.entry(vertex))
        extra = {
            "kind": "exchange",
            "vertex": vertex,
            "removed": seed.entry(vertex).term_list_json(),
            "added": new_entry.term_list_json(),
            "plusTerm": out_prod.term_list_json(),
            "minusTerm": in_prod.term_list_json(),
        }
    new_q, new_w, _ = mutate(q, potential, vertex)
    cluster = list(seed.cluster)
    cluster[q.vertices.index(vertex)] = new_entry
    new_seed = Seed(new_q, cluster, names, seed.tree_address + (vertex,))
    return new_seed, new_w, extra


class SessionStore:
    def __init__(self, state_dir=None):
        self.sessions = {}
        self.lock = threading.Lock()
        self.state_dir = state_dir
        if state_dir:
            os.makedirs(state_dir, exist_ok=True)

    def create(self, quiver_json, potential_json=None):
        quiver = IceQuiver.from_json(quiver_json)
        seed = Seed.initial(quiver)
        if potential_json:
            potential = Potential.from_json(quiver, potential_json)
        else:
            potential = Potential.zero(quiver)
        session_id = uuid.uuid4().hex[:12]
        session = Session(session_id, seed, potential)
        with self.lock:
            self.sessions[session_id] = session
        if self.state_dir:
            with open(self._root_path(session_id), "w") as fh:
                json.dump({"seed": seed.to_json(),
                           "potential": potential.to_json()}, fh,
                          sort_keys=True)
        return session

    def get(self, session_id):
        with self.lock:
            session = self.sessions.get(session_id)
        if session is not None:
            return session
        if self.state_dir:
            session = self._load(session_id)
            if session is not None:
                with self.lock:
                    self.sessions[session_id] = session
                return session
        raise ApiError(404, "unknown session %r" % session_id)

    def _root_path(self, session_id):
        return os.path.join(self.state_dir, "%s.json" % session_id)

    def _events_path(self, session_id):
        return os.path.join(self.state_dir, "%s.events.jsonl" % session_id)

    def _load(self, session_id):
        path = self._root_path(session_id)
        if not os.path.exists(path):
            return None
        with open(path) as fh:
            data = json.load(fh)
        seed = Seed.from_json(data["seed"])
        potential = Potential.from_json(seed.quiver, data["potential"])
        session = Session(session_id, seed, potential)
        events_path = self._events_path(session_id)
        if os.path.exists(events_path):
            with open(events_path) as fh:
                events = [json.loads(line) for line in fh if line.strip()]
            session.replay(events)
        return session

    def persist_event(self, session_id, event):
        if not self.state_dir:
            return
        with open(self._events_path(session_id), "a") as fh:
            fh.write(json.dumps(event, sort_keys=True) + "\n")

    def rewrite_events(self, session):
        if not self.state_dir:
            return
        with open(self._events_path(session.id), "w") as fh:
            for event in session.history:
                fh.write(json.dumps(event, sort_keys=True) + "\n")


def _cc_endpoint(body):
    quiver = IceQuiver.from_json(body["quiver"])
    rule = CoefficientRule(quiver)
    module = None
    if body.get("rep"):
        if body.get("repQuiver"):
            rep_quiver = IceQuiver.from_json(body["repQuiver"], renumber=False)
        else:
            unfrozen = [v for v in quiver.vertices
                        if v not in quiver.frozen_vertices]
            keep = set(unfrozen)
            arrows = [a for a in quiver.arrows
                      if a.src in keep and a.tgt in keep]
            rep_quiver = IceQuiver(unfrozen, [], arrows)
        module = QuiverRep.from_json(rep_quiver, body["rep"])
    value = cc(CharacterInput(body["g"], module), rule)
    return {"laurent": value.to_json(), "pretty": value.pretty()}


class Handler(BaseHTTPRequestHandler):
    store = None
    protocol_version = "HTTP/1.1"

    def log_message(self, fmt, *args):
        pass

    def _read_body(self):
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length) if length else b"{}"
        try:
            return json.loads(raw.decode("utf-8") or "{}")
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            raise ApiError(422, "malformed JSON body: %s" % exc)

    def _send(self, status, payload):
        body = json.dumps(payload, sort_keys=True).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Access-Control-Allow-Methods",
                         "GET, POST, OPTIONS")
        self.end_headers()
        self.wfile.write(body)

    def do_OPTIONS(self):
        self._send(204, {})

    def do_POST(self):
        try:
            # always drain the body first, or keep-alive sockets desync
            body = self._read_body()
            self._route_post(body)
        except ApiError as exc:
            self._send(exc.status, exc.payload())
        except GuardError as exc:
            self._send(409, {"code": 409, "message": str(exc),
                             "witness": _jsonable(exc.witness)})
        except DomainError as exc:
            self._send(422, {"code": 422, "message": str(exc),
                             "witness": _jsonable(exc.witness)})

    def do_GET(self):
        try:
            self._route_get()
        except ApiError as exc:
            self._send(exc.status, exc.payload())
        except GuardError as exc:
            self._send(409, {"code": 409, "message": str(exc),
                             "witness": _jsonable(exc.witness)})
        except DomainError as exc:
            self._send(422, {"code": 422, "message": str(exc),
                             "witness": _jsonable(exc.witness)})

    def _route_post(self, body):
        store = self.store
        if self.path == "/sessions":
            if "quiver" not in body:
                raise ApiError(422, "body must contain a quiver")
            session = store.create(body["quiver"], body.get("potential"))
            self._send(201, {"id": session.id})
            return
        match = re.fullmatch(r"/sessions/([0-9a-f]+)/mutate", self.path)
        if match:
            session = store.get(match.group(1))
            if "vertex" not in body:
                raise ApiError(422, "body must contain a vertex")
            with session.lock:
                try:
                    extra = session.apply_event(body)
                except DomainError as exc:
                    raise ApiError(409, str(exc), _jsonable(exc.witness))
                store.persist_event(session.id, session.history[-1])
                payload = {"session": session.snapshot(), "result": extra}
            self._send(200, payload)
            return
        match = re.fullmatch(r"/sessions/([0-9a-f]+)/undo", self.path)
        if match:
            session = store.get(match.group(1))
            with session.lock:
                session.undo()
                store.rewrite_events(session)
                payload = {"session": session.snapshot()}
            self._send(200, payload)
            return
        if self.path == "/cc":
            if "quiver" not in body or "g" not in body:
                raise ApiError(422, "body must contain quiver and g")
            self._send(200, _cc_endpoint(body))
            return
        raise ApiError(404, "no such endpoint %r" % self.path)

    def _route_get(self):
        store = self.store
        parsed = urlsplit(self.path)
        path = parsed.path
        match = re.fullmatch(r"/sessions/([0-9a-f]+)", path)
        if match:
            session = store.get(match.group(1))
            with session.lock:
                self._send(200, session.snapshot())
            return
        match = re.fullmatch(r"/sessions/([0-9a-f]+)/variables", path)
        if match:
            session = store.get(match.group(1))
            query = parse_qs(parsed.query)
            try:
                depth = int(query.get("depth", ["4"])[0])
            except ValueError:
                raise ApiError(422, "depth must be an integer")
            if depth > depth_guard():
                raise ApiError(409, "depth %d exceeds guard %d"
                               % (depth, depth_guard()))
            with session.lock:
                seed = session.current_seed
            registry = enumerate_pattern(seed, depth, dedupe=True)
            self._send(200, {
                "variables": [v.term_list_json()
                              for v in registry.cluster_variables],
                "pretty": sorted(v.pretty()
                                 for v in registry.cluster_variables),
                "stabilized": registry.stabilized,
            })
            return
        raise ApiError(404, "no such endpoint %r" % path)


def _jsonable(value):
    try:
        json.dumps(value)
        return value
    except (TypeError, ValueError):
        return repr(value)


def make_server(port, state_dir=None):
    handler = type("BoundHandler", (Handler,),
                   {"store": SessionStore(state_dir)})
    return ThreadingHTTPServer(("127.0.0.1", port), handler)


def run_server(port, state_dir=None):
    server = make_server(port, state_dir)
    print("serving on http://127.0.0.1:%d" % port)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.shutdown()
