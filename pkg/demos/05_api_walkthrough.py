"""
Driving the HTTP API
====================

The service exposes the whole toolkit over JSON endpoints: catalog,
draft scoring with live recomputation, experiment freezing, progression
and histograms. This script runs the server in-process on a free port
and plays a short assessment session against it.
"""

import socket
import tempfile
import threading
import time

import httpx
import uvicorn

from readiness import SessionStore, load_bundled_catalog
from readiness.service import create_app

with socket.socket() as probe:
    probe.bind(("127.0.0.1", 0))
    port = probe.getsockname()[1]

with tempfile.TemporaryDirectory() as tmp:
    app = create_app(load_bundled_catalog(), SessionStore(tmp))
    config = uvicorn.Config(app, host="127.0.0.1", port=port, log_level="error")
    server = uvicorn.Server(config)
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    while not server.started:
        time.sleep(0.05)

    base = f"http://127.0.0.1:{port}"
    with httpx.Client(base_url=base) as client:
        catalog = client.get("/api/catalog").json()
        print(f"serving catalog: {catalog['name']} v{catalog['version']}")

        session_id = client.post("/api/sessions", json={"user": "alice"}).json()[
            "session_id"
        ]
        print(f"session: {session_id}")

        # answer one question; the response carries the live partial report
        put = client.put(
            f"/api/sessions/{session_id}/scores", json={"org.allocation.q1": 4}
        ).json()
        report = put["report"]
        print(
            f"after one answer: {report['scored_leaves']}/{report['total_leaves']} "
            f"scored, organization at {report['per_node']['org']['achievement']}"
        )

        # complete everything at 'above average' and freeze the experiment
        leaf_ids = [
            bar["node_id"] + ".q1"
            for bar in client.get(
                f"/api/sessions/{session_id}/histogram?level=control"
            ).json()["bars"]
        ]
        client.put(
            f"/api/sessions/{session_id}/scores", json={leaf: 3 for leaf in leaf_ids}
        )
        finished = client.post(f"/api/sessions/{session_id}/finish").json()
        print(
            f"experiment {finished['experiment']['index']} frozen at grade "
            f"{finished['experiment']['grade']}"
        )

        rows = client.get(f"/api/sessions/{session_id}/progression").json()["rows"]
        print(f"progression rows: {[(r['index'], r['grade']) for r in rows]}")

    server.should_exit = True
    thread.join(timeout=5)
