"""Bridge conformance and the engine-through-bridge benchmark.

Requires the reference bridge to be built first (``npm run build`` in
``bridge/``); the module skips cleanly otherwise.
"""

import shutil
import socket
import subprocess
import time
from pathlib import Path

import numpy as np
import pytest
import requests

from storystream.conformance import run_bridge_conformance
from storystream.core import WindowConfig, pane_index
from storystream.encoder import BridgeEncoder, HashedEncoder
from storystream.engine import run_stream
from storystream.io import article_from_record
from storystream.metrics import windowed_eval
from storystream.synth import gen_synthetic

SERVER_JS = Path(__file__).resolve().parent.parent / "bridge" / "dist" / "server.js"
DIM = 256
SEED = 42

pytestmark = pytest.mark.skipif(
    shutil.which("node") is None or not SERVER_JS.exists(),
    reason="bridge not built (run `npm install && npm run build` in bridge/)")


def free_port() -> int:
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


@pytest.fixture(scope="module")
def bridge_endpoint():
    port = free_port()
    proc = subprocess.Popen(
        ["node", str(SERVER_JS), "--port", str(port), "--dim", str(DIM),
         "--seed", str(SEED), "--max-batch", "64"],
        stdout=subprocess.DEVNULL, stderr=subprocess.DEVNULL)
    endpoint = f"http://127.0.0.1:{port}"
    try:
        deadline = time.time() + 15
        while True:
            try:
                if requests.get(f"{endpoint}/healthz", timeout=1).status_code == 200:
                    break
            except requests.RequestException:
                pass
            if time.time() > deadline:
                raise RuntimeError("bridge did not come up in 15s")
            time.sleep(0.1)
        yield endpoint
    finally:
        proc.terminate()
        proc.wait(timeout=10)


def test_bridge_protocol_conformance(bridge_endpoint):
    results = run_bridge_conformance(bridge_endpoint, expected_dim=DIM)
    failed = [r for r in results if not r.ok]
    print(f"[{'PASS' if not failed else 'FAIL'}] bridge_conformance: "
          + "; ".join(f"{r.check}={'ok' if r.ok else r.detail}" for r in results))
    assert not failed, failed


def test_bridge_matches_builtin_encoder(bridge_endpoint):
    sentences = ["storm surge floods the valley", "crews rescue stranded residents",
                 "parliament debates the budget", "s0w1 s0w2 s0w3 nzw1"]
    remote = BridgeEncoder(bridge_endpoint, dim=DIM).encode_batch(sentences)
    local = HashedEncoder(DIM, SEED).encode_batch(sentences)
    assert np.allclose(remote, local, atol=1e-12)


def test_engine_through_bridge_meets_benchmark_bar(bridge_endpoint):
    records = gen_synthetic(stories=4, per_story_per_pane=6, panes=10,
                            vocab_size=12, noise_ratio=0.3, seed=7)
    config = WindowConfig(min_story_size=6, encoder_dim=DIM, rng_seed=SEED)
    articles = [article_from_record(r, config.slide_seconds) for r in records]
    encoder = BridgeEncoder(bridge_endpoint, dim=DIM, batch_size=64)
    reports = run_stream(articles, config, encoder)
    meta = {r["id"]: (pane_index(r["time"], config.slide_seconds), r["label"])
            for r in records}
    _, averages = windowed_eval(reports, meta, config.window_slides)
    ok = averages["b3_f1"] >= 0.90
    print(f"[{'PASS' if ok else 'FAIL'}] bridge_benchmark: "
          f"B3-F1={averages['b3_f1']:.4f} (>=0.90) via {bridge_endpoint}")
    assert ok, averages
