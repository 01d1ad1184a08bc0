"""Protocol conformance checks runnable against any embedding bridge."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import requests

UNIT_NORM_TOL = 1e-6
ORDER_TOL = 1e-6

PROBE_SENTENCES = [
    "flood waters rose across the northern valley",
    "rescue crews evacuated coastal residents overnight",
    "lawmakers debated the budget amendment",
    "the championship match ended in a shootout",
    "storm damage closed two mountain highways",
]


@dataclass
class CheckResult:
    check: str
    ok: bool
    detail: str


def _embed(endpoint: str, sentences: list[str], timeout: float):
    return requests.post(f"{endpoint}/embed", json={"sentences": sentences},
                         timeout=timeout)


def run_bridge_conformance(endpoint: str, expected_dim: int | None = None,
                           timeout: float = 10.0) -> list[CheckResult]:
    """Health, dim consistency, ordering, unit norm, empty-sentence rejection."""
    endpoint = endpoint.rstrip("/")
    results: list[CheckResult] = []

    resp = requests.get(f"{endpoint}/healthz", timeout=timeout)
    health_ok = resp.status_code == 200
    dim = None
    model = None
    if health_ok:
        body = resp.json()
        dim = body.get("dim")
        model = body.get("model")
        health_ok = isinstance(dim, int) and dim > 0 and isinstance(model, str)
    results.append(CheckResult(
        "healthz", health_ok, f"status={resp.status_code} dim={dim} model={model}"))
    if not health_ok:
        return results

    dim_ok = expected_dim is None or dim == expected_dim
    results.append(CheckResult(
        "dim_consistency_config", dim_ok,
        f"healthz dim={dim}, expected={expected_dim}"))

    resp = _embed(endpoint, PROBE_SENTENCES, timeout)
    batch = np.asarray(resp.json()["vectors"], dtype=np.float64) \
        if resp.status_code == 200 else None
    shape_ok = (resp.status_code == 200
                and resp.json().get("dim") == dim
                and batch.shape == (len(PROBE_SENTENCES), dim))
    results.append(CheckResult(
        "length_and_dim", shape_ok,
        f"status={resp.status_code} "
        f"shape={None if batch is None else batch.shape}"))
    if not shape_ok:
        return results

    norms = np.linalg.norm(batch, axis=1)
    worst = float(np.abs(norms - 1.0).max())
    results.append(CheckResult(
        "unit_norm", worst <= UNIT_NORM_TOL, f"max |norm-1| = {worst:.2e}"))

    worst_dev = 0.0
    for i, sentence in enumerate(PROBE_SENTENCES):
        single = np.asarray(_embed(endpoint, [sentence], timeout).json()["vectors"][0])
        worst_dev = max(worst_dev, float(np.abs(single - batch[i]).max()))
    results.append(CheckResult(
        "ordering", worst_dev <= ORDER_TOL,
        f"max |batch[i] - single| = {worst_dev:.2e}"))

    resp = _embed(endpoint, ["fine sentence", "   "], timeout)
    reject_ok = resp.status_code == 400 and "1" in resp.text
    results.append(CheckResult(
        "empty_sentence_400", reject_ok,
        f"status={resp.status_code} body={resp.text[:120]!r}"))
    return results
