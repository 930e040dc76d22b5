"""End-to-end CLI tests: output schemas, exit codes, determinism, rendering.

Exit-code contract: 0 success, 1 usage or invalid input, 2 validation failure
(cross-method disagreement or a failed self-check criterion).
"""

from __future__ import annotations

import json
import os
import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

from barreldimer import cli, transfer

SVG_NS = "{http://www.w3.org/2000/svg}"


def run_cli(*args: str, env_extra: dict | None = None) -> subprocess.CompletedProcess:
    env = dict(os.environ)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        [sys.executable, "-m", "barreldimer.cli", *args],
        capture_output=True,
        text=True,
        env=env,
        timeout=300,
    )


# ---------------------------------------------------------------------------
# count
# ---------------------------------------------------------------------------


def test_count_all_methods_agree(tmp_path):
    out = tmp_path / "count.json"
    rc = cli.main(["count", "--m", "4", "--k", "1", "--method", "all", "--out", str(out)])
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["agree"] is True
    assert doc["counts"] == {"brute": "41", "paths": "41", "transfer": "41"}


def test_count_transfer_large_k(tmp_path):
    out = tmp_path / "count.json"
    rc = cli.main(["count", "--m", "3", "--k", "40", "--out", str(out)])
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["counts"]["transfer"] == str(3 ** 42 + 1)


def test_count_counts_are_decimal_strings(tmp_path):
    out = tmp_path / "count.json"
    assert cli.main(["count", "--m", "5", "--k", "2", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    val = doc["counts"]["transfer"]
    assert isinstance(val, str) and val.isdigit()


def test_count_invalid_m_exits_one():
    proc = run_cli("count", "--m", "2", "--k", "0")
    assert proc.returncode == 1


def test_unknown_subcommand_exits_one():
    proc = run_cli("frobnicate")
    assert proc.returncode == 1


def test_bad_thread_env_exits_one():
    proc = run_cli("count", "--m", "3", "--k", "0", env_extra={"BARREL_THREADS": "abc"})
    assert proc.returncode == 1


def test_count_disagreement_exits_two(monkeypatch):
    real = transfer.count_matchings_transfer

    def skewed(m, k, **kw):
        return real(m, k, **kw) + 1

    monkeypatch.setattr(transfer, "count_matchings_transfer", skewed)
    monkeypatch.setattr(cli.transfer, "count_matchings_transfer", skewed)
    rc = cli.main(["count", "--m", "3", "--k", "1", "--method", "all", "--format", "text"])
    assert rc == 2


# ---------------------------------------------------------------------------
# growth / spectrum / asymptotic
# ---------------------------------------------------------------------------


def test_growth_json_fields(tmp_path):
    out = tmp_path / "growth.json"
    assert cli.main(["growth", "--m", "4", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["rho"] == pytest.approx(3.414213562373095, rel=1e-12)
    assert doc["p0"] == 2 and doc["n0"] == 2
    assert doc["entropy"] == pytest.approx(doc["entropy_gap_to_limit"] + 0.1615329736, abs=1e-8)


def test_spectrum_json_shape(tmp_path):
    out = tmp_path / "spec.json"
    assert cli.main(["spectrum", "--m", "4", "--p", "2", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["dimension"] == 6 and doc["rank"] == 6
    assert doc["max_residual"] <= 1e-9
    assert len(doc["entries"]) == 6
    entry = doc["entries"][0]
    assert set(entry) == {"eigenvalue", "omega_overlap", "residual", "roots", "selection"}
    assert all(len(z) == 2 for z in entry["roots"])
    top = max(doc["entries"], key=lambda e: e["eigenvalue"][0])
    assert top["eigenvalue"][0] == pytest.approx(3.414213562373095, rel=1e-9)


def test_asymptotic_aggregate_m3(tmp_path):
    out = tmp_path / "agg.json"
    assert cli.main(["asymptotic", "--m", "3", "--k", "4", "--aggregate", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["coefficient_on_base_pow_k"] == pytest.approx(9.0, rel=1e-12)
    assert doc["exact_sector"] == "729"
    assert doc["estimate_over_exact"] == pytest.approx(1.0, rel=1e-9)


def test_asymptotic_single_estimate(tmp_path):
    out = tmp_path / "single.json"
    rc = cli.main(
        ["asymptotic", "--m", "4", "--k", "3", "--eta", "1,0", "--lambda", "1,0", "--s", "0", "--out", str(out)]
    )
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["estimate"] == pytest.approx(8.492640687119282, rel=1e-12)
    assert doc["n"] == 2


def test_asymptotic_bad_ordering_exits_one():
    proc = run_cli("asymptotic", "--m", "4", "--k", "3", "--eta", "0,1", "--lambda", "1,0", "--s", "0")
    assert proc.returncode == 1


# ---------------------------------------------------------------------------
# validate
# ---------------------------------------------------------------------------


def test_validate_fast_passes(tmp_path):
    out = tmp_path / "validate.json"
    rc = cli.main(["validate", "--level", "fast", "--format", "json", "--out", str(out)])
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["passed"] is True
    assert doc["level"] == "fast"
    assert len(doc["criteria"]) == 13
    assert all(c["passed"] for c in doc["criteria"])
    assert [c["index"] for c in doc["criteria"]] == list(range(1, 14))


def test_validate_detects_corrupted_transfer_row(monkeypatch, tmp_path):
    """Corrupting a single cached transfer row must flip validate to exit 2."""
    real = transfer._count_rows

    def corrupted(m, parity_only=False):
        rows = real(m, parity_only)
        if m != 3:
            return rows
        (mask0, targets0), *rest = rows
        (t0, cnt0), *more = targets0
        return ((mask0, ((t0, cnt0 + 1), *more)), *rest)

    monkeypatch.setattr(transfer, "_count_rows", corrupted)
    out = tmp_path / "validate.json"
    transfer._sampler.cache_clear()
    try:
        rc = cli.main(["validate", "--level", "fast", "--format", "json", "--out", str(out)])
    finally:
        # drop any sampler tables built from the corrupted rows
        transfer._sampler.cache_clear()
    assert rc == 2
    doc = json.loads(out.read_text())
    assert doc["passed"] is False
    failed = [c["name"] for c in doc["criteria"] if not c["passed"]]
    assert failed


# ---------------------------------------------------------------------------
# sample
# ---------------------------------------------------------------------------


def test_sample_text_is_sorted_edge_ids(tmp_path):
    out = tmp_path / "s.txt"
    assert cli.main(["sample", "--m", "3", "--k", "0", "--samples", "2", "--seed", "1", "--format", "text", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 2
    for line in lines:
        ids = [int(x) for x in line.split()]
        assert ids == sorted(ids)
        assert len(ids) == 6


def test_sample_csv_frequency_table(tmp_path):
    out = tmp_path / "s.csv"
    assert cli.main(["sample", "--m", "3", "--k", "0", "--samples", "50", "--seed", "9", "--format", "csv", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "matching_edges,count"
    total = sum(int(ln.rsplit(",", 1)[1]) for ln in lines[1:])
    assert total == 50


def test_sample_byte_determinism():
    a = run_cli("sample", "--m", "4", "--k", "2", "--samples", "5", "--seed", "33", "--format", "json")
    b = run_cli("sample", "--m", "4", "--k", "2", "--samples", "5", "--seed", "33", "--format", "json")
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout
    doc = json.loads(a.stdout)
    assert len(doc["samples"]) == 5


# ---------------------------------------------------------------------------
# render
# ---------------------------------------------------------------------------


def svg_counts(text: str) -> dict[str, int]:
    root = ET.fromstring(text)
    return {
        tag: len(root.findall(f".//{SVG_NS}{tag}"))
        for tag in ("circle", "line", "polygon", "polyline")
    }


def test_render_graph_f30(tmp_path):
    out = tmp_path / "g.svg"
    assert cli.main(["render", "--m", "3", "--k", "0", "--what", "graph", "--out", str(out)]) == 0
    counts = svg_counts(out.read_text())
    assert counts["circle"] == 12
    assert counts["line"] == 21  # 18 edges, 3 of them wrapping into two stubs
    assert counts["polygon"] == 0


def test_render_tiling_rhombus_count(tmp_path):
    out = tmp_path / "t.svg"
    assert cli.main(["render", "--m", "6", "--k", "5", "--what", "tiling", "--seed", "42", "--out", str(out)]) == 0
    counts = svg_counts(out.read_text())
    assert counts["polygon"] == 42  # one rhombus per matched edge: 84 vertices / 2


def test_render_paths_walker_polylines(tmp_path):
    out = tmp_path / "p.svg"
    assert cli.main(["render", "--m", "3", "--k", "0", "--what", "paths", "--index", "2", "--out", str(out)]) == 0
    counts = svg_counts(out.read_text())
    assert counts["polyline"] >= 2  # 2 walkers; wrapping may split a trajectory


def test_render_deterministic_bytes(tmp_path):
    out1, out2 = tmp_path / "a.svg", tmp_path / "b.svg"
    for out in (out1, out2):
        assert cli.main(["render", "--m", "4", "--k", "1", "--what", "tiling", "--seed", "7", "--out", str(out)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


# ---------------------------------------------------------------------------
# bench
# ---------------------------------------------------------------------------


def test_bench_csv_schema_and_sanity(tmp_path):
    out = tmp_path / "bench.csv"
    assert cli.main(["bench", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "method,m,k,millis"
    rows = [ln.split(",") for ln in lines[1:]]
    assert all(len(r) == 4 for r in rows)
    millis = {(r[0], int(r[1]), int(r[2])): float(r[3]) for r in rows}
    assert millis[("brute", 6, 3)] > millis[("transfer", 6, 3)]
    assert ("transfer", 6, 50) in millis
