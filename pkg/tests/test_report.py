"""Batch drivers, manifests, and flat-file formats."""

import json
import math

import numpy as np
import pytest

from skewsim import RngStream, SkewConfig, run_chain, run_chain_batch
from skewsim.report import (
    CHAIN_CSV_HEADER,
    PATHS_CSV_HEADER,
    TOOL_VERSION,
    ChainBatch,
    RunManifest,
    format_cell,
    write_csv,
    write_json,
)

REFERENCE = SkewConfig(x=1.0, beta1=0.5, beta2=0.25)


class TestFormatCell:
    def test_bool_before_int(self):
        # bool is an int subclass; the boolean spelling must win
        assert format_cell(True) == "true"
        assert format_cell(False) == "false"
        assert format_cell(np.bool_(True)) == "true"

    def test_int(self):
        assert format_cell(7) == "7"
        assert format_cell(np.int64(-3)) == "-3"

    def test_float_round_trip(self):
        for v in (0.1, 1.0 / 3.0, 2.0 ** -52, 1e300, -1.2345678901234567):
            assert float(format_cell(v)) == v

    def test_nan(self):
        assert format_cell(float("nan")) == "nan"

    def test_string_passthrough(self):
        assert format_cell("uStar") == "uStar"


class TestWriters:
    def test_csv_layout(self, tmp_path):
        p = tmp_path / "t.csv"
        write_csv(str(p), ("a", "b"), [(1, True), (0.5, False)])
        text = p.read_text()
        assert text == "a,b\n1,true\n0.5,false\n"

    def test_json_layout(self, tmp_path):
        p = tmp_path / "t.json"
        write_json(str(p), {"b": 1, "a": [1, 2]})
        text = p.read_text()
        assert text == json.dumps({"b": 1, "a": [1, 2]}, sort_keys=True, indent=2) + "\n"
        assert text.index('"a"') < text.index('"b"')

    def test_csv_headers_pinned(self):
        assert CHAIN_CSV_HEADER == ("index", "uStar", "censored", "jumpCount", "secondLocalTime")
        assert PATHS_CSV_HEADER == ("pathIndex", "tStar", "uStarPath", "hit")


class TestManifest:
    def test_json_key_set(self):
        m = RunManifest(
            config_echo=REFERENCE.to_json_dict(),
            seed=5,
            trajectory_count=10,
            eps=1e-9,
            max_jumps=100,
            tool_version=TOOL_VERSION,
            wall_time=0.25,
            censored_fraction=0.0,
        )
        d = m.to_json_dict()
        assert set(d) == {
            "configEcho",
            "seed",
            "trajectoryCount",
            "eps",
            "maxJumps",
            "toolVersion",
            "wallTime",
            "censoredFraction",
        }
        assert d["seed"] == 5
        assert d["configEcho"] == {"x": 1.0, "beta1": 0.5, "beta2": 0.25}
        assert d["toolVersion"] == TOOL_VERSION


class TestChainBatch:
    def test_matches_direct_runs(self):
        batch = run_chain_batch(REFERENCE, seed=61, n=50)
        for i in (0, 17, 49):
            res = run_chain(REFERENCE, RngStream(seed=61, stream_index=i)).result
            assert batch.u_star[i] == res.u_star
            assert batch.jump_count[i] == res.jump_count
            assert batch.second_local_time[i] == res.second_local_time
        assert batch.n == 50
        assert batch.censored_fraction == 0.0
        assert batch.wall_time > 0.0

    def test_rows_align(self):
        batch = run_chain_batch(REFERENCE, seed=61, n=5)
        rows = list(batch.rows())
        assert rows[3][0] == 3
        assert rows[3][1] == float(batch.u_star[3])
        assert isinstance(rows[3][2], bool)
        assert isinstance(rows[3][3], int)

    def test_deterministic(self):
        a = run_chain_batch(REFERENCE, seed=62, n=40)
        b = run_chain_batch(REFERENCE, seed=62, n=40)
        assert np.array_equal(a.u_star, b.u_star)
        assert np.array_equal(a.jump_count, b.jump_count)

    def test_thread_count_invisible(self):
        # n crosses the shard boundary so the pool actually engages
        a = run_chain_batch(REFERENCE, seed=63, n=4100, threads=1)
        b = run_chain_batch(REFERENCE, seed=63, n=4100, threads=2)
        assert np.array_equal(a.u_star, b.u_star)
        assert np.array_equal(a.censored, b.censored)
        assert np.array_equal(a.jump_count, b.jump_count)
        assert np.array_equal(a.second_local_time, b.second_local_time)

    def test_negneg_batch(self):
        cfg = SkewConfig(x=1.0, beta1=-0.25, beta2=-0.5)
        batch = run_chain_batch(cfg, seed=64, n=30, negneg=True)
        assert np.all(batch.u_star > 0.0)
        assert np.all(batch.second_local_time > 0.0)

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            run_chain_batch(REFERENCE, seed=0, n=0)

    def test_censored_fraction_counts(self):
        batch = run_chain_batch(REFERENCE, seed=65, n=20, max_jumps=1)
        assert batch.censored_fraction == 1.0
        assert math.isclose(
            ChainBatch(
                u_star=batch.u_star[:10],
                censored=batch.censored[:10],
                jump_count=batch.jump_count[:10],
                second_local_time=batch.second_local_time[:10],
                wall_time=0.0,
            ).censored_fraction,
            1.0,
        )
