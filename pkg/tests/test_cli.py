import json
import subprocess
import sys

import pytest

from cutbal.graph import CutSet, cut_weight, read_edge_list


def run_cli(args, stdin=None):
    return subprocess.run([sys.executable, "-m", "cutbal.cli", *args],
                          input=stdin, capture_output=True, timeout=300)


class TestGen:
    def test_eulerian_round_trip(self):
        out = run_cli(["gen", "eulerian", "10", "24", "--seed", "7"])
        assert out.returncode == 0
        g = read_edge_list(out.stdout.decode())
        assert g.n == 10 and g.m == 24

    def test_byte_identical_reruns(self):
        a = run_cli(["gen", "matching", "8", "--seed", "5"])
        b = run_cli(["gen", "matching", "8", "--seed", "5"])
        assert a.stdout == b.stdout
        assert b"seed=5" in a.stdout

    @pytest.mark.parametrize("args", [
        ["gen", "chain", "16", "--beta", "2", "--eps", "0.5", "--seed", "1"],
        ["gen", "gamma", "12"],
        ["gen", "multiclass", "16", "32", "--classes", "3", "--seed", "1"],
    ])
    def test_remaining_families_produce_valid_edge_lists(self, args):
        out = run_cli(args)
        assert out.returncode == 0
        g = read_edge_list(out.stdout.decode())
        assert g.n in (12, 16) and g.m > 0

    def test_infeasible_params_exit_2(self):
        out = run_cli(["gen", "eulerian", "8", "4"])
        assert out.returncode == 2
        assert b"error" in out.stderr

    def test_foreach_lb_sidecar(self, tmp_path):
        sidecar = tmp_path / "queries.json"
        out = run_cli(["gen", "foreach-lb", "12", "--beta", "4", "--eps", "0.25",
                       "--seed", "3", "--queries", str(sidecar)])
        assert out.returncode == 0
        g = read_edge_list(out.stdout.decode())
        doc = json.loads(sidecar.read_text())
        assert len(doc["bits"]) == len(doc["queries"]) == 32
        q = doc["queries"][0]
        cut = CutSet(q["cut"], g.n)
        assert cut_weight(g, cut) == q["base"] + 1.0 + doc["bits"][q["bit"]]


class TestPipeline:
    def test_gen_sketch_query_exact(self, tmp_path):
        gen = run_cli(["gen", "eulerian", "12", "24", "--seed", "7"])
        sketch = tmp_path / "sk.bin"
        out = run_cli(["sketch", "--beta", "1", "--eps", "0.25", "--seed", "7",
                       "-o", str(sketch)], stdin=gen.stdout)
        assert out.returncode == 0
        assert b"seed=7" in out.stderr
        q = run_cli(["query", "--sketch", str(sketch), "--cut", "0,1,2"])
        assert q.returncode == 0
        g = read_edge_list(gen.stdout.decode())
        truth = cut_weight(g, CutSet({0, 1, 2}, 12))
        assert f"total={truth!r}".encode() in q.stdout

    def test_sketch_binary_matches_for_same_seed(self, tmp_path):
        gen = run_cli(["gen", "eulerian", "12", "40", "--seed", "1"]).stdout
        a = run_cli(["sketch", "--beta", "1", "--eps", "0.4", "--seed", "2"],
                    stdin=gen)
        b = run_cli(["sketch", "--beta", "1", "--eps", "0.4", "--seed", "2"],
                    stdin=gen)
        assert a.stdout == b.stdout

    def test_fast_sketch_and_json_query(self, tmp_path):
        gen = run_cli(["gen", "eulerian", "12", "40", "--seed", "1"]).stdout
        sketch = tmp_path / "fast.bin"
        out = run_cli(["sketch", "--fast", "--beta", "1", "--eps", "0.4",
                       "--seed", "2", "-o", str(sketch)], stdin=gen)
        assert out.returncode == 0
        q = run_cli(["query", "--sketch", str(sketch), "--cut", "0,1",
                     "--format", "json"])
        doc = json.loads(q.stdout.decode())
        assert doc["kind"] == "fast"
        assert set(doc["estimates"][0]) == {"cut", "total", "i_s", "j_s"}

    def test_cut_file_of_bit_strings(self, tmp_path):
        gen = run_cli(["gen", "eulerian", "8", "16", "--seed", "4"]).stdout
        sketch = tmp_path / "sk.bin"
        run_cli(["sketch", "--beta", "1", "--eps", "0.25", "--seed", "4",
                 "-o", str(sketch)], stdin=gen)
        cuts = tmp_path / "cuts.txt"
        cuts.write_text("10101010\n11110000\n")
        q = run_cli(["query", "--sketch", str(sketch), "--cut", f"@{cuts}"])
        assert q.returncode == 0
        assert len(q.stdout.decode().strip().splitlines()) == 2

    def test_json_sketch_dump(self):
        gen = run_cli(["gen", "eulerian", "8", "16", "--seed", "4"]).stdout
        out = run_cli(["sketch", "--beta", "1", "--eps", "0.25", "--seed", "4",
                       "--format", "json"], stdin=gen)
        doc = json.loads(out.stdout.decode())
        assert doc["kind"] == "foreach" and doc["seed"] == 4


class TestSparsify:
    def test_metadata_comments_and_round_trip(self):
        gen = run_cli(["gen", "eulerian", "10", "200", "--seed", "3"]).stdout
        out = run_cli(["sparsify", "--beta", "1", "--eps", "0.9", "--d", "2.5",
                       "--seed", "11"], stdin=gen)
        assert out.returncode == 0
        text = out.stdout.decode()
        assert "# rho=" in text and "seed=11" in text
        h = read_edge_list(text)
        assert h.n == 10


class TestStrengthAndMaxflow:
    def test_strength_lists_edges_and_sum(self):
        gen = run_cli(["gen", "eulerian", "8", "24", "--seed", "2"]).stdout
        out = run_cli(["strength"], stdin=gen)
        assert out.returncode == 0
        lines = out.stdout.decode().strip().splitlines()
        assert len(lines) == 25  # one per edge plus the sum line
        assert lines[-1].startswith("# sum weight/strength")

    def test_maxflow_reports_value_and_trace(self):
        gen = run_cli(["gen", "eulerian", "10", "40", "--seed", "2"]).stdout
        out = run_cli(["maxflow", "--source", "0", "--sink", "9", "--seed", "4"],
                      stdin=gen)
        assert out.returncode == 0
        text = out.stdout.decode()
        assert "seed=4" in text and "alpha=" in text and "value=" in text


class TestVerifyAndBench:
    def test_verify_strength_passes(self):
        out = run_cli(["verify", "strength", "--trials", "5"])
        assert out.returncode == 0
        assert b"PASS" in out.stdout

    def test_verify_foreach_passes(self):
        out = run_cli(["verify", "foreach"])
        assert out.returncode == 0

    def test_bench_variance_worker_count_does_not_change_results(self):
        import re

        def stats(workers):
            out = run_cli(["bench", "variance", "--trials", "200",
                           "--workers", workers, "--seed", "3"])
            assert out.returncode == 0
            return re.findall(r"mean [\d.]+ \(truth [\d.]+\), var [\d.]+",
                              out.stdout.decode())

        assert stats("1") == stats("2")

    def test_bench_kernels_reports_backends(self):
        out = run_cli(["bench", "kernels", "--seed", "1"])
        assert out.returncode == 0
        assert b"masks" in out.stdout

    def test_unknown_subcommand_exits_2(self):
        out = run_cli(["frobnicate"])
        assert out.returncode == 2

    def test_missing_sketch_file_exits_2(self):
        out = run_cli(["query", "--sketch", "/nonexistent.bin", "--cut", "0"])
        assert out.returncode == 2
