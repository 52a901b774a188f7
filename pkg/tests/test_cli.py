import json
import subprocess
import sys

import pytest

from tdcycles.cli import BENCH_HEADER, RunReport, main
from tdcycles.graph import (
    Graph,
    complete_graph,
    cycle_graph,
    disjoint_union,
    format_graph,
    parse_forest,
    path_graph,
    validate_forest,
)


@pytest.fixture
def gfile(tmp_path):
    def write(g, name="g.txt"):
        p = tmp_path / name
        p.write_text(format_graph(g))
        return str(p)
    return write


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


class TestSolve:
    def test_hc_yes(self, capsys, gfile):
        code, out, _ = run(capsys, "solve", gfile(cycle_graph(5)), "--problem", "hc")
        assert (code, out) == (0, "yes\n")

    def test_hc_no(self, capsys, gfile):
        code, out, _ = run(capsys, "solve", gfile(path_graph(4)), "--problem", "hc")
        assert (code, out) == (1, "no\n")

    def test_pcc_two_triangles(self, capsys, gfile):
        g = gfile(disjoint_union(complete_graph(3), complete_graph(3)))
        assert run(capsys, "solve", g, "--problem", "pcc", "-k", 2, "-l", 6)[0] == 0
        assert run(capsys, "solve", g, "--problem", "pcc", "-k", 1, "-l", 6)[0] == 1

    def test_min_cycle_cover(self, capsys, gfile):
        g = gfile(disjoint_union(complete_graph(3), complete_graph(3)))
        assert run(capsys, "solve", g, "--problem", "min-cycle-cover")[:2] == (0, "2\n")
        assert run(capsys, "solve", gfile(path_graph(4)), "--problem", "min-cycle-cover")[:2] == (1, "none\n")

    def test_long_problems(self, capsys, gfile):
        g = gfile(path_graph(4))
        assert run(capsys, "solve", g, "--problem", "long-path", "-l", 4)[0] == 0
        assert run(capsys, "solve", g, "--problem", "long-path", "-l", 5)[0] == 1
        assert run(capsys, "solve", g, "--problem", "long-cycle", "-l", 3)[0] == 1
        assert run(capsys, "solve", g, "--problem", "long-cycle")[0] == 2
        assert run(capsys, "solve", g, "--problem", "long-cycle", "-l", 2)[0] == 2

    def test_usage_errors(self, capsys, gfile, tmp_path):
        g = gfile(cycle_graph(4))
        assert run(capsys, "solve", g, "--problem", "pcc")[0] == 2
        assert run(capsys, "solve", g, "-k", 1, "-l", 9)[0] == 2
        assert run(capsys, "solve", str(tmp_path / "missing.txt"), "--problem", "hc")[0] == 2
        assert run(capsys, "solve", g, "--problem", "bogus")[0] == 2
        bad = tmp_path / "bad.txt"
        bad.write_text("p 2 1\ne 1 1\n")
        assert run(capsys, "solve", str(bad), "--problem", "hc")[0] == 2

    def test_invalid_forest_file(self, capsys, gfile, tmp_path):
        f = tmp_path / "f.txt"
        f.write_text("t 3\n0\n1\n1\n")
        code, _, err = run(capsys, "solve", gfile(complete_graph(3)), "--problem", "hc", "--forest", str(f))
        assert code == 2 and "forest" in err

    def test_json_round_trip_and_determinism(self, capsys, gfile):
        g = gfile(cycle_graph(6))
        args = ("solve", g, "--problem", "pcc", "-k", 1, "-l", 6, "--seed", 5, "--json")
        _, out1, _ = run(capsys, *args)
        _, out2, _ = run(capsys, *args)
        r1, r2 = RunReport.from_json(out1), RunReport.from_json(out2)
        assert r1.answer is True and r1.seed == 5 and r1.instance["n"] == 6
        assert r1.to_json() == out1.strip()
        r1.wall_time = r2.wall_time = 0.0
        assert r1.to_json() == r2.to_json()


class TestCount:
    def test_c4(self, capsys, gfile):
        assert run(capsys, "count", gfile(cycle_graph(4)), "-l", 4)[:2] == (0, "w=4: 2\n")

    def test_triangle_empty(self, capsys, gfile):
        assert run(capsys, "count", gfile(complete_graph(3)), "-l", 2)[:2] == (0, "")

    def test_ell_zero(self, capsys, gfile):
        assert run(capsys, "count", gfile(cycle_graph(5)), "-l", 0)[1] == "w=0: 1\n"

    def test_odd_ell_notes_zero(self, capsys, gfile):
        code, out, _ = run(capsys, "count", gfile(cycle_graph(5)), "-l", 3)
        assert code == 0 and out.startswith("# ") and "w=" not in out

    def test_weighted_json(self, capsys, tmp_path):
        p = tmp_path / "w.txt"
        p.write_text("p 4 4\ne 1 2 1\ne 2 3 2\ne 3 4 3\ne 1 4 4\n")
        _, out, _ = run(capsys, "count", str(p), "-l", 4, "--json")
        rep = RunReport.from_json(out)
        assert rep.table == {10: 2}
        assert rep.calls <= rep.call_bound


class TestVerify:
    def test_c4(self, capsys, gfile):
        code, out, _ = run(capsys, "verify", gfile(cycle_graph(4)))
        assert code == 0 and out == "1/1 instances agree\n"

    def test_random_batch(self, capsys):
        code, out, _ = run(capsys, "verify", "--random", 5, 10, 42)
        assert code == 0 and out == "10/10 instances agree\n"

    def test_guard(self, capsys, gfile):
        assert run(capsys, "verify", gfile(cycle_graph(20)))[0] == 2
        assert run(capsys, "verify", "--random", 20, 1, 0)[0] == 2

    def test_needs_input(self, capsys):
        assert run(capsys, "verify")[0] == 2


class TestDecompose:
    def test_path(self, capsys, gfile):
        code, out, err = run(capsys, "decompose", gfile(path_graph(4)))
        assert code == 0 and err == "depth 4\n"
        assert parse_forest(out).parent[1:] == (0, 1, 2, 3)

    def test_edgeless(self, capsys, gfile):
        _, out, err = run(capsys, "decompose", gfile(Graph(3, ())))
        assert parse_forest(out).roots == [1, 2, 3] and err == "depth 1\n"

    @pytest.mark.parametrize("heuristic", ["dfs", "separator", "optimal"])
    def test_c8_to_file(self, capsys, gfile, tmp_path, heuristic):
        out_path = tmp_path / "f.txt"
        code, out, _ = run(capsys, "decompose", gfile(cycle_graph(8)), "-o", out_path, "--heuristic", heuristic)
        assert code == 0 and out.startswith("depth ")
        assert validate_forest(cycle_graph(8), parse_forest(out_path.read_text()))


class TestBench:
    def test_cycles_csv(self, capsys):
        code, out, _ = run(capsys, "bench", "--cycles", 16, 32)
        lines = out.splitlines()
        assert code == 0 and lines[0] == BENCH_HEADER and len(lines) == 3
        rows = [dict(zip(BENCH_HEADER.split(","), l.split(","))) for l in lines[1:]]
        assert all(r["verdict"] == "yes" and int(r["calls"]) <= int(r["bound"]) for r in rows)
        assert int(rows[1]["calls"]) > int(rows[0]["calls"])

    def test_single_file_json(self, capsys, gfile):
        _, out, _ = run(capsys, "bench", gfile(cycle_graph(6)), "--json")
        (row,) = [json.loads(l) for l in out.splitlines()]
        assert row["n"] == 6 and row["verdict"] == "yes"

    def test_nothing_to_do(self, capsys):
        assert run(capsys, "bench")[0] == 2


def test_module_entry_point(tmp_path):
    p = tmp_path / "c5.txt"
    p.write_text(format_graph(cycle_graph(5)))
    res = subprocess.run([sys.executable, "-m", "tdcycles", "solve", str(p), "--problem", "hc"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout == "yes\n"
