import json

from magtwist import cli
from magtwist.fuzz import FuzzConfig, run_fuzz


def test_random_graphs_clean():
    s = run_fuzz(FuzzConfig("random-graphs", trials=20, seed=3, max_vertices=5, max_length=4))
    assert s.checked == 20 and not s.failures


def test_random_sycamore_clean():
    s = run_fuzz(FuzzConfig("random-sycamore", trials=5, seed=1, max_vertices=5, max_length=5, evidence_length=3))
    assert s.accepted == s.checked > 0 and not s.failures
    assert 0 < s.acceptance_rate <= 1


def test_whitney_seed_zero_finds_a_witness(tmp_path):
    s = run_fuzz(FuzzConfig("random-whitney-nonadjacent", trials=8, seed=0, max_vertices=5, max_length=8,
                            out=str(tmp_path)))
    w = [x for x in s.witnesses if x["trial"] == 7]
    assert w and w[0]["first_difference"] == 3
    reproducer = json.loads(open(w[0]["reproducer"]).read())
    assert reproducer["iota_G"] == {"k0": "g0", "k1": "g2"}


def test_repeat_runs_are_byte_identical(tmp_path, capsys):
    texts = []
    for i in range(2):
        out = tmp_path / f"f{i}.json"
        code = cli.main(["fuzz", "--mode", "random-sycamore", "--trials", "3", "--seed", "5",
                         "--max-vertices", "5", "--max-length", "4", "--evidence-length", "3",
                         "--out", str(out)])
        assert code == 0
        texts.append(out.read_bytes())
    assert texts[0] == texts[1]
