import subprocess
import sys

import pytest

from embrank.cli import main
from embrank.formats import format_metric_space, parse_modulus
from embrank.moduli import FiniteMetricSpace

LINE = "points 3\na\nb\nc\n1 2 1\n2 3 2\n1 3 3\n"
TARGET = "points 3\np\nq\nr\n1 2 1\n2 3 1\n1 3 2\n"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    report = {}
    for line in out.splitlines():
        key, _, value = line.partition(" ")
        report.setdefault(key, value)
    return code, report, out


@pytest.fixture
def bundle(tmp_path):
    (tmp_path / "x.txt").write_text(LINE)
    (tmp_path / "e.txt").write_text(TARGET)
    (tmp_path / "map.txt").write_text("a p\nb q\nc r\n")
    return tmp_path


def test_truncated_rank(capsys):
    code, rep, _ = run(capsys, "rank", "schreier-trunc", "--alpha", "1", "--N", "5")
    assert code == 0 and rep["rank"] == "4"
    assert rep["command"] == "rank schreier-trunc" and rep["config.N"] == "5"


def test_member_false(capsys):
    code, rep, _ = run(capsys, "schreier", "member", "--alpha", "0", "--set", "{1,2}")
    assert code == 1 and rep["member"] == "false"


def test_schreier_subcommands(capsys):
    code, rep, _ = run(capsys, "schreier", "decompose", "--alpha", "2", "--set", "{2,3,4,5}")
    assert code == 0 and rep["blocks"] == "{2,3} {4,5}"
    code, rep, _ = run(capsys, "schreier", "enum", "--alpha", "1", "--N", "4")
    assert code == 0 and rep["count"] == "8"
    code, rep, _ = run(capsys, "schreier", "decompose", "--alpha", "w", "--set", "{2}")
    assert code == 2 and "error" in rep


def test_ordinal_subcommands(capsys):
    assert run(capsys, "ordinal", "cmp", "w+1", "w*2")[1]["result"] == "less"
    assert run(capsys, "ordinal", "add", "w+1", "w")[1]["result"] == "w*2"
    assert run(capsys, "ordinal", "pow", "w")[1]["result"] == "w^w"
    assert run(capsys, "ordinal", "fund", "w^w", "--index", "3")[1]["result"] == "w^3"
    code, rep, _ = run(capsys, "ordinal", "cmp", "w+w^2", "1")
    assert code == 2 and rep["status"] == "input-error"


def test_rank_relation(capsys, tmp_path):
    path = tmp_path / "rel.txt"
    path.write_text("node a\nnode b\nnode c\nedge c b\nedge b a\n")
    code, rep, _ = run(capsys, "rank", "relation", str(path))
    assert code == 0 and rep["rank"] == "3"
    path.write_text("node a\nnode b\nedge a b\nedge b a\n")
    code, rep, _ = run(capsys, "rank", "relation", str(path))
    assert code == 1 and rep["well_founded"] == "false"


def test_rank_budget(capsys):
    code, rep, _ = run(capsys, "rank", "schreier-trunc", "--alpha", "2", "--N", "12", "--budget", "5")
    assert code == 3 and rep["exhausted"] == "true"


def test_moduli_compute_then_sandwich(capsys, bundle):
    k, o = bundle / "k.txt", bundle / "o.txt"
    code, rep, _ = run(
        capsys, "moduli", "compute", "--x", str(bundle / "x.txt"), "--e", str(bundle / "e.txt"),
        "--map", str(bundle / "map.txt"), "--kappa-out", str(k), "--omega-out", str(o),
    )
    assert code == 0 and rep["config.window"] == "3"
    assert parse_modulus(k.read_text()).table[3] == 2
    code, rep, _ = run(
        capsys, "moduli", "sandwich", "--x", str(bundle / "x.txt"), "--e", str(bundle / "e.txt"),
        "--map", str(bundle / "map.txt"), "--kappa", str(k), "--omega", str(o),
    )
    assert code == 0 and rep["holds"] == "true"
    tight = bundle / "tight.txt"
    tight.write_text("window 3\n-3 0\n-2 0\n-1 0\n1 1\n2 1\n3 1\n")
    code, rep, _ = run(
        capsys, "moduli", "sandwich", "--x", str(bundle / "x.txt"), "--e", str(bundle / "e.txt"),
        "--map", str(bundle / "map.txt"), "--kappa", str(k), "--omega", str(tight),
    )
    assert code == 1 and rep["violation"] == "a c upper"


def test_moduli_classify(capsys, tmp_path):
    k, o = tmp_path / "k.txt", tmp_path / "o.txt"
    k.write_text("window 1\ntail diverges\n-1 1/2\n1 1\n")
    o.write_text("window 1\n-1 1\n1 inf\n")
    code, rep, _ = run(capsys, "moduli", "classify", "--kappa", str(k), "--omega", str(o), "--family", "coarse")
    assert code == 1 and rep["verdict"] == "violated" and rep["witness"] == "1"
    o.write_text("window 1\n-1 1\n1 2\n")
    code, rep, _ = run(capsys, "moduli", "classify", "--kappa", str(k), "--omega", str(o), "--family", "coarse")
    assert code == 0 and rep["verdict"] == "consistent"


def test_input_errors_carry_line_numbers(capsys, bundle):
    bad = bundle / "bad.txt"
    bad.write_text("points 3\na\nb\nc\n1 2 1\n2 3 2\n1 3 5\n")
    code, rep, _ = run(
        capsys, "moduli", "compute", "--x", str(bad), "--e", str(bundle / "e.txt"), "--map", str(bundle / "map.txt")
    )
    assert code == 2 and rep["error"].startswith("line 7")
    code, rep, _ = run(capsys, "rank", "relation", str(bundle / "missing.txt"))
    assert code == 2


def test_embed_search_budget(capsys, tmp_path):
    big = FiniteMetricSpace.from_function([f"p{i}" for i in range(7)], lambda i, j: 2)
    small = FiniteMetricSpace.from_function([f"q{i}" for i in range(6)], lambda i, j: 2)
    (tmp_path / "x.txt").write_text(format_metric_space(big))
    (tmp_path / "e.txt").write_text(format_metric_space(small))
    (tmp_path / "k.txt").write_text("window 2\n-2 1\n-1 1\n1 1\n2 1\n")
    (tmp_path / "o.txt").write_text("window 2\n-2 2\n-1 2\n1 2\n2 2\n")
    args = ["embed", "search", "--x", str(tmp_path / "x.txt"), "--e", str(tmp_path / "e.txt"),
            "--kappa", str(tmp_path / "k.txt"), "--omega", str(tmp_path / "o.txt")]
    code, rep, _ = run(capsys, *args, "--budget", "1")
    assert code == 3 and rep["exhausted"] == "true"
    code, rep, _ = run(capsys, *args)
    assert code == 1 and rep["max_depth"] == "6" and rep["exhausted"] == "false"


def test_embed_certify(capsys):
    code, rep, _ = run(capsys, "embed", "certify", "--alpha", "1", "--N", "5", "--coeff-bound", "1")
    assert code == 0 and rep["verified"] == "true" and rep["certified_rank"] == "4"
    assert rep["config.coeff_bound"] == "1" and rep["config.window"] == "2"


def test_zschreier(capsys, tmp_path):
    code, rep, _ = run(capsys, "zschreier", "gen", "--alpha", "0", "--N", "2", "--coeff-bound", "1")
    assert code == 0 and rep["count"] == "5"
    out = tmp_path / "z.txt"
    code, rep, _ = run(capsys, "zschreier", "export", "--alpha", "1", "--N", "3", "--coeff-bound", "1", "--out", str(out))
    assert code == 0 and out.read_text().startswith("points ")


def test_extract(capsys, tmp_path):
    fam = tmp_path / "fam.txt"
    fam.write_text("prefix 1 ; slope 2 | prefix 3 ; slope 3\nprefix 1 ; slope 2 | prefix 3 ; slope 3\n")
    code, rep, _ = run(capsys, "extract", "run", str(fam))
    assert code == 0 and rep["J"] == "0 1" and rep["verified"] == "true"
    fam.write_text("prefix 4 ; slope 0 | prefix 3 ; slope 3\n")
    code, rep, _ = run(capsys, "extract", "run", str(fam))
    assert code == 2


def test_reports_are_deterministic(capsys, bundle):
    args = ["moduli", "compute", "--x", str(bundle / "x.txt"), "--e", str(bundle / "e.txt"),
            "--map", str(bundle / "map.txt")]
    first = run(capsys, *args)[2]
    assert run(capsys, *args)[2] == first
    first = run(capsys, "embed", "certify", "--alpha", "1", "--N", "4", "--coeff-bound", "1")[2]
    assert run(capsys, "embed", "certify", "--alpha", "1", "--N", "4", "--coeff-bound", "1")[2] == first


def test_output_flag(capsys, tmp_path):
    out = tmp_path / "report.txt"
    code = main(["--output", str(out), "ordinal", "pow", "2"])
    assert code == 0 and "result w^2" in out.read_text()
    assert capsys.readouterr().out == ""


def test_unknown_flags_rejected(capsys):
    with pytest.raises(SystemExit) as info:
        main(["schreier", "member", "--alpha", "0", "--set", "{1}", "--colour", "red"])
    assert info.value.code == 2
    with pytest.raises(SystemExit):
        main(["schreier", "member", "--alph", "0", "--set", "{1}"])


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "embrank", "schreier", "member", "--alpha", "1", "--set", "{2,3}"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0 and "member true" in proc.stdout
