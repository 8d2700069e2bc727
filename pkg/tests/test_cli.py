import io
import subprocess
import sys
from pathlib import Path

import pytest

from bratteli.cli import main
from bratteli.diagrams import format_diagram, parse_diagram

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def run(*argv):
    buf = io.StringIO()
    code = main(list(argv), out=buf)
    return code, buf.getvalue()


def porcelain(*argv):
    code, text = run("--porcelain", *argv)
    pairs = [line.split("=", 1) for line in text.splitlines()]
    assert all(len(p) == 2 for p in pairs), text
    return code, pairs


def corpus(name):
    return str(CORPUS / name)


def test_corpus_present():
    assert (CORPUS / "example.bd").exists()
    for f in CORPUS.glob("*.bd"):
        parse_diagram(f.read_text())


def test_validate_example():
    code, text = run("validate", corpus("example.bd"))
    assert code == 0
    assert "validation: PASS" in text


def test_validate_reports_violation(tmp_path):
    bad = tmp_path / "bad.bd"
    bad.write_text((CORPUS / "example.bd").read_text().replace("edge d -> a : 6 6", "edge d -> a : 6 7"))
    code, pairs = porcelain("validate", str(bad))
    assert code == 1
    assert ["valid", "fail"] in pairs
    violations = [v for k, v in pairs if k == "violation"]
    assert any(v.startswith("composition at (a,b,d)") for v in violations)


def test_realize_example_no_witness():
    code, pairs = porcelain("realize", corpus("example.bd"))
    assert code == 1
    assert ["verdict", "no wiring realization"] in pairs


def test_realize_chain_witness():
    code, text = run("realize", corpus("chain1.bd"))
    assert code == 0
    assert "witness found" in text


def test_realize_budget(tmp_path):
    code, pairs = porcelain("realize", corpus("example.bd"), "--max-nodes", "20")
    assert code == 1
    assert ["verdict", "budget exhausted"] in pairs


def test_prime_commands():
    assert run("prime", corpus("example.bd"))[0] == 0
    assert run("prime", corpus("disjoint_chains.bd"))[0] == 1
    assert run("prime", corpus("prime3.bd"))[0] == 1
    assert run("prime", "--truncated", corpus("prime3.bd"))[0] == 0


def test_iso_twin_files():
    code, text = run("iso", corpus("twin3_A.bd"), corpus("twin3_B.bd"))
    assert code == 0
    assert "x1_x2 -> x1_x2" in text
    assert run("iso", corpus("twin4_A.bd"), corpus("twin4_B.bd"))[0] == 0
    assert run("iso", corpus("twin3_A.bd"), corpus("example.bd"))[0] == 1


def test_k0_stage():
    code, pairs = porcelain("k0", corpus("twin3_A.bd"), "--stage", "x1_x2")
    assert code == 0
    keys = [k for k, _ in pairs]
    assert "rank" in keys and "dims" in keys
    assert run("k0", corpus("twin3_A.bd"), "--stage", "nope")[0] == 2


def test_demos():
    code, text = run("demo", "nonrealizable")
    assert code == 1
    assert "no wiring realization" in text
    assert run("demo", "twin", "--size", "3")[0] == 0
    assert run("demo", "prime", "--size", "3")[0] == 0


def test_demo_size_caps():
    assert run("demo", "prime", "--size", "5")[0] == 2
    assert run("demo", "twin", "--size", "7")[0] == 2


def test_demo_export(tmp_path):
    assert run("demo", "twin", "--size", "3", "--export-dir", str(tmp_path))[0] == 0
    a = (tmp_path / "twin3_A.bd").read_text()
    assert a == (CORPUS / "twin3_A.bd").read_text()
    assert format_diagram(parse_diagram(a)) == a


@pytest.mark.parametrize(
    "argv",
    [
        ["validate", "/nonexistent/file.bd"],
        ["frobnicate"],
        ["validate"],
        ["realize", "--bogus", "x.bd"],
        ["k0", "x.bd"],
    ],
)
def test_usage_errors(argv):
    assert run(*argv)[0] == 2


def test_parse_error_position(tmp_path, capsys):
    bad = tmp_path / "bad.bd"
    bad.write_text("vertex a : 1\nedge a -> zz : 1\n")
    assert run("validate", str(bad))[0] == 2
    assert "line 2, column 11" in capsys.readouterr().err


COMMANDS = [
    ["validate", "example.bd"],
    ["realize", "example.bd"],
    ["realize", "finite_subsets3.bd"],
    ["prime", "prime2.bd"],
    ["iso", "twin3_A.bd", "twin3_B.bd"],
    ["k0", "prime3.bd", "--stage", "x1_x2"],
]


@pytest.mark.parametrize("argv", COMMANDS, ids=lambda a: a[0])
@pytest.mark.parametrize("mode", [[], ["--porcelain"]], ids=["text", "porcelain"])
def test_deterministic_reports(argv, mode):
    args = mode + [argv[0]] + [corpus(a) if a.endswith(".bd") else a for a in argv[1:]]
    first, second = run(*args), run(*args)
    assert first == second


def test_module_entry_point_deterministic():
    cmd = [sys.executable, "-m", "bratteli", "demo", "prime", "--size", "2"]
    a = subprocess.run(cmd, capture_output=True)
    b = subprocess.run(cmd, capture_output=True)
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout and a.stdout
