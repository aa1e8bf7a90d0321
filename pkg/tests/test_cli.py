import json

import pytest

from htseq.cli import main, read_bfile
from htseq.errors import MalformedInputError
from htseq.hyperterm import HTSTerm

A212579 = "a(n)=a(n-1)+2*a(n-2)-a(n-3)-2*a(n-4)-a(n-5)+2*a(n-6)+a(n-7)-a(n-8)"
VALUES = [0, 1, 8, 31, 80, 171, 308, 509, 780, 1137, 1584, 2143, 2812]


@pytest.fixture
def bfile(tmp_path):
    p = tmp_path / "b212579.txt"
    p.write_text("# A212579\n" + "".join(f"{i} {v}\n" for i, v in enumerate(VALUES)))
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_hts_text(capsys):
    code, out, _ = run(capsys, "hts", "sin(n*Pi/4)^2")
    assert code == 0
    assert out.startswith("a(n) = 1/2 - 1/2*(-1)^(n/2)*chi(n mod 2 = 0)")
    assert "verified:" in out


def test_re_to_hts_from_files(capsys, bfile, tmp_path):
    rec = tmp_path / "a212579.txt"
    rec.write_text(A212579)
    code, out, _ = run(capsys, "re-to-hts", "--re", str(rec), "--values", bfile, "--format", "json")
    assert code == 0
    d = json.loads(out)
    t = HTSTerm.from_json(d["normal_form"])
    assert [t(n) for n in range(len(VALUES))] == VALUES


def test_recurrence_json_file(capsys, bfile, tmp_path):
    code, out, _ = run(capsys, "find-re", "n!+1/n!", "--format", "json")
    assert code == 0
    rec = tmp_path / "r.json"
    rec.write_text(out)
    code, out, _ = run(capsys, "mfold-solve", "--re", str(rec))
    assert code == 0 and out.strip() == "m = 1: 1/(k+1), k+1"


def test_chi_product(capsys):
    assert run(capsys, "chi-product", "4:3", "5:2")[1].strip() == "chi(n mod 20 = 7)"
    assert run(capsys, "chi-product", "4:1", "6:2")[1].strip() == "chi(n mod 0 = 0)"


def test_eval(capsys):
    code, out, _ = run(capsys, "eval", "tan(n*Pi/3)", "--count", "3")
    assert code == 0 and out.splitlines() == ["0 0", "1 sqrt(3)", "2 -sqrt(3)"]


def test_not_hyper_type_exit_code(capsys, tmp_path):
    vals = tmp_path / "fib.txt"
    vals.write_text("0 0\n1 1\n")
    code, out, _ = run(capsys, "re-to-hts", "--re", "a(n+2)=a(n+1)+a(n)", "--values", str(vals))
    assert code == 2
    assert "recurrence: -a(n) - a(n+1) + a(n+2) = 0" in out and "a(0) = 0, a(1) = 1" in out


def test_error_object(capsys):
    code, out, _ = run(capsys, "hts", "tan(n*Pi/4)", "--format", "json")
    assert code == 1
    err = json.loads(out)
    assert err["stage"] == "evaluate" and "n = 2" in err["message"]


@pytest.mark.parametrize("argv", [
    ["hts", "sin(n"],
    ["hts", "x", "--max-order", "0"],
    ["bogus"],
    ["re-to-hts", "--re", "a(n+1)=a(n)"],
])
def test_errors_exit_one(capsys, argv):
    assert run(capsys, *argv)[0] == 1


def test_exit_codes_are_deterministic(capsys):
    codes = {run(capsys, "hts", "n!+1/n!")[0] for _ in range(3)}
    assert codes == {0}


def test_bfile_parsing(tmp_path):
    p = tmp_path / "b.txt"
    p.write_text("0 0\n1 1\n2 8\n")
    assert read_bfile(str(p)).values == {0: 0, 1: 1, 2: 8}
    p.write_text("")
    assert read_bfile(str(p)).values == {}
    p.write_text("# comment\n5 4\n")
    assert read_bfile(str(p)).values == {5: 4}
    p.write_text("0 1\n1 x\n")
    with pytest.raises(MalformedInputError, match=":2:"):
        read_bfile(str(p))


def test_json_output_round_trips(capsys):
    _, out, _ = run(capsys, "hts", "sin(Pi*cos(n*Pi)/6)*sin(n*Pi/4)", "--format", "json")
    nf = json.loads(out)["normal_form"]
    assert json.dumps(HTSTerm.from_json(nf).to_json()) == json.dumps(nf)
