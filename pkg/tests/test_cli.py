import subprocess
import sys

import pytest

from alcove_pieces.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_pieces_a1(capsys):
    code, out, _ = run(capsys, "pieces", "A1:sc", "--max-len", "1")
    assert code == 0
    assert "# classes 3" in out
    assert [l.split()[1] for l in out.splitlines()[-3:]] == ["1/{}", "s1/{}", "s0/{}"]


def test_type_flag_equals_positional(capsys):
    _, a, _ = run(capsys, "pieces", "A1:sc")
    _, b, _ = run(capsys, "pieces", "--type", "A1:sc")
    assert a == b


def test_bcomplex_reports_flow(capsys):
    code, out, _ = run(capsys, "bcomplex", "A1:sc", "--nu", "1", "--L", "4")
    assert code == 0
    assert "transitions" in out
    assert "flow n=3:" in out and "0 violations" in out


def test_dual_default_tables(capsys):
    code, out, _ = run(capsys, "dual", "--max-len", "1")
    assert code == 0
    assert "pair SL2/PGL2 R=1" in out
    assert "orphan" not in out


def test_dual_corrupted_table(capsys, tmp_path):
    from alcove_pieces.dual_invariants import default_table_path
    with open(default_table_path(), encoding="utf-8") as fh:
        text = fh.read()
    bad = tmp_path / "tables.txt"
    # drop the last record of the file
    bad.write_text(text.rstrip().rsplit("\n\n", 1)[0] + "\n")
    code, out, _ = run(capsys, "dual", "--tables", str(bad), "--max-len", "1")
    assert code == 1
    bad.write_text(text.replace("order: 2", "order: 3", 1))
    code, _, err = run(capsys, "dual", "--tables", str(bad))
    assert code in (1, 2)
    assert err


def test_missing_table_file(capsys, tmp_path):
    code, _, err = run(capsys, "dual", "--tables", str(tmp_path / "nope.txt"))
    assert code != 0 and "missing" in err


def test_usage_errors(capsys):
    assert run(capsys, "pieces")[0] == 2
    assert run(capsys, "pieces", "Z9:sc")[0] == 2
    assert run(capsys, "pieces", "A1:sc", "--J", "s0,s1")[0] == 2
    assert run(capsys, "bcomplex", "A1:sc", "--nu", "1,2")[0] == 2
    assert run(capsys, "verify", "--only", "nonsense")[0] == 2


def test_verify_only(capsys):
    code, out, err = run(capsys, "verify", "--only", "sl2,2")
    assert code == 0
    assert out.count("[PASS]") == 2 and "2 passed, 0 failed" in out
    assert "kernel backend" in err


def test_out_file_is_deterministic(tmp_path):
    paths = [tmp_path / f"r{i}.txt" for i in range(2)]
    for p in paths:
        subprocess.run([sys.executable, "-m", "alcove_pieces", "verify", "--only", "sl2,dual",
                        "--out", str(p)], check=True, capture_output=True)
    assert paths[0].read_bytes() == paths[1].read_bytes()


@pytest.mark.parametrize("argv", [["--help"], ["pieces", "--help"]])
def test_help(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 0


def test_pieces_rows_with_j(capsys):
    _, out, _ = run(capsys, "pieces", "A1:sc", "--J", "s1", "--max-len", "1")
    pieces = {l.split()[1] for l in out.splitlines()[-3:]}
    assert pieces == {"1/{s1}", "s0/{s1}"}
    _, out, _ = run(capsys, "pieces", "A1:ad", "--J", "", "--max-len", "1")
    assert "# classes 6" in out


def test_verify_with_corrupted_table(capsys, tmp_path):
    bad = tmp_path / "tables.txt"
    bad.write_text("side: chi\npair: T\ngroup: A1:sc\nindex: 0\nrank: 1\norder: 3\n"
                   "generators: -1\n")
    code, out, _ = run(capsys, "verify", "--only", "dual", "--tables", str(bad))
    assert code == 1 and "[FAIL]" in out
