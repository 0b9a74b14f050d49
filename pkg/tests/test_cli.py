import json

import pytest

from submod_lab import InputError
from submod_lab.cli import main
from submod_lab.workbench import parse

PRODUCT = """# product module
ring 6 6
module 6:1 6:2
sub gen (1,0)
"""


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def product_file(tmp_path):
    p = tmp_path / "product.txt"
    p.write_text(PRODUCT)
    return str(p)


@pytest.fixture
def files(tmp_path):
    def make(text):
        p = tmp_path / f"in{abs(hash(text))}.txt"
        p.write_text(text)
        return str(p)

    return make


class TestWorkbench:
    def test_blocks(self):
        blocks = parse("ring 6\nring 6 6\nmodule 6:1 6:2\nsub gen (1,0)\nsub gen (2,0) (0,3)\n")
        assert [b.module.size for b in blocks] == [6, 36]
        assert [N.size for N in blocks[1].submodules] == [6, 6]

    @pytest.mark.parametrize(
        "text",
        [
            "",
            "module 6:1",
            "ring 6\nmodule 4:1",
            "ring x",
            "ring 6\nsub gen (1,2)",
            "ring 6\nsub foo (1)",
            "ring 6\nwhat 1",
            "ring 6\nmodule 6",
            "ring 6\nsub gen 1,2)",
        ],
    )
    def test_rejects(self, text):
        with pytest.raises(InputError):
            parse(text)


class TestEnumerate:
    @pytest.mark.parametrize("text,count", [("ring 6\n", 4), ("ring 6 6\nmodule 6:1 6:2\n", 16), ("ring 2\n", 2)])
    def test_counts(self, capsys, files, text, count):
        code, out, _ = run(capsys, "enumerate", "--input", files(text), "--emit", "json")
        assert code == 0
        (m,) = json.loads(out)["modules"]
        assert len(m["submodules"]) == count

    def test_parse_error_exit(self, capsys, files):
        code, _, err = run(capsys, "enumerate", "--input", files("ring 6\nmodule 5:1\n"))
        assert code == 2 and "error" in err

    def test_missing_file(self, capsys, tmp_path):
        assert run(capsys, "enumerate", "--input", str(tmp_path / "none.txt"))[0] == 2


class TestClassify:
    def test_product_example(self, capsys, product_file):
        code, out, _ = run(capsys, "classify", "--input", product_file, "--psi", "fullM", "--emit", "json")
        (m,) = json.loads(out)["modules"]
        (row,) = m["submodules"]
        assert row["weak_second"] is False
        assert row["weak_second_witness"] == {"r": "(2,1)", "K": "<(0,3),(2,0)>"}
        # the completely irreducible forms disagree here, so the exit code reports it
        assert code == 1
        assert row["psi"]["fullM"]["agree"] is False

    def test_identity_all_second(self, capsys, files):
        code, out, _ = run(capsys, "classify", "--input", files("ring 12\n"), "--psi", "identity", "--emit", "json")
        assert code == 0
        rows = json.loads(out)["modules"][0]["submodules"]
        assert rows and all(r["psi"]["identity"]["psi_second"] for r in rows)

    def test_z8_indexed(self, capsys, files):
        code, out, _ = run(capsys, "classify", "--input", files("ring 8\n"), "--psi", "psi:1", "--emit", "json")
        assert code == 0
        rows = json.loads(out)["modules"][0]["submodules"]
        whole = rows[-1]
        assert whole["submodule"] == "M"
        assert whole["psi"]["psi:1"]["psi_second"] is True and whole["second"] is False

    def test_phi_section(self, capsys, files):
        code, out, _ = run(capsys, "classify", "--input", files("ring 6\n"), "--psi", "zero", "--phi", "empty,identity")
        assert code == 0
        assert "phi = empty" in out and "chi-prime" in out

    def test_unknown_psi(self, capsys):
        assert run(capsys, "classify", "--psi", "nope")[0] == 2

    def test_unknown_phi(self, capsys, files):
        assert run(capsys, "classify", "--input", files("ring 2\n"), "--phi", "nope")[0] == 2

    def test_text_output_is_stable(self, capsys, product_file):
        a = run(capsys, "classify", "--input", product_file)
        b = run(capsys, "classify", "--input", product_file)
        assert a == b


class TestVerify:
    def test_unknown_theorem(self, capsys):
        assert run(capsys, "verify", "t0.0")[0] == 2
        assert run(capsys, "verify", "--theorem", "t0.0")[0] == 2

    def test_theorem_only_for_verify(self, capsys):
        assert run(capsys, "enumerate", "--theorem", "t2.3")[0] == 2

    def test_monotonicity(self, capsys):
        code, out, _ = run(capsys, "verify", "probe.monotonicity", "--emit", "json")
        assert code == 0
        (rep,) = json.loads(out)["reports"]
        assert rep["violations"] == []
        assert rep["details"]["stated_direction_failures"] > 0

    def test_characterization_report(self, capsys):
        code, out, _ = run(capsys, "verify", "--theorem", "t2.13")
        assert out.startswith("catalog:")
        assert "t2.13" in out
        assert code == 1

    def test_all_json_round_trip_and_exit(self, capsys):
        code, out, _ = run(capsys, "verify", "all", "--emit", "json")
        data = json.loads(out)
        assert json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n" == out
        violated = [r["theorem_id"] for r in data["reports"] if r["status"] == "violated"]
        assert violated == ["t2.13"]
        assert all(r["status"] in ("verified", "vacuous") for r in data["reports"] if r["theorem_id"] != "t2.13")
        assert code == 1
        assert run(capsys, "verify", "all", "--emit", "json")[1] == out

    def test_input_catalog(self, capsys, files):
        code, out, _ = run(capsys, "verify", "t2.3", "--input", files("ring 12\n"), "--emit", "json")
        assert code == 0
        assert json.loads(out)["reports"][0]["status"] in ("verified", "vacuous")
