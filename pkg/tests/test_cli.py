"""CLI contract: output schemas, determinism, exit codes."""

import json

import pytest

from juhlkit import cli
from juhlkit import exact_core


def run_cli(capsys, argv):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_constants_tsv_order_two(capsys):
    code, out, _ = run_cli(capsys, ["constants", "--N", "2"])
    assert code == 0
    assert out == "composition\tn\tm\tnbar\n2\t1\t1\t1\n1,1\t1\t-1\t1\n"


def test_constants_json_rows(capsys):
    code, out, _ = run_cli(capsys, ["constants", "--N", "2", "--format", "json"])
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == "juhl-kit/1"
    assert doc["rows"] == [
        {"composition": [2], "n": "1", "m": "1", "nbar": "1"},
        {"composition": [1, 1], "n": "1", "m": "-1", "nbar": "1"},
    ]


def test_constants_row_counts(capsys):
    code, out, _ = run_cli(capsys, ["constants", "--N", "5", "--format", "json"])
    assert code == 0
    assert len(json.loads(out)["rows"]) == 16
    code, out, _ = run_cli(capsys, ["constants", "--N", "1", "--format", "json"])
    assert len(json.loads(out)["rows"]) == 1


def test_expand_P_explicit_schema(capsys):
    code, out, _ = run_cli(capsys, ["expand", "--target", "P", "--N", "2"])
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == "juhl-kit/1"
    assert doc["target"] == "P"
    assert doc["N"] == 2
    assert doc["form"] == "explicit"
    assert doc["basis"] == "M"
    assert doc["terms"] == [
        {"word": [2], "coeff": "1"},
        {"word": [1, 1], "coeff": "1"},
    ]


def test_expand_Q_explicit_order_one(capsys):
    code, out, _ = run_cli(capsys, ["expand", "--target", "Q", "--N", "1"])
    assert code == 0
    doc = json.loads(out)
    assert doc["sign_convention"] == "(-1)^N Q"
    assert doc["terms"] == [{"word": [], "a": 1, "coeff": "4"}]


def test_expand_recursive_same_terms_as_explicit(capsys):
    _, explicit, _ = run_cli(capsys, ["expand", "--target", "P", "--N", "3"])
    _, recursive, _ = run_cli(
        capsys, ["expand", "--target", "P", "--N", "3", "--form", "recursive"]
    )
    de, dr = json.loads(explicit), json.loads(recursive)
    assert de["terms"] == dr["terms"]
    assert dr["form"] == "recursive"
    assert {k: v for k, v in de.items() if k != "form"} == {
        k: v for k, v in dr.items() if k != "form"
    }


def test_output_is_byte_deterministic(capsys):
    _, first, _ = run_cli(capsys, ["constants", "--N", "6", "--format", "json"])
    _, second, _ = run_cli(capsys, ["constants", "--N", "6", "--format", "json"])
    assert first == second
    _, first, _ = run_cli(capsys, ["verify", "combinatorial", "--max-order", "3"])
    _, second, _ = run_cli(capsys, ["verify", "combinatorial", "--max-order", "3"])
    assert first == second


@pytest.mark.parametrize(
    "argv",
    [
        ["constants", "--N", "0"],
        ["constants", "--N", "x"],
        ["expand", "--target", "R", "--N", "2"],
        ["expand", "--target", "P", "--N", "2", "--form", "implicit"],
        ["verify", "nonsense"],
        ["einstein", "--dim", "4", "--c", "1/0"],
        [],
    ],
)
def test_usage_errors_exit_two(capsys, argv):
    with pytest.raises(SystemExit) as err:
        cli.main(argv)
    assert err.value.code == 2


def test_verify_small_suites_pass(capsys):
    code, out, err = run_cli(
        capsys, ["verify", "combinatorial", "inversion", "--max-order", "3"]
    )
    assert code == 0
    assert "[PASS] combinatorial" in out
    assert "[PASS] inversion" in out
    assert out.endswith("verify: all suites passed\n")
    assert "combinatorial:" in err  # timing goes to stderr


def test_verify_reports_counterexample_on_injected_fault(capsys, monkeypatch):
    # flip one closed-form coefficient; the brute-force iteration must disagree
    true_nbar = exact_core.nbar_coeff

    def corrupted(entries):
        value = true_nbar(entries)
        if tuple(entries) == (1, 1):
            return value + 1
        return value

    monkeypatch.setattr(exact_core, "nbar_coeff", corrupted)
    code, out, _ = run_cli(capsys, ["verify", "combinatorial", "--max-order", "2"])
    assert code == 1
    assert "FAIL" in out
    assert "full iteration N=2" in out
    assert "verify: " in out and "failure" in out


def test_verify_env_variable_sets_default_order(capsys, monkeypatch):
    monkeypatch.setenv("JUHL_MAX_ORDER", "2")
    code, out, _ = run_cli(capsys, ["verify", "combinatorial"])
    assert code == 0
    assert "(N<=2)" in out


def test_einstein_flat_table(capsys):
    code, out, _ = run_cli(
        capsys, ["einstein", "--dim", "4", "--c", "0", "--max-order", "3"]
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "N\tW\tQ\tregime"
    for line in lines[1:]:
        _, w, q, _ = line.split("\t")
        assert w == "0" and q == "0"


def test_einstein_sphere_q2_and_regime(capsys):
    code, out, _ = run_cli(
        capsys,
        ["einstein", "--dim", "4", "--c", "1/2", "--max-order", "3", "--format", "json"],
    )
    assert code == 0
    doc = json.loads(out)
    rows = doc["rows"]
    assert rows[0]["Q"] == "2"
    assert rows[0]["regime"] == "standard"
    assert rows[1]["regime"] == "standard"
    assert rows[2]["regime"] == "extension"


def test_einstein_rational_dimension(capsys):
    code, out, _ = run_cli(
        capsys,
        ["einstein", "--dim", "7/2", "--c=-1/3", "--max-order", "4", "--format", "json"],
    )
    assert code == 0
    rows = json.loads(out)["rows"]
    assert all(row["regime"] == "standard" for row in rows)
    assert rows[0]["Q"] == "-7/6"  # Q_2 = n*c = (7/2)(-1/3)


def test_einstein_mismatch_exits_one(capsys, monkeypatch):
    from juhlkit import backends

    true_oracle = backends.oracle_Q

    def corrupted(backend, order):
        value = true_oracle(backend, order)
        return value + 1 if order == 2 else value

    monkeypatch.setattr(backends, "oracle_Q", corrupted)
    code, _, err = run_cli(capsys, ["einstein", "--dim", "5", "--c", "1/2", "--max-order", "3"])
    assert code == 1
    assert "mismatch at N=2" in err


def test_verify_jobs_flag_matches_serial_output(capsys):
    _, serial, _ = run_cli(capsys, ["verify", "krattenthaler", "--max-order", "3"])
    _, parallel, _ = run_cli(
        capsys, ["verify", "krattenthaler", "--max-order", "3", "--jobs", "2"]
    )
    assert serial == parallel
