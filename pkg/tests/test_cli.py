"""The command-line front end, exercised in-process."""

import json
import os

import pytest

from structlaws.cli import main

BUNDLE_DIR = os.path.join(os.path.dirname(__file__), os.pardir,
                          "src", "structlaws", "bundles")


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_examples_list(capsys):
    code, out, _ = run(capsys, "examples", "list")
    assert code == 0
    assert "peano" in out.splitlines()
    assert "lambda-debruijn" in out.splitlines()


def test_eval_addition(capsys):
    code, out, _ = run(capsys, "eval", "--bundle", "peano", "--term",
                       "(aux add () (op s (op zero)) ((op s (op zero))))")
    assert code == 0
    assert out.strip() == "(op s (op s (op zero)))"


def test_eval_reports_stuck_terms(capsys):
    code, out, err = run(capsys, "eval", "--bundle", "peano", "--context", "1",
                         "--term", "(aux add (var 0 0) (op zero))")
    assert code == 1
    assert "(aux add" in out
    assert "stuck" in err


def test_normalize_keeps_stuck_spines(capsys):
    code, out, _ = run(capsys, "normalize", "--bundle", "peano", "--context", "1",
                       "--term", "(aux add (var 0 0) (op zero))")
    assert code == 0
    assert out.strip() == "(aux add (var 0 0) (op zero))"


def test_term_from_stdin(capsys, monkeypatch):
    import io

    monkeypatch.setattr("sys.stdin", io.StringIO("(op s\n  (op zero))\n"))
    code, out, _ = run(capsys, "normalize", "--bundle", "peano", "--term", "-")
    assert code == 0
    assert out.strip() == "(op s (op zero))"


def test_parse_error_exits_2(capsys):
    code, _, err = run(capsys, "eval", "--bundle", "peano", "--term", "(op")
    assert code == 2
    assert err


def test_unknown_op_exits_2(capsys):
    code, _, err = run(capsys, "eval", "--bundle", "peano", "--term", "(op ghost)")
    assert code == 2


def test_scope_violation_exits_2(capsys):
    code, _, err = run(capsys, "eval", "--bundle", "peano", "--term", "(var 0 5)")
    assert code == 2
    assert "scoped" in err


def test_missing_source_exits_2(capsys):
    code, _, err = run(capsys, "check", "benign")
    assert code == 2


def test_check_benign_size_zero_is_vacuous_pass(capsys):
    code, out, _ = run(capsys, "check", "benign", "--bundle", "peano", "--size", "0")
    assert code == 0
    assert "0 instances" in out


def test_check_all_json_schema(capsys):
    code, out, _ = run(capsys, "check", "all", "--bundle", "peano",
                       "--size", "4", "--json")
    assert code == 0
    reports = json.loads(out)
    suites = [r["suite"] for r in reports]
    assert suites[0] == "admissible" and "monad" in suites and "oracle" in suites
    for r in reports:
        assert set(r) == {"suite", "instances", "counterexamples", "elapsed_ms"}
        assert r["elapsed_ms"] == 0
        assert r["counterexamples"] == []


def test_check_json_is_deterministic(capsys):
    _, first, _ = run(capsys, "check", "all", "--bundle", "lambda-presheaf",
                      "--size", "4", "--json", "--jobs", "1")
    _, second, _ = run(capsys, "check", "all", "--bundle", "lambda-presheaf",
                       "--size", "4", "--json", "--jobs", "1")
    assert first == second


def test_jobs_do_not_change_the_report(capsys):
    _, serial, _ = run(capsys, "check", "all", "--bundle", "peano",
                       "--size", "4", "--json", "--jobs", "1")
    _, parallel, _ = run(capsys, "check", "all", "--bundle", "peano",
                         "--size", "4", "--json", "--jobs", "4")
    assert serial == parallel


def test_check_from_files(capsys):
    d = os.path.join(BUNDLE_DIR, "lambda-presheaf")
    code, out, _ = run(capsys, "check", "all",
                       "--sig", os.path.join(d, "signature.sexpr"),
                       "--laws", os.path.join(d, "laws.sexpr"),
                       "--eqs", os.path.join(d, "systems.sexpr"),
                       "--size", "3")
    assert code == 0
    assert "admissible: PASS" in out
    assert "subst-unit:benign: PASS" in out


def test_check_oracle_needs_a_bundle(capsys):
    d = os.path.join(BUNDLE_DIR, "peano")
    code, _, err = run(capsys, "check", "oracle",
                       "--sig", os.path.join(d, "signature.sexpr"),
                       "--laws", os.path.join(d, "laws.sexpr"))
    assert code == 2
    assert "oracle" in err


def test_enum_lists_terms_in_order(capsys):
    code, out, _ = run(capsys, "enum", "--bundle", "peano", "--size", "3")
    assert code == 0
    assert out.splitlines() == [
        "(op zero)", "(op s (op zero))", "(op s (op s (op zero)))"]


def test_enum_sampling_is_seeded(capsys):
    _, a, _ = run(capsys, "enum", "--bundle", "peano", "--size", "5",
                  "--sample", "3", "--seed", "11")
    _, b, _ = run(capsys, "enum", "--bundle", "peano", "--size", "5",
                  "--sample", "3", "--seed", "11")
    assert a == b


def test_fold_machine_and_max(capsys):
    term = "(aux mul () (op s (op s (op zero))) ((op s (op s (op s (op zero))))))"
    code, out, _ = run(capsys, "fold", "--bundle", "peano", "--term", term)
    assert code == 0 and out.strip() == "6"
    code, out, _ = run(capsys, "fold", "--bundle", "peano", "--term", term,
                       "--algebra", "max")
    assert code == 0 and out.strip() == "6"


def test_usage_error_exits_2(capsys):
    assert main(["check", "nonesuch"]) == 2
