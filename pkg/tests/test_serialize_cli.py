"""File formats, canonical round-trips, and the command-line surface."""

import json
from fractions import Fraction

import pytest

from pivotal import (
    BINARY,
    PARTICIPATION,
    ConstantFn,
    DenseTable,
    DictatorFn,
    MajorityFn,
    MajPFn,
    ParityFn,
    PivotalError,
    ProductDist,
    UpwardClosure,
    hadamard_mu,
    majp_dist,
    mixture_D,
    uniform_product,
)
from pivotal.cli import main
from pivotal.serialize import (
    canonical_dumps,
    dist_from_obj,
    dist_to_obj,
    fn_from_obj,
    fn_to_obj,
    parse_rational,
    rational_str,
    save_dist,
    save_fn,
)

F = Fraction


class TestRationals:
    def test_parse_fraction_and_integer(self):
        assert parse_rational("3/4") == F(3, 4)
        assert parse_rational("-2") == F(-2)
        assert parse_rational("0") == 0

    def test_decimals_rejected(self):
        for bad in ("0.5", "1e-3", "1/2.0", "", "a/b"):
            with pytest.raises(PivotalError, match="rejected|rational"):
                parse_rational(bad)

    def test_render(self):
        assert rational_str(F(6, 8)) == "3/4"
        assert rational_str(F(2)) == "2"


class TestDistRoundTrip:
    @pytest.mark.parametrize("d", [
        hadamard_mu(2),
        mixture_D(3),
        uniform_product(4),
        majp_dist(3, F(2, 5)),
    ], ids=["hadamard", "mixture", "uniform", "majp"])
    def test_byte_identical_round_trip(self, d):
        text = canonical_dumps(dist_to_obj(d))
        parsed = dist_from_obj(json.loads(text))
        assert parsed == d
        assert canonical_dumps(dist_to_obj(parsed)) == text

    def test_unsorted_input_is_canonicalized(self):
        obj = {
            "kind": "explicit", "alphabet": ["0", "1"], "n": 1,
            "support": [{"x": [1], "w": "1/2"}, {"x": [0], "w": "1/2"}],
        }
        d = dist_from_obj(obj)
        assert [x for x, _ in d.items()] == [(0,), (1,)]

    def test_decimal_weight_rejected(self):
        obj = {"kind": "explicit", "alphabet": ["0", "1"], "n": 1,
               "support": [{"x": [0], "w": "0.5"}, {"x": [1], "w": "1/2"}]}
        with pytest.raises(PivotalError):
            dist_from_obj(obj)

    def test_participation_alphabet_survives(self):
        d = majp_dist(2, F(1, 2))
        obj = dist_to_obj(d)
        assert obj["alphabet"] == ["0", "1", "⊥"]
        assert dist_from_obj(json.loads(canonical_dumps(obj))) == d


class TestFnRoundTrip:
    @pytest.mark.parametrize("f", [
        DenseTable(BINARY, 2, {(0, 0): F(0), (0, 1): F(1, 2),
                               (1, 0): F(-1, 2), (1, 1): F(1)}),
        UpwardClosure(4, [(0, 1, 1, 0), (1, 0, 0, 1)]),
        MajPFn(5),
        ParityFn(3),
        MajorityFn(3),
        DictatorFn(4, 2),
        ConstantFn(3, F(1, 3)),
        ConstantFn(2, F(1), PARTICIPATION),
    ], ids=["table", "upward", "majp", "parity", "majority",
            "dictator", "constant", "constant-ternary"])
    def test_round_trip(self, f):
        text = canonical_dumps(fn_to_obj(f))
        parsed = fn_from_obj(json.loads(text))
        assert parsed == f
        assert canonical_dumps(fn_to_obj(parsed)) == text

    def test_table_keys_are_symbol_strings(self):
        f = DenseTable(BINARY, 2, {(0, 0): F(0), (0, 1): F(1),
                                   (1, 0): F(1), (1, 1): F(0)})
        obj = fn_to_obj(f)
        assert set(obj["values"]) == {"00", "01", "10", "11"}

    def test_unknown_kind_rejected(self):
        with pytest.raises(PivotalError):
            fn_from_obj({"kind": "mystery"})


class TestCliGen:
    def test_gen_hadamard_to_file(self, tmp_path, capsys):
        out = tmp_path / "mu.json"
        assert main(["gen", "hadamard-mu", "--k", "2", "--out", str(out)]) == 0
        obj = json.loads(out.read_text())
        assert obj["kind"] == "explicit"
        assert obj["n"] == 3
        assert len(obj["support"]) == 4

    def test_gen_majp_stdout(self, capsys):
        assert main(["gen", "majp", "--n", "4", "--p", "1/3"]) == 0
        obj = json.loads(capsys.readouterr().out)
        assert obj["kind"] == "product"
        assert obj["marginals"][0] == ["1/6", "1/6", "2/3"]

    def test_gen_missing_param(self, capsys):
        assert main(["gen", "hadamard-mu"]) == 2

    def test_gen_decimal_p_rejected(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["gen", "majp", "--n", "3", "--p", "0.5"])
        assert exc.value.code == 2

    def test_deterministic_output(self, capsys):
        main(["gen", "mixture-d", "--k", "3"])
        first = capsys.readouterr().out
        main(["gen", "mixture-d", "--k", "3"])
        assert capsys.readouterr().out == first


@pytest.fixture
def mu_file(tmp_path):
    path = tmp_path / "mu.json"
    save_dist(path, hadamard_mu(2))
    return str(path)


@pytest.fixture
def uniform3_file(tmp_path):
    path = tmp_path / "u3.json"
    save_dist(path, uniform_product(3))
    return str(path)


class TestCliAnalyze:
    def test_effects_json(self, mu_file, capsys):
        assert main(["analyze", "--dist", mu_file, "--fn", "majority",
                     "--what", "effects"]) == 0
        obj = json.loads(capsys.readouterr().out)
        assert [row["effect"] for row in obj["players"]] == ["1/2", "1/2", "1/2"]
        assert obj["players"][0]["effect_float"] == 0.5

    def test_effects_csv(self, mu_file, capsys):
        assert main(["analyze", "--dist", mu_file, "--fn", "majority",
                     "--what", "effects", "--format", "csv"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "player,signed,signed_dec,effect,effect_dec"
        assert lines[1] == "0,1/2,0.5,1/2,0.5"

    def test_influences(self, uniform3_file, capsys):
        assert main(["analyze", "--dist", uniform3_file, "--fn", "parity",
                     "--what", "influences"]) == 0
        obj = json.loads(capsys.readouterr().out)
        assert all(row["influence"] == "1" for row in obj["players"])

    def test_pivotal_requires_thresholds(self, mu_file, capsys):
        assert main(["analyze", "--dist", mu_file, "--fn", "majority",
                     "--what", "pivotal"]) == 2

    def test_pivotal_report(self, uniform3_file, capsys):
        assert main(["analyze", "--dist", uniform3_file, "--fn", "dictator:0",
                     "--what", "pivotal", "--p", "1/4", "--alpha", "1/4"]) == 0
        obj = json.loads(capsys.readouterr().out)
        assert obj["players"][0]["pivotal"] is True
        assert obj["players"][1]["pivotal"] is False

    def test_counts(self, uniform3_file, capsys):
        assert main(["analyze", "--dist", uniform3_file, "--fn", "dictator:1",
                     "--what", "counts", "--alpha", "1/2"]) == 0
        obj = json.loads(capsys.readouterr().out)
        assert obj["count_effect"] == 1

    def test_function_file_input(self, tmp_path, uniform3_file, capsys):
        fn_path = tmp_path / "f.json"
        save_fn(fn_path, UpwardClosure(3, [(1, 1, 0)]))
        assert main(["analyze", "--dist", uniform3_file, "--fn", str(fn_path),
                     "--what", "effects"]) == 0
        obj = json.loads(capsys.readouterr().out)
        assert obj["players"][2]["effect"] == "0"

    def test_alphabet_mismatch_rejected(self, mu_file, capsys):
        assert main(["analyze", "--dist", mu_file, "--fn", "majp",
                     "--what", "effects"]) == 2
        assert "alphabet" in capsys.readouterr().err


class TestCliVerify:
    def test_thm1_ok(self, mu_file, capsys):
        # Deviations are exactly +-1/4, so alpha must sit strictly below.
        assert main(["verify", "--which", "thm1", "--dist", mu_file,
                     "--fn", "majority", "--p", "1/4", "--alpha", "1/5"]) == 0
        obj = json.loads(capsys.readouterr().out)
        assert obj["theorem"] == "thm1"
        assert obj["ok"] is True
        assert obj["computed"]["count_pivotal"] == 3

    def test_warmup(self, uniform3_file, capsys):
        assert main(["verify", "--which", "warmup", "--dist", uniform3_file,
                     "--fn", "parity", "--alpha", "1/4"]) == 0

    def test_sum_bound(self, mu_file, capsys):
        assert main(["verify", "--which", "sum-bound", "--dist", mu_file,
                     "--fn", "majority", "--players", "0,1,2"]) == 0
        obj = json.loads(capsys.readouterr().out)
        assert obj["computed"]["sum_effects"] == "3/2"

    def test_reduction(self, uniform3_file, capsys):
        assert main(["verify", "--which", "reduction", "--dist", uniform3_file,
                     "--fn", "dictator:0", "--p", "1/2", "--alpha", "1/4"]) == 0

    def test_thm2(self, uniform3_file, capsys):
        assert main(["verify", "--which", "thm2", "--dist", uniform3_file,
                     "--fn", "dictator:0", "--m", "1", "--p", "1/2",
                     "--alpha", "1/4"]) == 0
        obj = json.loads(capsys.readouterr().out)
        assert obj["computed"]["union"] == [0]

    def test_convex(self, tmp_path, capsys):
        d1 = tmp_path / "mu.json"
        d2 = tmp_path / "bar.json"
        from pivotal import complement_mu
        save_dist(d1, hadamard_mu(2))
        save_dist(d2, complement_mu(hadamard_mu(2)))
        assert main(["verify", "--which", "convex", "--dist", str(d1),
                     "--dist2", str(d2), "--fn", "majority",
                     "--q", "1/3", "--player", "0"]) == 0

    def test_effect_identity(self, mu_file, capsys):
        assert main(["verify", "--which", "effect-identity", "--dist", mu_file,
                     "--fn", "majority"]) == 0
        obj = json.loads(capsys.readouterr().out)
        assert obj["computed"]["ratio"] == "4"
        assert obj["computed"]["expected_ratio"] == "4"

    def test_missing_argument_is_usage_error(self, mu_file, capsys):
        assert main(["verify", "--which", "thm1", "--dist", mu_file,
                     "--fn", "majority", "--p", "1/4"]) == 2

    def test_precondition_failure_is_usage_error(self, tmp_path, capsys):
        bad = tmp_path / "dep.json"
        from pivotal import ExplicitDist
        save_dist(bad, ExplicitDist(BINARY, 2, [((0, 0), F(1, 2)), ((1, 1), F(1, 2))]))
        assert main(["verify", "--which", "thm1", "--dist", str(bad),
                     "--fn", "parity", "--p", "1/4", "--alpha", "1/4"]) == 2


class TestCliCounterexample:
    def test_effect_counterexample_files(self, tmp_path, capsys):
        fn_out = tmp_path / "f.json"
        dist_out = tmp_path / "d.json"
        code = main(["counterexample", "--which", "effect", "--k", "3",
                     "--out-fn", str(fn_out), "--out-dist", str(dist_out)])
        assert code == 0
        verdict = json.loads(capsys.readouterr().out)
        assert verdict["ok"] is True
        f = fn_from_obj(json.loads(fn_out.read_text()))
        d = dist_from_obj(json.loads(dist_out.read_text()))
        from pivotal import effect_report
        assert all(e == 0 for e in effect_report(f, d).effects())

    def test_influence_k3_fails_with_exit_1(self, capsys):
        code = main(["counterexample", "--which", "influence", "--k", "3"])
        assert code == 1
        verdict = json.loads(capsys.readouterr().out)
        assert verdict["ok"] is False
        assert "violation" in verdict

    def test_influence_k4_passes(self, capsys):
        assert main(["counterexample", "--which", "influence", "--k", "4"]) == 0


class TestCliSweep:
    def test_exact_csv(self, capsys):
        assert main(["sweep", "--majp-tightness", "--n", "5", "--p", "1/2",
                     "--alpha-grid", "7/1024,1"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == ("alpha,alpha_dec,count_or_estimate,count_dec,"
                            "bound,bound_dec,mode,ci_halfwidth")
        assert lines[1].startswith("7/1024,")
        assert ",exact," in lines[1]

    def test_monte_carlo_json(self, capsys):
        assert main(["sweep", "--majp-tightness", "--n", "6", "--p", "1/3",
                     "--alpha-grid", "1/8", "--samples", "200",
                     "--seed", "3", "--format", "json"]) == 0
        rows = json.loads(capsys.readouterr().out)
        assert rows[0]["mode"] == "monte-carlo"
        assert rows[0]["ci_halfwidth"] is not None

    def test_deterministic_with_seed(self, capsys):
        argv = ["sweep", "--majp-tightness", "--n", "5", "--p", "1/2",
                "--alpha-grid", "1/8,1/4", "--samples", "100", "--seed", "17"]
        main(argv)
        first = capsys.readouterr().out
        main(argv)
        assert capsys.readouterr().out == first


class TestThreadEnvVar:
    def test_invalid_cap_rejected(self, monkeypatch, mu_file, capsys):
        monkeypatch.setenv("PIVOTAL_THREADS", "zero")
        assert main(["analyze", "--dist", mu_file, "--fn", "majority",
                     "--what", "effects"]) == 2

    def test_valid_cap_accepted(self, monkeypatch, mu_file, capsys):
        monkeypatch.setenv("PIVOTAL_THREADS", "4")
        assert main(["analyze", "--dist", mu_file, "--fn", "majority",
                     "--what", "effects"]) == 0
