import json

import pytest

from loccdisc.cli import main


def _run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestEnsembleCommand:
    def test_bell_two(self, capsys):
        code, out, _ = _run(capsys, "ensemble", '{"kind":"bell","n":2}')
        assert code == 0
        doc = json.loads(out)
        assert doc["tool"] == "loccdisc"
        assert doc["command"] == "ensemble"
        assert doc["report"]["k"] == 4
        assert doc["report"]["is_orthogonal"] is True
        assert doc["report"]["is_maximally_entangled"] is True

    def test_bad_dimension_exits_2(self, capsys):
        code, _, err = _run(capsys, "ensemble", '{"kind":"bell","n":1}')
        assert code == 2
        assert "error" in err

    def test_invalid_json_exits_2(self, capsys):
        code, _, _ = _run(capsys, "ensemble", "{not json")
        assert code == 2

    def test_random_triple(self, capsys):
        code, out, _ = _run(capsys, "ensemble", '{"kind":"random_me_triple","n":3,"seed":7}')
        assert code == 0
        doc = json.loads(out)
        assert doc["report"]["k"] == 3
        assert doc["report"]["is_maximally_entangled"] is True


class TestSynthesizeCommand:
    def test_prop1(self, capsys):
        code, out, _ = _run(
            capsys,
            "synthesize",
            "--ensemble", '{"kind":"random_me_triple","n":3,"seed":1}',
            "--method", "prop1",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["report"]["success_probability"] > 1 - 1e-9
        assert doc["report"]["max_bob_overlap"] < 1e-8

    def test_cub_auto(self, capsys):
        code, out, _ = _run(
            capsys,
            "synthesize",
            "--ensemble", '{"kind":"bell_subset","n":5,"labels":[[0,0],[1,0],[0,1]]}',
            "--method", "cub",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["report"]["success_probability"] > 1 - 1e-9

    def test_cub_explicit_source(self, capsys):
        from loccdisc import fourier_matrix
        from loccdisc.serial import matrix_to_json

        code, out, _ = _run(
            capsys,
            "synthesize",
            "--ensemble", '{"kind":"simdiag","u":' + json.dumps(matrix_to_json(fourier_matrix(3))) + "}",
            "--method", "cub",
            "--cub-source", json.dumps(matrix_to_json(fourier_matrix(3))),
        )
        assert code == 0
        assert json.loads(out)["report"]["success_probability"] > 1 - 1e-9

    def test_prop1_wrong_count_exits_2(self, capsys):
        code, _, _ = _run(
            capsys,
            "synthesize",
            "--ensemble", '{"kind":"bell","n":2}',
            "--method", "prop1",
        )
        assert code == 2


class TestEvaluateAndSimulate:
    @pytest.fixture
    def protocol_file(self, capsys, tmp_path):
        code, out, _ = _run(
            capsys,
            "synthesize",
            "--ensemble", '{"kind":"random_me_triple","n":3,"seed":4}',
            "--method", "prop1",
        )
        assert code == 0
        doc = json.loads(out)
        path = tmp_path / "protocol.json"
        path.write_text(json.dumps(doc["report"]["protocol"]))
        return str(path)

    def test_roundtrip_evaluate(self, capsys, protocol_file):
        code, out, _ = _run(
            capsys,
            "evaluate",
            "--protocol", protocol_file,
            "--ensemble", '{"kind":"random_me_triple","n":3,"seed":4}',
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["report"]["success_probability"] > 1 - 1e-9

    def test_simulate(self, capsys, protocol_file):
        code, out, _ = _run(
            capsys,
            "simulate",
            "--protocol", protocol_file,
            "--ensemble", '{"kind":"random_me_triple","n":3,"seed":4}',
            "--trials", "2000",
            "--seed", "9",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["report"]["empirical_success_rate"] == 1.0

    def test_zero_trials_exits_2(self, capsys, protocol_file):
        code, _, _ = _run(
            capsys,
            "simulate",
            "--protocol", protocol_file,
            "--ensemble", '{"kind":"random_me_triple","n":3,"seed":4}',
            "--trials", "0",
        )
        assert code == 2

    def test_byte_identical_reports(self, capsys, protocol_file):
        args = (
            "simulate",
            "--protocol", protocol_file,
            "--ensemble", '{"kind":"random_me_triple","n":3,"seed":4}',
            "--trials", "500",
            "--seed", "3",
        )
        _, out1, _ = _run(capsys, *args)
        _, out2, _ = _run(capsys, *args)
        assert out1 == out2


class TestRoundTrips:
    def test_ensemble_report_accepted_downstream(self, capsys, tmp_path):
        # the ensemble command's report must itself parse as an ensemble input
        code, out, _ = _run(capsys, "ensemble", '{"kind":"random_me_triple","n":3,"seed":2}')
        assert code == 0
        report = json.loads(out)["report"]
        path = tmp_path / "ens.json"
        path.write_text(json.dumps(report))
        code, out, _ = _run(capsys, "synthesize", "--ensemble", str(path), "--method", "prop1")
        assert code == 0
        assert json.loads(out)["report"]["success_probability"] > 1 - 1e-9


class TestBoundsCommand:
    def test_full_bell2(self, capsys):
        code, out, _ = _run(capsys, "bounds", "--ensemble", '{"kind":"bell","n":2}')
        assert code == 0
        doc = json.loads(out)
        assert doc["report"]["verdict"] == "PerfectImpossible"
        schmidt = [w for w in doc["report"]["witnesses"] if w["name"] == "schmidt-weight"]
        assert schmidt and abs(schmidt[0]["value"] - 0.5) < 1e-12

    def test_triple_possible(self, capsys):
        code, out, _ = _run(
            capsys, "bounds", "--ensemble", '{"kind":"random_me_triple","n":3,"seed":0}'
        )
        assert code == 0
        assert json.loads(out)["report"]["verdict"] == "PerfectPossible"

    def test_nonorthogonal_exits_2(self, capsys):
        from loccdisc import me_state, uniform_ensemble
        from loccdisc.serial import ensemble_to_json

        payload = json.dumps(ensemble_to_json(uniform_ensemble([me_state(2), me_state(2)])))
        code, _, _ = _run(capsys, "bounds", "--ensemble", payload)
        assert code == 2
