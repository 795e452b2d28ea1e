import io
import json

import pytest

from cli.app import EXIT_DOMAIN_ERROR, EXIT_OK, EXIT_USAGE, run
from cli.components import LogSection
from cli.settings_manager import DEFAULT_SETTINGS, SettingsManager
from helper.report_io import ReportIO


@pytest.fixture(autouse=True)
def work_in_tmp(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)


def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def last_json_line(text):
    return json.loads(text.strip().splitlines()[-1])


def test_exists_output_is_exact():
    code, out, _ = invoke("--quiet", "exists", "--q", "4", "--n", "27")
    assert code == EXIT_OK
    assert out == '{"exists":true,"primes":[{"r":3,"ord":1,"verdict":"friendly"}]}\n'


def test_split_z7():
    code, out, _ = invoke("split", "--q", "2", "--group", "7")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["X0"] == [1]
    assert payload["X1"] == [3]


def test_density():
    code, out, _ = invoke("density", "--q", "2")
    assert code == EXIT_OK
    assert json.loads(out) == {"delta": "7/24"}


def test_orbits():
    code, out, _ = invoke("orbits", "--q", "2", "--group", "7")
    assert code == EXIT_OK
    assert json.loads(out)["orbits"] == [[0], [1, 2, 4], [3, 5, 6]]


def test_extend_order_27():
    code, out, err = invoke("extend", "--q", "4", "--group", "3x9")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["self_dual"] is True
    assert (payload["extended_length"], payload["extended_dimension"]) == (28, 14)
    assert payload["gamma"] == 1
    assert payload["extension_degree"] == 3
    assert "Hermitian self-dual" in err


def test_extend_trivial_group():
    code, out, _ = invoke("extend", "--q", "2", "--group", "1")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert (payload["extended_length"], payload["self_dual"]) == (2, True)


def test_extend_obstruction():
    code, out, err = invoke("extend", "--q", "2", "--group", "3")
    assert code == EXIT_DOMAIN_ERROR
    assert out == ""
    payload = last_json_line(err)
    assert payload["error"] == "obstruction"
    assert "no self-dual extension exists" in payload["message"]
    assert [p["r"] for p in payload["primes"]] == [3]


def test_code_matrix_output():
    code, out, _ = invoke("code", "--q", "2", "--group", "7")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "GF 2 2 7"
    assert lines[1] == "4 7"
    assert len(lines) == 6


def test_matrix_round_trip_reproduces_verdict(tmp_path):
    path = tmp_path / "extended.txt"
    assert invoke("--format", "matrix", "--output", str(path), "extend", "--q", "4", "--group", "3x9")[0] == EXIT_OK
    code, out, _ = invoke("verify-dual", "--matrix", str(path))
    assert code == EXIT_OK
    assert json.loads(out)["self_dual"] is True

    plain = tmp_path / "c0.txt"
    assert invoke("--output", str(plain), "code", "--q", "2", "--group", "7", "--part", "C0")[0] == EXIT_OK
    code, out, _ = invoke("verify-dual", "--matrix", str(plain))
    payload = json.loads(out)
    assert (payload["self_dual"], payload["k"], payload["length"]) == (False, 4, 7)


def test_outputs_are_deterministic():
    for argv in (("extend", "--q", "4", "--group", "3x9"),
                 ("--format", "matrix", "extend", "--q", "2", "--group", "7"),
                 ("count-hsd", "--q", "2", "--x", "1000", "5000")):
        assert invoke(*argv)[1] == invoke(*argv)[1]


@pytest.mark.parametrize("argv", [
    (),
    ("frobnicate",),
    ("--format", "yaml", "density", "--q", "2"),
    ("count-hsd", "--q", "2"),
    ("count-hsd", "--q", "2", "--x", "ten"),
    ("code", "--q", "2", "--group", "7", "--part", "C2"),
])
def test_usage_errors(argv):
    assert invoke(*argv)[0] == EXIT_USAGE


@pytest.mark.parametrize("argv, kind", [
    (("exists", "--q", "6", "--n", "5"), "domain_error"),
    (("split", "--q", "2", "--group", "3y9"), "domain_error"),
    (("split", "--q", "3", "--group", "9"), "domain_error"),
    (("count-hsd", "--q", "2", "--x", "1000000000"), "bound_exceeded"),
    (("--format", "matrix", "density", "--q", "2"), "domain_error"),
    (("split", "--q", "1", "--group", "7"), "domain_error"),
    (("orbits", "--q", "6", "--group", "7"), "domain_error"),
    (("exists", "--q", "6", "--n", "1"), "domain_error"),
    (("code", "--q", "12", "--group", "5"), "domain_error"),
])
def test_domain_errors(argv, kind):
    code, out, err = invoke(*argv)
    assert code == EXIT_DOMAIN_ERROR
    assert out == ""
    assert last_json_line(err)["error"] == kind


def test_verify_dual_rejects_bad_file(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("GF 2 2 7\n1 2\n1 9\n")
    assert invoke("verify-dual", "--matrix", str(path))[0] == EXIT_DOMAIN_ERROR
    assert invoke("verify-dual", "--matrix", str(tmp_path / "missing.txt"))[0] == EXIT_DOMAIN_ERROR


def test_count_hsd_json_and_csv():
    code, out, _ = invoke("count-hsd", "--q", "2", "--x", "30")
    assert code == EXIT_OK
    assert json.loads(out)["exact"] == 9

    code, out, _ = invoke("--format", "csv", "count-hsd", "--q", "2", "--x", "100", "30")
    lines = out.splitlines()
    assert lines[0] == "x,exact,predicted,ratio,constants"
    assert lines[1].startswith("30,9,")


def test_count_bounds_accept_scientific_notation():
    code, out, _ = invoke("asum", "--x", "1e1")
    assert code == EXIT_OK
    assert json.loads(out)["exact"] == 14


def test_excel_output(tmp_path):
    path = tmp_path / "reports" / "asum.xlsx"
    code, out, _ = invoke("--output", str(path), "asum", "--x", "10", "100")
    assert code == EXIT_OK
    assert out == ""
    frame = ReportIO.load_rows(str(path))
    assert frame["exact"].tolist()[0] == 14
    assert list(frame.columns) == ["x", "exact", "predicted", "ratio", "constants"]


def test_maxorder_csv_keeps_exact_integers():
    code, out, _ = invoke("--format", "csv", "maxorder", "--r", "3")
    assert code == EXIT_OK
    assert out.splitlines()[3].split(",")[2] == str(5 ** 3)


def test_other_counting_commands():
    code, out, _ = invoke("pq-count", "--q", "2", "--x", "10")
    assert json.loads(out)["exact"] == 2
    code, out, _ = invoke("distinct", "--x", "10")
    assert json.loads(out)["exact"] == 3
    code, out, _ = invoke("fit-b0", "--q", "2", "--xs", "1000", "10000", "100000")
    assert code == EXIT_OK
    assert len(json.loads(out)["samples"]) == 3
    assert invoke("fit-b0", "--q", "2", "--xs", "1000", "2000")[0] == EXIT_DOMAIN_ERROR


def test_quiet_silences_log():
    code, _, err = invoke("--quiet", "count-hsd", "--q", "2", "--x", "1000")
    assert code == EXIT_OK
    assert err == ""


def test_log_lines_are_timestamped():
    _, _, err = invoke("count-hsd", "--q", "2", "--x", "1000")
    lines = [line for line in err.splitlines() if line.startswith("[")]
    assert lines
    assert all(line[9:11] == "] " for line in lines)


def test_settings_file_controls_rounding(tmp_path):
    (tmp_path / "hsd_settings.json").write_text(json.dumps({"output": {"float_digits": 4}}))
    _, out, _ = invoke("pq-count", "--q", "2", "--x", "1000")
    predicted = json.loads(out)["predicted"]
    assert predicted == float(f"{predicted:.4g}")


def test_unreadable_settings_keep_defaults(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    code, _, err = invoke("--settings", str(path), "density", "--q", "2")
    assert code == EXIT_OK
    assert "Warning: Could not load settings" in err


def test_settings_manager_round_trip(tmp_path):
    messages = []
    manager = SettingsManager(str(tmp_path / "s.json"), log_func=messages.append)
    assert manager.load_settings()[0]
    manager.settings['counting']['chunk_count'] = 8
    assert manager.save_settings()[0]

    reloaded = SettingsManager(str(tmp_path / "s.json"))
    reloaded.load_settings()
    assert reloaded.get('counting', 'chunk_count') == 8
    assert reloaded.get('tests', 'seed') == DEFAULT_SETTINGS['tests']['seed']

    (tmp_path / "s.json").write_text(json.dumps({"counting": {"colour": 1}, "extra": {}}))
    SettingsManager(str(tmp_path / "s.json"), log_func=messages.append).load_settings()
    assert any("Ignoring unknown setting 'counting.colour'" in m for m in messages)


def test_log_section_progress_respects_quiet():
    stream = io.StringIO()
    section = LogSection(stream=stream, quiet=True)
    assert list(section.progress(range(3))) == [0, 1, 2]
    section.add_message("hidden")
    assert stream.getvalue() == ""


def test_field_guard_setting_limits_code_construction(tmp_path):
    (tmp_path / "hsd_settings.json").write_text(json.dumps({"codes": {"field_guard": 32}}))
    code, out, err = invoke("code", "--q", "2", "--group", "7")
    assert code == EXIT_DOMAIN_ERROR
    assert last_json_line(err)["error"] == "bound_exceeded"
    code, _, err = invoke("extend", "--q", "2", "--group", "7")
    assert code == EXIT_DOMAIN_ERROR
    assert last_json_line(err)["error"] == "bound_exceeded"


def test_weight_guard_is_not_a_setting(tmp_path):
    messages = []
    path = tmp_path / "s.json"
    path.write_text(json.dumps({"codes": {"weight_guard": 10}}))
    manager = SettingsManager(str(path), log_func=messages.append)
    manager.load_settings()
    assert list(manager.settings["codes"]) == ["field_guard"]
    assert any("Ignoring unknown setting 'codes.weight_guard'" in m for m in messages)


def test_only_xlsx_is_written_as_excel(tmp_path):
    rows = [{"x": 10, "exact": 14}]
    assert ReportIO.save_rows(rows, str(tmp_path / "legacy.xls"))
    assert (tmp_path / "legacy.xls").read_text() == "x,exact\n10,14\n"
    assert ReportIO.load_rows(str(tmp_path / "legacy.xls"))["exact"].tolist() == [14]

    code, out, _ = invoke("--output", str(tmp_path / "asum.xls"), "asum", "--x", "10")
    assert code == EXIT_OK
    assert json.loads((tmp_path / "asum.xls").read_text())["exact"] == 14
