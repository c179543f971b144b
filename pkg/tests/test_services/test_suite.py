"""
Тесты для SuiteService.
"""
from types import SimpleNamespace

import pytest

from ergolab.models.experiment import ExperimentType
from ergolab.models.results import ExperimentResult
from ergolab.services.fs import FileSystemError
from ergolab.services.suite import SUMMARY_FILE

HEADER = "scenario,experiment,status,checks_passed,checks_total,message\n"


@pytest.fixture
def norm_scenario(base_scenario):
    """Быстрый сценарий norm-table с явным диагональным элементом."""
    return {**base_scenario, "id": "norms", "experiment": "norm-table", "phi": "p:2", "params": {}}


class TestSuiteService:
    """Тесты для SuiteService."""

    def test_empty_directory(self, suite_service, temp_dir):
        """Тест: пустая директория дает сводку только с заголовком."""
        scenarios = temp_dir / "scenarios"
        scenarios.mkdir()
        summary = suite_service.run(scenarios, out_dir=temp_dir / "results")

        assert summary.rows == []
        assert summary.all_passed
        assert (temp_dir / "results" / SUMMARY_FILE).read_text(encoding="utf-8") == HEADER

    def test_missing_directory(self, suite_service, temp_dir):
        """Тест: отсутствующая директория дает FileSystemError."""
        with pytest.raises(FileSystemError):
            suite_service.run(temp_dir / "missing", out_dir=temp_dir / "results")

    def test_rows_follow_file_names(self, suite_service, write_scenario, norm_scenario, base_scenario, temp_dir):
        """Тест: строки упорядочены по именам файлов, результаты лежат в <out>/<имя файла>."""
        write_scenario(base_scenario, "b_yeadon.json")
        write_scenario(norm_scenario, "a_norms.json")
        summary = suite_service.run(temp_dir / "scenarios", out_dir=temp_dir / "results")

        assert [row.scenario for row in summary.rows] == ["norms", "unit_yeadon"]
        assert [row.experiment for row in summary.rows] == ["norm-table", "maximal-search"]
        assert summary.all_passed
        assert (temp_dir / "results" / "a_norms" / "norms.csv").exists()
        assert (temp_dir / "results" / "b_yeadon" / "manifest.json").exists()

    def test_error_row_does_not_stop_suite(self, suite_service, write_scenario, norm_scenario, temp_dir):
        """Тест: невалидный сценарий дает строку error, остальные выполняются."""
        write_scenario(norm_scenario, "a_norms.json")
        write_scenario({"spec_version": 1, "id": "bad"}, "b_bad.json")
        summary = suite_service.run(temp_dir / "scenarios", out_dir=temp_dir / "results")

        assert [row.status for row in summary.rows] == ["pass", "error"]
        error = summary.rows[1]
        assert error.scenario == "b_bad"
        assert error.experiment == ""
        assert error.message.startswith("ConfigParseError")
        assert not summary.all_passed
        assert not (temp_dir / "results" / "b_bad").exists()

    def test_failed_checks_are_listed(self, suite_service, write_scenario, norm_scenario, temp_dir, monkeypatch):
        """Тест: строка fail перечисляет непройденные проверки в алфавитном порядке."""
        write_scenario(norm_scenario, "norms.json")
        result = ExperimentResult(
            scenario_id="norms",
            experiment=ExperimentType.NORM_TABLE,
            checks={"trace_identity": False, "closed_form": True, "modular_bound": False},
        )
        monkeypatch.setattr(suite_service._runner, "run", lambda *args, **kwargs: SimpleNamespace(result=result))
        summary = suite_service.run(temp_dir / "scenarios", out_dir=temp_dir / "results")

        row = summary.rows[0]
        assert row.status == "fail"
        assert (row.checks_passed, row.checks_total) == (1, 3)
        assert row.message == "modular_bound;trace_identity"

    def test_jobs_do_not_change_summary(self, suite_service, write_scenario, norm_scenario, base_scenario, temp_dir):
        """Тест: сводка побайтно одинакова при 1 и 4 потоках."""
        write_scenario(norm_scenario, "a.json")
        write_scenario(base_scenario, "b.json")
        write_scenario({**norm_scenario, "id": "norms_expm1", "phi": "expm1"}, "c.json")
        write_scenario({"spec_version": 1}, "d.json")

        suite_service.run(temp_dir / "scenarios", out_dir=temp_dir / "one", jobs=1)
        suite_service.run(temp_dir / "scenarios", out_dir=temp_dir / "four", jobs=4)

        one = (temp_dir / "one" / SUMMARY_FILE).read_bytes()
        four = (temp_dir / "four" / SUMMARY_FILE).read_bytes()
        assert one == four
        assert one.decode("utf-8").count("\n") == 5
