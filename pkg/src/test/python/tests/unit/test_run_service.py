import json

import numpy as np
import pytest
from pydantic import ValidationError

from isobasis.config.settings import Settings, load_settings
from isobasis.core.database import init_database
from isobasis.core.exceptions import DimensionMismatchException, MalformedStateException
from isobasis.models.domain.entities import RunRecord
from isobasis.models.schemas.io_schemas import BasisFile, StateFile
from isobasis.models.schemas.record_schemas import ScanRecord, ScanSummary
from isobasis.services import construction_service, tensor_service
from isobasis.services.run_service import RunService


@pytest.fixture
def runs(settings):
    service = RunService(settings)
    yield service
    service.close()


class TestRunService:

    def test_creates_layout(self, runs, tmp_path):
        assert runs.output_dir == tmp_path
        assert runs.manifests_dir.is_dir()
        assert runs.results_path == tmp_path / "results.jsonl"

    def test_append_rows(self, runs):
        rows = [ScanSummary(scenario="three-qubit", total=1, converged=1, fraction=1.0, master_seed=3)] * 2
        assert runs.append_rows(rows) == 2
        lines = runs.results_path.read_text(encoding="utf-8").splitlines()
        assert len(lines) == 2
        assert json.loads(lines[0])["kind"] == "summary"

    def test_append_to_custom_path(self, runs, tmp_path):
        target = tmp_path / "nested" / "scan.jsonl"
        runs.append_rows([ScanRecord(scenario="two-qutrit", sample_id=0, seed=1, best_f=0.0, converged=True,
                                     restarts=1, iterations=1, wall_ms=1)], path=target)
        assert target.exists()
        assert not runs.results_path.exists()

    def test_finish_writes_manifest_and_registry_row(self, runs):
        manifest = runs.start("count", {"n": 3}, master_seed=None)
        path = runs.finish(manifest, 0, {"free_params": 63})
        data = json.loads(path.read_text(encoding="utf-8"))
        assert data["command"] == "count"
        assert data["exit_code"] == 0
        assert data["outcome"] == {"free_params": 63}
        assert data["finished_at"] is not None
        listed = runs.list_runs()
        assert [r["command"] for r in listed] == ["count"]

    def test_list_runs_filters_by_command(self, runs):
        for command in ("scan", "search", "scan"):
            runs.finish(runs.start(command, {}, master_seed=1), 1, {"best_f": 0.5})
        assert len(runs.list_runs("scan")) == 2
        assert runs.list_runs("search")[0]["best_f"] == 0.5


class TestRunRegistry:

    def test_init_database_creates_tables(self):
        manager = init_database("sqlite:///:memory:")
        with manager.get_session() as session:
            assert session.query(RunRecord).count() == 0


class TestSettings:

    def test_defaults(self, monkeypatch):
        monkeypatch.delenv("ISOBASIS_OUTPUT_DIR", raising=False)
        settings = Settings()
        assert settings.search.tol == 1e-6
        assert settings.search.stagnation_window == 50
        assert settings.resolved_log_level() == "INFO"
        assert str(settings.resolved_output_dir()) == "data"

    def test_environment_override(self, monkeypatch):
        monkeypatch.setenv("ISOBASIS_LOG_LEVEL", "debug")
        assert Settings().resolved_log_level() == "DEBUG"

    def test_yaml_profile(self, tmp_path, monkeypatch):
        monkeypatch.setenv("PROFILE", "unit")
        (tmp_path / "isobasis-unit.yaml").write_text("search:\n  restarts: 3\n  tol: 1.0e-8\n", encoding="utf-8")
        settings = load_settings(tmp_path)
        assert settings.search.restarts == 3
        assert settings.search.tol == 1e-8

    def test_workers_fallback(self):
        assert Settings().workers() >= 1


class TestFileSchemas:

    def test_state_file_round_trip(self):
        psi = tensor_service.random_state(2, 3, seed=4)
        restored = StateFile.model_validate_json(StateFile.from_domain(psi).model_dump_json()).to_domain()
        assert np.allclose(restored.amps, psi.amps)

    def test_state_file_renormalizes_small_drift(self):
        state = StateFile(n=1, d=2, amps_re=[1.0 + 1e-8, 0.0], amps_im=[0.0, 0.0]).to_domain()
        assert np.isclose(np.linalg.norm(state.amps), 1.0, rtol=0, atol=1e-12)

    def test_state_file_rejects_unnormalized(self):
        with pytest.raises(MalformedStateException):
            StateFile(n=1, d=2, amps_re=[1.0, 1.0], amps_im=[0.0, 0.0]).to_domain()

    def test_state_file_length_checked(self):
        with pytest.raises(ValidationError):
            StateFile(n=2, d=2, amps_re=[1.0, 0.0], amps_im=[0.0, 0.0])

    def test_basis_file_preserves_strings(self):
        strings = construction_service.w_basis_strings(2)
        restored = BasisFile.model_validate_json(BasisFile.from_domain(strings, family="w").model_dump_json())
        assert restored.family == "w"
        for a, b in zip(strings, restored.to_domain()):
            assert np.allclose(a.matrices(), b.matrices())

    def test_basis_file_shape_checked(self):
        data = BasisFile.from_domain(construction_service.w_basis_strings(2)).model_dump()
        data["n"] = 3
        with pytest.raises(DimensionMismatchException):
            BasisFile.model_validate(data).to_domain()
