"""Full campaigns; minutes of CPU time. Run with `pytest -m slow`."""
import pytest

from isobasis.models.schemas.record_schemas import ConstructionKindEnum, ScanSummary
from isobasis.services import report_service, search_service
from isobasis.services.search_service import SearchService

pytestmark = pytest.mark.slow


class TestScanCampaigns:

    def test_two_qutrit_campaign_converges(self):
        records = SearchService(workers=2, quiet=True).scan_two_qutrit(samples=50, restarts=10, master_seed=2024)
        assert sum(r.converged for r in records) == 50

    def test_three_qubit_campaign_converges(self):
        records = SearchService(workers=2, quiet=True).scan_three_qubit(samples=50, restarts=10, master_seed=2024)
        assert sum(r.converged for r in records) == 50

    def test_parallel_and_sequential_pick_the_same_restart(self, random_three_qubit):
        sequential = SearchService(workers=1, quiet=True)
        parallel = SearchService(workers=3, quiet=True)
        problem = sequential.problem(random_three_qubit, 8, restarts=3, master_seed=77)
        a, b = sequential.minimize_f(problem), parallel.minimize_f(problem)
        assert a.restart_index == b.restart_index
        assert a.best_f == b.best_f


class TestHardFourQubitState:

    def test_full_basis_not_found(self):
        result = SearchService(workers=4, quiet=True).probe_four_qubit(restarts=20, master_seed=2024)
        assert not result.converged
        assert result.best_f >= 1e-2

    def test_partial_basis_below_parameter_threshold(self):
        service = SearchService(workers=4, quiet=True)
        result = service.minimize_f(
            service.problem(search_service.hard_four_qubit_state(), 8, restarts=10, master_seed=3)
        )
        assert result.converged


class TestPartialBasesOnHardState:

    @pytest.fixture(scope="class")
    def partial_results(self):
        service = SearchService(workers=4, quiet=True)
        return {m: service.probe_four_qubit(restarts=20, master_seed=2024, m=m) for m in (12, 13)}

    def test_twelve_states_reachable(self, partial_results):
        assert partial_results[12].best_f <= 1e-6

    def test_thirteen_states_not_found(self, partial_results):
        assert partial_results[13].best_f >= 1e-4
        assert not partial_results[13].converged

    def test_fewer_states_never_worse_at_matched_budget(self, partial_results):
        assert partial_results[12].best_f <= partial_results[13].best_f + 1e-9


class TestFullReport:

    def test_overview_after_standard_campaign(self, cli):
        for family in ("bell", "two-qubit-si", "three-qubit-si"):
            cli("construct", "--family", family)
        cli("construct", "--family", "bipartite-pow2", "--d", "8")
        cli("scan", "--scenario", "three-qubit", "--samples", "5", "--restarts", "10", "--seed", "1", "--workers", "2")
        cli("scan", "--scenario", "two-qutrit", "--samples", "5", "--restarts", "10", "--seed", "1", "--workers", "2")
        cli("si", "enumerate", "--n", "4")
        cli("si", "certify-4")
        cli("si", "witness", "--random", "20", "--seed", "1")
        cli("si", "odd-dim", "--d", "3")
        rows = report_service.read_rows([cli.output_dir / "results.jsonl"])
        assert any(isinstance(r, ScanSummary) for r in rows)
        report = report_service.build_report(rows)
        dependent = ConstructionKindEnum.STATE_DEPENDENT
        independent = ConstructionKindEnum.STATE_INDEPENDENT
        assert [report.mark(dependent, c) for c in ("2,2,R", "2,2,C", "3,2,R", "3,2,C", "2,3,C", "2,4|8,C")] == [
            "✓", "✓", "✓", "(✓)", "(✓)", "✓"
        ]
        assert [report.mark(independent, c) for c in report_service.CELLS] == [
            "✓", "✗", "✓", "✗", "✗", "✗", "✗", "✗"
        ]
