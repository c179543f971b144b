"""
Тесты для BuemProbeExperiment.
"""
import pytest

from ergolab.core.errors import HypothesisViolationError
from ergolab.handlers.buem_probe import BuemProbeExperiment

PARAMS = {"gamma_grid": [1e-2, 1e-4], "eps": [0.1], "delta": 0.1, "instances": 5, "horizon": 8}


@pytest.fixture
def handler(builder):
    return BuemProbeExperiment(builder)


class TestBuemProbeExperiment:
    """Тесты для BuemProbeExperiment."""

    def test_rates_by_gamma(self, handler, make_context):
        """Тест: строка на каждое γ, доля успехов 1 при малых γ."""
        result = handler.apply(make_context(experiment="buem-probe", operator={"type": "unitary"}, params=PARAMS))

        table = result.tables[0]
        assert table.name == "buem_probe"
        assert [row[0] for row in table.rows] == [1e-2, 1e-4]
        assert all(row[2] == 5 for row in table.rows)
        assert result.checks == {"monotone": True, "full_at_smallest": True}
        assert table.columns[-1] == "max_norm_phi"
        assert all(row[-1] < row[0] for row in table.rows)
        assert result.summary["theoretical_gamma"] > 0
        assert result.plots[0].log_x

    def test_weighted_subsequential_family(self, handler, make_context):
        """Тест: семейство A_n^k с центральными весами."""
        result = handler.apply(
            make_context(
                experiment="buem-probe",
                operator={"type": "kraus"},
                left={"kind": "central", "phases": [[0.3, 0.7]]},
                subsequence={"type": "nosquares"},
                params=PARAMS,
            )
        )
        assert result.passed

    def test_same_seed_same_table(self, handler, make_context):
        """Тест: выборки определяются зерном."""
        a = handler.apply(make_context(experiment="buem-probe", seed=3, params=PARAMS))
        b = handler.apply(make_context(experiment="buem-probe", seed=3, params=PARAMS))
        assert a.tables[0].rows == b.tables[0].rows

    def test_two_sided_weights_rejected(self, handler, make_context):
        """Тест: правые веса нарушают гипотезу односторонности."""
        weights = {"kind": "central", "phases": [[0.3, 0.7]]}
        context = make_context(experiment="buem-probe", left=weights, right=weights, params=PARAMS)
        with pytest.raises(HypothesisViolationError) as exc_info:
            handler.apply(context)
        assert exc_info.value.hypothesis == "one-sided-weights"
