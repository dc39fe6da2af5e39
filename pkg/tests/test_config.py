"""Tests for intervalroc.config module."""

import pytest

from intervalroc.config import LogisticConfig, RunConfig, parse_percent_list
from intervalroc.errors import InputContractError


class TestRunConfig:
    """Test RunConfig validation and manifest round trips."""

    def test_defaults(self):
        config = RunConfig(command="eval", out_dir="out")
        assert config.levels == (0.50, 0.70, 0.90, 0.95)
        assert config.emits("svg")

    @pytest.mark.parametrize("levels", [(1.5,), (1.0,), (-0.05,), (0.5, float("nan"))])
    def test_level_outside_unit_interval(self, levels):
        with pytest.raises(InputContractError, match="outside"):
            RunConfig(command="eval", out_dir="out", levels=levels)

    def test_level_zero_allowed(self):
        assert RunConfig(command="sweep", out_dir="out", levels=(0.0, 0.9)).levels == (0.0, 0.9)

    def test_manifest_levels_checked(self):
        data = RunConfig(command="sweep", out_dir="out").to_dict()
        data["levels"] = [0.5, 1.2]
        with pytest.raises(InputContractError):
            RunConfig.from_dict(data)

    def test_round_trip(self):
        config = RunConfig(
            command="bootstrap", out_dir="out", zero_as_missing=("Insulin",),
            logistic=LogisticConfig(l2=0.1, max_iter=50),
        )
        assert RunConfig.from_dict(config.to_dict()) == config

    def test_unknown_manifest_key(self):
        data = RunConfig(command="eval", out_dir="out").to_dict()
        data["colour"] = "blue"
        with pytest.raises(InputContractError, match="colour"):
            RunConfig.from_dict(data)

    @pytest.mark.parametrize(
        "kwargs",
        [{"command": "plot"}, {"emit": ("pdf",)}, {"quantile_rule": "type9"}, {"workers": 0}],
    )
    def test_invalid_fields(self, kwargs):
        values = {"command": "eval", "out_dir": "out", **kwargs}
        with pytest.raises(InputContractError):
            RunConfig(**values)


class TestParsePercentList:
    def test_percent_to_fraction(self):
        assert parse_percent_list("50,90") == [0.5, 0.9]

    def test_not_a_number(self):
        with pytest.raises(InputContractError):
            parse_percent_list("50,high")
