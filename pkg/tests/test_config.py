import json

import pytest

from qsync.config import (
    AxisSpec,
    MeasureSpec,
    SweepConfig,
    parse_config,
    serialize_config,
)
from qsync.errors import ConfigError
from qsync.models import DrivenSpin1, DrivenVdp

MINIMAL_VDP = {
    "model": {
        "type": "driven_vdp",
        "params": {"detuning": 0.0, "drive": 0.1, "gain": 1.0, "damp": 10.0},
    }
}


def vdp_sweep_config(**overrides):
    base = {
        "schema_version": "1",
        "model": {
            "type": "driven_vdp",
            "params": {"detuning": 0.0, "drive": 0.0, "gain": 1.0, "damp": 10.0, "n_fock": 10},
        },
        "sweep": {
            "axis1": {"param": "detuning", "min": -2.0, "max": 2.0, "count": 21},
            "axis2": {"param": "drive", "min": 0.0, "max": 1.0, "count": 21},
        },
        "measures": [
            {"id": "omega_r", "limit_cycle": "diagonal_correlated"},
            {"id": "c1", "site": 0},
        ],
        "output": {"path": "out.csv", "format": "csv"},
        "runtime": {"workers": 2, "convergence_check": True},
    }
    base.update(overrides)
    return base


class TestParse:
    def test_minimal_config_gets_defaults(self):
        config = parse_config(json.dumps(MINIMAL_VDP))
        assert isinstance(config.model, DrivenVdp)
        assert config.model.n_fock == 10  # damping ratio 10 selects the small cutoff
        assert config.workers >= 1
        assert config.convergence_check is True
        assert config.output_format == "csv"
        assert config.axis1 is None

    def test_full_sweep_config(self):
        config = parse_config(json.dumps(vdp_sweep_config()))
        assert config.axis1 == AxisSpec(param="detuning", lo=-2.0, hi=2.0, count=21)
        assert config.measures[0] == MeasureSpec(id="omega_r", limit_cycle="diagonal_correlated")
        assert config.measures[0].label == "omega_r_diagonal_correlated"
        assert config.output_path == "out.csv"

    def test_bytes_input(self):
        config = parse_config(json.dumps(MINIMAL_VDP).encode("utf-8"))
        assert isinstance(config.model, DrivenVdp)

    def test_negative_rate_names_field(self):
        bad = {
            "model": {
                "type": "driven_spin1",
                "params": {"detuning": 0.0, "drive": 0.0, "gain": 1.0, "damp": -10.0},
            }
        }
        with pytest.raises(ConfigError) as excinfo:
            parse_config(json.dumps(bad))
        assert any("model.params" in v and "damp" in v for v in excinfo.value.violations)

    def test_all_violations_reported(self):
        bad = vdp_sweep_config()
        bad["model"]["params"]["gain"] = -1.0
        bad["sweep"]["axis1"]["count"] = 1
        bad["output"]["format"] = "xml"
        bad["unknown_section"] = {}
        with pytest.raises(ConfigError) as excinfo:
            parse_config(json.dumps(bad))
        text = "\n".join(excinfo.value.violations)
        assert "gain" in text
        assert "sweep.axis1.count" in text
        assert "output.format" in text
        assert "unknown_section" in text
        assert len(excinfo.value.violations) >= 4

    def test_unknown_fields_rejected_everywhere(self):
        bad = vdp_sweep_config()
        bad["model"]["params"]["typo_rate"] = 1.0
        bad["sweep"]["axis1"]["step"] = 0.1
        with pytest.raises(ConfigError) as excinfo:
            parse_config(json.dumps(bad))
        text = "\n".join(excinfo.value.violations)
        assert "model.params.typo_rate" in text
        assert "sweep.axis1.step" in text

    def test_axis_param_must_exist(self):
        bad = vdp_sweep_config()
        bad["sweep"]["axis1"]["param"] = "frequency"
        with pytest.raises(ConfigError) as excinfo:
            parse_config(json.dumps(bad))
        assert any("sweep.axis1.param" in v for v in excinfo.value.violations)

    def test_axes_must_differ(self):
        bad = vdp_sweep_config()
        bad["sweep"]["axis2"]["param"] = "detuning"
        with pytest.raises(ConfigError):
            parse_config(json.dumps(bad))

    def test_cutoff_not_sweepable(self):
        bad = vdp_sweep_config()
        bad["sweep"]["axis2"]["param"] = "n_fock"
        with pytest.raises(ConfigError):
            parse_config(json.dumps(bad))

    def test_duplicate_measures_rejected(self):
        bad = vdp_sweep_config()
        bad["measures"] = [{"id": "s_coh"}, {"id": "s_coh"}]
        with pytest.raises(ConfigError):
            parse_config(json.dumps(bad))

    def test_measure_site_validation(self):
        bad = {
            "model": {
                "type": "driven_spin1",
                "params": {"detuning": 0.0, "drive": 0.0, "gain": 1.0, "damp": 10.0},
            },
            "measures": [{"id": "c1", "site": 0}],
        }
        with pytest.raises(ConfigError) as excinfo:
            parse_config(json.dumps(bad))
        assert any("site" in v for v in excinfo.value.violations)

    def test_partially_coherent_requires_pairs(self):
        bad = {
            "model": {
                "type": "coupled_spin1",
                "params": {"detuning": 0.0, "coupling": 0.1, "gain_a": 100.0,
                           "damp_a": 1.0, "gain_b": 1.0, "damp_b": 100.0},
            },
            "measures": [{"id": "omega_r", "limit_cycle": "partially_coherent_product"}],
        }
        with pytest.raises(ConfigError) as excinfo:
            parse_config(json.dumps(bad))
        assert any("pairs" in v for v in excinfo.value.violations)

    def test_bipartite_measure_on_unipartite_model(self):
        bad = dict(MINIMAL_VDP)
        bad["measures"] = [{"id": "mutual_information"}]
        with pytest.raises(ConfigError):
            parse_config(json.dumps(bad))

    def test_invalid_json_and_encoding(self):
        with pytest.raises(ConfigError):
            parse_config(b"{not json")
        with pytest.raises(ConfigError):
            parse_config(b"\xff\xfe\x00")

    def test_wrong_schema_version(self):
        bad = vdp_sweep_config(schema_version="2")
        with pytest.raises(ConfigError):
            parse_config(json.dumps(bad))


class TestRoundTrip:
    def test_serialize_parse_identity(self):
        config = parse_config(json.dumps(vdp_sweep_config()))
        assert parse_config(serialize_config(config)) == config

    def test_round_trip_with_partial_class_and_wigner(self):
        raw = {
            "model": {
                "type": "coupled_driven_spin1",
                "params": {
                    "drive_detuning": 0.0, "atom_detuning": 0.0, "drive": 0.01,
                    "coupling": 0.0, "gain_a": 100.0, "damp_a": 1.0,
                    "gain_b": 1.0, "damp_b": 100.0,
                },
            },
            "sweep": {
                "axis1": {"param": "atom_detuning", "min": -2.0, "max": 2.0, "count": 11},
                "axis2": {"param": "coupling", "min": 0.0, "max": 1.0, "count": 11},
            },
            "measures": [
                {"id": "omega_r", "limit_cycle": "partially_coherent_product",
                 "pairs": [[0, 1], [0, 1]]},
                {"id": "mutual_information"},
            ],
            "runtime": {"workers": 1, "convergence_check": False},
        }
        config = parse_config(json.dumps(raw))
        assert parse_config(serialize_config(config)) == config
