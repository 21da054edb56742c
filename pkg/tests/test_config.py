"""Tests for pipeline configuration"""

import json

import numpy as np
import pytest

from tsrom.config import GridSpec, PipelineConfig, QoiSpec, load_config
from tsrom.errors import ConfigError, IoFailureError


class TestPipelineConfig:
    """Test suite for PipelineConfig"""

    def test_defaults(self, monkeypatch):
        """BVP with 11 training runs and midpoint testing sites"""
        monkeypatch.delenv("TSROM_OUTPUT_DIR", raising=False)

        config = PipelineConfig()

        assert config.problem == "varcoef_bvp"
        assert config.output_dir == "tsrom_output"
        assert config.interpolant_kind == "linear"
        np.testing.assert_allclose(config.training_values(), np.linspace(0.1, 0.9, 11))
        np.testing.assert_allclose(config.testing_values(), np.linspace(0.14, 0.86, 10))

    def test_advection_diffusion_default_grid(self):
        """15 training runs on [2, 20]"""
        config = PipelineConfig(problem="advection_diffusion")

        assert config.training_values().size == 15
        assert config.training_values()[0] == 2.0
        assert config.training_values()[-1] == 20.0

    def test_output_dir_from_environment(self, monkeypatch):
        """TSROM_OUTPUT_DIR supplies the default"""
        monkeypatch.setenv("TSROM_OUTPUT_DIR", "/tmp/tsrom-env")

        assert PipelineConfig().output_dir == "/tmp/tsrom-env"

    def test_testing_must_be_disjoint(self):
        """Test testing sites shared with training"""
        with pytest.raises(ValueError, match="disjoint"):
            PipelineConfig(training=GridSpec(values=[0.2, 0.4, 0.6]), testing=GridSpec(values=[0.3, 0.4]))

    def test_grid_outside_domain(self):
        """Test training values outside the s-domain"""
        with pytest.raises(ValueError):
            PipelineConfig(training=GridSpec(start=0.0, stop=0.9, count=10))

    @pytest.mark.parametrize(
        "field,value",
        [
            ("m_points", 2),
            ("chunk_rows", 0),
            ("threads", 0),
            ("n_candidates", 1),
            ("interpolant_kind", "cubic"),
        ],
    )
    def test_field_constraints(self, field, value):
        """Test out-of-range fields"""
        with pytest.raises(ValueError):
            PipelineConfig(**{field: value})

    def test_unknown_field(self):
        """Test a misspelled field"""
        with pytest.raises(ValueError):
            PipelineConfig(chunkrows=10)


class TestGridSpec:
    """Test suite for GridSpec"""

    def test_start_stop_count(self):
        """Test the linspace form"""
        expected = np.linspace(2.0, 20.0, 15)
        np.testing.assert_allclose(GridSpec(start=2.0, stop=20.0, count=15).to_array(), expected)

    def test_values_sorted(self):
        """Explicit values come back ascending"""
        assert list(GridSpec(values=[0.5, 0.2, 0.3]).to_array()) == [0.2, 0.3, 0.5]

    def test_incomplete(self):
        """Test a grid without count"""
        with pytest.raises(ValueError):
            GridSpec(start=0.1, stop=0.9)

    def test_duplicate_values(self):
        """Test repeated explicit values"""
        with pytest.raises(ValueError):
            GridSpec(values=[0.2, 0.2])


class TestQoiSpec:
    """Test suite for QoiSpec"""

    def test_build(self):
        """QoiSpec builds the functional"""
        qoi = QoiSpec(kind="exceedance", row_range=(2, 4), threshold=0.5).build()

        assert qoi.kind == "exceedance"
        assert qoi.row_range == (2, 4)
        assert qoi.threshold == 0.5

    def test_bad_range(self):
        """Test a reversed row range"""
        with pytest.raises(ValueError):
            QoiSpec(row_range=(4, 2))


class TestLoadConfig:
    """Test suite for load_config"""

    def test_json_file(self, tmp_path):
        """JSON config with nested grids"""
        path = tmp_path / "config.json"
        path.write_text(
            json.dumps(
                {"m_points": 51, "training": {"start": 0.1, "stop": 0.9, "count": 5}, "chunk_rows": 16}
            ),
            encoding="utf-8",
        )

        config = load_config(path)

        assert config.m_points == 51
        assert config.chunk_rows == 16
        assert config.training_values().size == 5

    def test_yaml_file(self, tmp_path):
        """YAML config"""
        path = tmp_path / "config.yaml"
        path.write_text("problem: advection_diffusion\nm_points: 41\nqoi:\n  kind: mean\n", encoding="utf-8")

        config = load_config(path)

        assert config.problem == "advection_diffusion"
        assert config.m_points == 41

    def test_overrides(self, tmp_path):
        """Overrides win, None overrides are ignored"""
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"m_points": 51, "threads": 2}), encoding="utf-8")

        config = load_config(path, threads=4, chunk_rows=None, output_dir=str(tmp_path / "out"))

        assert config.threads == 4
        assert config.m_points == 51
        assert config.output_dir == str(tmp_path / "out")

    def test_no_file(self):
        """Overrides alone build a config"""
        assert load_config(m_points=31).m_points == 31

    def test_invalid_content(self, tmp_path):
        """Validation failures become ConfigError"""
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"m_points": 1}), encoding="utf-8")

        with pytest.raises(ConfigError):
            load_config(path)

    def test_not_a_mapping(self, tmp_path):
        """Test a list at the top level"""
        path = tmp_path / "config.yaml"
        path.write_text("- 1\n- 2\n", encoding="utf-8")

        with pytest.raises(ConfigError):
            load_config(path)

    def test_missing_file(self, tmp_path):
        """Test a config path that does not exist"""
        with pytest.raises(IoFailureError):
            load_config(tmp_path / "missing.json")
