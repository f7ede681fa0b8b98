import numpy as np
import pytest

from kdvgalerkin import ConfigError, project
from kdvgalerkin.config import parse_config
from kdvgalerkin.field import GridSampling, grid_points

from conftest import assert_coeffs_close

MINIMAL = """
equation.preset = kdv
grid.N = 16
time.k = 1e-3
time.T = 0.1
scheme.name = yoshida4
"""


class TestParseConfig:
    def test_minimal_kdv(self):
        cfg = parse_config(MINIMAL, environ={})
        eq = cfg.equation
        assert (eq.delta, eq.m, eq.gamma, eq.r, eq.q) == (1.0, 1, 0.0, 0, 1)
        assert cfg.n == 16 and cfg.k == 1e-3 and cfg.T == 0.1
        assert cfg.scheme_name == "yoshida4"
        assert cfg.fp_tol == 1e-13 and cfg.guard == "warn"

    def test_defaults_to_kdv_without_equation_keys(self):
        cfg = parse_config("grid.N=8\ntime.k=1e-3\ntime.T=0.1\nscheme.name=imr\n", environ={})
        assert cfg.equation.is_kdv

    def test_explicit_equation_parameters(self):
        text = MINIMAL.replace("equation.preset = kdv",
                               "equation.delta = 1\nequation.m = 2\nequation.gamma = 1\n"
                               "equation.r = 1\nequation.q = 2")
        eq = parse_config(text, environ={}).equation
        assert (eq.delta, eq.m, eq.gamma, eq.r, eq.q) == (1.0, 2, 1.0, 1, 2)

    def test_zero_n_names_the_key(self):
        with pytest.raises(ConfigError) as err:
            parse_config(MINIMAL.replace("grid.N = 16", "grid.N = 0"), environ={})
        assert any("grid.N" in p for p in err.value.problems)

    def test_unknown_scheme_lists_valid_names(self):
        with pytest.raises(ConfigError) as err:
            parse_config(MINIMAL.replace("yoshida4", "yoshida5"), environ={})
        problem = next(p for p in err.value.problems if "scheme.name" in p)
        for name in ("imr", "yoshida4", "yoshida6", "yoshida8"):
            assert name in problem

    def test_all_errors_collected(self):
        text = "grid.N = 0\nscheme.name = rk4\ntime.k = -1\nmystery.key = 3\n"
        with pytest.raises(ConfigError) as err:
            parse_config(text, environ={})
        problems = "\n".join(err.value.problems)
        for fragment in ("grid.N", "scheme.name", "time.k", "mystery.key", "time.T"):
            assert fragment in problems

    def test_duplicate_key_rejected(self):
        with pytest.raises(ConfigError) as err:
            parse_config(MINIMAL + "grid.N = 8\n", environ={})
        assert any("duplicate" in p for p in err.value.problems)

    def test_cross_constraint_r_less_than_m(self):
        text = MINIMAL.replace("equation.preset = kdv",
                               "equation.m = 1\nequation.r = 1\nequation.gamma = 1")
        with pytest.raises(ConfigError) as err:
            parse_config(text, environ={})
        assert any("r must satisfy" in p for p in err.value.problems)

    def test_env_override(self):
        cfg = parse_config(MINIMAL, environ={"KDVG_TIME_K": "2e-3", "KDVG_SOLVER_FP_TOL": "1e-10"})
        assert cfg.k == 2e-3
        assert cfg.fp_tol == 1e-10

    def test_env_override_reads_process_environment(self, monkeypatch):
        monkeypatch.setenv("KDVG_GRID_N", "24")
        assert parse_config(MINIMAL).n == 24

    def test_comments_and_blank_lines(self):
        cfg = parse_config("# header\n\n" + MINIMAL + "\n# trailing\n", environ={})
        assert cfg.n == 16

    def test_study_keys(self):
        text = MINIMAL + "study.k_list = 4e-3, 2e-3, 1e-3\nstudy.order_min = 3.6\nstudy.order_max = 4.4\n"
        cfg = parse_config(text, environ={})
        assert cfg.k_list == [4e-3, 2e-3, 1e-3]
        assert cfg.order_min == 3.6 and cfg.order_max == 4.4

    def test_k_list_must_decrease(self):
        with pytest.raises(ConfigError):
            parse_config(MINIMAL + "study.k_list = 1e-3, 2e-3\n", environ={})

    def test_modes_parsing(self):
        text = MINIMAL + "initial.kind = modes\ninitial.modes = 1=0.5, 2=0.25+0.1j\n"
        cfg = parse_config(text, environ={})
        assert cfg.initial_modes == {1: 0.5 + 0j, 2: 0.25 + 0.1j}


class TestBuildInitial:
    def test_cosine_places_half_amplitude(self):
        cfg = parse_config(MINIMAL + "initial.amplitude = 2.0\ninitial.wavenumber = 3\n", environ={})
        f = cfg.initial_field()
        assert f.coeff(3) == 1.0 and f.coeff(-3) == 1.0

    def test_cosine_above_degree_projects_to_zero(self):
        cfg = parse_config(MINIMAL + "initial.wavenumber = 20\n", environ={})
        assert np.all(cfg.initial_field().coeffs == 0.0)

    def test_gaussian_matches_dense_projection(self):
        text = MINIMAL + "initial.kind = gaussian_periodic\ninitial.width = 0.4\ninitial.center = 0.7\n"
        cfg = parse_config(text, environ={})
        f = cfg.initial_field()
        # oracle: periodize the Gaussian explicitly on a dense grid and project
        x = grid_points(1024)
        total = np.zeros_like(x)
        for shift in range(-12, 13):
            total += np.exp(-((x - 0.7 + 2 * np.pi * shift) ** 2) / (2 * 0.4**2))
        oracle = project(GridSampling(total), 16)
        assert_coeffs_close(f, oracle, 1e-13)

    def test_modes_field(self):
        text = MINIMAL + "initial.kind = modes\ninitial.modes = 1=0.5, 3=0.1j\n"
        f = parse_config(text, environ={}).initial_field()
        assert f.coeff(1) == 0.5
        assert f.coeff(3) == 0.1j
        assert f.coeff(-3) == -0.1j

    def test_modes_kind_requires_modes_key_at_parse_time(self):
        with pytest.raises(ConfigError) as err:
            parse_config(MINIMAL + "initial.kind = modes\n", environ={})
        assert any("initial.modes" in p for p in err.value.problems)
