import math

import pytest

from errors import AccuracyError, DomainError, InputFormatError
from kernel import KernelParams
from oracles import reference_transform
from transform import FunctionSpec, TRANSFORM_COLUMNS, kratzel_transform, load_sampled_csv, transform_grid

SQRT_PI = math.sqrt(math.pi)


@pytest.mark.parametrize("mu, z", [(1.0, 1.0), (3.0, 2.0), (0.5, 0.5), (2.0, 5.0), (1.0, 0.1), (0.0, 1.0)])
def test_order_one_is_laplace_transform(mu, z):
    f = FunctionSpec.exp_decay(mu)
    result = kratzel_transform(f, KernelParams(1, 0.5), z)
    assert result.value == pytest.approx(1.0 / (mu + z), rel=1e-7)
    assert result.value == pytest.approx(f.laplace(z), rel=1e-7)


@pytest.mark.parametrize("z", [0.5, 1.0, 2.0])
def test_half_order_kernel_gives_scaled_laplace(z):
    # λ_{1/2}^(2)(x) = √π e^{−x}
    result = kratzel_transform(FunctionSpec.exp_decay(1.0), KernelParams(2, 0.5), z)
    assert result.value == pytest.approx(SQRT_PI / (1.0 + z), rel=1e-7)


def test_power_exp_laplace():
    f = FunctionSpec.power_exp(0.5, mu=1.0)
    result = kratzel_transform(f, KernelParams(1, 2.0), 2.0)
    assert f.laplace(2.0) == pytest.approx(math.gamma(1.5) / 3.0 ** 1.5, rel=1e-14)
    assert result.value == pytest.approx(f.laplace(2.0), rel=1e-7)


def test_power_exp_with_integrable_singularity():
    f = FunctionSpec.power_exp(-0.5, mu=2.0)
    result = kratzel_transform(f, KernelParams(2, 0.5), 1.0)
    assert result.value == pytest.approx(SQRT_PI * f.laplace(1.0), rel=1e-7)


@pytest.mark.slow
def test_bessel_kernel_transform_against_reference():
    result = kratzel_transform(FunctionSpec.exp_decay(1.0), KernelParams(2, 0.0), 1.0)
    assert result.value == pytest.approx(reference_transform(2, 0.0, 1.0), rel=1e-7)


def test_sampled_constant_with_hold_and_cutoff():
    # f = 1 on (0, 4], zero beyond
    f = FunctionSpec.sampled([0.5, 1.0, 2.0, 4.0], [1.0, 1.0, 1.0, 1.0])
    z = 0.7
    result = kratzel_transform(f, KernelParams(1, 1.0), z)
    assert result.value == pytest.approx(-math.expm1(-4.0 * z) / z, rel=1e-7)


def test_sampled_linearity():
    nodes = [0.25, 0.5, 1.0, 2.0, 3.0]
    f = FunctionSpec.sampled(nodes, [1.0, 0.5, 2.0, 0.0, 1.0])
    g = FunctionSpec.sampled(nodes, [0.0, 3.0, 1.0, 1.0, 0.5])
    combo = FunctionSpec.sampled(nodes, [2.0 * a + 3.0 * b for a, b in zip(f.values, g.values)])
    p = KernelParams(1, 0.5)
    tf, tg, tc = (kratzel_transform(h, p, 1.5) for h in (f, g, combo))
    tolerance = tc.err_estimate + 2.0 * tf.err_estimate + 3.0 * tg.err_estimate + 1e-12
    assert abs(tc.value - (2.0 * tf.value + 3.0 * tg.value)) <= tolerance


def test_nonnegative_input_gives_nonnegative_transform():
    f = FunctionSpec.sampled([0.1, 0.2, 5.0], [0.0, 2.0, 0.0])
    assert kratzel_transform(f, KernelParams(2, 0.5), 0.3).value >= 0.0


def test_divergent_integrand():
    with pytest.raises(AccuracyError, match="diverges"):
        kratzel_transform(FunctionSpec.exp_decay(), KernelParams(3, -0.5), 1.0)


@pytest.mark.parametrize("z", [0.0, -1.0, math.nan])
def test_transform_needs_positive_z(z):
    with pytest.raises(DomainError, match="z must be positive"):
        kratzel_transform(FunctionSpec.exp_decay(), KernelParams(1, 0.5), z)


def test_grid_rows_in_order():
    rows = transform_grid(FunctionSpec.exp_decay(), KernelParams(1, 0.5), [1.0, 2.0, 3.0])
    assert [r.z for r in rows] == [1.0, 2.0, 3.0]
    assert [r.value for r in rows] == pytest.approx([0.5, 1.0 / 3.0, 0.25], rel=1e-7)
    assert all(r.error == '' for r in rows)
    assert list(rows[0].to_row()) == TRANSFORM_COLUMNS


def test_grid_half_order():
    rows = transform_grid(FunctionSpec.exp_decay(), KernelParams(2, 0.5), [0.5, 1.0])
    assert [r.value for r in rows] == pytest.approx([SQRT_PI / 1.5, SQRT_PI / 2.0], rel=1e-7)


def test_empty_grid():
    assert transform_grid(FunctionSpec.exp_decay(), KernelParams(1, 0.5), []) == []


def test_grid_records_failures_per_row():
    rows = transform_grid(FunctionSpec.exp_decay(), KernelParams(3, -0.5), [1.0, 2.0])
    assert len(rows) == 2
    assert all(math.isnan(r.value) and 'diverges' in r.error for r in rows)


@pytest.mark.parametrize("zs", [[2.0, 1.0], [1.0, 1.0], [-1.0, 1.0]])
def test_grid_needs_increasing_positive_z(zs):
    with pytest.raises(DomainError):
        transform_grid(FunctionSpec.exp_decay(), KernelParams(1, 0.5), zs)


@pytest.mark.parametrize("kwargs, message", [
    ({'kind': 'exp-decay', 'mu': -1.0}, "mu must be non-negative"),
    ({'kind': 'power-exp', 'power': -1.0}, "power must exceed -1"),
    ({'kind': 'gaussian'}, "unknown function kind"),
    ({'kind': 'sampled', 'nodes': (1.0, 2.0), 'values': (1.0,)}, "same length"),
    ({'kind': 'sampled', 'nodes': (1.0,), 'values': (1.0,)}, "at least two nodes"),
    ({'kind': 'sampled', 'nodes': (0.0, 2.0), 'values': (1.0, 1.0)}, "nodes must be positive"),
    ({'kind': 'sampled', 'nodes': (2.0, 1.0), 'values': (1.0, 1.0)}, "strictly increasing"),
    ({'kind': 'sampled', 'nodes': (1.0, 2.0), 'values': (1.0, math.inf)}, "finite"),
])
def test_function_spec_validation(kwargs, message):
    with pytest.raises(DomainError, match=message):
        FunctionSpec(**kwargs)


def test_sampled_interpolation_conventions():
    f = FunctionSpec.sampled([1.0, 3.0], [2.0, 4.0])
    assert list(f([0.5, 1.0, 2.0, 3.0, 3.5])) == [2.0, 2.0, 3.0, 4.0, 0.0]
    assert f.laplace(1.0) is None
    assert f.support_end == 3.0


def test_load_sampled_csv(tmp_path):
    path = tmp_path / "f.csv"
    path.write_text("t,f\n0.5,1.0\n1.0, 0.25\n2.0,0\n")
    f = load_sampled_csv(str(path))
    assert f.kind == 'sampled'
    assert f.nodes == (0.5, 1.0, 2.0)
    assert f.values == (1.0, 0.25, 0.0)


def test_load_sampled_csv_non_increasing(tmp_path):
    path = tmp_path / "f.csv"
    path.write_text("t,f\n0.5,1\n1.0,2\n0.75,3\n")
    with pytest.raises(InputFormatError, match="line 4: nodes must be strictly increasing") as excinfo:
        load_sampled_csv(str(path))
    assert excinfo.value.line == 4


def test_load_sampled_csv_non_numeric(tmp_path):
    path = tmp_path / "f.csv"
    path.write_text("t,f\n0.5,1\nabc,2\n")
    with pytest.raises(InputFormatError, match="line 3"):
        load_sampled_csv(str(path))


def test_load_sampled_csv_wrong_columns(tmp_path):
    path = tmp_path / "f.csv"
    path.write_text("t,f,g\n0.5,1,2\n1.0,2,3\n")
    with pytest.raises(InputFormatError, match="expected 2 columns"):
        load_sampled_csv(str(path))


def test_load_sampled_csv_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_sampled_csv(str(tmp_path / "missing.csv"))


def test_load_sampled_csv_line_numbers_count_blank_lines(tmp_path):
    path = tmp_path / "f.csv"
    path.write_text("t,f\n0.5,1\n\n1.0,2\n0.75,3\n")
    with pytest.raises(InputFormatError, match="line 3: blank line") as excinfo:
        load_sampled_csv(str(path))
    assert excinfo.value.line == 3


def test_load_sampled_csv_trailing_blank_lines(tmp_path):
    path = tmp_path / "f.csv"
    path.write_text("t,f\n0.5,1\n1.0,2\n\n\n")
    f = load_sampled_csv(str(path))
    assert f.nodes == (0.5, 1.0)
