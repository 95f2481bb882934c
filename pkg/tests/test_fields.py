import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jacobiset.fields import (
    DEFAULT_MIXTURE,
    DimensionMismatchError,
    GaussianComponent,
    GaussianMixtureSpec,
    HeaderError,
    NoiseSpec,
    NonFiniteValueError,
    ParameterError,
    ScalarGrid,
    apply_noise,
    format_grid,
    gen_analytic,
    load_grid,
    save_grid,
)


def write(tmp_path, text, name="g.jgrid"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_load_2x2(tmp_path):
    p = write(tmp_path, "JGRID 1\n2 2\n0 0 1 1\n0 1\n2 3\n")
    g = load_grid(p)
    assert (g.nx, g.ny) == (2, 2)
    assert g.values.tolist() == [0.0, 1.0, 2.0, 3.0]
    assert g.origin == (0.0, 0.0) and g.spacing == (1.0, 1.0)


def test_load_row_is_y():
    g = ScalarGrid.from_function(lambda x, y: 10 * y + x, 3, 2, spacing=(1.0, 1.0))
    assert g.array[1].tolist() == [10.0, 11.0, 12.0]
    assert g.values[1 * 3 + 2] == 12.0


def test_dimension_mismatch(tmp_path):
    p = write(tmp_path, "JGRID 1\n3 3\n0 0 1 1\n0 1 2\n3 4 5\n6 7\n")
    with pytest.raises(DimensionMismatchError) as exc:
        load_grid(p)
    assert exc.value.lineno == 6


@pytest.mark.parametrize(
    "text, err, line",
    [
        ("JGRIDX 1\n2 2\n0 0 1 1\n0 1\n2 3\n", HeaderError, 1),
        ("JGRID 1\n2\n0 0 1 1\n0 1\n2 3\n", HeaderError, 2),
        ("JGRID 1\n2 2\n0 0 1\n0 1\n2 3\n", HeaderError, 3),
        ("JGRID 1\n2 2\n0 0 0 1\n0 1\n2 3\n", HeaderError, 3),
        ("JGRID 1\n2 2\n0 0 1 1\n0 nan\n2 3\n", NonFiniteValueError, 4),
        ("JGRID 1\n2 2\n0 0 1 1\n0 1\n2 inf\n", NonFiniteValueError, 5),
        ("JGRID 1\n2 2\n0 0 1 1\n0 1 2\n3\n", DimensionMismatchError, 4),
    ],
)
def test_parse_errors_name_line(tmp_path, text, err, line):
    with pytest.raises(err) as exc:
        load_grid(write(tmp_path, text))
    assert exc.value.lineno == line
    assert f":{line}:" in str(exc.value)


def test_csv_matrix(tmp_path):
    p = write(tmp_path, "0,1,2\n3,4,5\n", "m.csv")
    g = load_grid(p, "csv-matrix")
    assert (g.nx, g.ny) == (3, 2)
    assert g.spacing == (0.5, 1.0)
    assert g.origin == (0.0, 0.0)
    with pytest.raises(DimensionMismatchError):
        load_grid(write(tmp_path, "0,1,2\n3,4\n", "bad.csv"), "csv-matrix")


def test_round_trip_byte_identical(tmp_path):
    p = write(tmp_path, "JGRID 1\n3 2\n-1 0.5 0.25 0.125\n1e-3  2.50 -0\n7 8 9.0\n")
    g = load_grid(p)
    canon = format_grid(g)
    out = tmp_path / "out.jgrid"
    save_grid(g, out)
    assert out.read_text() == canon
    save_grid(load_grid(out), tmp_path / "again.jgrid")
    assert (tmp_path / "again.jgrid").read_bytes() == out.read_bytes()


@settings(max_examples=50, deadline=None)
@given(
    st.integers(2, 6),
    st.integers(2, 6),
    st.data(),
)
def test_round_trip_property(tmp_path_factory, nx, ny, data):
    vals = data.draw(
        st.lists(st.floats(allow_nan=False, allow_infinity=False), min_size=nx * ny, max_size=nx * ny)
    )
    g = ScalarGrid(nx, ny, (-0.3, 1e-7), (0.1, 3.0), vals)
    d = tmp_path_factory.mktemp("rt")
    for fmt in ("text-grid", "csv-matrix"):
        if fmt == "csv-matrix":
            g = ScalarGrid.from_array(g.array)
        save_grid(g, d / "g", fmt)
        back = load_grid(d / "g", fmt)
        assert back == g
        assert np.array_equal(back.values, g.values)


def test_grid_invariants():
    with pytest.raises(ValueError):
        ScalarGrid(1, 3, values=[0, 1, 2])
    with pytest.raises(ValueError):
        ScalarGrid(2, 2, values=[0, 1, 2])
    with pytest.raises(ValueError):
        ScalarGrid(2, 2, values=[0, 1, 2, np.inf])
    g = ScalarGrid(2, 2, values=[0, 1, 2, 3])
    with pytest.raises(ValueError):
        g.values[0] = 5


def test_gaussian_peak():
    spec = GaussianMixtureSpec(f=(GaussianComponent.isotropic((0.5, 0.5), 0.1, 1.0),))
    f, g = gen_analytic(3, spec)
    assert f.array[1, 1] == 1.0
    assert np.all(g.values == 0.0)


def test_empty_mixture_zero():
    f, g = gen_analytic(5, GaussianMixtureSpec())
    assert not f.values.any() and not g.values.any()


def test_gaussian_formula_anisotropic():
    comp = GaussianComponent((0.2, 0.7), ((0.04, 0.01), (0.01, 0.09)), -2.0)
    f, _ = gen_analytic(7, GaussianMixtureSpec(f=(comp,)))
    x, y = 3 / 6, 1 / 6
    prec = np.linalg.inv(np.array(comp.cov))
    d = np.array([x - 0.2, y - 0.7])
    assert f.array[1, 3] == pytest.approx(-2.0 * math.exp(-0.5 * d @ prec @ d), rel=1e-14)


def test_non_pd_covariance():
    bad = GaussianComponent((0.5, 0.5), ((1.0, 2.0), (2.0, 1.0)))
    with pytest.raises(ParameterError):
        gen_analytic(4, GaussianMixtureSpec(g=(bad,)))
    with pytest.raises(ParameterError):
        gen_analytic(1)


def test_default_mixture_extrema():
    n = 80
    f, g = gen_analytic(n)
    h = 1.0 / (n - 1)

    def at(grid, idx):
        j, i = np.unravel_index(idx, grid.shape)
        return np.array([i * h, j * h])

    assert np.linalg.norm(at(f, np.argmax(f.array)) - (0.3, 0.3)) <= h
    assert np.linalg.norm(at(f, np.argmin(f.array)) - (0.7, 0.6)) <= h
    assert np.linalg.norm(at(g, np.argmax(g.array)) - (0.5, 0.5)) <= h


def test_gen_analytic_pure():
    a = gen_analytic(33)
    b = gen_analytic(33, DEFAULT_MIXTURE)
    assert a[0] == b[0] and a[1] == b[1]


def test_noise_noop():
    f, _ = gen_analytic(10)
    out = apply_noise(f, NoiseSpec(salt_pepper_fraction=0.0, gaussian_sigma=0.0, seed=3))
    assert out == f


def test_noise_full_replacement():
    f, _ = gen_analytic(10)
    spec = NoiseSpec(1.0, 7.0, 7.0, 0.0, seed=1)
    assert np.all(apply_noise(f, spec).values == 7.0)


@pytest.mark.parametrize("fraction", [0.005, 0.013, 0.5, 0.999])
def test_noise_replaces_exact_count(fraction):
    g = ScalarGrid.from_array(np.zeros((23, 17)))
    out = apply_noise(g, NoiseSpec(fraction, -1.0, 1.0, 0.0, seed=9))
    assert np.count_nonzero(out.values) == round(fraction * g.values.size)


def test_noise_mean_bound():
    n = 80
    const = ScalarGrid.from_array(np.full((n, n), 2.5))
    sigma = 0.01
    out = apply_noise(const, NoiseSpec(0.0, gaussian_sigma=sigma, seed=42))
    assert abs(out.values.mean() - 2.5) <= 3 * sigma / math.sqrt(n * n)
    assert out.values.std() == pytest.approx(sigma, rel=0.05)


def test_noise_reproducible_and_streams_differ():
    f, _ = gen_analytic(20)
    spec = NoiseSpec(seed=5)
    a, b = apply_noise(f, spec), apply_noise(f, spec)
    assert np.array_equal(a.values, b.values)
    c = apply_noise(f, NoiseSpec(seed=5, stream=1))
    assert not np.array_equal(a.values, c.values)
    d = apply_noise(f, NoiseSpec(seed=6))
    assert not np.array_equal(a.values, d.values)


def test_noise_default_sigma_relative():
    g = ScalarGrid.from_array(np.tile(np.linspace(0, 100, 200), (200, 1)))
    out = apply_noise(g, NoiseSpec(0.0, seed=0))
    assert (out.values - g.values).std() == pytest.approx(1.0, rel=0.02)


def test_noise_spec_invariants():
    with pytest.raises(ParameterError):
        NoiseSpec(1.5)
    with pytest.raises(ParameterError):
        NoiseSpec(0.1, gaussian_sigma=-1.0)
