"""Scalar fields sampled on regular 2D grids.

Grids are loaded from the ``JGRID`` text format or a bare CSV matrix,
generated from bivariate Gaussian mixtures on the unit square, and
perturbed with reproducible salt-and-pepper plus Gaussian noise.

Random numbers come from numpy's Philox4x64 counter-based generator keyed
by ``numpy.random.SeedSequence(seed, spawn_key=(stream,))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = [
    "ScalarGrid",
    "NoiseSpec",
    "GaussianComponent",
    "GaussianMixtureSpec",
    "GridParseError",
    "HeaderError",
    "DimensionMismatchError",
    "NonFiniteValueError",
    "ParameterError",
    "DEFAULT_MIXTURE",
    "load_grid",
    "save_grid",
    "format_grid",
    "gen_analytic",
    "apply_noise",
]


class GridParseError(ValueError):
    """Raised when a grid file cannot be parsed.

    ``lineno`` is the 1-based line number the problem was detected on.
    """

    def __init__(self, message, lineno=None, path=None):
        self.lineno = lineno
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if lineno is not None:
            where += f"{lineno}: "
        elif where:
            where += " "
        super().__init__(where + message)


class HeaderError(GridParseError):
    pass


class DimensionMismatchError(GridParseError):
    pass


class NonFiniteValueError(GridParseError):
    pass


class ParameterError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ScalarGrid:
    """A scalar field sampled on a regular ``nx`` by ``ny`` lattice.

    ``values`` is stored flat in row-major order with y-major rows, so the
    sample at lattice position ``(i, j)`` is ``values[j * nx + i]`` and sits
    at ``(x0 + i * dx, y0 + j * dy)``.
    """

    nx: int
    ny: int
    origin: tuple[float, float] = (0.0, 0.0)
    spacing: tuple[float, float] = (1.0, 1.0)
    values: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        nx, ny = int(self.nx), int(self.ny)
        if nx < 2 or ny < 2:
            raise ValueError(f"grid needs at least 2x2 samples, got {nx}x{ny}")
        dx, dy = (float(s) for s in self.spacing)
        if not (dx > 0 and dy > 0):
            raise ValueError(f"spacing must be positive, got {(dx, dy)}")
        x0, y0 = (float(o) for o in self.origin)
        vals = np.array(self.values, dtype=np.float64).reshape(-1)
        if vals.size != nx * ny:
            raise ValueError(
                f"expected {nx * ny} values for a {nx}x{ny} grid, got {vals.size}"
            )
        if not np.all(np.isfinite(vals)):
            raise ValueError("grid values must be finite")
        vals.setflags(write=False)
        object.__setattr__(self, "nx", nx)
        object.__setattr__(self, "ny", ny)
        object.__setattr__(self, "origin", (x0, y0))
        object.__setattr__(self, "spacing", (dx, dy))
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_array(cls, array, origin=(0.0, 0.0), spacing=None):
        """Build a grid from a ``(ny, nx)`` array.

        Without an explicit ``spacing`` the grid covers the unit square.
        """
        array = np.asarray(array, dtype=np.float64)
        ny, nx = array.shape
        if spacing is None:
            spacing = (1.0 / (nx - 1), 1.0 / (ny - 1))
        return cls(nx, ny, origin, spacing, array.reshape(-1))

    @classmethod
    def from_function(cls, func, nx, ny, origin=(0.0, 0.0), spacing=None):
        """Sample ``func(x, y)`` (vectorized) at every lattice point."""
        if spacing is None:
            spacing = (1.0 / (nx - 1), 1.0 / (ny - 1))
        xs = origin[0] + spacing[0] * np.arange(nx)
        ys = origin[1] + spacing[1] * np.arange(ny)
        X, Y = np.meshgrid(xs, ys)
        return cls(nx, ny, origin, spacing, np.broadcast_to(func(X, Y), X.shape))

    @property
    def shape(self):
        return (self.ny, self.nx)

    @property
    def array(self):
        """Read-only ``(ny, nx)`` view of the samples."""
        return self.values.reshape(self.ny, self.nx)

    def coords(self):
        """World coordinates of all samples as an ``(nx * ny, 2)`` array."""
        xs = self.origin[0] + self.spacing[0] * np.arange(self.nx)
        ys = self.origin[1] + self.spacing[1] * np.arange(self.ny)
        X, Y = np.meshgrid(xs, ys)
        return np.column_stack([X.reshape(-1), Y.reshape(-1)])

    def same_lattice(self, other):
        return (
            self.nx == other.nx
            and self.ny == other.ny
            and self.origin == other.origin
            and self.spacing == other.spacing
        )

    def with_values(self, values):
        return ScalarGrid(self.nx, self.ny, self.origin, self.spacing, values)

    def __eq__(self, other):
        if not isinstance(other, ScalarGrid):
            return NotImplemented
        return self.same_lattice(other) and np.array_equal(self.values, other.values)

    __hash__ = None


# --------------------------------------------------------------------------
# File formats


def _parse_floats(tokens, lineno, path):
    out = []
    for tok in tokens:
        try:
            v = float(tok)
        except ValueError:
            raise GridParseError(f"not a number: {tok!r}", lineno, path) from None
        if not math.isfinite(v):
            raise NonFiniteValueError(f"non-finite value {tok!r}", lineno, path)
        out.append(v)
    return out


def _read_jgrid(lines, path):
    if not lines or lines[0].split() != ["JGRID", "1"]:
        raise HeaderError("expected 'JGRID 1' on the first line", 1, path)
    if len(lines) < 3:
        raise HeaderError("truncated header", len(lines) + 1, path)
    dims = lines[1].split()
    try:
        nx, ny = (int(t) for t in dims)
    except ValueError:
        raise HeaderError("expected 'nx ny' on line 2", 2, path) from None
    if nx < 2 or ny < 2:
        raise HeaderError(f"grid must be at least 2x2, got {nx}x{ny}", 2, path)
    geom = lines[2].split()
    if len(geom) != 4:
        raise HeaderError("expected 'x0 y0 dx dy' on line 3", 3, path)
    x0, y0, dx, dy = _parse_floats(geom, 3, path)
    if not (dx > 0 and dy > 0):
        raise HeaderError("spacing must be positive", 3, path)

    rows = [(k + 4, line) for k, line in enumerate(lines[3:]) if line.strip()]
    values = []
    for lineno, line in rows:
        values.extend(_parse_floats(line.split(), lineno, path))
    if len(rows) != ny or len(values) != nx * ny:
        lineno = rows[-1][0] if rows else 4
        raise DimensionMismatchError(
            f"header declares {nx}x{ny} = {nx * ny} values, found {len(values)} "
            f"in {len(rows)} rows",
            lineno,
            path,
        )
    for lineno, line in rows:
        if len(line.split()) != nx:
            raise DimensionMismatchError(
                f"row has {len(line.split())} values, expected {nx}", lineno, path
            )
    return ScalarGrid(nx, ny, (x0, y0), (dx, dy), values)


def _read_csv(lines, path):
    rows = [(k + 1, line) for k, line in enumerate(lines) if line.strip()]
    if not rows:
        raise DimensionMismatchError("empty CSV matrix", 1, path)
    values = []
    nx = None
    for lineno, line in rows:
        row = _parse_floats([t.strip() for t in line.split(",")], lineno, path)
        if nx is None:
            nx = len(row)
        elif len(row) != nx:
            raise DimensionMismatchError(
                f"row has {len(row)} columns, expected {nx}", lineno, path
            )
        values.extend(row)
    ny = len(rows)
    if nx < 2 or ny < 2:
        raise DimensionMismatchError(
            f"CSV matrix must be at least 2x2, got {nx}x{ny}", rows[-1][0], path
        )
    return ScalarGrid(nx, ny, (0.0, 0.0), (1.0 / (nx - 1), 1.0 / (ny - 1)), values)


def load_grid(path, format="text-grid"):
    """Read a grid from ``path``.

    Parameters
    ----------
    path : str or Path
    format : {"text-grid", "csv-matrix"}
        ``text-grid`` is the ``JGRID 1`` format; ``csv-matrix`` is a bare
        comma-separated ``ny`` by ``nx`` matrix placed on the unit square.

    Raises
    ------
    HeaderError, DimensionMismatchError, NonFiniteValueError
        All subclasses of :class:`GridParseError`, carrying ``lineno``.
    """
    path = Path(path)
    lines = path.read_text().splitlines()
    if format == "text-grid":
        return _read_jgrid(lines, str(path))
    if format == "csv-matrix":
        return _read_csv(lines, str(path))
    raise ValueError(f"unknown grid format {format!r}")


def format_grid(grid, format="text-grid"):
    """Canonical serialization of ``grid``; floats use shortest round-trip repr."""
    arr = grid.array
    if format == "csv-matrix":
        return "".join(",".join(repr(float(v)) for v in row) + "\n" for row in arr)
    if format != "text-grid":
        raise ValueError(f"unknown grid format {format!r}")
    x0, y0 = grid.origin
    dx, dy = grid.spacing
    head = f"JGRID 1\n{grid.nx} {grid.ny}\n{x0!r} {y0!r} {dx!r} {dy!r}\n"
    body = "".join(" ".join(repr(float(v)) for v in row) + "\n" for row in arr)
    return head + body


def save_grid(grid, path, format="text-grid"):
    Path(path).write_text(format_grid(grid, format))


# --------------------------------------------------------------------------
# Analytic dataset


@dataclass(frozen=True)
class GaussianComponent:
    """``amplitude * exp(-0.5 (p - mean)^T cov^{-1} (p - mean))``."""

    mean: tuple[float, float]
    cov: tuple[tuple[float, float], tuple[float, float]]
    amplitude: float = 1.0

    @classmethod
    def isotropic(cls, mean, sigma, amplitude=1.0):
        s2 = float(sigma) ** 2
        return cls(tuple(mean), ((s2, 0.0), (0.0, s2)), float(amplitude))


@dataclass(frozen=True)
class GaussianMixtureSpec:
    f: tuple[GaussianComponent, ...] = ()
    g: tuple[GaussianComponent, ...] = ()


DEFAULT_MIXTURE = GaussianMixtureSpec(
    f=(
        GaussianComponent.isotropic((0.3, 0.3), 0.15, 1.0),
        GaussianComponent.isotropic((0.7, 0.6), 0.15, -0.8),
    ),
    g=(GaussianComponent.isotropic((0.5, 0.5), 0.2, 1.0),),
)


def _mixture(components, X, Y):
    out = np.zeros_like(X)
    for comp in components:
        cov = np.asarray(comp.cov, dtype=np.float64)
        if cov.shape != (2, 2) or not np.allclose(cov, cov.T):
            raise ParameterError(f"covariance must be a symmetric 2x2 matrix: {cov}")
        try:
            np.linalg.cholesky(cov)
        except np.linalg.LinAlgError:
            raise ParameterError(f"covariance is not positive definite: {cov}") from None
        prec = np.linalg.inv(cov)
        ux = X - comp.mean[0]
        uy = Y - comp.mean[1]
        q = prec[0, 0] * ux * ux + (prec[0, 1] + prec[1, 0]) * ux * uy + prec[1, 1] * uy * uy
        out += comp.amplitude * np.exp(-0.5 * q)
    return out


def gen_analytic(n, params=DEFAULT_MIXTURE):
    """Sample the mixture pair ``params`` on an ``n`` by ``n`` grid of [0, 1]^2.

    Returns
    -------
    (ScalarGrid, ScalarGrid)
        The ``f`` and ``g`` fields.
    """
    n = int(n)
    if n < 2:
        raise ParameterError(f"resolution must be at least 2, got {n}")
    h = 1.0 / (n - 1)
    axis = h * np.arange(n)
    X, Y = np.meshgrid(axis, axis)
    f = _mixture(params.f, X, Y)
    g = _mixture(params.g, X, Y)
    return (
        ScalarGrid(n, n, (0.0, 0.0), (h, h), f.reshape(-1)),
        ScalarGrid(n, n, (0.0, 0.0), (h, h), g.reshape(-1)),
    )


# --------------------------------------------------------------------------
# Noise


@dataclass(frozen=True)
class NoiseSpec:
    """Salt-and-pepper replacement followed by additive Gaussian noise.

    ``salt_pepper_low``/``salt_pepper_high`` default to the field's min/max and
    ``gaussian_sigma`` defaults to 1% of the field's value range when left as
    ``None``. ``stream`` selects an independent random stream for the same seed,
    so the two fields of a pair can be perturbed independently.
    """

    salt_pepper_fraction: float = 0.005
    salt_pepper_low: float | None = None
    salt_pepper_high: float | None = None
    gaussian_sigma: float | None = None
    seed: int = 0
    stream: int = 0

    def __post_init__(self):
        if not 0.0 <= self.salt_pepper_fraction <= 1.0:
            raise ParameterError(
                f"salt_pepper_fraction must lie in [0, 1], got {self.salt_pepper_fraction}"
            )
        if self.gaussian_sigma is not None and not self.gaussian_sigma >= 0.0:
            raise ParameterError(f"gaussian_sigma must be >= 0, got {self.gaussian_sigma}")


def _rng(seed, stream):
    ss = np.random.SeedSequence(int(seed) & (2**64 - 1), spawn_key=(int(stream),))
    return np.random.Generator(np.random.Philox(ss))


def apply_noise(grid, spec):
    """Return a perturbed copy of ``grid``; bit-exact for a fixed ``spec``.

    Exactly ``round(fraction * nx * ny)`` distinct samples are replaced, each
    by the low or high value with equal probability, then i.i.d. Gaussian
    noise is added to every sample.
    """
    vals = np.array(grid.values, dtype=np.float64)
    vmin, vmax = float(vals.min()), float(vals.max())
    low = vmin if spec.salt_pepper_low is None else float(spec.salt_pepper_low)
    high = vmax if spec.salt_pepper_high is None else float(spec.salt_pepper_high)
    sigma = 0.01 * (vmax - vmin) if spec.gaussian_sigma is None else float(spec.gaussian_sigma)

    rng = _rng(spec.seed, spec.stream)
    k = round(spec.salt_pepper_fraction * vals.size)
    if k:
        idx = rng.choice(vals.size, size=k, replace=False)
        vals[idx] = np.where(rng.integers(0, 2, size=k) == 1, high, low)
    if sigma > 0:
        vals += rng.normal(0.0, sigma, size=vals.size)
    return grid.with_values(vals)
