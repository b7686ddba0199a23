"""Al-Salam-Chihara polynomials Q_k(z; a, b | base) at a generic base.

Three evaluation paths are provided:

* ``asc_recurrence``: the three-term recurrence
  2 z Q_k = Q_{k+1} + (a+b) base^k Q_k + (1 - base^k)(1 - a b base^(k-1)) Q_{k-1},
  with Q_{-1} = 0, Q_0 = 1;
* ``asc_hypergeometric``: the terminating basic-hypergeometric representation
  Q_k = (a b; base)_k a^(-k) * 3phi2(base^(-k), a e^(i t), a e^(-i t); ab, 0)
  evaluated through an exact rearrangement (see below);
* ``asc_hypergeometric_direct``: the same representation summed literally,
  kept as a reference for small k.

Direct summation of the terminating 3phi2 is numerically hopeless beyond
small degree: its terms grow like base^(-k(k-1)/2) while the polynomial value
on the orthogonality band stays O(1), so tens of digits cancel already at
k ~ 10.  ``asc_hypergeometric`` therefore expands the generating function

    sum_k Q_k(z) t^k / (base; base)_k
        = (a t; base)_inf (b t; base)_inf / ((t w; base)_inf (t/w; base)_inf)

via the q-binomial theorem into the exact finite convolution

    Q_k = sum_r [k; r] (a/w; base)_r (b w; base)_{k-r} w^(2r-k),  w = e^(i t),

whose terms stay comparable to the value.  The two hypergeometric paths agree
to machine precision wherever the direct sum is still accurate.

The orthogonality measure consists of a continuous density on z = cos(t),
t in [0, pi], plus finitely many point masses at z_k = (a base^k + a^(-1)
base^(-k)) / 2 for every k >= 0 with a base^k > 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qcore import phi32, qpoch, qpoch_inf

__all__ = [
    "AscParams",
    "DegenerateParameterError",
    "DiscreteMass",
    "SpectralMeasure",
    "asc_recurrence",
    "asc_hypergeometric",
    "asc_hypergeometric_direct",
    "continuous_weight",
    "mass_points",
    "orthogonality_measure",
    "orthogonality_residual",
]

_LD = np.longdouble
_CLD = np.clongdouble

#: half-width of the exclusion window around a*base^k = 1 (band-edge mass)
BAND_EDGE_TOL = 1e-12

#: truncation tolerance for the infinite products in weights and masses
_INF_TOL = 1e-19


class DegenerateParameterError(ValueError):
    """A would-be mass point sits exactly on the band edge a*base^k = 1."""


@dataclass(frozen=True)
class AscParams:
    """Parameters (a, b, base) of the polynomial family; base in (0, 1)."""

    a: float
    b: float
    base: float

    def __post_init__(self):
        if not (0.0 < float(self.base) < 1.0):
            raise ValueError(f"base must lie in (0, 1), got {self.base}")


def _w_from_theta(theta) -> complex:
    """e^(i theta); theta may be complex (real w > 0 for imaginary angles)."""
    return np.exp(_CLD(1j) * _CLD(theta))


def asc_recurrence(k: int, z, p: AscParams):
    """Q_k(z) by running the three-term recurrence up from Q_0 = 1.

    ``z`` may be a scalar or ndarray; the dtype of ``z`` and the parameters
    is preserved (pass longdouble values for extended precision).
    """
    if k < 0:
        raise ValueError(f"degree must be nonnegative, got {k}")
    return _recurrence_table(k, z, p)[k]


def _recurrence_table(kmax: int, z, p: AscParams) -> list:
    a, b, base = p.a, p.b, p.base
    prev = z * 0 + 1.0
    table = [prev]
    if kmax == 0:
        return table
    cur = 2 * z - (a + b)
    table.append(cur)
    for k in range(1, kmax):
        nxt = 2 * z * cur - (a + b) * base**k * cur \
            - (1 - base**k) * (1 - a * b * base ** (k - 1)) * prev
        prev, cur = cur, nxt
        table.append(cur)
    return table


def _convolution_value(k: int, w, a, b, base):
    """Q_k via the generating-function convolution, in extended precision."""
    w = _CLD(w)
    a = _CLD(a)
    b = _CLD(b)
    base = _LD(base)
    A = np.empty(k + 1, dtype=_CLD)  # (a/w; base)_r
    B = np.empty(k + 1, dtype=_CLD)  # (b*w; base)_s
    C = np.empty(k + 1, dtype=_LD)   # (base; base)_r
    A[0] = B[0] = 1.0
    C[0] = 1.0
    pw = _LD(1.0)
    for r in range(k):
        A[r + 1] = A[r] * (1 - (a / w) * pw)
        B[r + 1] = B[r] * (1 - (b * w) * pw)
        pw = pw * base
        C[r + 1] = C[r] * (1 - pw)
    wpow = w ** np.arange(k + 1)
    u = A * wpow * wpow / C
    v = B / C
    conv = np.convolve(u, v)[k]
    return complex(w ** (-k) * C[k] * conv).real


def asc_hypergeometric(k: int, theta, p: AscParams) -> float:
    """Q_k from the hypergeometric representation, evaluated stably.

    ``theta`` is the angle with z = cos(theta); a complex theta with pure
    imaginary part addresses real w = e^(i theta) > 0 off the band.  The
    value equals the terminating 3phi2 representation exactly (see module
    docstring); output is real for real a, b.
    """
    if k < 0:
        raise ValueError(f"degree must be nonnegative, got {k}")
    return _convolution_value(k, _w_from_theta(theta), p.a, p.b, p.base)


def asc_hypergeometric_direct(k: int, theta, p: AscParams) -> float:
    """Reference evaluation: literal summation of the terminating 3phi2.

    Accurate only for small k (cancellation grows like base^(-k(k-1)/2));
    used to pin ``asc_hypergeometric`` to the defining series in tests.
    """
    w = _w_from_theta(theta)
    a, b, base = _CLD(p.a), _CLD(p.b), _LD(p.base)
    series = phi32(base ** _LD(-k), a * w, a / w, a * b, base, base,
                   max_terms=k + 2)
    return complex(qpoch(a * b, base, k) * a ** (-k) * series).real


def continuous_weight(theta, p: AscParams):
    """Band weight w(cos theta) of the orthogonality measure (density
    with respect to dz/(2 pi sqrt(1-z^2)), i.e. dtheta/(2 pi) after z = cos theta).

    w = h(1) h(-1) h(sqrt(base)) h(-sqrt(base)) / (h(a) h(b)) with
    h(alpha) = (alpha e^(i theta); base)_inf (alpha e^(-i theta); base)_inf.
    """
    w = np.exp(_CLD(1j) * _LD(theta))
    base = _LD(p.base)
    rt = np.sqrt(base)

    def h(alpha):
        alpha = _CLD(alpha)
        return qpoch_inf(alpha * w, base, _INF_TOL) \
            * qpoch_inf(alpha * np.conjugate(w), base, _INF_TOL)

    val = h(1.0) * h(-1.0) * h(rt) * h(-rt) / (h(p.a) * h(p.b))
    return np.real(val)


@dataclass(frozen=True)
class DiscreteMass:
    """One point mass: z = (w + 1/w)/2 with w = a*base^index > 1."""

    index: int
    w: float
    z: float
    mass: float


def mass_points(p: AscParams, strict: bool = True) -> tuple[DiscreteMass, ...]:
    """Enumerate the point masses of the orthogonality measure.

    Includes every k >= 0 with a*base^k > 1 (empty whenever a <= 1).  When
    ``strict`` is set, a point with a*base^k within BAND_EDGE_TOL of 1 raises
    DegenerateParameterError; otherwise such points are silently excluded.
    """
    a, b, base = _LD(p.a), _LD(p.b), _LD(p.base)
    out = []
    k = 0
    while True:
        wk = a * base ** _LD(k)
        if abs(wk - 1) <= BAND_EDGE_TOL:
            if strict:
                raise DegenerateParameterError(
                    f"mass point with a*base^{k} = {float(wk)} on the band edge")
            break
        if wk < 1:
            break
        zk = (wk + 1 / wk) / 2
        norm = qpoch_inf(a ** _LD(-2), base, _INF_TOL) / (
            qpoch_inf(base, base, _INF_TOL) * qpoch_inf(a * b, base, _INF_TOL)
            * qpoch_inf(b / a, base, _INF_TOL))
        mk = norm * (1 - a * a * base ** _LD(2 * k)) * qpoch(a * a, base, k) \
            * qpoch(a * b, base, k)
        mk = mk / ((1 - a * a) * qpoch(base, base, k)
                   * qpoch(base * a / b, base, k))
        mk = mk * base ** _LD(-k * k) * (a ** _LD(3) * b) ** _LD(-k)
        out.append(DiscreteMass(index=k, w=float(wk), z=float(zk),
                                mass=float(mk)))
        k += 1
    return tuple(out)


@dataclass(frozen=True)
class SpectralMeasure:
    """Continuous density on theta in [0, pi] plus point masses.

    ``density`` holds (1/2 pi) * w(cos theta) at ``theta_nodes`` (so the
    continuous part integrates against d theta); ``normalization`` is a
    positive scale applied to both parts when integrating.
    """

    params: AscParams
    theta_nodes: np.ndarray
    density: np.ndarray
    discrete: tuple[DiscreteMass, ...]
    normalization: float = 1.0

    @property
    def quad_nodes(self) -> int:
        return len(self.theta_nodes)

    def density_at(self, theta) -> float:
        """Recompute the continuous density (with normalization) pointwise."""
        return float(self.normalization * continuous_weight(theta, self.params)
                     / (2 * np.pi))

    def trapezoid_weights(self) -> np.ndarray:
        """Quadrature weights for the continuous part, normalization included."""
        h = self.theta_nodes[1] - self.theta_nodes[0]
        w = np.full(len(self.theta_nodes), h, dtype=self.density.dtype)
        w[0] /= 2
        w[-1] /= 2
        return w * self.density * _LD(self.normalization)

    def integrate(self, continuous_values, discrete_values=None):
        """Integrate a spectral function given by its node / mass-point values."""
        total = np.sum(self.trapezoid_weights() * continuous_values)
        if self.discrete:
            if discrete_values is None:
                raise ValueError("measure has point masses; discrete values required")
            if len(discrete_values) != len(self.discrete):
                raise ValueError("discrete value count does not match the measure")
            for d, v in zip(self.discrete, discrete_values):
                total = total + _LD(self.normalization) * _LD(d.mass) * v
        return total

    def total_mass(self):
        ones = np.ones_like(self.density)
        return self.integrate(ones, [1.0] * len(self.discrete))

    def to_json(self) -> dict:
        return {
            "theta_nodes": [float(t) for t in self.theta_nodes],
            "density": [float(v) for v in self.density],
            "discrete": [{"z": d.z, "mass": d.mass} for d in self.discrete],
            "normalization": float(self.normalization),
        }


def orthogonality_measure(p: AscParams, quad_nodes: int) -> SpectralMeasure:
    """The orthogonality measure of the family, on a fixed theta grid.

    The moments reproduce
        integral Q_i Q_j dmu = delta_ij / ((base^(i+1); base)_inf
                                           (a b base^i; base)_inf).
    Mass points exactly on the band edge raise DegenerateParameterError.
    """
    if quad_nodes < 16:
        raise ValueError(f"need quad_nodes >= 16, got {quad_nodes}")
    discrete = mass_points(p, strict=True)  # may raise: check before densities
    nodes = np.linspace(0, np.pi, quad_nodes).astype(_LD)
    dens = np.array([continuous_weight(t, p) for t in nodes], dtype=_LD) \
        / (2 * _LD(np.pi))
    return SpectralMeasure(params=p, theta_nodes=nodes, density=dens,
                           discrete=discrete)


def _moment(i: int, j: int, measure: SpectralMeasure):
    p = measure.params
    z = np.cos(measure.theta_nodes)
    table = _recurrence_table(max(i, j), z, p)
    cont = table[i] * table[j]
    disc = []
    for d in measure.discrete:
        td = _recurrence_table(max(i, j), _LD(d.z), p)
        disc.append(td[i] * td[j])
    return measure.integrate(cont, disc)


def orthogonality_residual(i: int, j: int, p: AscParams, quad_nodes: int) -> float:
    """Deviation of the (i, j) moment from its closed form, relative to the
    diagonal target 1/((base^(i+1); base)_inf (a b base^i; base)_inf).

    The band integral is refined by node doubling until two successive grids
    agree to 1e-11 of the target scale.
    """
    if i > 20 or j > 20:
        raise ValueError("residual check supports degrees up to 20")
    base = _LD(p.base)
    target_scale = 1 / (qpoch_inf(base ** _LD(i + 1), base, _INF_TOL)
                        * qpoch_inf(_LD(p.a) * _LD(p.b) * base ** _LD(i), base,
                                    _INF_TOL))
    target = target_scale if i == j else 0.0
    nodes = quad_nodes
    prev = None
    for _ in range(7):
        val = _moment(i, j, orthogonality_measure(p, nodes))
        if prev is not None and abs(val - prev) <= 1e-11 * abs(target_scale):
            break
        prev = val
        nodes = 2 * nodes - 1  # doubling that keeps previous nodes
    return float(abs(val - target) / abs(target_scale))
