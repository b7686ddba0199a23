"""Eigenfunctions, Plancherel measure, and the unitary spectral transform.

A spectral point carries w with z = (w + 1/w)/2: on the continuous band
w = e^(i theta), theta in [0, pi]; discrete points have real w > 1.  The
generalized eigenfunction of the sector operator takes the value 1 at the
lattice base point and, at x = q^(-2j), equals a rescaled Al-Salam-Chihara
polynomial of degree j in z with parameters

    a = q^(2n - N + 1 + L - Lp),  b = q^(N - 1 + L + Lp),  base = q^2.

The spectral transform integrates a lattice function against the
eigenfunction profile with respect to the normalized lattice measure; its
inverse integrates against the Plancherel measure (the Al-Salam-Chihara
orthogonality measure rescaled to total mass 1, which is forced by sending
the base-point indicator to the constant function 1).

Numerical notes.  Eigenfunction profiles are evaluated through the stable
convolution form of :mod:`qlaplace.asc` in extended precision; at discrete
mass points (w = a q^(2k)) the terminating parameter a/w = q^(-2k) truncates
the defining series after k+1 terms, and that short sum is used instead
(bound-state profiles are minimal solutions of the recurrence, so any forward
evaluation loses relative accuracy exponentially in j).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from typing import Mapping

import numpy as np

from .asc import (AscParams, SpectralMeasure, mass_points,
                  orthogonality_measure)
from .lattice import LatticeFunction, ModelParams, Sector, measure_mass
from .laplace import eigenvalue
from .qcore import qpoch, qpoch_inf

__all__ = [
    "SpectralPoint",
    "continuous_point",
    "discrete_point",
    "point_from_exponent",
    "asc_params",
    "eigenfunction",
    "eigenfunction_profile",
    "c_function",
    "plancherel_measure",
    "SpectralFunction",
    "forward_transform",
    "transform_grid",
    "inverse_transform",
    "inverse_transform_profile",
    "orthonormal_polynomial",
    "Spectrum",
    "spectrum",
]

_LD = np.longdouble
_CLD = np.clongdouble
_INF_TOL = 1e-19


@dataclass(frozen=True)
class SpectralPoint:
    """A point of the spectral variable.

    ``kind`` is "continuous" (z in [-1, 1], theta set) or "discrete"
    (real z > 1).  ``mass_index`` is set only for Plancherel mass points.
    """

    kind: str
    z: float
    w: complex
    theta: float | None = None
    mass_index: int | None = None


def continuous_point(theta: float) -> SpectralPoint:
    """Band point with w = e^(i theta), z = cos(theta)."""
    if not (0.0 <= theta <= math.pi):
        raise ValueError(f"theta must lie in [0, pi], got {theta}")
    return SpectralPoint(kind="continuous", z=math.cos(theta),
                         w=cmath.exp(1j * theta), theta=theta)


def discrete_point(params: ModelParams, sector: Sector, k: int) -> SpectralPoint:
    """The k-th Plancherel mass point of the sector (w = a q^(2k) > 1)."""
    pts = mass_points(asc_params(params, sector), strict=False)
    for d in pts:
        if d.index == k:
            return SpectralPoint(kind="discrete", z=d.z, w=d.w, mass_index=k)
    raise ValueError(f"sector {sector} has no mass point of index {k} "
                     f"({len(pts)} exist)")


def point_from_exponent(params: ModelParams, ell) -> SpectralPoint:
    """Point with w = q^(2*ell + N - 1) for a real spectral label ell.

    Integer ell >= 1 gives z > 1 off the band (generalized eigenfunctions
    used in operator tests); ell = 0 gives the zero of the eigenvalue map.
    """
    w = float(params.q) ** (2 * ell + params.N - 1)
    z = (w + 1 / w) / 2
    kind = "continuous" if abs(z) <= 1 else "discrete"
    return SpectralPoint(kind=kind, z=z, w=w, theta=0.0 if z == 1.0 else None)


def asc_params(params: ModelParams, sector: Sector) -> AscParams:
    """Al-Salam-Chihara parameters attached to a sector (base = q^2).

    Stored as extended-precision scalars so downstream arithmetic keeps the
    extra digits.
    """
    q = params.q_ld
    return AscParams(a=q ** _LD(2 * params.n - params.N + 1 + sector.L - sector.Lp),
                     b=q ** _LD(params.N - 1 + sector.L + sector.Lp),
                     base=q * q)


def _profile_convolution(params: ModelParams, sector: Sector, w,
                         max_j: int) -> np.ndarray:
    """Eigenfunction values at j = 0..max_j via the convolution form.

    With u_r = (b/w; p)_r w^(2r) / (p; p)_r and v_s = (a w; p)_s / (p; p)_s,
    the value at x = q^(-2j) is (b/w)^j (p; p)_j (u * v)_j / (a b; p)_j.
    """
    pp = asc_params(params, sector)
    a, b, p = _CLD(pp.a), _CLD(pp.b), _LD(pp.base)
    w = _CLD(w)
    J = max_j
    A = np.empty(J + 1, dtype=_CLD)
    B = np.empty(J + 1, dtype=_CLD)
    C = np.empty(J + 1, dtype=_LD)
    A[0] = B[0] = 1.0
    C[0] = 1.0
    pw = _LD(1.0)
    for r in range(J):
        A[r + 1] = A[r] * (1 - (b / w) * pw)
        B[r + 1] = B[r] * (1 - (a * w) * pw)
        pw = pw * p
        C[r + 1] = C[r] * (1 - pw)
    wpow = w ** np.arange(J + 1)
    u = A * wpow * wpow / C
    v = B / C
    conv = np.convolve(u, v)[:J + 1]
    out = np.empty(J + 1, dtype=_LD)
    pref = _CLD(1.0)
    ab = a * b
    abpoch = _LD(1.0)
    ppow = _LD(1.0)
    for j in range(J + 1):
        out[j] = np.real(pref * C[j] * conv[j] / abpoch)
        pref = pref * (b / w)
        abpoch = abpoch * np.real(1 - ab * ppow)
        ppow = ppow * p
    return out


def _profile_mass_point(params: ModelParams, sector: Sector, kd: int,
                        max_j: int) -> np.ndarray:
    """Eigenfunction values at the kd-th mass point via the short series.

    At w = a q^(2 kd) the representation's parameter a/w = q^(-2 kd) kills
    all series terms past index kd, leaving the exact (kd+1)-term sum

        value(j) = (b/a)^j * sum_{i<=kd} t_i,
        t_{i+1}/t_i = (1 - p^(i-j)) (1 - a^2 p^(kd+i)) (1 - p^(i-kd)) p
                      / ((1 - p^(i+1)) (1 - a b p^i)).
    """
    pp = asc_params(params, sector)
    a, b, p = _LD(pp.a), _LD(pp.b), _LD(pp.base)
    out = np.empty(max_j + 1, dtype=_LD)
    for j in range(max_j + 1):
        tot = _LD(0.0)
        term = _LD(1.0)
        for i in range(kd + 1):
            tot = tot + term
            term = term * (1 - p ** _LD(i - j)) * (1 - a * a * p ** _LD(kd + i)) \
                * (1 - p ** _LD(i - kd)) * p
            term = term / ((1 - p ** _LD(i + 1)) * (1 - a * b * p ** _LD(i)))
        out[j] = (b / a) ** _LD(j) * tot
    return out


def eigenfunction_profile(params: ModelParams, sector: Sector,
                          point: SpectralPoint, max_j: int) -> np.ndarray:
    """Eigenfunction values at lattice indices 0..max_j (value 1 at j = 0)."""
    if max_j < 0:
        raise ValueError("max_j must be nonnegative")
    if point.mass_index is not None:
        return _profile_mass_point(params, sector, point.mass_index, max_j)
    return _profile_convolution(params, sector, point.w, max_j)


def eigenfunction(params: ModelParams, sector: Sector, point: SpectralPoint,
                  j: int) -> float:
    """Eigenfunction value at the lattice point x = q^(-2j)."""
    return float(eigenfunction_profile(params, sector, point, j)[j])


def c_function(params: ModelParams, sector: Sector, arg) -> complex:
    """Harish-Chandra-type c-function of the sector.

    c(arg) = (q^(arg+N-1+L+Lp); q^2)_inf (q^(arg+n-m+1+L-Lp); q^2)_inf
             / (q^(2 arg); q^2)_inf,
    with q^arg = exp(arg * ln q) for complex arg.  The continuous Plancherel
    density is |1/c(i nu)|^2 under e^(i theta) = q^(i nu).  A vanishing
    denominator factor (q^(2 arg) on q^(-2 Z+)) is reported as an error.
    """
    q = float(params.q)
    u = cmath.exp(complex(arg) * math.log(q))
    p = q * q
    bq = q ** (params.N - 1 + sector.L + sector.Lp)
    aq = q ** (params.n - params.m + 1 + sector.L - sector.Lp)
    den = qpoch_inf(u * u, p)
    if den == 0 or abs(den) < 1e-300:
        raise ValueError(f"c-function denominator (q^(2 arg); q^2)_inf vanishes "
                         f"at arg={arg!r}")
    return complex(qpoch_inf(u * bq, p) * qpoch_inf(u * aq, p) / den)


def plancherel_measure(params: ModelParams, sector: Sector,
                       quad_nodes: int) -> SpectralMeasure:
    """Spectral measure of the sector operator, normalized to total mass 1.

    This is the Al-Salam-Chihara orthogonality measure for the sector's
    parameters rescaled by (q^2; q^2)_inf (q^(2(n+L)); q^2)_inf, the unique
    normalization compatible with a unitary transform sending f_0 to 1.
    The discrete part is nonempty exactly when L - Lp < m - n - 1.
    """
    pp = asc_params(params, sector)
    meas = orthogonality_measure(pp, quad_nodes)
    base = _LD(pp.base)
    norm = qpoch_inf(base, base, _INF_TOL) \
        * qpoch_inf(_LD(pp.a) * _LD(pp.b), base, _INF_TOL)
    return replace(meas, normalization=float(norm))


@dataclass(frozen=True)
class SpectralFunction:
    """A function of the spectral variable sampled on a measure's node set."""

    measure: SpectralMeasure
    continuous: np.ndarray
    discrete: tuple

    def __post_init__(self):
        if len(self.continuous) != len(self.measure.theta_nodes):
            raise ValueError(
                f"inconsistent sampling grid: {len(self.continuous)} values on "
                f"{len(self.measure.theta_nodes)} nodes")
        if len(self.discrete) != len(self.measure.discrete):
            raise ValueError(
                f"inconsistent discrete sampling: {len(self.discrete)} values "
                f"for {len(self.measure.discrete)} mass points")


def _profile_matrix(params: ModelParams, sector: Sector,
                    measure: SpectralMeasure, max_j: int):
    """Eigenfunction profiles on the measure's nodes and mass points.

    Returns (cont, disc): cont[t, j] on theta nodes, disc[k, j] on masses.
    """
    cont = np.empty((len(measure.theta_nodes), max_j + 1), dtype=_LD)
    for t, theta in enumerate(measure.theta_nodes):
        w = np.exp(_CLD(1j) * _LD(theta))
        cont[t] = _profile_convolution(params, sector, w, max_j)
    disc = np.empty((len(measure.discrete), max_j + 1), dtype=_LD)
    for kk, d in enumerate(measure.discrete):
        disc[kk] = _profile_mass_point(params, sector, d.index, max_j)
    return cont, disc


def _mass_vector(params: ModelParams, sector: Sector, max_j: int) -> np.ndarray:
    return np.array([measure_mass(params, sector, j) for j in range(max_j + 1)],
                    dtype=_LD)


def _coefficient_vector(f: Mapping[int, complex], max_j: int) -> np.ndarray:
    vals = [f.get(j, 0.0) for j in range(max_j + 1)]
    if any(np.iscomplexobj(np.asarray(v)) or isinstance(v, complex) for v in vals):
        return np.array(vals, dtype=_CLD)
    return np.array(vals, dtype=_LD)


def forward_transform(params: ModelParams, sector: Sector,
                      f: Mapping[int, complex], point: SpectralPoint):
    """Transform value at one spectral point: sum_j f(j) phi_j mass(j).

    An exact finite sum over the support; the base-point indicator maps to
    the constant 1.
    """
    sup = sorted(f)
    if not sup:
        return 0.0
    J = sup[-1]
    prof = eigenfunction_profile(params, sector, point, J)
    masses = _mass_vector(params, sector, J)
    coeff = _coefficient_vector(f, J)
    return np.sum(coeff * masses * prof)


def transform_grid(params: ModelParams, sector: Sector, f: Mapping[int, complex],
                   measure: SpectralMeasure) -> SpectralFunction:
    """Forward transform sampled on a Plancherel measure's full node set."""
    sup = sorted(f)
    J = sup[-1] if sup else 0
    cont_prof, disc_prof = _profile_matrix(params, sector, measure, J)
    weighted = _coefficient_vector(f, J) * _mass_vector(params, sector, J)
    return SpectralFunction(measure=measure,
                            continuous=cont_prof @ weighted,
                            discrete=tuple(disc_prof @ weighted))


def inverse_transform(params: ModelParams, sector: Sector,
                      fhat: SpectralFunction, j: int):
    """Inverse transform at lattice index j: integral of fhat * phi_j dsigma."""
    return inverse_transform_profile(params, sector, fhat, j).get(j, 0.0)


def inverse_transform_profile(params: ModelParams, sector: Sector,
                              fhat: SpectralFunction, max_j: int) -> LatticeFunction:
    """Inverse transform on all lattice indices 0..max_j at once."""
    measure = fhat.measure
    cont_prof, disc_prof = _profile_matrix(params, sector, measure, max_j)
    w8 = measure.trapezoid_weights()
    vals = cont_prof.T @ (w8 * np.asarray(fhat.continuous))
    if measure.discrete:
        dm = np.array([d.mass for d in measure.discrete], dtype=_LD) \
            * _LD(measure.normalization)
        vals = vals + disc_prof.T @ (dm * np.asarray(fhat.discrete))
    return LatticeFunction({j: v for j, v in enumerate(vals)})


def orthonormal_polynomial(params: ModelParams, sector: Sector, j: int,
                           point: SpectralPoint):
    """Image of the orthonormal lattice basis under the transform.

    A degree-j polynomial of the spectral variable: the Al-Salam-Chihara
    polynomial at z normalized by 1/sqrt((q^2; q^2)_j (q^(2(n+L)); q^2)_j);
    orthonormal with respect to the Plancherel measure, equals 1 at j = 0.
    """
    from .asc import asc_recurrence

    pp = asc_params(params, sector)
    p = _LD(pp.base)
    qj = asc_recurrence(j, _LD(point.z), pp)
    return qj / np.sqrt(qpoch(p, p, j) * qpoch(_LD(pp.a) * _LD(pp.b), p, j))


@dataclass(frozen=True)
class Spectrum:
    """Operator spectrum: continuous band plus discrete eigenvalues."""

    band: tuple[float, float]
    discrete: tuple[float, ...]

    def to_json(self) -> dict:
        return {"band": [self.band[0], self.band[1]],
                "discrete": list(self.discrete)}


def spectrum(params: ModelParams, sector: Sector) -> Spectrum:
    """Band endpoints (at z = -1 and z = 1) and the discrete eigenvalues."""
    lo = float(eigenvalue(params, -1.0))
    hi = float(eigenvalue(params, 1.0))
    disc = tuple(float(eigenvalue(params, d.z))
                 for d in mass_points(asc_params(params, sector), strict=False))
    return Spectrum(band=(lo, hi), discrete=disc)
