"""Optical observables of valence doublets.

The conduction Bloch state is orbitally spherical, so the transition
dipole of a hole state along a cubic axis reduces to its X/Y/Z orbital
weight; constant momentum-matrix prefactors are absorbed into a single
rate calibration anchored to the measured lifetime of the unstrained
bright doublet.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from . import kp_bulk
from ._parallel import map_ordered
from .axis import _as_full8
from .elasticity import StrainState, superpose, uniaxial_strain
from .kp_bulk import SpinorState, bloch_orbital_matrix, validate_doublet
from .materials import MaterialParams

__all__ = [
    "AngularDensity",
    "DIPOLE_SWEEP_COLUMNS",
    "DipoleStrengths",
    "Polarization",
    "RateCalibration",
    "angular_density",
    "dipole_strengths",
    "dipole_sweep",
    "dlp_and_angle",
    "rates",
]

DIPOLE_SWEEP_COLUMNS = ("strain_xx", "s_x", "s_y", "s_z",
                        "rate_x_ghz", "rate_y_ghz", "rate_z_ghz")

_U0 = bloch_orbital_matrix()
# rows of the product representation holding X/Y/Z content per spin
_ORBITAL_ROWS = {"x": (1, 5), "y": (2, 6), "z": (3, 7)}
_S_ROWS = (0, 4)


@dataclass(frozen=True)
class DipoleStrengths:
    """Relative transition strengths along the cubic axes, with optional
    calibrated rates in GHz."""

    s_x: float
    s_y: float
    s_z: float
    r_x: float | None = None
    r_y: float | None = None
    r_z: float | None = None

    def __post_init__(self):
        for name, v in (("s_x", self.s_x), ("s_y", self.s_y),
                        ("s_z", self.s_z)):
            if v < 0:
                raise ValueError(f"{name} must be nonnegative, got {v}")

    def as_array(self) -> np.ndarray:
        return np.array([self.s_x, self.s_y, self.s_z])


@dataclass(frozen=True)
class RateCalibration:
    """Lifetime of one unstrained bright dipole (strength 1/2), in ps."""

    reference_lifetime_ps: float = 250.0

    def __post_init__(self):
        if not self.reference_lifetime_ps > 0:
            raise ValueError("reference lifetime must be positive")


class Polarization(NamedTuple):
    """Degree of linear polarization and the in-plane angle of maximal
    intensity; ``tie`` flags the degenerate s_x = s_y case where the 0
    degree angle is pure convention."""

    degree: float
    angle_deg: float
    tie: bool


@dataclass(frozen=True)
class AngularDensity:
    """Bloch probability density sampled on an equiangular sphere grid."""

    theta: np.ndarray      # polar cell centers, shape (n_theta,)
    phi: np.ndarray        # azimuthal cell centers, shape (n_phi,)
    density: np.ndarray    # shape (n_theta, n_phi), normalized
    weights: np.ndarray    # solid-angle weights, shape (n_theta, n_phi)

    def integrate(self) -> float:
        return float(np.sum(self.density * self.weights))


def _product_coeffs(state: SpinorState) -> np.ndarray:
    return _U0 @ _as_full8(state)


def angular_density(state: SpinorState, n_theta: int = 90,
                    n_phi: int = 180) -> AngularDensity:
    """Angular probability density of a valence state's Bloch part.

    Uses the p-orbital angular forms X, Y, Z ~ (cos(phi) sin(theta),
    sin(phi) sin(theta), cos(theta)); spin channels add incoherently.
    For a unit-norm state the density integrates to one up to the
    quadrature error of the cell-centered grid (about 1e-3 at the
    default resolution); exported files are normalized downstream.
    """
    v = _product_coeffs(state)
    s_weight = sum(abs(v[i]) ** 2 for i in _S_ROWS)
    if s_weight > 1e-9:
        raise ValueError("angular density is defined for VB states only")
    th = (np.arange(n_theta) + 0.5) * math.pi / n_theta
    ph = (np.arange(n_phi) + 0.5) * 2.0 * math.pi / n_phi
    tt, pp = np.meshgrid(th, ph, indexing="ij")
    norm = math.sqrt(3.0 / (4.0 * math.pi))
    orbitals = np.stack([norm * np.sin(tt) * np.cos(pp),
                         norm * np.sin(tt) * np.sin(pp),
                         norm * np.cos(tt)])
    density = np.zeros_like(tt)
    for spin_rows in ((1, 2, 3), (5, 6, 7)):
        amp = np.tensordot(v[list(spin_rows)], orbitals, axes=(0, 0))
        density += np.abs(amp) ** 2
    dth = math.pi / n_theta
    dph = 2.0 * math.pi / n_phi
    weights = np.sin(tt) * dth * dph
    return AngularDensity(theta=th, phi=ph, density=density, weights=weights)


def dipole_strengths(doublet, frame: np.ndarray | None = None, *,
                     degeneracy_atol: float = 1e-6) -> DipoleStrengths:
    """Doublet-averaged orbital weights along three orthogonal axes.

    ``frame`` optionally rotates the dipole axes: a 3x3 orthogonal
    matrix whose rows are the desired axes in cubic coordinates.  The
    weights are invariant under unitary remixing of the doublet and sum
    to one for valence states.
    """
    a, b = doublet
    validate_doublet(a, b, degeneracy_atol=degeneracy_atol)
    s = np.zeros(3)
    for state in (a, b):
        v = _product_coeffs(state)
        xyz = np.stack([v[[1, 2, 3]], v[[5, 6, 7]]])  # (spin, orbital)
        if frame is not None:
            xyz = xyz @ np.asarray(frame).T
        s += np.sum(np.abs(xyz) ** 2, axis=0)
    s *= 0.5
    return DipoleStrengths(s_x=float(s[0]), s_y=float(s[1]), s_z=float(s[2]))


def rates(strengths: DipoleStrengths, calibration: RateCalibration) \
        -> DipoleStrengths:
    """Attach radiative rates: r = s / (s_bright * tau_ref), s_bright = 1/2.

    The unstrained bright dipole (s = 1/2) then maps to 1/tau_ref, e.g.
    4 GHz for tau_ref = 250 ps, and a fully concentrated dipole (s = 1)
    to twice that.
    """
    scale = 1e3 / (0.5 * calibration.reference_lifetime_ps)  # GHz per unit s
    return replace(strengths, r_x=strengths.s_x * scale,
                   r_y=strengths.s_y * scale, r_z=strengths.s_z * scale)


def dipole_sweep(stresses_gpa, prestress: StrainState | None,
                 p: MaterialParams, calibration: RateCalibration | None = None,
                 *, threads: int = 1) -> np.ndarray:
    """Dipole strengths and rates of the prestressed-bulk hole ground
    state along a uniaxial stress sweep.

    Rows follow DIPOLE_SWEEP_COLUMNS; rates are zero-filled when no
    calibration is given.
    """
    calibration = calibration or RateCalibration()

    def one(sigma: float):
        strain = uniaxial_strain(sigma, p)
        if prestress is not None:
            strain = superpose(prestress, strain)
        doublet = kp_bulk.top_valence_doublet(strain, p)
        s = rates(dipole_strengths(doublet), calibration)
        return (strain.exx, s.s_x, s.s_y, s.s_z, s.r_x, s.r_y, s.r_z)

    return np.array(map_ordered(one, stresses_gpa, threads))


def dlp_and_angle(strengths: DipoleStrengths,
                  in_plane_only: bool = True) -> Polarization:
    """Degree of linear polarization and orientation of the in-plane
    emission pattern I(phi) = s_x cos^2(phi) + s_y sin^2(phi).

    With ``in_plane_only`` (top collection through a small aperture) the
    z dipole is not collected at all; otherwise it contributes an
    unpolarized pedestal s_z/2 that only dilutes the degree.  Ties
    (s_x = s_y) report 0 degrees by convention and are flagged.
    """
    pedestal = 0.0 if in_plane_only else 0.5 * strengths.s_z
    i_x = strengths.s_x + pedestal
    i_y = strengths.s_y + pedestal
    top = max(i_x, i_y)
    bottom = min(i_x, i_y)
    degree = 0.0 if top + bottom == 0 else (top - bottom) / (top + bottom)
    tie = strengths.s_x == strengths.s_y
    angle = 0.0 if strengths.s_x >= strengths.s_y else 90.0
    return Polarization(degree=float(degree), angle_deg=angle, tie=tie)
