"""8x8 (2 CB + 6 VB) k.p Hamiltonian with strain for zincblende crystals.

Basis ordering, fixed everywhere in this package::

    0  CB +1/2   iS(up)
    1  CB -1/2   iS(dn)
    2  HH +3/2   -(X + iY)(up)/sqrt(2)
    3  LH +1/2   -[(X + iY)(dn) - 2 Z(up)]/sqrt(6)
    4  LH -1/2   +[(X - iY)(up) + 2 Z(dn)]/sqrt(6)
    5  HH -3/2   +(X - iY)(dn)/sqrt(2)
    6  SO +1/2   +[(X + iY)(dn) + Z(up)]/sqrt(3)
    7  SO -1/2   +[(X - iY)(up) - Z(dn)]/sqrt(3)

Everything is stored in the electron-energy picture: the topmost valence
state is the largest eigenvalue among the six VB states, the CB block is
diagonal with the hydrostatic shift ``ac * tr(strain)``, and CB-VB
coupling is neglected, so the CB block is exactly decoupled.

The valence block is the standard Luttinger-Kohn + Bir-Pikus 6x6 written
in the hole picture and negated.  Scalar ingredients, with ``K`` the
free-electron kinetic prefactor ``HBAR2_OVER_2M0``::

    P = Ev(hole) + K g1 k^2      - av tr(e)
    Q = K g2 (k^2 - 3 kz^2)      - (b/2)(e_xx + e_yy - 2 e_zz)
    R = K sqrt(3)[-g2(kx^2-ky^2) + 2i g3 kx ky]
        + (sqrt(3) b / 2)(e_xx - e_yy) - i d e_xy
    S = 2 sqrt(3) K g3 (kx - i ky) kz - d (e_xz - i e_yz)

with the VB edge entering through ``Ev(hole) = -(ev_av + delta/3)``.
The relative signs between the k-quadratic and strain parts of R and S
are fixed by cubic covariance (the spectrum must be invariant under any
simultaneous cubic rotation of k and the strain tensor) and reproduce
the [111] hole masses 1/(g1 -+ 2 g3).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .elasticity import StrainState
from .materials import MaterialParams

__all__ = [
    "BLOCH_LABELS",
    "HBAR2_OVER_2M0",
    "HH_INDICES",
    "LH_INDICES",
    "NonHermitianError",
    "ORBITAL_SPIN_LABELS",
    "SO_INDICES",
    "SpinorState",
    "Wavevector",
    "bloch_orbital_matrix",
    "build_h8",
    "dispersion",
    "eigensolve",
    "h4_topmost",
    "h6_vb",
    "top_valence_doublet",
    "validate_doublet",
]

HBAR2_OVER_2M0 = 0.0380998  # eV nm^2; single source of unit truth

BLOCH_LABELS = ("CB+1/2", "CB-1/2", "HH+3/2", "LH+1/2",
                "LH-1/2", "HH-3/2", "SO+1/2", "SO-1/2")
ORBITAL_SPIN_LABELS = ("S_up", "X_up", "Y_up", "Z_up",
                       "S_dn", "X_dn", "Y_dn", "Z_dn")

VB_SLICE = slice(2, 8)
HH_INDICES = (2, 5)
LH_INDICES = (3, 4)
SO_INDICES = (6, 7)

_SQ2 = math.sqrt(2.0)
_SQ3 = math.sqrt(3.0)
_SQ32 = math.sqrt(1.5)


class NonHermitianError(ValueError):
    """Input matrix is not Hermitian within the requested tolerance."""


@dataclass(frozen=True)
class Wavevector:
    """Wavevector in 1/nm."""

    kx: float = 0.0
    ky: float = 0.0
    kz: float = 0.0

    def as_array(self) -> np.ndarray:
        return np.array([self.kx, self.ky, self.kz])


@dataclass(frozen=True)
class SpinorState:
    """Complex coefficient vector over the Bloch basis, with its energy.

    ``coefficients`` may have 8 entries (full basis) or 6 (VB-only
    restriction in basis order HH+3/2, LH+1/2, LH-1/2, HH-3/2, SO+1/2,
    SO-1/2).
    """

    coefficients: np.ndarray
    energy: float | None = None

    def __post_init__(self):
        coeff = np.asarray(self.coefficients, dtype=complex)
        if coeff.ndim != 1 or coeff.size < 2:
            raise ValueError(f"unsupported spinor shape {coeff.shape}")
        norm = np.linalg.norm(coeff)
        if abs(norm - 1.0) > 1e-10:
            raise ValueError(f"spinor norm {norm} deviates from 1")
        coeff.flags.writeable = False
        object.__setattr__(self, "coefficients", coeff)

    def vb_part(self) -> np.ndarray:
        """6-component VB restriction of the coefficient vector."""
        c = self.coefficients
        if c.shape == (8,):
            return c[VB_SLICE]
        if c.shape == (6,):
            return c
        raise ValueError("state has no 6-band VB representation")


def _kvec(k) -> np.ndarray:
    if isinstance(k, Wavevector):
        return k.as_array()
    arr = np.asarray(k, dtype=float)
    if arr.shape != (3,):
        raise ValueError("wavevector must have three components")
    return arr


def _scalars(k, strain: StrainState, p: MaterialParams):
    """Hole-picture scalar entries (C is returned in the electron picture)."""
    kx, ky, kz = _kvec(k)
    k2 = kx * kx + ky * ky + kz * kz
    tr = strain.trace()
    exx, eyy, ezz = strain.exx, strain.eyy, strain.ezz
    eyz, exz, exy = strain.eyz, strain.exz, strain.exy
    kin = HBAR2_OVER_2M0

    c_elec = p.vb_edge + p.eg + kin * k2 / p.me + p.ac * tr
    pp = -p.vb_edge + kin * p.gamma1 * k2 - p.av * tr
    qq = kin * p.gamma2 * (k2 - 3.0 * kz * kz) \
        - 0.5 * p.b * (exx + eyy - 2.0 * ezz)
    rr = kin * _SQ3 * (-p.gamma2 * (kx * kx - ky * ky)
                       + 2.0j * p.gamma3 * kx * ky) \
        + 0.5 * _SQ3 * p.b * (exx - eyy) - 1.0j * p.d * exy
    ss = 2.0 * _SQ3 * kin * p.gamma3 * (kx - 1.0j * ky) * kz \
        - p.d * (exz - 1.0j * eyz)
    return c_elec, pp, qq, rr, ss


def _vb_hole(k, strain, p, hh_shift=0.0, lh_shift=0.0) -> np.ndarray:
    """Hole-picture 6x6 VB matrix; shifts are hole-picture diagonal adds."""
    _, pp, qq, rr, ss = _scalars(k, strain, p)
    sc, rc = np.conj(ss), np.conj(rr)
    dso = p.delta
    h = np.zeros((6, 6), dtype=complex)
    h[0, 0] = pp + qq + hh_shift
    h[1, 1] = pp - qq + lh_shift
    h[2, 2] = pp - qq + lh_shift
    h[3, 3] = pp + qq + hh_shift
    h[4, 4] = pp + dso
    h[5, 5] = pp + dso
    h[0, 1] = -ss
    h[0, 2] = rr
    h[0, 4] = -ss / _SQ2
    h[0, 5] = _SQ2 * rr
    h[1, 3] = rr
    h[1, 4] = -_SQ2 * qq
    h[1, 5] = _SQ32 * ss
    h[2, 3] = ss
    h[2, 4] = _SQ32 * sc
    h[2, 5] = _SQ2 * qq
    h[3, 4] = -_SQ2 * rc
    h[3, 5] = -sc / _SQ2
    iu = np.triu_indices(6, k=1)
    h[(iu[1], iu[0])] = np.conj(h[iu])
    return h


def h6_vb(k, strain: StrainState, p: MaterialParams, *,
          hh_shift: float = 0.0, lh_shift: float = 0.0) -> np.ndarray:
    """Electron-picture 6x6 VB block.

    ``hh_shift``/``lh_shift`` add to the electron-picture HH and LH
    diagonal entries (used to emulate confinement energies).
    """
    return -_vb_hole(k, strain, p, hh_shift=-hh_shift, lh_shift=-lh_shift)


def build_h8(k, strain: StrainState, p: MaterialParams) -> np.ndarray:
    """Full 8x8 Hamiltonian (eV), CB block decoupled from the VB block."""
    c_elec = _scalars(k, strain, p)[0]
    h = np.zeros((8, 8), dtype=complex)
    h[0, 0] = h[1, 1] = c_elec
    h[VB_SLICE, VB_SLICE] = h6_vb(k, strain, p)
    return h


def h4_topmost(k, strain: StrainState, p: MaterialParams) -> np.ndarray:
    """HH/LH 4x4 block (rows/cols 2..5 of the 8x8), electron picture."""
    return h6_vb(k, strain, p)[:4, :4]


def _fix_phase(vec: np.ndarray) -> np.ndarray:
    idx = np.flatnonzero(np.abs(vec) > 1e-10)
    pivot = idx[0] if idx.size else int(np.argmax(np.abs(vec)))
    phase = vec[pivot] / abs(vec[pivot])
    return vec / phase


def eigensolve(h: np.ndarray, *, hermitian_atol: float = 1e-12) \
        -> list[SpinorState]:
    """Eigenpairs of a Hermitian matrix, energies descending.

    The phase of each eigenvector is fixed by making its first
    significant coefficient real and positive, so degenerate subspaces
    come out reproducibly for identical inputs.

    Raises NonHermitianError if ``max|h - h^dagger|`` exceeds the
    tolerance.
    """
    h = np.asarray(h, dtype=complex)
    resid = np.max(np.abs(h - h.conj().T))
    if resid > hermitian_atol:
        raise NonHermitianError(
            f"matrix is not Hermitian: residual {resid:g} exceeds "
            f"{hermitian_atol:g}")
    energies, vectors = np.linalg.eigh((h + h.conj().T) / 2.0)
    out = []
    for i in range(energies.size - 1, -1, -1):
        out.append(SpinorState(_fix_phase(vectors[:, i]),
                               energy=float(energies[i])))
    return out


def top_valence_doublet(strain: StrainState, p: MaterialParams, k=(0, 0, 0),
                        *, hh_shift: float = 0.0, lh_shift: float = 0.0) \
        -> tuple[SpinorState, SpinorState]:
    """Topmost (Kramers-degenerate) VB doublet, as 8-component states."""
    states = eigensolve(h6_vb(k, strain, p,
                              hh_shift=hh_shift, lh_shift=lh_shift))
    out = []
    for s in states[:2]:
        full = np.zeros(8, dtype=complex)
        full[VB_SLICE] = s.coefficients
        out.append(SpinorState(full, energy=s.energy))
    return out[0], out[1]


def validate_doublet(a: SpinorState, b: SpinorState,
                     *, degeneracy_atol: float = 1e-6) -> None:
    """Check that two states form a degenerate orthonormal pair."""
    if a.energy is None or b.energy is None:
        raise ValueError("doublet states need energies attached")
    gap = abs(a.energy - b.energy)
    if gap > degeneracy_atol:
        raise ValueError(
            f"states are not degenerate: |dE| = {gap:g} eV exceeds "
            f"{degeneracy_atol:g} eV")
    if a.coefficients.shape != b.coefficients.shape:
        raise ValueError("doublet states live in different bases")
    overlap = abs(np.vdot(a.coefficients, b.coefficients))
    if overlap > 1e-8:
        raise ValueError(f"doublet states are not orthogonal "
                         f"(|overlap| = {overlap:g})")


def bloch_orbital_matrix() -> np.ndarray:
    """Unitary mapping Bloch coefficients to (S,X,Y,Z) x (up,dn) products.

    Columns follow BLOCH_LABELS, rows follow ORBITAL_SPIN_LABELS; the
    product coefficients of a state are ``U @ state.coefficients``.
    """
    s2, s3, s6 = 1 / _SQ2, 1 / _SQ3, 1 / math.sqrt(6.0)
    u = np.zeros((8, 8), dtype=complex)
    u[0, 0] = 1j                                   # CB+1/2 = iS up
    u[4, 1] = 1j                                   # CB-1/2 = iS dn
    u[1, 2], u[2, 2] = -s2, -1j * s2               # HH+3/2
    u[5, 3], u[6, 3], u[3, 3] = -s6, -1j * s6, 2 * s6   # LH+1/2
    u[1, 4], u[2, 4], u[7, 4] = s6, -1j * s6, 2 * s6    # LH-1/2
    u[5, 5], u[6, 5] = s2, -1j * s2                # HH-3/2
    u[5, 6], u[6, 6], u[3, 6] = s3, 1j * s3, s3    # SO+1/2
    u[1, 7], u[2, 7], u[7, 7] = s3, -1j * s3, -s3  # SO-1/2
    return u


def dispersion(path, strain: StrainState, p: MaterialParams) -> np.ndarray:
    """Band energies along a wavevector path, shape (n_k, 8).

    Bands are ordered by energy (descending) at the first point and then
    tracked through the path by maximum eigenvector overlap, so each
    column follows one band continuously.
    """
    path = list(path)
    energies = np.empty((len(path), 8))
    prev = None
    for i, k in enumerate(path):
        states = eigensolve(build_h8(k, strain, p))
        vecs = np.column_stack([s.coefficients for s in states])
        ens = np.array([s.energy for s in states])
        if prev is None:
            order = np.arange(8)
        else:
            overlap = np.abs(prev.conj().T @ vecs)
            _, order = linear_sum_assignment(-overlap)
        energies[i] = ens[order]
        prev = vecs[:, order]
    return energies
