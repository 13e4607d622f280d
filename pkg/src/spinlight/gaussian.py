"""Gaussian states over canonical quadratures and the symplectic maps that move them.

Conventions, fixed once for the whole package:

* mode-interleaved quadrature ordering ``(x1, p1, x2, p2, ...)``,
* vacuum covariance ``(1/2) I`` (so ``[x, p] = i``),
* an atomic sample polarized along +x maps ``x = J_y / sqrt(hbar J_x)`` and
  ``p = J_z / sqrt(hbar J_x)``; a sample polarized along -x uses the relabeling
  ``p = -J_z / sqrt(hbar |J_x|)`` so that its ``(x, p)`` pair stays canonical,
* a light pulse maps ``x = S_y / sqrt(hbar S_x)``, ``p = S_z / sqrt(hbar S_x)``.

With these units every variance quoted as a multiple of ``hbar J_x`` is the bare
multiplier, and all covariance matrices are dimensionless.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

VACUUM_VARIANCE = 0.5
SYMMETRY_TOL = 1e-12
SYMPLECTIC_TOL = 1e-10
BONA_FIDE_TOL = 1e-9
PINV_CUTOFF = 1e-12
SPECTRUM_TOL = 1e-8


class NumericalError(RuntimeError):
    """An eigen-solver failed, produced an inconsistent spectrum, or overflowed."""


def symplectic_form(n_modes: int) -> np.ndarray:
    """Return the symplectic form Omega for mode-interleaved ordering.

    Omega is block diagonal with 2x2 blocks [[0, 1], [-1, 0]], one per mode.
    """
    if n_modes < 1:
        raise ValueError("n_modes must be at least 1")
    omega = np.zeros((2 * n_modes, 2 * n_modes))
    for k in range(n_modes):
        omega[2 * k, 2 * k + 1] = 1.0
        omega[2 * k + 1, 2 * k] = -1.0
    return omega


def _as_square_even(matrix: np.ndarray, name: str) -> np.ndarray:
    arr = np.asarray(matrix, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {arr.shape}")
    if arr.shape[0] % 2 != 0 or arr.shape[0] == 0:
        raise ValueError(f"{name} must have even, nonzero dimension, got {arr.shape[0]}")
    return arr


@dataclass(frozen=True, eq=False)
class GaussianState:
    """Mean vector and covariance matrix over 2*n_modes quadratures.

    The covariance is symmetrized on construction; callers never need to
    re-symmetrize by hand. Arrays are copied and marked read-only.
    """

    n_modes: int
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self) -> None:
        if self.n_modes < 1:
            raise ValueError("a Gaussian state needs at least one mode")
        mean = np.array(self.mean, dtype=float).reshape(-1)
        cov = np.array(self.cov, dtype=float)
        dim = 2 * self.n_modes
        if mean.shape != (dim,):
            raise ValueError(f"mean must have length {dim}, got {mean.shape}")
        if cov.shape != (dim, dim):
            raise ValueError(f"cov must have shape {(dim, dim)}, got {cov.shape}")
        if not np.isfinite(cov).all() or not np.isfinite(mean).all():
            raise NumericalError("state has non-finite entries")
        scale = max(1.0, float(np.abs(cov).max()))
        if float(np.abs(cov - cov.T).max()) > 1e-8 * scale:
            raise ValueError("covariance is not symmetric")
        cov = (cov + cov.T) / 2.0
        mean.flags.writeable = False
        cov.flags.writeable = False
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @property
    def dim(self) -> int:
        return 2 * self.n_modes


@dataclass(frozen=True, eq=False)
class SymplecticMap:
    """Affine Gaussian map: cov -> S cov S^T, mean -> S mean + d.

    Construction verifies S Omega S^T = Omega to within 1e-10 and rejects
    non-finite matrices, so every held instance is a valid symplectic map.
    """

    matrix: np.ndarray
    displacement: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        matrix = _as_square_even(np.array(self.matrix, dtype=float), "matrix")
        if self.displacement is None:
            disp = np.zeros(matrix.shape[0])
        else:
            disp = np.array(self.displacement, dtype=float).reshape(-1)
        if disp.shape != (matrix.shape[0],):
            raise ValueError("displacement length must match the matrix dimension")
        if not np.isfinite(matrix).all() or not np.isfinite(disp).all():
            raise NumericalError("symplectic map has non-finite entries")
        omega = symplectic_form(matrix.shape[0] // 2)
        delta = matrix @ omega @ matrix.T - omega
        if not np.isfinite(delta).all():
            raise NumericalError("symplectic check overflowed")
        if float(np.abs(delta).max()) > SYMPLECTIC_TOL:
            raise ValueError("matrix is not symplectic: |S Omega S^T - Omega| exceeds 1e-10")
        matrix.flags.writeable = False
        disp.flags.writeable = False
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "displacement", disp)

    @property
    def n_modes(self) -> int:
        return self.matrix.shape[0] // 2

    @classmethod
    def identity(cls, n_modes: int) -> "SymplecticMap":
        return cls(np.eye(2 * n_modes))

    def compose(self, inner: "SymplecticMap") -> "SymplecticMap":
        """Return the map `self after inner` (apply `inner` first)."""
        if self.n_modes != inner.n_modes:
            raise ValueError("maps act on different mode counts")
        return SymplecticMap(
            self.matrix @ inner.matrix,
            self.matrix @ inner.displacement + self.displacement,
        )


@dataclass(frozen=True)
class CouplingParams:
    """Dimensionless coupling strength kappa with optional physical provenance.

    kappa = a * sqrt(S_x * J_x) where a is the single-pass coupling rate and
    S_x, J_x the macroscopic polarizations; the pulse duration cancels in the
    macroscopic variables and never enters. When the microscopic inputs are
    supplied, a = (gamma / (8 A Delta)) * (lambda^2 / 2 pi) with A the beam
    cross section, Delta the detuning and lambda the wavelength.
    """

    kappa: float
    a: float | None = None
    s_x: float | None = None
    j_x: float | None = None
    gamma: float | None = None
    cross_section: float | None = None
    detuning: float | None = None
    wavelength: float | None = None

    def __post_init__(self) -> None:
        if not math.isfinite(self.kappa) or self.kappa < 0:
            raise ValueError("kappa must be finite and nonnegative")
        if self.a is not None and self.s_x is not None and self.j_x is not None:
            if self.s_x <= 0 or self.j_x <= 0:
                raise ValueError("polarizations must be positive")
            expected = self.a * math.sqrt(self.s_x * self.j_x)
            if abs(self.kappa - expected) > 1e-12 * max(1.0, abs(self.kappa)):
                raise ValueError(
                    f"kappa={self.kappa} inconsistent with a*sqrt(S_x*J_x)={expected}"
                )
        micro = (self.gamma, self.cross_section, self.detuning, self.wavelength)
        if all(v is not None for v in micro):
            if self.a is None:
                raise ValueError("microscopic inputs require the rate a for validation")
            expected_a = (self.gamma / (8.0 * self.cross_section * self.detuning)) * (
                self.wavelength**2 / (2.0 * math.pi)
            )
            if abs(self.a - expected_a) > 1e-12 * max(1.0, abs(self.a)):
                raise ValueError(f"a={self.a} inconsistent with microscopic value {expected_a}")

    @classmethod
    def from_kappa(cls, kappa: float) -> "CouplingParams":
        return cls(kappa=float(kappa))

    @classmethod
    def from_physical(cls, a: float, s_x: float, j_x: float) -> "CouplingParams":
        if s_x <= 0 or j_x <= 0:
            raise ValueError("polarizations must be positive")
        return cls(kappa=a * math.sqrt(s_x * j_x), a=a, s_x=s_x, j_x=j_x)

    @classmethod
    def from_microscopic(
        cls,
        gamma: float,
        cross_section: float,
        detuning: float,
        wavelength: float,
        s_x: float,
        j_x: float,
    ) -> "CouplingParams":
        a = (gamma / (8.0 * cross_section * detuning)) * (wavelength**2 / (2.0 * math.pi))
        return cls(
            kappa=a * math.sqrt(s_x * j_x),
            a=a,
            s_x=s_x,
            j_x=j_x,
            gamma=gamma,
            cross_section=cross_section,
            detuning=detuning,
            wavelength=wavelength,
        )


def vacuum_state(n_modes: int) -> GaussianState:
    """Vacuum over n_modes modes: zero mean, covariance (1/2) I."""
    if n_modes < 1:
        raise ValueError("n_modes must be at least 1")
    return GaussianState(
        n_modes=n_modes,
        mean=np.zeros(2 * n_modes),
        cov=VACUUM_VARIANCE * np.eye(2 * n_modes),
    )


def _check_mode(n_modes: int, mode: int, name: str) -> None:
    if not 0 <= mode < n_modes:
        raise ValueError(f"{name}={mode} out of range for {n_modes} modes")


def qnd_pass_map(
    n_modes: int,
    light_mode: int,
    sample_mode: int,
    kappa: float,
    alpha: float,
    orientation: int = 1,
) -> SymplecticMap:
    """Single pass of a light mode through one sample at geometry angle alpha.

    For orientation +1 the map is

        x_A' = x_A - kappa cos(alpha) p_L
        p_A' = p_A + kappa sin(alpha) p_L
        x_L' = x_L - kappa (cos(alpha) p_A + sin(alpha) x_A)
        p_L' = p_L

    For orientation -1 (sample polarized along -x, p relabeled as -J_z) the
    two cos(alpha) couplings flip sign while the sin(alpha) couplings do not;
    this is the unique sign choice that stays symplectic for every alpha.
    """
    if light_mode == sample_mode:
        raise ValueError("light and sample must be distinct modes")
    _check_mode(n_modes, light_mode, "light_mode")
    _check_mode(n_modes, sample_mode, "sample_mode")
    if orientation not in (1, -1):
        raise ValueError("orientation must be +1 or -1")
    if not math.isfinite(kappa) or kappa < 0:
        raise ValueError("kappa must be finite and nonnegative")
    if not math.isfinite(alpha):
        raise ValueError("alpha must be finite")
    c = math.cos(alpha)
    s = math.sin(alpha)
    xa, pa = 2 * sample_mode, 2 * sample_mode + 1
    xl, pl = 2 * light_mode, 2 * light_mode + 1
    matrix = np.eye(2 * n_modes)
    matrix[xa, pl] = -orientation * kappa * c
    matrix[pa, pl] = kappa * s
    matrix[xl, pa] = -orientation * kappa * c
    matrix[xl, xa] = -kappa * s
    return SymplecticMap(matrix)


def rotation_map(n_modes: int, mode: int, theta: float) -> SymplecticMap:
    """Phase-space rotation of one mode: (x, p) -> (x cos t - p sin t, x sin t + p cos t)."""
    _check_mode(n_modes, mode, "mode")
    if not math.isfinite(theta):
        raise ValueError("theta must be finite")
    c, s = math.cos(theta), math.sin(theta)
    matrix = np.eye(2 * n_modes)
    x, p = 2 * mode, 2 * mode + 1
    matrix[x, x] = c
    matrix[x, p] = -s
    matrix[p, x] = s
    matrix[p, p] = c
    return SymplecticMap(matrix)


def rotate_mode(state: GaussianState, mode: int, theta: float) -> GaussianState:
    """Rotate one mode of the state in phase space by angle theta."""
    return apply_symplectic(state, rotation_map(state.n_modes, mode, theta))


def apply_symplectic(state: GaussianState, smap: SymplecticMap) -> GaussianState:
    """Apply an affine symplectic map to the state."""
    if smap.n_modes != state.n_modes:
        raise ValueError(
            f"map acts on {smap.n_modes} modes but state has {state.n_modes}"
        )
    with np.errstate(over="ignore", invalid="ignore"):
        cov = smap.matrix @ state.cov @ smap.matrix.T
        mean = smap.matrix @ state.mean + smap.displacement
    return GaussianState(n_modes=state.n_modes, mean=mean, cov=cov)


def append_vacuum_mode(state: GaussianState) -> GaussianState:
    """Adjoin one fresh vacuum mode after the existing ones."""
    dim = state.dim
    cov = np.zeros((dim + 2, dim + 2))
    cov[:dim, :dim] = state.cov
    cov[dim, dim] = VACUUM_VARIANCE
    cov[dim + 1, dim + 1] = VACUUM_VARIANCE
    mean = np.concatenate([state.mean, [0.0, 0.0]])
    return GaussianState(n_modes=state.n_modes + 1, mean=mean, cov=cov)


def drop_mode(state: GaussianState, mode: int) -> GaussianState:
    """Discard one mode (partial trace)."""
    _check_mode(state.n_modes, mode, "mode")
    if state.n_modes < 2:
        raise ValueError("cannot drop the only mode")
    keep = [i for i in range(state.dim) if i not in (2 * mode, 2 * mode + 1)]
    return GaussianState(
        n_modes=state.n_modes - 1,
        mean=state.mean[keep],
        cov=state.cov[np.ix_(keep, keep)],
    )


def homodyne_condition(
    state: GaussianState,
    mode: int,
    quadrature: str,
    *,
    pinned: float | None = None,
    rng: np.random.Generator | None = None,
) -> tuple[GaussianState, float]:
    """Measure one quadrature of one mode and condition the rest on the outcome.

    The kept covariance becomes the Schur complement A - C (pi B pi)^+ C^T,
    where pi projects onto the measured quadrature and ^+ is the Moore-Penrose
    pseudo-inverse with a relative cutoff of 1e-12 (an already-determined
    quadrature leaves the covariance unchanged). The kept mean shifts by
    C (pi B pi)^+ (outcome - prior mean); the covariance update is independent
    of the outcome. The measured mode is removed.

    Exactly one of `pinned` (a fixed outcome) and `rng` (sample the outcome
    from the measured quadrature's marginal) must be supplied. Returns the
    conditioned state and the outcome used.
    """
    if state.n_modes < 2:
        raise ValueError("conditioning needs at least one unmeasured mode")
    _check_mode(state.n_modes, mode, "mode")
    if quadrature not in ("x", "p"):
        raise ValueError("quadrature must be 'x' or 'p'")
    if (pinned is None) == (rng is None):
        raise ValueError("supply exactly one of pinned= or rng=")
    if pinned is not None and not math.isfinite(pinned):
        raise ValueError("pinned outcome must be finite")

    q = 0 if quadrature == "x" else 1
    meas = [2 * mode, 2 * mode + 1]
    keep = [i for i in range(state.dim) if i not in meas]
    a_block = state.cov[np.ix_(keep, keep)]
    c_block = state.cov[np.ix_(keep, meas)]
    b_block = state.cov[np.ix_(meas, meas)]

    mean_meas = state.mean[meas]
    var_m = float(b_block[q, q])
    if pinned is not None:
        outcome = float(pinned)
    else:
        outcome = float(rng.normal(mean_meas[q], math.sqrt(max(var_m, 0.0))))

    pinv_pbp = np.zeros((2, 2))
    scale = max(1.0, float(np.abs(state.cov).max()))
    if var_m > PINV_CUTOFF * scale:
        pinv_pbp[q, q] = 1.0 / var_m

    residual = np.zeros(2)
    residual[q] = outcome - mean_meas[q]
    new_cov = a_block - c_block @ pinv_pbp @ c_block.T
    new_mean = state.mean[keep] + c_block @ pinv_pbp @ residual
    new_state = GaussianState(n_modes=state.n_modes - 1, mean=new_mean, cov=new_cov)
    return new_state, outcome


def variance_of(state: GaussianState, coeffs: np.ndarray) -> float:
    """Variance of the linear combination coeffs . (x1, p1, x2, p2, ...)."""
    vec = np.asarray(coeffs, dtype=float).reshape(-1)
    if vec.shape != (state.dim,):
        raise ValueError(f"coefficient vector must have length {state.dim}")
    return float(vec @ state.cov @ vec)


def symplectic_spectrum(cov: np.ndarray) -> np.ndarray:
    """Symplectic eigenvalues of a covariance matrix, ascending, one per mode.

    Computed as the moduli of the (paired, purely imaginary) eigenvalues of
    Omega cov. Raises NumericalError when the solver fails, when the spectrum
    has real parts beyond 1e-8 relative, or when the +-pairing disagrees.
    """
    arr = _as_square_even(cov, "cov")
    if not np.isfinite(arr).all():
        raise NumericalError("covariance has non-finite entries")
    scale = max(1.0, float(np.abs(arr).max()))
    if float(np.abs(arr - arr.T).max()) > 1e-10 * scale:
        raise ValueError("covariance is not symmetric")
    n = arr.shape[0] // 2
    omega = symplectic_form(n)
    try:
        eigenvalues = np.linalg.eigvals(omega @ arr)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigen-solver failed: {exc}") from exc
    if not np.isfinite(eigenvalues).all():
        raise NumericalError("eigen-solver returned non-finite values")
    ev_scale = max(1.0, float(np.abs(eigenvalues).max()))
    if float(np.abs(eigenvalues.real).max()) > SPECTRUM_TOL * ev_scale:
        raise NumericalError("spectrum of Omega cov is not purely imaginary")
    moduli = np.sort(np.abs(eigenvalues.imag))
    lower, upper = moduli[0::2], moduli[1::2]
    if float(np.abs(upper - lower).max()) > SPECTRUM_TOL * ev_scale:
        raise NumericalError("symplectic eigenvalues do not pair up")
    return (lower + upper) / 2.0


def partial_transpose(cov: np.ndarray, modes) -> np.ndarray:
    """Covariance of the partial transpose: flip the sign of p for each listed mode."""
    arr = _as_square_even(cov, "cov")
    n = arr.shape[0] // 2
    mode_list = sorted(set(int(m) for m in modes))
    if not mode_list:
        raise ValueError("partial transpose needs a nonempty mode subset")
    if len(mode_list) >= n:
        raise ValueError("partial transpose needs a proper mode subset")
    for m in mode_list:
        _check_mode(n, m, "mode")
    signs = np.ones(2 * n)
    for m in mode_list:
        signs[2 * m + 1] = -1.0
    return arr * np.outer(signs, signs)


def is_bona_fide(state: GaussianState, tol: float = BONA_FIDE_TOL) -> bool:
    """True when every symplectic eigenvalue is at least 1/2 - tol."""
    return bool(symplectic_spectrum(state.cov).min() >= VACUUM_VARIANCE - tol)


def is_pure(state: GaussianState, tol: float = BONA_FIDE_TOL) -> bool:
    """True when every symplectic eigenvalue equals 1/2 within tol."""
    nu = symplectic_spectrum(state.cov)
    return bool(np.abs(nu - VACUUM_VARIANCE).max() <= tol)
