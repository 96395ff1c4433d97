"""Gaussian states of optical modes in the quadrature (covariance) picture.

Quadratures are ordered ``(X1, Y1, X2, Y2, ...)`` everywhere. A mode's
annihilation operator is ``a = X + iY``; the vacuum variance of a single
quadrature is the convention's ``v0`` (1/4 by default, so that ``[X, Y] = i/2``).

States and operations are immutable values. Every function here returns a
new object and never mutates its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidArgument

SYMMETRY_TOL = 1e-12
SYMPLECTIC_TOL = 1e-10
PSD_TOL = 1e-9


@dataclass(frozen=True)
class Convention:
    """Vacuum-variance convention (shot-noise units)."""

    v0: float = 0.25

    def __post_init__(self):
        v0 = float(self.v0)
        if not np.isfinite(v0) or v0 <= 0:
            raise InvalidArgument(f"vacuum variance must be positive and finite, got {self.v0!r}")
        object.__setattr__(self, "v0", v0)


DEFAULT_CONVENTION = Convention()


def symplectic_form(n_modes: int) -> np.ndarray:
    """Block-diagonal symplectic form with ``[[0, 1], [-1, 0]]`` per mode."""
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class GaussianState:
    """Mean vector and covariance matrix of ``n_modes`` optical modes.

    Construction checks shapes and finiteness only. Use :func:`validate`
    for the physical (uncertainty-relation) check.
    """

    mean: np.ndarray
    cov: np.ndarray
    convention: Convention = DEFAULT_CONVENTION

    def __post_init__(self):
        mean = _frozen(self.mean)
        cov = _frozen(self.cov)
        if cov.ndim != 2 or cov.shape[0] != cov.shape[1] or cov.shape[0] % 2 or cov.shape[0] == 0:
            raise InvalidArgument(f"covariance must be a non-empty 2N x 2N matrix, got shape {cov.shape}")
        if mean.shape != (cov.shape[0],):
            raise InvalidArgument(f"mean must have length {cov.shape[0]}, got shape {mean.shape}")
        if not (np.all(np.isfinite(mean)) and np.all(np.isfinite(cov))):
            raise InvalidArgument("mean and covariance must be finite")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @property
    def n_modes(self) -> int:
        return self.cov.shape[0] // 2

    @property
    def v0(self) -> float:
        return self.convention.v0


@dataclass(frozen=True, eq=False)
class SymplecticOp:
    """Real ``2k x 2k`` symplectic matrix acting on ``k`` modes."""

    matrix: np.ndarray
    name: str = "symplectic"

    def __post_init__(self):
        m = _frozen(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2 or m.shape[0] == 0:
            raise InvalidArgument(f"symplectic matrix must be 2k x 2k, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise InvalidArgument("symplectic matrix must be finite")
        omega = symplectic_form(m.shape[0] // 2)
        err = np.max(np.abs(m.T @ omega @ m - omega))
        if err > SYMPLECTIC_TOL:
            raise InvalidArgument(f"matrix is not symplectic (max deviation {err:.3e})")
        object.__setattr__(self, "matrix", m)

    @property
    def arity(self) -> int:
        return self.matrix.shape[0] // 2

    def __matmul__(self, other: "SymplecticOp") -> "SymplecticOp":
        """Composition: ``(a @ b)`` applies ``b`` first, then ``a``."""
        if not isinstance(other, SymplecticOp):
            return NotImplemented
        if other.arity != self.arity:
            raise InvalidArgument("cannot compose ops of different arity")
        return SymplecticOp(self.matrix @ other.matrix, name=f"{self.name}*{other.name}")

    def inverse(self) -> "SymplecticOp":
        # S^-1 = -Omega S^T Omega for symplectic S
        omega = symplectic_form(self.arity)
        return SymplecticOp(-omega @ self.matrix.T @ omega, name=f"{self.name}^-1")


_QUADS = ("X", "Y")


@dataclass(frozen=True)
class QuadCombination:
    """Weighted sum of quadratures, ``sum(coeff * Q[mode])``.

    ``terms`` holds ``(mode, quad, coeff)`` with zero-based ``mode`` and
    ``quad`` in ``{"X", "Y"}``. Repeated (mode, quad) pairs are allowed
    and simply add.
    """

    terms: tuple

    def __post_init__(self):
        terms = tuple((int(m), str(q), float(c)) for m, q, c in self.terms)
        if not terms:
            raise InvalidArgument("a quadrature combination needs at least one term")
        for m, q, c in terms:
            if m < 0:
                raise InvalidArgument(f"negative mode index {m}")
            if q not in _QUADS:
                raise InvalidArgument(f"quadrature must be 'X' or 'Y', got {q!r}")
            if not np.isfinite(c):
                raise InvalidArgument(f"non-finite coefficient on {q}{m + 1}")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def of(cls, *terms) -> "QuadCombination":
        return cls(tuple(terms))

    @property
    def max_mode(self) -> int:
        return max(m for m, _, _ in self.terms)

    def vector(self, n_modes: int) -> np.ndarray:
        """Coefficient vector embedded in the ``2 * n_modes`` quadrature space."""
        if self.max_mode >= n_modes:
            raise InvalidArgument(
                f"combination uses mode {self.max_mode + 1} but the state has {n_modes} modes"
            )
        c = np.zeros(2 * n_modes)
        for m, q, coeff in self.terms:
            c[2 * m + _QUADS.index(q)] += coeff
        return c

    def sum_of_squares(self) -> float:
        """Sum of squared coefficients after merging repeated quadratures."""
        c = self.vector(self.max_mode + 1)
        return float(c @ c)

    def __str__(self):
        parts = []
        for m, q, c in self.terms:
            parts.append(f"{c:+.6g}*{q}{m + 1}")
        return " ".join(parts)


def vacuum_state(n: int, convention: Convention = DEFAULT_CONVENTION) -> GaussianState:
    """Vacuum of ``n`` modes: zero mean, covariance ``v0 * I``."""
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise InvalidArgument(f"number of modes must be a positive integer, got {n!r}")
    n = int(n)
    return GaussianState(np.zeros(2 * n), convention.v0 * np.eye(2 * n), convention)


def squeeze_deamp_pair(r: float) -> SymplecticOp:
    """Two-mode squeezer of a NOPA run in de-amplification.

    Maps ``X1 -> X1 cosh r - X2 sinh r``, ``Y1 -> Y1 cosh r + Y2 sinh r`` and
    the same with the modes exchanged, so that ``X1 + X2`` and ``Y1 - Y2``
    are squeezed by ``exp(-r)``.
    """
    r = float(r)
    if not np.isfinite(r) or r < 0:
        raise InvalidArgument(f"squeezing factor must be finite and >= 0, got {r!r}")
    c, s = np.cosh(r), np.sinh(r)
    m = np.array(
        [
            [c, 0.0, -s, 0.0],
            [0.0, c, 0.0, s],
            [-s, 0.0, c, 0.0],
            [0.0, s, 0.0, c],
        ]
    )
    return SymplecticOp(m, name=f"nopa(r={r:g})")


def passive_from_unitary(u) -> SymplecticOp:
    """Quadrature map of a passive network ``b = U a`` on annihilation operators."""
    u = np.asarray(u, dtype=complex)
    k = u.shape[0]
    if u.shape != (k, k) or not np.allclose(u @ u.conj().T, np.eye(k), atol=1e-12):
        raise InvalidArgument("passive network needs a square unitary matrix")
    a, b = u.real, u.imag
    m = np.zeros((2 * k, 2 * k))
    # X_out = A X - B Y, Y_out = B X + A Y
    m[0::2, 0::2] = a
    m[0::2, 1::2] = -b
    m[1::2, 0::2] = b
    m[1::2, 1::2] = a
    return SymplecticOp(m)


def beam_splitter(transmittance_angle: float, phase: float) -> SymplecticOp:
    r"""Lossless beam splitter acting on two modes.

    With ``t = cos(angle)``, ``s = sin(angle)`` the output operators are

    .. math::
        b = t\,a + e^{i\phi} s\,a', \qquad
        b' = -e^{-2i\phi} s\,a + e^{-i\phi} t\,a'

    Angle 0 with phase 0 is the identity. Angle pi/4 with phase pi/2 gives
    ``b = (a + i a')/sqrt(2)`` and ``b' = (a - i a')/sqrt(2)``, the
    recombination used to build the four-mode state. The power
    transmittance is ``cos(angle)**2``.
    """
    theta, phi = float(transmittance_angle), float(phase)
    if not (np.isfinite(theta) and np.isfinite(phi)):
        raise InvalidArgument("beam splitter parameters must be finite")
    t, s = np.cos(theta), np.sin(theta)
    u = np.array(
        [
            [t, np.exp(1j * phi) * s],
            [-np.exp(-2j * phi) * s, np.exp(-1j * phi) * t],
        ]
    )
    op = passive_from_unitary(u)
    return SymplecticOp(op.matrix, name=f"bs(angle={theta:g}, phase={phi:g})")


def phase_rotation(theta: float) -> SymplecticOp:
    """Single-mode phase shift ``a -> exp(i theta) a``."""
    theta = float(theta)
    op = passive_from_unitary(np.array([[np.exp(1j * theta)]]))
    return SymplecticOp(op.matrix, name=f"rot({theta:g})")


def _check_modes(modes: Sequence[int], n_modes: int, arity: int | None = None) -> list[int]:
    modes = [int(m) for m in modes]
    if arity is not None and len(modes) != arity:
        raise InvalidArgument(f"op acts on {arity} modes but {len(modes)} were given")
    if len(set(modes)) != len(modes):
        raise InvalidArgument(f"duplicate mode indices in {modes}")
    for m in modes:
        if not 0 <= m < n_modes:
            raise InvalidArgument(f"mode index {m} out of range for {n_modes} modes")
    return modes


def _quad_indices(modes: Iterable[int]) -> np.ndarray:
    return np.array([[2 * m, 2 * m + 1] for m in modes]).ravel()


def embed(op: SymplecticOp, modes: Sequence[int], n_modes: int) -> np.ndarray:
    """Full ``2N x 2N`` matrix of ``op`` acting on ``modes`` (identity elsewhere)."""
    modes = _check_modes(modes, n_modes, op.arity)
    full = np.eye(2 * n_modes)
    idx = _quad_indices(modes)
    full[np.ix_(idx, idx)] = op.matrix
    return full


def apply_symplectic(state: GaussianState, op: SymplecticOp, modes: Sequence[int]) -> GaussianState:
    s = embed(op, modes, state.n_modes)
    cov = s @ state.cov @ s.T
    # symmetrise away rounding so repeated application keeps cov exactly symmetric
    cov = 0.5 * (cov + cov.T)
    return GaussianState(s @ state.mean, cov, state.convention)


def loss_channel(state: GaussianState, mode: int, eta: float) -> GaussianState:
    """Pure-loss channel of power transmission ``eta`` on one mode.

    The mode's 2x2 block becomes ``eta * block + (1 - eta) * v0 * I``,
    its cross-covariances and mean shrink by ``sqrt(eta)``.
    """
    eta = float(eta)
    if not np.isfinite(eta) or not 0.0 <= eta <= 1.0:
        raise InvalidArgument(f"transmission must lie in [0, 1], got {eta!r}")
    (mode,) = _check_modes([mode], state.n_modes)
    scale = np.ones(2 * state.n_modes)
    scale[2 * mode: 2 * mode + 2] = np.sqrt(eta)
    cov = state.cov * np.outer(scale, scale)
    i = slice(2 * mode, 2 * mode + 2)
    cov[i, i] += (1.0 - eta) * state.v0 * np.eye(2)
    return GaussianState(state.mean * scale, cov, state.convention)


def append_vacuum(state: GaussianState, k: int = 1) -> GaussianState:
    """Tensor ``k`` vacuum modes onto the end of ``state``."""
    anc = vacuum_state(k, state.convention)
    n = 2 * state.n_modes
    cov = np.zeros((n + 2 * k, n + 2 * k))
    cov[:n, :n] = state.cov
    cov[n:, n:] = anc.cov
    return GaussianState(np.concatenate([state.mean, anc.mean]), cov, state.convention)


def reduced_state(state: GaussianState, modes: Sequence[int]) -> GaussianState:
    """Marginal on ``modes`` (in the given order); other modes are traced out."""
    modes = _check_modes(modes, state.n_modes)
    if not modes:
        raise InvalidArgument("reduced state needs at least one mode")
    idx = _quad_indices(modes)
    return GaussianState(state.mean[idx], state.cov[np.ix_(idx, idx)], state.convention)


def permute_modes(state: GaussianState, order: Sequence[int]) -> GaussianState:
    """Reorder modes: new mode ``i`` is old mode ``order[i]``."""
    if sorted(int(o) for o in order) != list(range(state.n_modes)):
        raise InvalidArgument(f"{list(order)} is not a permutation of {state.n_modes} modes")
    return reduced_state(state, order)


def combination_variance(state: GaussianState, combo: QuadCombination) -> float:
    """Variance ``c^T cov c`` of a linear quadrature combination."""
    c = combo.vector(state.n_modes)
    return float(max(c @ state.cov @ c, 0.0))


def combination_mean(state: GaussianState, combo: QuadCombination) -> float:
    return float(combo.vector(state.n_modes) @ state.mean)


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    symmetry_error: float
    min_eigenvalue: float
    messages: tuple = field(default=())

    def __bool__(self):
        return self.ok


def validate(state: GaussianState) -> ValidationReport:
    """Check covariance symmetry and the uncertainty relation.

    The uncertainty relation is ``cov + i v0 Omega >= 0``; the smallest
    eigenvalue of that Hermitian matrix is reported as ``min_eigenvalue``.
    Never raises.
    """
    cov = state.cov
    sym_err = float(np.max(np.abs(cov - cov.T)))
    herm = 0.5 * (cov + cov.T) + 1j * state.v0 * symplectic_form(state.n_modes)
    min_eig = float(np.linalg.eigvalsh(herm)[0])
    messages = []
    if sym_err > SYMMETRY_TOL:
        messages.append(f"covariance not symmetric (max |cov - cov^T| = {sym_err:.3e})")
    if min_eig < -PSD_TOL:
        messages.append(f"uncertainty relation violated (min eigenvalue {min_eig:.3e})")
    return ValidationReport(not messages, sym_err, min_eig, tuple(messages))


def rescale_convention(state: GaussianState, v0_new: float) -> GaussianState:
    """Express ``state`` in a convention with vacuum variance ``v0_new``.

    Covariances scale by ``v0_new / v0``, means by its square root, so every
    variance-to-SNL ratio is unchanged.
    """
    conv = Convention(v0_new)
    k = conv.v0 / state.v0
    return GaussianState(state.mean * np.sqrt(k), state.cov * k, conv)
