"""Two-NOPA network producing the four-mode TTPC state.

NOPA1 emits modes ``a1, a2`` and NOPA2 emits ``a3, a4``. Modes ``a2`` and
``a3`` are recombined on a 50% beam splitter locked at a pi/2 phase
difference. Output modes are returned in the order

    b1 = a1,  b2 = (a2 + i a3)/sqrt(2),  b3 = a4,  b4 = (a2 - i a3)/sqrt(2)

as zero-based indices 0..3.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument
from .gaussian import (
    DEFAULT_CONVENTION,
    Convention,
    GaussianState,
    QuadCombination,
    apply_symplectic,
    beam_splitter,
    combination_variance,
    loss_channel,
    permute_modes,
    squeeze_deamp_pair,
    vacuum_state,
)

SQRT2 = np.sqrt(2.0)
BS_ANGLE = np.pi / 4


def db_to_r(db: float) -> float:
    """Squeezing factor for ``db`` of squeezing, from ``exp(-2r) = 10**(-db/10)``."""
    db = float(db)
    if not np.isfinite(db) or db < 0:
        raise InvalidArgument(f"squeezing in dB must be finite and >= 0, got {db!r}")
    return db * np.log(10.0) / 20.0


def r_to_db(r: float) -> float:
    return 20.0 * float(r) / np.log(10.0)


@dataclass(frozen=True)
class CircuitParams:
    """Parameters of the generation network.

    ``losses`` are power transmissions of the output modes b1..b4, applied
    after the beam splitter. ``escape`` holds one transmission per NOPA,
    applied to both of its output modes before the beam splitter.
    """

    r1: float
    r2: float | None = None
    bs_phase: float = np.pi / 2
    losses: tuple = (1.0, 1.0, 1.0, 1.0)
    escape: tuple = (1.0, 1.0)
    convention: Convention = DEFAULT_CONVENTION

    def __post_init__(self):
        r1 = float(self.r1)
        r2 = r1 if self.r2 is None else float(self.r2)
        for name, r in (("r1", r1), ("r2", r2)):
            if not np.isfinite(r) or r < 0:
                raise InvalidArgument(f"{name} must be finite and >= 0, got {r!r}")
        phase = float(self.bs_phase)
        if not np.isfinite(phase):
            raise InvalidArgument("bs_phase must be finite")
        losses = _etas(self.losses, 4, "losses")
        escape = _etas(self.escape, 2, "escape")
        object.__setattr__(self, "r1", r1)
        object.__setattr__(self, "r2", r2)
        object.__setattr__(self, "bs_phase", phase)
        object.__setattr__(self, "losses", losses)
        object.__setattr__(self, "escape", escape)

    @classmethod
    def uniform_loss(cls, r: float, eta: float, **kw) -> "CircuitParams":
        return cls(r, losses=(eta,) * 4, **kw)


def _etas(values, n, name):
    try:
        etas = tuple(float(v) for v in values)
    except TypeError:
        raise InvalidArgument(f"{name} must be a sequence of {n} transmissions") from None
    if len(etas) != n:
        raise InvalidArgument(f"{name} needs {n} values, got {len(etas)}")
    for e in etas:
        if not np.isfinite(e) or not 0.0 <= e <= 1.0:
            raise InvalidArgument(f"{name} entries must lie in [0, 1], got {e!r}")
    return etas


def epr_pair(r: float, convention: Convention = DEFAULT_CONVENTION) -> GaussianState:
    """Output of a single NOPA in de-amplification, seeded by vacuum noise."""
    return apply_symplectic(vacuum_state(2, convention), squeeze_deamp_pair(r), [0, 1])


def epr_variances(state: GaussianState) -> tuple[float, float]:
    """``Var(X1 + X2)`` and ``Var(Y1 - Y2)`` of a two-mode state."""
    xs = QuadCombination.of((0, "X", 1.0), (1, "X", 1.0))
    yd = QuadCombination.of((0, "Y", 1.0), (1, "Y", -1.0))
    return combination_variance(state, xs), combination_variance(state, yd)


def build_ttpc(params: CircuitParams) -> GaussianState:
    """Four-mode TTPC state in b-mode order, losses applied last."""
    state = vacuum_state(4, params.convention)
    state = apply_symplectic(state, squeeze_deamp_pair(params.r1), [0, 1])
    state = apply_symplectic(state, squeeze_deamp_pair(params.r2), [2, 3])
    for nopa, eta in enumerate(params.escape):
        if eta != 1.0:
            state = loss_channel(state, 2 * nopa, eta)
            state = loss_channel(state, 2 * nopa + 1, eta)
    state = apply_symplectic(state, beam_splitter(BS_ANGLE, params.bs_phase), [1, 2])
    # after the BS: mode 1 = b2, mode 2 = b4, mode 3 = a4 = b3
    state = permute_modes(state, [0, 1, 3, 2])
    for mode, eta in enumerate(params.losses):
        if eta != 1.0:
            state = loss_channel(state, mode, eta)
    return state


def nullifiers() -> tuple[QuadCombination, ...]:
    """The four combinations that vanish for infinite squeezing, in order.

    1. sqrt2 X_b1 + X_b4 + X_b2
    2. sqrt2 Y_b2 - Y_b1 + X_b3
    3. sqrt2 Y_b3 + X_b2 - X_b4
    4. -sqrt2 Y_b4 + X_b3 + Y_b1
    """
    return (
        QuadCombination.of((0, "X", SQRT2), (3, "X", 1.0), (1, "X", 1.0)),
        QuadCombination.of((1, "Y", SQRT2), (0, "Y", -1.0), (2, "X", 1.0)),
        QuadCombination.of((2, "Y", SQRT2), (1, "X", 1.0), (3, "X", -1.0)),
        QuadCombination.of((3, "Y", -SQRT2), (2, "X", 1.0), (0, "Y", 1.0)),
    )


def nullifier_variances(state: GaussianState) -> tuple[float, float, float, float]:
    if state.n_modes < 4:
        raise InvalidArgument(f"nullifiers need at least 4 modes, state has {state.n_modes}")
    return tuple(combination_variance(state, c) for c in nullifiers())
