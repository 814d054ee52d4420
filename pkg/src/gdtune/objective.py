"""Objectives, run configuration and hyperparameter bindings for gradient descent."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import DimensionError, MissingPiece
from .polynomials import Budget, MultiPoly, as_fraction


@dataclass(frozen=True)
class GDConfig:
    """Gradient descent settings shared by all traces.

    ``H`` is the iteration cap, ``theta`` the gradient-norm threshold and
    ``domain`` the closed rational interval of the free hyperparameter.
    """

    H: int
    theta: Fraction
    domain: tuple[Fraction, Fraction]
    budget: Budget = field(default_factory=Budget)

    def __post_init__(self):
        object.__setattr__(self, "theta", as_fraction(self.theta))
        lo, hi = as_fraction(self.domain[0]), as_fraction(self.domain[1])
        object.__setattr__(self, "domain", (lo, hi))
        if self.H < 1:
            raise ValueError("H must be at least 1")
        if self.theta <= 0:
            raise ValueError("theta must be positive")
        if lo < 0:
            raise ValueError("parameter domain must lie in [0, inf)")
        if not lo < hi:
            raise ValueError("parameter domain must be a nonempty interval")


class PwPolyObjective:
    """Piecewise-polynomial objective on R^d.

    The sign vector of the ``boundaries`` at a point (a string over "+-",
    one character per boundary) selects the polynomial piece.  A plain
    polynomial is the case with no boundaries and the single piece ``""``.
    Pieces can be given eagerly as a mapping or produced lazily by
    ``piece_factory``.
    """

    def __init__(self, dim: int, boundaries: Sequence[MultiPoly] = (),
                 pieces: Mapping[str, MultiPoly] | None = None,
                 piece_factory: Callable[[str], MultiPoly] | None = None,
                 degree: int | None = None):
        self.dim = dim
        self.boundaries = tuple(boundaries)
        self.pieces = dict(pieces or {})
        self.piece_factory = piece_factory
        for b in self.boundaries:
            if b.dim != dim:
                raise DimensionError("boundary dimension mismatch")
        for s, pc in self.pieces.items():
            if pc.dim != dim:
                raise DimensionError("piece dimension mismatch")
            if len(s) != len(self.boundaries) or set(s) - {"+", "-"}:
                raise ValueError(f"bad sign vector {s!r}")
        if not self.pieces and piece_factory is None:
            raise ValueError("objective needs pieces or a piece factory")
        self._degree = degree
        self._grad_cache: dict[str, tuple[MultiPoly, ...]] = {}

    @classmethod
    def polynomial(cls, f: MultiPoly) -> "PwPolyObjective":
        return cls(f.dim, (), {"": f})

    @property
    def p(self) -> int:
        return len(self.boundaries)

    @property
    def degree(self) -> int:
        """Max degree of any piece or boundary (at least 1)."""
        if self._degree is None:
            degs = [b.total_degree for b in self.boundaries]
            degs += [pc.total_degree for pc in self.pieces.values()]
            self._degree = max(degs + [1])
        return self._degree

    def piece(self, signs: str) -> MultiPoly:
        pc = self.pieces.get(signs)
        if pc is None and self.piece_factory is not None:
            pc = self.piece_factory(signs)
            self.pieces[signs] = pc
        if pc is None:
            raise MissingPiece(f"no piece for sign vector {signs!r}")
        return pc

    def gradient(self, signs: str) -> tuple[MultiPoly, ...]:
        g = self._grad_cache.get(signs)
        if g is None:
            g = self.piece(signs).gradient
            self._grad_cache[signs] = g
        return g

    def signs_at(self, point) -> str | None:
        """Sign vector at an exact point, or None if the point lies on a boundary."""
        out = []
        for b in self.boundaries:
            v = b(point)
            if v == 0:
                return None
            out.append("+" if v > 0 else "-")
        return "".join(out)

    def __call__(self, point):
        s = self.signs_at(point)
        if s is None:
            raise ValueError("point lies on a boundary")
        return self.piece(s)(point)

    def is_polynomial(self) -> bool:
        return not self.boundaries

    def all_sign_vectors(self):
        for bits in itertools.product("+-", repeat=self.p):
            yield "".join(bits)

    # float evaluation, used by the numeric oracle

    def _sign_strings(self, X):
        if not self.boundaries:
            return np.array([""] * X.shape[0], dtype=object)
        cols = [np.where(b.eval_float(X) > 0, "+", "-") for b in self.boundaries]
        return np.array(["".join(r) for r in zip(*cols)], dtype=object)

    def grad_batch(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        out = np.zeros_like(X)
        signs = self._sign_strings(X)
        for s in set(signs.tolist()):
            mask = signs == s
            grads = _float_gradient(self.piece(s))
            for j, gj in enumerate(grads):
                out[mask, j] = gj(X[mask])
        return out

    def value_batch(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        out = np.zeros(X.shape[0])
        signs = self._sign_strings(X)
        for s in set(signs.tolist()):
            mask = signs == s
            out[mask] = self.piece(s).eval_float(X[mask])
        return out

    def __repr__(self):
        return f"PwPolyObjective(dim={self.dim}, p={self.p}, degree={self.degree})"


@lru_cache(maxsize=4096)
def _float_gradient(f: MultiPoly):
    return tuple(g.eval_float for g in f.gradient)


# --- hyperparameter bindings ---------------------------------------------


def _vec(v) -> tuple[Fraction, ...]:
    return tuple(as_fraction(x) for x in v)


@dataclass(frozen=True)
class StepSize:
    """Free step size eta from the fixed start ``x0``."""

    x0: tuple

    def __post_init__(self):
        object.__setattr__(self, "x0", _vec(self.x0))


@dataclass(frozen=True)
class InitScale:
    """Free initialization scale sigma: x1 = sigma * direction, fixed step ``eta``."""

    direction: tuple
    eta: Fraction

    def __post_init__(self):
        object.__setattr__(self, "direction", _vec(self.direction))
        object.__setattr__(self, "eta", as_fraction(self.eta))


@dataclass(frozen=True)
class InitCoord:
    """Free coordinate ``index`` of the starting point, other coordinates from ``base``."""

    index: int
    base: tuple
    eta: Fraction

    def __post_init__(self):
        object.__setattr__(self, "base", _vec(self.base))
        object.__setattr__(self, "eta", as_fraction(self.eta))
        if not 0 <= self.index < len(self.base):
            raise IndexError("init_coord index out of range")


@dataclass(frozen=True)
class ScheduleCoord:
    """Free step size for update ``t`` (1-based); the rest of ``schedule`` is fixed."""

    t: int
    schedule: tuple
    x0: tuple

    def __post_init__(self):
        object.__setattr__(self, "schedule", _vec(self.schedule))
        object.__setattr__(self, "x0", _vec(self.x0))
        if not 1 <= self.t <= len(self.schedule):
            raise IndexError("schedule coordinate out of range")


@dataclass(frozen=True)
class MomentumEta:
    """Free step size for heavy-ball momentum with fixed ``gamma``.

    The default update applies the new velocity immediately
    (x_{i+1} = x_i + y_{i+1}); ``literal=True`` uses the previous velocity
    (x_{i+1} = x_i + y_i), which makes the first step a no-op.
    """

    gamma: Fraction
    x0: tuple
    literal: bool = False

    def __post_init__(self):
        object.__setattr__(self, "gamma", as_fraction(self.gamma))
        object.__setattr__(self, "x0", _vec(self.x0))
        if self.gamma < 0:
            raise ValueError("gamma must be non-negative")


ParamBinding = StepSize | InitScale | InitCoord | ScheduleCoord | MomentumEta


def binding_dim(binding) -> int:
    if isinstance(binding, InitScale):
        return len(binding.direction)
    if isinstance(binding, InitCoord):
        return len(binding.base)
    return len(binding.x0)
