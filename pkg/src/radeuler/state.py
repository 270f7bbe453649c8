"""State-space algebra for the radially symmetric ultra-relativistic gas.

Physical variables are the pressure ``p`` and the radial four-velocity
component ``u``.  The scheme works on the transformed pair

    a = p (3 + 4 u^2),    b = 4 p u sqrt(1 + u^2),

which maps ``p > 0`` one-to-one onto ``|b| < a``.  Every function here accepts
scalars or numpy arrays and is a pure function of its arguments.

The closed forms are evaluated in rearranged, cancellation-free variants
(e.g. ``p = (a - b)(a + b) / (a + sqrt(4a^2 - 3b^2))``) so that states close to
the vacuum boundary ``|b| -> a`` keep full relative accuracy and the rest state
``b = 0`` maps to exact values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# radicands negative by less than this (relative to a^2) are rounding dust
RADICAND_DUST = 1e-14


class DomainError(ValueError):
    """A state lies outside the admissible state space."""


@dataclass(frozen=True)
class PrimitiveState:
    """Pressure and radial four-velocity component (scalars or arrays)."""

    p: float | np.ndarray
    u: float | np.ndarray


@dataclass(frozen=True)
class ConservedState:
    """Energy-like density ``a`` and momentum-like density ``b``."""

    a: float | np.ndarray
    b: float | np.ndarray


def safe_sqrt(radicand, scale):
    """Square root that forgives rounding dust below zero.

    ``radicand`` values in ``(-RADICAND_DUST * scale, 0)`` are clamped to 0;
    anything more negative raises :class:`DomainError`.
    """
    r = np.asarray(radicand, dtype=float)
    if np.any(r < 0.0):
        if np.any(r < -RADICAND_DUST * np.asarray(scale)):
            raise DomainError(f"negative radicand {np.min(r):.3e}")
        r = np.maximum(r, 0.0)
    out = np.sqrt(r)
    return out if out.ndim else float(out)


def check_conserved(a, b) -> None:
    """Raise unless ``|b| < a`` holds everywhere (equality is vacuum, invalid)."""
    a, b = np.broadcast_arrays(np.asarray(a, dtype=float), np.asarray(b, dtype=float))
    bad = ~(np.abs(b) < a)
    if np.any(bad):
        i = int(np.flatnonzero(bad.ravel())[0])
        raise DomainError(
            f"state outside |b| < a at index {i}: a={a.ravel()[i]!r}, b={b.ravel()[i]!r}"
        )


def _root(a, b):
    # sqrt(4a^2 - 3b^2) written as sqrt(a^2 + 3(a-b)(a+b)); exact 2a at b = 0
    return np.sqrt(a * a + 3.0 * ((a - b) * (a + b)))


def _scalar(x):
    x = np.asarray(x)
    return float(x) if x.ndim == 0 else x


# -- array-level kernels (no validation) -------------------------------------


def pressure(a, b):
    """Pressure from ``(a, b)``; assumes ``|b| < a``."""
    return (a - b) * (a + b) / (a + _root(a, b))


def flux_closure(a, b):
    """Momentum flux ``c(a, b) = 5a/3 - 2/3 sqrt(4a^2 - 3b^2)``.

    Evaluated as ``a/3 + 2b^2 / (2a + sqrt(4a^2 - 3b^2))``, which is the same
    quantity without the cancellation between the two terms.
    """
    return a / 3.0 + 2.0 * b * b / (2.0 * a + _root(a, b))


def closure_excess(a, b):
    """``c(a, b) - a/3``; vanishes exactly when ``b == 0``."""
    return 2.0 * b * b / (2.0 * a + _root(a, b))


def velocity(a, b):
    """Three-velocity ``v = u / sqrt(1 + u^2) = b / (a + p)``."""
    return b / (a + pressure(a, b))


def four_velocity_from(a, b):
    p = pressure(a, b)
    return b / np.sqrt(4.0 * p * (p + a))


def entropy_density_from(a, b):
    """``p^(3/4) sqrt(1 + u^2)``, using ``1 + u^2 = (a + p) / (4p)``."""
    p = pressure(a, b)
    return 0.5 * p**0.25 * np.sqrt(a + p)


def entropy_flux_from(a, b):
    """``p^(3/4) u``."""
    p = pressure(a, b)
    return p**0.75 * b / np.sqrt(4.0 * p * (p + a))


# -- validated public operations ---------------------------------------------


def to_conserved(s: PrimitiveState) -> ConservedState:
    p = np.asarray(s.p, dtype=float)
    u = np.asarray(s.u, dtype=float)
    if not np.all(p > 0.0):
        raise DomainError(f"pressure must be positive, got {np.min(p)!r}")
    a = p * (3.0 + 4.0 * u * u)
    b = 4.0 * p * u * np.sqrt(1.0 + u * u)
    return ConservedState(_scalar(a), _scalar(b))


def to_primitive(c: ConservedState) -> PrimitiveState:
    a = np.asarray(c.a, dtype=float)
    b = np.asarray(c.b, dtype=float)
    check_conserved(a, b)
    p = pressure(a, b)
    u = b / np.sqrt(4.0 * p * (p + a))
    return PrimitiveState(_scalar(p), _scalar(u))


def flux_c(c: ConservedState):
    a = np.asarray(c.a, dtype=float)
    b = np.asarray(c.b, dtype=float)
    check_conserved(a, b)
    return _scalar(flux_closure(a, b))


def entropy_pair(c: ConservedState):
    """Entropy density ``p^(3/4) sqrt(1+u^2)`` and flux ``p^(3/4) u``."""
    a = np.asarray(c.a, dtype=float)
    b = np.asarray(c.b, dtype=float)
    check_conserved(a, b)
    return _scalar(entropy_density_from(a, b)), _scalar(entropy_flux_from(a, b))


def three_velocity(u):
    u = np.asarray(u, dtype=float)
    return _scalar(u / np.sqrt(1.0 + u * u))


def four_velocity(v):
    v = np.asarray(v, dtype=float)
    if not np.all(np.abs(v) < 1.0):
        raise DomainError(f"three-velocity must satisfy |v| < 1, got {v!r}")
    return _scalar(v / np.sqrt((1.0 - v) * (1.0 + v)))
