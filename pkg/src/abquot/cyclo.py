"""Arithmetic in the imaginary quadratic orders that carry CM tori.

Every torus in this package is ``C^n / Lambda`` where ``Lambda`` is a
module over an order ``O = Z[tau]`` with ``tau^2 = a + b*tau``.  Complex
matrices with entries in ``Q(tau)`` are stored as pairs ``(C0, C1)``
meaning ``C0 + C1*tau`` and realified in the real basis
``(e_1..e_n, tau e_1..tau e_n)``.

The complex structure is recorded through ``theta = 2*tau - b``, which
satisfies ``theta^2 = b^2 + 4a = -c`` with ``c > 0``.  Multiplication by
``i`` is ``theta / sqrt(c)``; ``theta`` itself is rational, so commuting
with the complex structure is an exact integer check.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np


@dataclass(frozen=True)
class QuadraticOrder:
    """The order ``Z[tau]`` with ``tau^2 = a + b*tau``.

    Attributes:
        name: short label used in data files.
        a, b: coefficients of the minimal relation of ``tau``.
        conductor: smallest ``k`` with ``tau`` in ``Q(zeta_k)``.
    """

    name: str
    a: int
    b: int
    conductor: int

    @property
    def discriminant(self) -> int:
        return self.b * self.b + 4 * self.a

    @property
    def norm_of_theta(self) -> int:
        """``c`` with ``theta^2 = -c``."""
        return -self.discriminant

    def mul(self, x, y) -> tuple:
        """Product of ``x0 + x1 tau`` and ``y0 + y1 tau``."""
        return (x[0] * y[0] + self.a * x[1] * y[1],
                x[0] * y[1] + x[1] * y[0] + self.b * x[1] * y[1])

    def unit_matrix(self) -> np.ndarray:
        """Real 2x2 matrix of multiplication by ``tau`` in the basis ``(1, tau)``."""
        return np.array([[0, self.a], [1, self.b]], dtype=object)

    def theta(self, n: int = 1) -> np.ndarray:
        """Multiplication by ``theta = 2 tau - b`` on ``O^n`` in the split basis."""
        I = np.eye(n, dtype=object)
        Z = np.zeros((n, n), dtype=object)
        return 2 * realify(Z, I, self) - self.b * np.eye(2 * n, dtype=object)

    def to_complex(self, x) -> complex:
        tau = (self.b + 1j * (self.norm_of_theta ** 0.5)) / 2
        return complex(float(x[0]) + float(x[1]) * tau)


RINGS = {
    "gaussian": QuadraticOrder("gaussian", -1, 0, 4),        # tau = i
    "eisenstein": QuadraticOrder("eisenstein", -1, -1, 3),   # tau = omega
    "sqrt-2": QuadraticOrder("sqrt-2", -2, 0, 8),            # tau = sqrt(-2)
    "kleinian": QuadraticOrder("kleinian", -2, -1, 7),       # tau = (-1 + sqrt(-7)) / 2
}


def ring(name: str) -> QuadraticOrder:
    try:
        return RINGS[name]
    except KeyError:
        raise ValueError(f"unknown ring {name!r}; choose from {sorted(RINGS)}") from None


def realify(C0, C1, R: QuadraticOrder) -> np.ndarray:
    """Real matrix of ``C0 + C1 tau`` in the basis ``(e, tau e)``.

    Multiplication by ``tau`` sends ``e`` to ``tau e`` and ``tau e`` to
    ``a e + b tau e``, which gives the block form
    ``[[C0, a C1], [C1, C0 + b C1]]``.
    """
    C0 = np.asarray(C0, dtype=object)
    C1 = np.asarray(C1, dtype=object)
    return np.block([[C0, R.a * C1], [C1, C0 + R.b * C1]])


def multiplier_change(taus, R: QuadraticOrder) -> np.ndarray:
    """Columns of ``(e_i, tau_i e_i)`` in the split basis ``(e_i, tau e_i)``.

    ``taus[i] = (u, v)`` stands for ``tau_i = u + v tau``; entries may be
    rational.
    """
    n = len(taus)
    P = np.eye(2 * n, dtype=object)
    for i, (u, v) in enumerate(taus):
        P[i, n + i] = Fraction(u)
        P[n + i, n + i] = Fraction(v)
    return P


# ---------------------------------------------------------------------------
# roots of unity acting on one elliptic curve

def zeta_block(m: int) -> np.ndarray:
    """Matrix of ``zeta_m`` on ``Z[zeta_m]`` for ``m`` in {1, 2, 3, 4, 6}.

    The basis is ``(1, i)`` for ``m`` in {1, 2, 4} and ``(1, omega)`` for
    ``m`` in {3, 6}; ``zeta_3 = omega`` and ``zeta_6 = 1 + omega``.
    """
    blocks = {
        1: [[1, 0], [0, 1]],
        2: [[-1, 0], [0, -1]],
        4: [[0, -1], [1, 0]],
        3: [[0, -1], [1, -1]],
        6: [[1, -1], [1, 0]],
    }
    if m not in blocks:
        raise ValueError(f"no CM automorphism of order {m} on an elliptic curve")
    return np.array(blocks[m], dtype=np.int64)


def curve_order(m: int) -> QuadraticOrder:
    """The order ``Z[zeta_m]`` as a :class:`QuadraticOrder`."""
    return RINGS["eisenstein"] if m in (3, 6) else RINGS["gaussian"]


def theta_block(m: int) -> tuple[np.ndarray, int]:
    """``(theta, c)`` for the curve ``C / Z[zeta_m]``, in the basis of :func:`zeta_block`."""
    R = curve_order(m)
    th = np.array([[-R.b, 2 * R.a], [2, R.b]], dtype=np.int64)
    return th, R.norm_of_theta


def zeta_power(m: int, k: int) -> np.ndarray:
    z = zeta_block(m)
    out = np.eye(2, dtype=np.int64)
    for _ in range(k % m):
        out = out @ z
    return out
