"""Exact correlation values for N-qubit GHZ and classically correlated states.

The cumulant of ``rho_c = (|0..0><0..0| + |1..1><1..1|)/2`` is
``c_N * (P_even - P_odd)`` with ``P_even``/``P_odd`` the projectors onto even
and odd parity basis states; the GHZ cumulant adds the two corner entries
``(|0..0><1..1| + h.c.)/2``. Everything here is exact rational arithmetic.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

import numpy as np

from .cumulant import cumulant
from .errors import DomainError, ResourceError
from .states import classical_ghz, ghz_state

MAX_N = 64
MAX_DENSE_N = 6


def _check_n(n: int, lo: int = 2) -> None:
    if not isinstance(n, int) or n < lo:
        raise DomainError(f"n must be an integer >= {lo}, got {n!r}")
    if n > MAX_N:
        raise DomainError(f"n limited to {MAX_N}, got {n}")


def c_coefficient_sum(n: int) -> Fraction:
    """Double-sum form of ``c_N``, defined for ``2 <= n <= 64``.

    (At ``n = 1`` this sum and the derivative form differ in sign, and
    neither describes a multi-party cumulant, so ``n = 1`` is rejected.)
    """
    _check_n(n)
    total = Fraction(0)
    for m in range(1, n + 1):
        for i in range(m):
            num = (-1) ** (m + i - 1) * (m - i) ** n * factorial(m - 1)
            total += Fraction(num, 2 ** m * factorial(i) * factorial(m - i))
    return total


def exp_series(order: int) -> list[Fraction]:
    return [Fraction(1, factorial(k)) for k in range(order + 1)]


def series_reciprocal(a: list[Fraction]) -> list[Fraction]:
    """Coefficients of ``1/a(x)`` up to the length of ``a``; needs ``a[0] != 0``."""
    if a[0] == 0:
        raise DomainError("series with zero constant term has no reciprocal")
    b = [Fraction(1) / a[0]]
    for k in range(1, len(a)):
        s = sum(a[j] * b[k - j] for j in range(1, k + 1))
        b.append(-s / a[0])
    return b


def c_coefficient_derivative(n: int) -> Fraction:
    """``c_N`` as ``-(d/dl)^(N-1) 1/(1+e^l)`` at 0, via formal power series."""
    _check_n(n)
    series = exp_series(n - 1)
    series[0] += 1
    inv = series_reciprocal(series)
    return -factorial(n - 1) * inv[n - 1]


def c_coefficient(n: int) -> Fraction:
    return c_coefficient_derivative(n)


def classical_measure(n: int) -> Fraction:
    _check_n(n)
    if n % 2:
        return Fraction(0)
    return 2 ** (n - 1) * abs(c_coefficient(n))


def ghz_measure(n: int) -> Fraction:
    _check_n(n)
    if n % 2:
        return Fraction(1, 2)
    c = c_coefficient(n)
    half = Fraction(1, 2)
    return 2 ** (n - 1) * abs(c) + (abs(c + half) + abs(c - half) - 2 * abs(c)) / 2


@dataclass(frozen=True)
class GhzRow:
    n: int
    c_n: Fraction
    measure_ghz: Fraction
    measure_classical: Fraction


def fig1_table(max_n: int) -> list[GhzRow]:
    """Rows ``n = 2..max_n`` of exact c_N and both measures."""
    _check_n(max_n)
    return [
        GhzRow(n, c_coefficient(n), ghz_measure(n), classical_measure(n))
        for n in range(2, max_n + 1)
    ]


CSV_HEADER = (
    "n", "c_n", "measure_ghz", "measure_classical",
    "c_n_float", "measure_ghz_float", "measure_classical_float",
)


def _frac(x: Fraction) -> str:
    return str(x)  # "p/q", or "p" for integers


def _float(x: Fraction) -> str:
    return f"{float(x):.12g}"


def table_to_csv(rows: list[GhzRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow([
            r.n, _frac(r.c_n), _frac(r.measure_ghz), _frac(r.measure_classical),
            _float(r.c_n), _float(r.measure_ghz), _float(r.measure_classical),
        ])
    return buf.getvalue()


# ----------------------------------------------------------------------------
# dense cross-checks


def _check_dense_n(n: int) -> None:
    if n < 2:
        raise DomainError("n must be >= 2")
    if n > MAX_DENSE_N:
        raise ResourceError(f"dense GHZ checks limited to n <= {MAX_DENSE_N}", limit=MAX_DENSE_N)


def parity_signs(n: int) -> np.ndarray:
    """``+1`` on even-parity basis states, ``-1`` on odd."""
    return 1.0 - 2.0 * (np.bitwise_count(np.arange(2 ** n)) % 2)


def classical_cumulant_dense_check(n: int) -> float:
    """Max entry-wise deviation of the dense cumulant of ``rho_c`` from ``c_N (P_even - P_odd)``."""
    _check_dense_n(n)
    expected = float(c_coefficient(n)) * np.diag(parity_signs(n))
    return float(np.max(np.abs(cumulant(classical_ghz(n)).data - expected)))


def ghz_offdiagonal_check(n: int) -> float:
    """Max deviation of ``C(GHZ) - C(rho_c)`` from the two corner entries of 1/2."""
    _check_dense_n(n)
    diff = cumulant(ghz_state(n).density()).data - cumulant(classical_ghz(n)).data
    expected = np.zeros_like(diff)
    expected[0, -1] = expected[-1, 0] = 0.5
    return float(np.max(np.abs(diff - expected)))
