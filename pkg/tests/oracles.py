"""Independent reference implementations used only by the tests.

Each one is written differently from the library code it checks: naive
index loops instead of reshapes, recursive set partitions instead of
restricted growth strings, Kronecker products of letter matrices instead of
bit-vector Pauli construction.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb, factorial

import numpy as np

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def set_partitions(items):
    """All partitions of a list, by inserting the first item into each block of each partition of the rest."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for p in set_partitions(rest):
        yield [[first]] + p
        for i in range(len(p)):
            yield p[:i] + [[first] + p[i]] + p[i + 1:]


def stirling2(n, k):
    return sum((-1) ** j * comb(k, j) * (k - j) ** n for j in range(k + 1)) // factorial(k)


def bell(n):
    return sum(stirling2(n, k) for k in range(n + 1))


def naive_ptrace(rho, dims, keep):
    """Partial trace by explicit summation over multi-indices."""
    n = len(dims)
    keep = sorted(keep)
    drop = [i for i in range(n) if i not in keep]
    kd = [dims[i] for i in keep]
    out = np.zeros((int(np.prod(kd)), int(np.prod(kd))), dtype=complex)

    def flat(idx, ds):
        f = 0
        for i, d in zip(idx, ds):
            f = f * d + i
        return f

    for ki in itertools.product(*[range(d) for d in kd]):
        for kj in itertools.product(*[range(d) for d in kd]):
            s = 0
            for di in itertools.product(*[range(dims[i]) for i in drop]):
                full_i, full_j = [0] * n, [0] * n
                for pos, q in enumerate(keep):
                    full_i[q], full_j[q] = ki[pos], kj[pos]
                for pos, q in enumerate(drop):
                    full_i[q] = full_j[q] = di[pos]
                s += rho[flat(full_i, dims), flat(full_j, dims)]
            out[flat(ki, kd), flat(kj, kd)] = s
    return out


def embed_product(blocks, factors, dims):
    """Tensor of block operators placed on their parties, built entry by entry."""
    total = int(np.prod(dims))
    out = np.zeros((total, total), dtype=complex)
    idx = list(itertools.product(*[range(d) for d in dims]))
    for a, ia in enumerate(idx):
        for b, ib in enumerate(idx):
            v = 1.0 + 0j
            for blk, f in zip(blocks, factors):
                bd = [dims[q] for q in blk]
                ra = rb = 0
                for q, d in zip(blk, bd):
                    ra, rb = ra * d + ia[q], rb * d + ib[q]
                v *= f[ra, rb]
            out[a, b] = v
    return out


def naive_cumulant(rho, dims):
    """``rho`` minus the pseudo-state, from recursive partitions and naive partial traces."""
    n = len(dims)
    pseudo = np.zeros_like(rho, dtype=complex)
    for p in set_partitions(range(n)):
        m = len(p)
        if m < 2:
            continue
        blocks = [sorted(b) for b in p]
        factors = [naive_ptrace(rho, dims, b) for b in blocks]
        pseudo += (-1) ** m * factorial(m - 1) * embed_product(blocks, factors, dims)
    return rho - pseudo


def pauli_string_dense(s):
    sign = 1
    if s.startswith("-"):
        sign, s = -1, s[1:]
    elif s.startswith("+"):
        s = s[1:]
    out = np.array([[1.0 + 0j]])
    for ch in s:
        out = np.kron(out, PAULI[ch])
    return sign * out


def stabilizer_projector(strings):
    """``prod (I + G)/2`` from dense generator matrices."""
    mats = [pauli_string_dense(s) for s in strings]
    d = mats[0].shape[0]
    out = np.eye(d, dtype=complex)
    for m in mats:
        out = out @ (np.eye(d) + m) / 2
    return out


def cubic_hermitian_eigs(h):
    """Eigenvalues of a 3x3 Hermitian matrix by the trigonometric root formula, ascending."""
    q = np.trace(h).real / 3
    b = h - q * np.eye(3)
    p = np.sqrt(np.trace(b @ b).real / 6)
    if p < 1e-300:
        return np.array([q, q, q])
    r = np.linalg.det(b / p).real / 2
    r = min(1.0, max(-1.0, r))
    phi = np.arccos(r) / 3
    e1 = q + 2 * p * np.cos(phi)
    e3 = q + 2 * p * np.cos(phi + 2 * np.pi / 3)
    e2 = 3 * q - e1 - e3
    return np.sort([e1, e2, e3])


def c_by_logistic_derivatives(n):
    """``c_N`` by differentiating ``s = 1/(1+e^l)`` symbolically, using ``ds/dl = s^2 - s``."""
    poly = {1: Fraction(1)}  # f = s
    for _ in range(n - 1):
        new = {}
        for k, c in poly.items():
            # d(s^k) = k s^(k-1) (s^2 - s)
            new[k + 1] = new.get(k + 1, 0) + c * k
            new[k] = new.get(k, 0) - c * k
        poly = new
    return -sum(c * Fraction(1, 2 ** k) for k, c in poly.items())
