"""Exact linear algebra over a prime field GF(p).

Everything downstream (ranks, kernels, homology) reduces to the deterministic
RREF implemented here: pivots are chosen leftmost-column-first and within a
column the first nonzero row wins, so every basis this module emits is a
function of the input entries alone. Matrices are dense, immutable and carry
their modulus.
"""
from dataclasses import dataclass

import numpy as np

from .errors import ComplexInvalid, NoSolution

__all__ = [
    "FieldConfig",
    "Matrix",
    "NoSolution",
    "ComplexInvalid",
    "rref",
    "rank",
    "kernel_basis",
    "solve",
    "homology_dims",
    "kron",
    "hstack",
    "vstack",
    "is_prime",
]

_P_LIMIT = 1 << 31


def is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class FieldConfig:
    """Session-level field choice; the CLI realizes --field through this."""

    p: int = 2

    def __post_init__(self):
        if not (2 <= self.p < _P_LIMIT):
            raise ValueError(f"modulus must be a prime below 2^31, got {self.p}")
        if not is_prime(self.p):
            raise ValueError(f"modulus must be prime, got {self.p}")


def _check_p(p):
    if not isinstance(p, (int, np.integer)) or not (2 <= p < _P_LIMIT):
        raise ValueError(f"bad modulus {p!r}")
    return int(p)


class Matrix:
    """Immutable dense matrix over GF(p). entries row-major, reduced mod p."""

    __slots__ = ("a", "p")

    def __init__(self, entries, p):
        p = _check_p(p)
        a = np.asarray(entries, dtype=np.int64)
        if a.ndim != 2:
            raise ValueError(f"matrix must be 2-dimensional, got shape {a.shape}")
        a = np.mod(a, p)
        a.setflags(write=False)
        self.a = a
        self.p = p

    @staticmethod
    def zeros(rows, cols, p):
        return Matrix(np.zeros((rows, cols), dtype=np.int64), p)

    @staticmethod
    def identity(n, p):
        return Matrix(np.eye(n, dtype=np.int64), p)

    @property
    def rows(self):
        return self.a.shape[0]

    @property
    def cols(self):
        return self.a.shape[1]

    def tolist(self):
        return self.a.tolist()

    def is_zero(self):
        return not self.a.any()

    def transpose(self):
        return Matrix(self.a.T, self.p)

    def __matmul__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.p != other.p:
            raise ValueError("modulus mismatch")
        if self.cols != other.rows:
            raise ValueError(
                f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}"
            )
        return Matrix(_matmul_exact(self.a, other.a, self.p), self.p)

    def __add__(self, other):
        self._same_shape(other)
        return Matrix(self.a + other.a, self.p)

    def __sub__(self, other):
        self._same_shape(other)
        return Matrix(self.a - other.a, self.p)

    def __neg__(self):
        return Matrix(-self.a, self.p)

    def scale(self, c):
        return Matrix(self.a * (int(c) % self.p), self.p)

    def _same_shape(self, other):
        if not isinstance(other, Matrix) or self.p != other.p:
            raise ValueError("incompatible operand")
        if self.a.shape != other.a.shape:
            raise ValueError("shape mismatch")

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.p == other.p
            and self.a.shape == other.a.shape
            and bool(np.array_equal(self.a, other.a))
        )

    __hash__ = None

    def take_cols(self, idx):
        return Matrix(self.a[:, list(idx)], self.p)

    def take_rows(self, idx):
        return Matrix(self.a[list(idx), :], self.p)

    def col(self, j):
        return Matrix(self.a[:, j : j + 1], self.p)

    def __repr__(self):
        return f"Matrix({self.a.tolist()}, p={self.p})"


def _matmul_exact(a, b, p):
    inner = a.shape[1]
    # int64 products stay exact while inner*(p-1)^2 < 2^63
    if inner == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    if (p - 1) * (p - 1) <= (2**63 - 1) // inner:
        return (a @ b) % p
    prod = a.astype(object) @ b.astype(object)
    return (prod % p).astype(np.int64)


def hstack(mats, rows=None, p=None):
    mats = list(mats)
    if not mats:
        if rows is None or p is None:
            raise ValueError("empty hstack needs explicit rows and p")
        return Matrix.zeros(rows, 0, p)
    p = mats[0].p
    return Matrix(np.concatenate([m.a for m in mats], axis=1), p)


def vstack(mats, cols=None, p=None):
    mats = list(mats)
    if not mats:
        if cols is None or p is None:
            raise ValueError("empty vstack needs explicit cols and p")
        return Matrix.zeros(0, cols, p)
    p = mats[0].p
    return Matrix(np.concatenate([m.a for m in mats], axis=0), p)


def kron(a, b):
    if a.p != b.p:
        raise ValueError("modulus mismatch")
    if a.a.size == 0 or b.a.size == 0:
        return Matrix.zeros(a.rows * b.rows, a.cols * b.cols, a.p)
    prod = np.kron(a.a.astype(object), b.a.astype(object))
    return Matrix((prod % a.p).astype(np.int64), a.p)


def rref(m):
    """Reduced row echelon form. Returns (Matrix, pivot column tuple).

    Deterministic: columns scanned left to right, first nonzero row at or
    below the current row becomes the pivot.
    """
    p = m.p
    a = m.a.astype(np.int64).copy()
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = (a[r] * inv) % p
        mask = np.nonzero(a[:, c])[0]
        for j in mask:
            if j != r:
                a[j] = (a[j] - a[j, c] * a[r]) % p
        pivots.append(c)
        r += 1
    return Matrix(a, p), tuple(pivots)


def rank(m):
    return len(rref(m)[1])


def kernel_basis(m):
    """Basis of ker(m) as columns, one per free column of the RREF.

    The basis column for free column f has a 1 in slot f and back-substituted
    pivot entries above; columns ordered by ascending free-column index.
    """
    r, pivots = rref(m)
    p = m.p
    free = [c for c in range(m.cols) if c not in set(pivots)]
    k = np.zeros((m.cols, len(free)), dtype=np.int64)
    for out, f in enumerate(free):
        k[f, out] = 1
        for i, c in enumerate(pivots):
            k[c, out] = (-r.a[i, f]) % p
    return Matrix(k, p)


def solve(m, b):
    """Particular solution X of m @ X = b with free variables set to 0."""
    if m.p != b.p:
        raise ValueError("modulus mismatch")
    if m.rows != b.rows:
        raise ValueError("row mismatch")
    aug = hstack([m, b])
    r, pivots = rref(aug)
    for c in pivots:
        if c >= m.cols:
            raise NoSolution(f"inconsistent system (pivot in column {c})")
    x = np.zeros((m.cols, b.cols), dtype=np.int64)
    for i, c in enumerate(pivots):
        x[c, :] = r.a[i, m.cols :]
    return Matrix(x, m.p)


def homology_dims(dims, diffs, p):
    """Homology dimensions of the chain complex C_0 <- C_1 <- ... <- C_k.

    dims lists the space dimensions d_0..d_k; diffs[i] is the boundary map
    C_{i+1} -> C_i, a dims[i] x dims[i+1] matrix. Validates consecutive
    composites vanish before trusting rank arithmetic.
    """
    p = _check_p(p)
    dims = [int(d) for d in dims]
    if not dims:
        raise ComplexInvalid("complex needs at least one space")
    if any(d < 0 for d in dims):
        raise ComplexInvalid("negative dimension")
    if len(diffs) != len(dims) - 1:
        raise ComplexInvalid(
            f"{len(dims)} spaces need {len(dims) - 1} differentials, got {len(diffs)}"
        )
    for i, d in enumerate(diffs):
        if d.p != p:
            raise ComplexInvalid("modulus mismatch in complex")
        if d.rows != dims[i] or d.cols != dims[i + 1]:
            raise ComplexInvalid(
                f"differential {i + 1} has shape {d.rows}x{d.cols}, "
                f"expected {dims[i]}x{dims[i + 1]}"
            )
    for i in range(len(diffs) - 1):
        if not (diffs[i] @ diffs[i + 1]).is_zero():
            raise ComplexInvalid(f"composite of differentials {i + 1},{i + 2} nonzero")
    ranks = [rank(d) for d in diffs]
    out = []
    for d in range(len(dims)):
        ker = dims[d] - (ranks[d - 1] if d >= 1 else 0)
        img = ranks[d] if d < len(ranks) else 0
        out.append(ker - img)
    return out
