"""Exact sparse recovery over a prime field.

A vector ``x`` over ``F_p^n`` is summarized by its first ``2k`` power sums
``S_r = sum_j x_j X_j^r`` where coordinate ``j`` is evaluated at ``X_j = j+1``.
Any ``k``-sparse ``x`` is recovered from these syndromes with Berlekamp-Massey,
a root search over ``1..n`` and a transposed-Vandermonde solve.  Because the
decoder can return a wrong candidate for non-sparse inputs, candidates are
checked against a short random fingerprint ``Phi^R x`` whose matrix entries
are regenerated from a counter-based hash instead of being stored.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, Optional

import numpy as np

from .errors import FieldOverflow

MAX_PRIME_BITS = 62
_MASK64 = (1 << 64) - 1

# deterministic Miller-Rabin witnesses for all n < 3.3e24
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(m: int) -> int:
    m = max(2, m)
    while not is_prime(m):
        m += 1
    return m


@dataclass(frozen=True)
class FieldParams:
    p: int
    n: int

    def __post_init__(self):
        if self.p < self.n:
            raise ValueError("prime must be at least the dimension")


def choose_prime(n: int, c: int = 3) -> FieldParams:
    """Smallest prime ``>= n**c``; below ``2 n**c`` by Bertrand's postulate."""
    if n < 2 or c < 1:
        raise ValueError("need n >= 2 and c >= 1")
    target = n ** c
    if target.bit_length() > MAX_PRIME_BITS:
        raise FieldOverflow(f"n^c = {n}^{c} does not fit below 2^{MAX_PRIME_BITS}")
    p = next_prime(target)
    if p.bit_length() > MAX_PRIME_BITS:
        raise FieldOverflow(f"prime {p} exceeds 2^{MAX_PRIME_BITS}")
    return FieldParams(p, n)


# ---------------------------------------------------------------------------
# vectorized modular arithmetic

def mulmod(a, b, p: int) -> np.ndarray:
    """Elementwise ``a*b mod p`` for int64 arrays with entries in ``[0, p)``.

    Uses plain int64 products when they cannot overflow, a float64 quotient
    estimate for ``p < 2^50`` and exact Python integers otherwise.
    """
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    amax = int(a.max(initial=0))
    bmax = int(b.max(initial=0))
    if amax * bmax < (1 << 63):
        return (a * b) % p
    if p < (1 << 50):
        q = np.floor(a.astype(np.float64) * b.astype(np.float64) / float(p)).astype(np.int64)
        with np.errstate(over="ignore"):
            r = (a.astype(np.uint64) * b.astype(np.uint64)
                 - q.astype(np.uint64) * np.uint64(p)).view(np.int64)
        return r % p
    shape = np.broadcast(a, b).shape
    ao = np.broadcast_to(a, shape).astype(object)
    bo = np.broadcast_to(b, shape).astype(object)
    return ((ao * bo) % p).astype(np.int64)


def power_table(points, nrows: int, p: int) -> np.ndarray:
    """``out[b, r] = points[b]**r mod p`` for ``r < nrows``."""
    pts = np.asarray(points, dtype=np.int64) % p
    out = np.empty((len(pts), nrows), dtype=np.int64)
    if nrows == 0:
        return out
    acc = np.ones(len(pts), dtype=np.int64)
    small = int(pts.max(initial=0)) * p < (1 << 63)
    for r in range(nrows):
        out[:, r] = acc
        if r + 1 < nrows:
            acc = (acc * pts) % p if small else mulmod(acc, pts, p)
    return out


def encode(support: Dict[int, int], nrows: int, p: int) -> np.ndarray:
    """Syndromes ``sum_j x_j (j+1)^r`` of a sparse vector ``{j: x_j}``."""
    out = np.zeros(nrows, dtype=np.int64)
    if not support or nrows == 0:
        return out
    coords = np.fromiter(support.keys(), dtype=np.int64, count=len(support))
    coeffs = np.fromiter((c % p for c in support.values()), dtype=np.int64, count=len(support))
    table = power_table(coords + 1, nrows, p)
    terms = mulmod(table, coeffs[:, None], p)
    # column sums of at most len(support) values < p; reduce in chunks
    step = max(1, ((1 << 62) // max(p, 1)))
    for start in range(0, len(coords), step):
        out = (out + terms[start:start + step].sum(axis=0)) % p
    return out


# ---------------------------------------------------------------------------
# decoding

def berlekamp_massey(seq, p: int):
    """Shortest LFSR ``C`` (``C[0]=1``) generating ``seq`` over ``F_p``."""
    C = [1]
    B = [1]
    L = 0
    m = 1
    b = 1
    for r, s in enumerate(seq):
        d = s
        for i in range(1, L + 1):
            d = (d + C[i] * seq[r - i]) % p
        if d == 0:
            m += 1
            continue
        coef = d * pow(b, p - 2, p) % p
        T = C[:]
        if len(C) < len(B) + m:
            C = C + [0] * (len(B) + m - len(C))
        for i, bi in enumerate(B):
            C[i + m] = (C[i + m] - coef * bi) % p
        if 2 * L <= r:
            L = r + 1 - L
            B = T
            b = d
            m = 1
        else:
            m += 1
    C = C[:L + 1] + [0] * max(0, L + 1 - len(C))
    return C, L


def _roots_in_range(poly_desc, n: int, p: int, chunk: int = 1 << 16) -> np.ndarray:
    """Points ``x in 1..n`` with ``poly(x) = 0``; coefficients highest first."""
    found = []
    coeffs = [int(c) % p for c in poly_desc]
    for lo in range(1, n + 1, chunk):
        pts = np.arange(lo, min(n, lo + chunk - 1) + 1, dtype=np.int64)
        acc = np.zeros(len(pts), dtype=np.int64)
        small = int(pts[-1]) * p < (1 << 63)
        for c in coeffs:
            if small:
                acc *= pts
            else:
                acc = mulmod(acc, pts, p)
            acc += c
            acc %= p
        found.append(pts[acc == 0])
    return np.concatenate(found) if found else np.zeros(0, dtype=np.int64)


def decode_syndromes(synd, n: int, p: int) -> Optional[Dict[int, int]]:
    """Recover ``{coordinate: coefficient}`` from ``2k`` syndromes, or ``None``.

    Exact whenever the underlying vector has at most ``k`` non-zeros.
    """
    S = [int(s) % p for s in synd]
    if not any(S):
        return {}
    k = len(S) // 2
    C, L = berlekamp_massey(S, p)
    if L == 0 or L > k:
        return None
    # C(z) = prod (1 - X_j z); reversed polynomial has the X_j as roots
    rev = C[:L + 1]  # rev as highest-first list equals x^L C(1/x)
    if rev[L] == 0:
        return None  # X_j = 0 is not a valid evaluation point
    roots = _roots_in_range(rev, n, p)
    if len(roots) != L:
        return None
    # Forney: x_j = -X_j * Omega(1/X_j) / Lambda'(1/X_j), Omega = S*Lambda mod z^L
    lam = np.array(C[:L + 1], dtype=np.int64)
    syn = np.array(S[:L], dtype=np.int64)
    prod = mulmod(syn[:, None], lam[None, :L], p)
    omega = _antidiagonal_sums(prod, L, p)
    dlam = mulmod(lam[1:], np.arange(1, L + 1, dtype=np.int64) % p, p)
    inv = np.array([pow(int(x), p - 2, p) for x in roots], dtype=np.int64)
    num = _horner(omega, inv, p)
    den = _horner(dlam, inv, p)
    if np.any(den == 0):
        return None
    den_inv = np.array([pow(int(d), p - 2, p) for d in den], dtype=np.int64)
    vals = mulmod(mulmod(num, den_inv, p), roots % p, p)
    vals = (p - vals) % p
    if np.any(vals == 0):
        return None
    return {int(x) - 1: int(v) for x, v in zip(roots, vals)}


def _antidiagonal_sums(prod: np.ndarray, L: int, p: int) -> np.ndarray:
    """``out[i] = sum_{a+b=i} prod[a, b] mod p`` for ``i < L``."""
    out = np.zeros(L, dtype=np.int64)
    flipped = prod[:, ::-1]
    for i in range(L):
        # entries with a + b = i sit on the (L-1-i)-th diagonal of the flip
        d = np.diagonal(flipped, offset=L - 1 - i)
        out[i] = int(d.astype(object).sum()) % p if p * len(d) >= (1 << 63) else int(d.sum()) % p
    return out


def _horner(coeffs_asc: np.ndarray, pts: np.ndarray, p: int) -> np.ndarray:
    acc = np.zeros(len(pts), dtype=np.int64)
    for c in coeffs_asc[::-1]:
        acc = (mulmod(acc, pts, p) + int(c)) % p
    return acc


def signed(coeff: int, p: int) -> int:
    """Map a field element to a small signed integer when it is one."""
    return coeff - p if coeff > p // 2 else coeff


# ---------------------------------------------------------------------------
# sketches

class VandermondeSketch:
    """``2k`` syndromes of an implicitly accumulated vector."""

    def __init__(self, k: int, params: FieldParams):
        self.k = int(k)
        self.params = params
        self.rows = np.zeros(2 * self.k, dtype=np.int64)

    def add(self, j: int, coeff: int = 1) -> None:
        sketch_add(self, j, coeff)

    def decode(self):
        return decode_sparse(self)


def sketch_add(s: VandermondeSketch, j: int, coeff: int = 1) -> None:
    p = s.params.p
    if not 0 <= j < s.params.n:
        raise IndexError(f"coordinate {j} outside [0, {s.params.n})")
    # one column: plain integer powers beat a one-row numpy table
    vals, acc, base = [], coeff % p, j + 1
    for _ in range(len(s.rows)):
        vals.append(acc)
        acc = acc * base % p
    s.rows = (s.rows + np.array(vals, dtype=np.int64)) % p


def decode_sparse(s: VandermondeSketch):
    """Decoded sparse vector as ``{coordinate: signed coefficient}`` or ``None``."""
    res = decode_syndromes(s.rows, s.params.n, s.params.p)
    if res is None:
        return None
    return {j: signed(c, s.params.p) for j, c in sorted(res.items())}


def _splitmix64(x: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        z = x + np.uint64(0x9E3779B97F4A7C15)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        return z ^ (z >> np.uint64(31))


def random_matrix_entries(seed: int, rows, cols, p: int) -> np.ndarray:
    """Entries ``Phi^R[row, col]``, regenerated deterministically from ``seed``.

    ``rows`` and ``cols`` broadcast against each other.
    """
    r = np.asarray(rows, dtype=np.uint64)
    c = np.asarray(cols, dtype=np.uint64)
    base = _splitmix64(np.asarray([seed & _MASK64], dtype=np.uint64))[0]
    with np.errstate(over="ignore"):
        key = _splitmix64(base ^ _splitmix64(r * np.uint64(0x100000001B3) + np.uint64(1)))
        h = _splitmix64(key ^ c)
    # unbiased enough: 64-bit hash reduced mod p < 2^62 has bias < 2^-2
    # which is irrelevant for a p^-t bound at the sizes used; keep it simple
    return (h % np.uint64(p)).astype(np.int64)


def fingerprint_columns(seed: int, t: int, coords, p: int) -> np.ndarray:
    """Matrix of shape ``(len(coords), t)`` holding the ``Phi^R`` columns."""
    coords = np.asarray(coords, dtype=np.int64)
    return random_matrix_entries(seed, np.arange(t)[None, :], coords[:, None], p)


class FingerprintSketch:
    """``t`` random linear measurements with a regenerable matrix."""

    def __init__(self, t: int, params: FieldParams, matrix_seed: int):
        self.t = int(t)
        self.params = params
        self.matrix_seed = int(matrix_seed)
        self.rows = np.zeros(self.t, dtype=np.int64)

    def add(self, j: int, coeff: int = 1) -> None:
        p = self.params.p
        col = fingerprint_columns(self.matrix_seed, self.t, [j], p)[0]
        self.rows = (self.rows + mulmod(col, np.full_like(col, coeff % p), p)) % p

    def measure(self, support: Dict[int, int]) -> np.ndarray:
        return fingerprint_of(self.matrix_seed, self.t, support, self.params.p)


def fingerprint_of(seed: int, t: int, support: Dict[int, int], p: int) -> np.ndarray:
    out = np.zeros(t, dtype=np.int64)
    if not support:
        return out
    coords = list(support.keys())
    cols = fingerprint_columns(seed, t, coords, p)
    coeffs = np.array([c % p for c in support.values()], dtype=np.int64)
    terms = mulmod(cols, coeffs[:, None], p)
    for row in terms:
        out = (out + row) % p
    return out


def verify_fingerprint(f: FingerprintSketch, candidate: Dict[int, int]) -> bool:
    return bool(np.array_equal(f.measure(candidate), f.rows))


def sparse_from_pairs(pairs: Iterable) -> Dict[int, int]:
    out: Dict[int, int] = {}
    for j, c in pairs:
        out[int(j)] = out.get(int(j), 0) + int(c)
    return {j: c for j, c in out.items() if c != 0}
