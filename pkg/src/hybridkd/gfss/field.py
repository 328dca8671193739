"""Prime-field arithmetic and small dense linear algebra over GF(q)."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterator, Sequence

MAX_MODULUS = 2**31

Matrix = list[list[int]]


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for every n < 3.3e24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for p in small:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(n: int) -> int:
    """Smallest prime strictly greater than ``n``."""
    c = n + 1
    while not is_prime(c):
        c += 1
    return c


@dataclass(frozen=True)
class PrimeField:
    q: int

    def __post_init__(self):
        if not isinstance(self.q, int) or not 2 <= self.q <= MAX_MODULUS or not is_prime(self.q):
            raise ValueError(f"field modulus must be a prime in [2, 2^31], got {self.q!r}")

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.q

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.q

    def neg(self, a: int) -> int:
        return -a % self.q

    def mul(self, a: int, b: int) -> int:
        return a * b % self.q

    def inv(self, a: int) -> int:
        if a % self.q == 0:
            raise ZeroDivisionError("zero has no inverse")
        return pow(a, self.q - 2, self.q)

    def pow(self, a: int, e: int) -> int:
        return pow(a, e, self.q)

    def div(self, a: int, b: int) -> int:
        return a * self.inv(b) % self.q

    @property
    def bit_width(self) -> int:
        """Bits in one rejection-sampling window: ceil(log2 q)."""
        return (self.q - 1).bit_length()

    def elements(self) -> range:
        return range(self.q)


def field_arith(q: int, op: str, *operands: int) -> int:
    """Dispatch helper: ``field_arith(5, "add", 2, 4) == 1``."""
    f = PrimeField(q)
    for x in operands[:1] if op == "pow" else operands:
        if not 0 <= x < q:
            raise ValueError(f"operand {x} not in [0, {q})")
    return getattr(f, op)(*operands)


# -- matrices ------------------------------------------------------------------


def rref(rows: Sequence[Sequence[int]], q: int) -> tuple[Matrix, list[int]]:
    """Reduced row-echelon form and pivot columns. Zero rows are dropped."""
    m = [[x % q for x in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], q - 2, q)
        m[r] = [x * inv % q for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                k = m[i][c]
                m[i] = [(a - k * b) % q for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence[int]], q: int) -> int:
    return len(rref(rows, q)[1])


def mat_mul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], q: int) -> Matrix:
    cols = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) % q for col in cols] for row in a]


def transpose(a: Sequence[Sequence[int]]) -> Matrix:
    return [list(c) for c in zip(*a)]


def vec_mat(v: Sequence[int], a: Sequence[Sequence[int]], q: int) -> list[int]:
    return [sum(x * row[j] for x, row in zip(v, a)) % q for j in range(len(a[0]))]


def nullspace(rows: Sequence[Sequence[int]], q: int, ncols: int | None = None) -> Matrix:
    """Basis of ``{x : rows @ x = 0}`` as a list of row vectors."""
    ncols = len(rows[0]) if rows else ncols
    red, pivots = rref(rows, q)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        x = [0] * ncols
        x[fcol] = 1
        for r, pc in enumerate(pivots):
            x[pc] = -red[r][fcol] % q
        basis.append(x)
    return basis


def solve(a: Sequence[Sequence[int]], b: Sequence[int], q: int) -> list[int] | None:
    """One solution of ``a @ x = b`` over GF(q), or None if inconsistent."""
    if not a:
        return None if any(x % q for x in b) else []
    ncols = len(a[0])
    aug = [list(row) + [rhs] for row, rhs in zip(a, b)]
    red, pivots = rref(aug, q)
    if ncols in pivots:
        return None
    x = [0] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = red[r][ncols]
    return x


def row_space(rows: Sequence[Sequence[int]], q: int) -> Iterator[list[int]]:
    """Every vector in the span of ``rows`` (q**rank of them)."""
    basis, _ = rref(rows, q)
    if not basis:
        return
    n = len(basis[0])
    for coeffs in product(range(q), repeat=len(basis)):
        v = [0] * n
        for c, row in zip(coeffs, basis):
            if c:
                for j, x in enumerate(row):
                    v[j] = (v[j] + c * x) % q
        yield v
