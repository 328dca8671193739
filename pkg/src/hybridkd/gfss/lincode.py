"""Secret sharing from an [n, k; q] linear code.

Coordinate 0 of a codeword ``f = u G`` carries the secret, coordinates
1..n-1 are the shares. Since every row ``v`` of the parity-check space
satisfies ``v . f = 0``, a vector ``v`` with ``v_0 = 1`` supported on a share
set ``S`` gives ``m = -sum_{j in S} v_j f_j``. A share set determines the
secret exactly when such a vector exists.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from ..vulnset import minimize
from .field import PrimeField, mat_mul, nullspace, rank, row_space, solve, transpose, vec_mat

MAX_ROWSPACE = 1_000_000


class CodeError(ValueError):
    pass


@dataclass(frozen=True)
class LinearCode:
    field: PrimeField
    G: tuple[tuple[int, ...], ...]
    H: tuple[tuple[int, ...], ...]
    d: int | None = None

    def __post_init__(self):
        if not self.G or not self.H:
            raise CodeError("G and H must be non-empty")
        widths = {len(r) for r in self.G} | {len(r) for r in self.H}
        if len(widths) != 1:
            raise CodeError(f"all rows of G and H must have the same length, got {sorted(widths)}")

    @classmethod
    def from_lists(cls, q: int, G: Sequence[Sequence[int]], H: Sequence[Sequence[int]], d: int | None = None):
        fld = PrimeField(q)
        return cls(fld, tuple(tuple(x % q for x in r) for r in G), tuple(tuple(x % q for x in r) for r in H), d)

    @classmethod
    def from_generator(cls, q: int, G: Sequence[Sequence[int]]) -> LinearCode:
        """Build the code with H spanning the null space of G."""
        H = nullspace(G, q)
        if not H:
            raise CodeError("G has full column rank; the dual code is trivial")
        return cls.from_lists(q, G, H)

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def n(self) -> int:
        return len(self.G[0])

    @property
    def k(self) -> int:
        return len(self.G)

    def column(self, mat, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in mat)

    def to_json(self) -> dict:
        return {"q": self.q, "G": [list(r) for r in self.G], "H": [list(r) for r in self.H]}


def lc_validate(code: LinearCode) -> bool:
    q = code.q
    if rank(code.G, q) != code.k:
        raise CodeError(f"G has rank {rank(code.G, q)}, expected k={code.k}")
    if len(code.H) != code.n - code.k or rank(code.H, q) != code.n - code.k:
        raise CodeError(f"H must have n-k={code.n - code.k} independent rows")
    prod = mat_mul(code.H, transpose(code.G), q)
    if any(any(row) for row in prod):
        raise CodeError("H G^T != 0: H is not a parity-check matrix for G")
    return True


@dataclass(frozen=True)
class LcDeal:
    u: tuple[int, ...]
    codeword: tuple[int, ...]

    @property
    def secret(self) -> int:
        return self.codeword[0]

    @property
    def shares(self) -> tuple[int, ...]:
        return self.codeword[1:]


def codeword(code: LinearCode, u: Sequence[int]) -> tuple[int, ...]:
    if len(u) != code.k:
        raise CodeError(f"information vector needs {code.k} entries")
    return tuple(vec_mat(u, code.G, code.q))


def lc_deal(code: LinearCode, m: int, rng: random.Random | int) -> LcDeal:
    """Pick ``u`` uniformly among the q**(k-1) vectors with ``u . g_0 = m``."""
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    q = code.q
    g0 = code.column(code.G, 0)
    pivot = next((i for i, x in enumerate(g0) if x), None)
    if pivot is None:
        raise CodeError("column g_0 is zero, the secret cannot be embedded")
    u = [rng.randrange(q) for _ in range(code.k)]
    rest = sum(u[i] * g0[i] for i in range(code.k) if i != pivot)
    u[pivot] = (m - rest) * pow(g0[pivot], q - 2, q) % q
    return LcDeal(tuple(u), codeword(code, u))


def lc_recovery_vector(code: LinearCode, participants: Iterable[int]) -> list[int] | None:
    """A parity-space vector with v_0 = 1 supported on {0} + participants, or None."""
    S = set(participants)
    if any(not 1 <= j < code.n for j in S):
        raise CodeError(f"participants must be share indices in [1, {code.n - 1}]")
    constrained = [0] + [j for j in range(1, code.n) if j not in S]
    a = [list(code.column(code.H, j)) for j in constrained]
    b = [1] + [0] * (len(constrained) - 1)
    y = solve(a, b, code.q)
    if y is None:
        return None
    return vec_mat(y, code.H, code.q)


def lc_recover(code: LinearCode, shares: Mapping[int, int]) -> int | None:
    """Secret from a ``{share index: value}`` map, or None if the set is not qualified."""
    v = lc_recovery_vector(code, shares)
    if v is None:
        return None
    return -sum(v[j] * f for j, f in shares.items()) % code.q


@dataclass(frozen=True)
class AccessReport:
    minimal_sets: frozenset
    dictatorial: tuple[int, ...]

    def sorted_sets(self) -> list[tuple[int, ...]]:
        return sorted(tuple(sorted(s)) for s in self.minimal_sets)


def dictatorial_indices(code: LinearCode) -> tuple[int, ...]:
    q = code.q
    h0 = code.column(code.H, 0)
    if not any(h0):
        return ()
    out = []
    for i in range(1, code.n):
        hi = code.column(code.H, i)
        if any(hi) and rank([h0, hi], q) == 1:
            out.append(i)
    return tuple(out)


def lc_minimal_access(code: LinearCode) -> AccessReport:
    q = code.q
    if q ** len(code.H) > MAX_ROWSPACE:
        raise CodeError(f"row space of size {q ** len(code.H)} is too large to enumerate")
    supports = set()
    for v in row_space(code.H, q):
        if v[0]:
            s = frozenset(j for j in range(1, code.n) if v[j])
            if not s:
                raise CodeError("secret coordinate is forced to zero; g_0 is not usable")
            supports.add(s)
    return AccessReport(minimize(supports), dictatorial_indices(code))


def access_sets_for_children(code: LinearCode) -> frozenset:
    """Minimal access sets re-indexed so share j belongs to child j - 1."""
    return frozenset(frozenset(j - 1 for j in s) for s in lc_minimal_access(code).minimal_sets)


_REALISED: dict = {}


def find_code_for_access(sets, n_children: int, attempts: int = 300) -> LinearCode:
    """Search small random codes for one whose minimal access sets are ``sets``.

    ``sets`` index children from 0, so child ``i`` holds share ``i + 1``. Only
    ideal access structures have such a code; the search gives up otherwise.
    """
    target = frozenset(frozenset(s) for s in sets)
    key = (target, n_children)
    if key in _REALISED:
        return _REALISED[key]
    rng = random.Random(0)
    n = n_children + 1
    for q in (2, 3, 5, 7):
        for k in range(1, n):
            if q ** (n - k) > 20_000:
                continue
            for _ in range(attempts):
                G = [[rng.randrange(q) for _ in range(n)] for _ in range(k)]
                if not any(row[0] for row in G) or rank(G, q) != k:
                    continue
                try:
                    code = LinearCode.from_generator(q, G)
                    found = access_sets_for_children(code)
                except CodeError:
                    continue
                if found == target:
                    _REALISED[key] = code
                    return code
    raise CodeError(f"no small linear code realises access structure {sorted(map(sorted, target))}")
