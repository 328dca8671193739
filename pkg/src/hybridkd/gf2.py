"""Incremental GF(2) row spaces with rows packed into Python ints."""

from __future__ import annotations

from typing import Iterable


class Gf2Span:
    """Echelon basis keyed by leading bit. ``contains`` is a membership test."""

    __slots__ = ("basis",)

    def __init__(self, rows: Iterable[int] = ()):
        self.basis: dict[int, int] = {}
        for r in rows:
            self.add(r)

    def reduce(self, x: int) -> int:
        basis = self.basis
        while x:
            row = basis.get(x.bit_length() - 1)
            if row is None:
                return x
            x ^= row
        return 0

    def add(self, x: int) -> bool:
        x = self.reduce(x)
        if x:
            self.basis[x.bit_length() - 1] = x
            return True
        return False

    def contains(self, x: int) -> bool:
        return self.reduce(x) == 0

    def copy(self) -> Gf2Span:
        out = Gf2Span()
        out.basis = dict(self.basis)
        return out

    def __len__(self) -> int:
        return len(self.basis)


def parity(x: int) -> int:
    return bin(x).count("1") & 1


def evaluate(form: int, values: int) -> int:
    """Value of the linear form ``form`` under the assignment bitmask ``values``."""
    return parity(form & values)


def bit_indices(x: int) -> list[int]:
    out = []
    while x:
        low = x & -x
        out.append(low.bit_length() - 1)
        x ^= low
    return out
