"""Deterministic per-link key streams.

Stream bits are SHA-256 in counter mode: block ``i`` of link ``L`` under seed
``S`` is ``sha256(f"{S}|{L}|{i}".encode())``, read most-significant bit first.
The expansion is fixed so golden values are portable.
"""

from __future__ import annotations

import hashlib
import random


def key_stream(seed: int, link_id: str, nbits: int) -> list[int]:
    bits: list[int] = []
    block = 0
    while len(bits) < nbits:
        digest = hashlib.sha256(f"{seed}|{link_id}|{block}".encode()).digest()
        for byte in digest:
            for shift in range(7, -1, -1):
                bits.append((byte >> shift) & 1)
        block += 1
    return bits[:nbits]


def derived_rng(seed: int, label: str) -> random.Random:
    """Independent RNG for one named consumer (e.g. one dealer) of a run."""
    digest = hashlib.sha256(f"{seed}|rng|{label}".encode()).digest()
    return random.Random(int.from_bytes(digest, "big"))


def digest_bits(bits: list[int]) -> str:
    return hashlib.sha256(bytes(bits)).hexdigest()
