"""Win tables and their on-disk cache format.

File layout (little-endian)::

    magic "GPWT" | u16 version | u16 n | u16 k | u8 c | u8 symmetry |
    u8 has_distance | u8 reserved | u64 S |
    bit array (ceil(S/8) bytes, bit i of byte j is state 8j+i) |
    u16 distance[S] (if has_distance) |
    32-byte SHA-256 of everything above
"""

from __future__ import annotations

import enum
import hashlib
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..errors import GPPursuitError
from ..game import GameState
from ..graph import GPGraph, make_graph, reflect_id, rotate_id
from ..ranking import multiset_count, rank

MAGIC = b"GPWT"
VERSION = 1
_HEADER = struct.Struct("<4sHHHBBBBQ")


class Symmetry(enum.IntEnum):
    NONE = 0
    DIHEDRAL = 1


class CacheError(GPPursuitError):
    """Cache file is unreadable, corrupt or for other parameters."""


def orbit(g: GPGraph, s: GameState):
    """All images of ``s`` under the 2n rotations and reflected rotations."""
    n = g.n
    for flip in (False, True):
        for t in range(n):
            def f(v):
                return rotate_id(reflect_id(v, n) if flip else v, t, n)

            yield GameState(tuple(f(c) for c in s.cops), f(s.robber), s.to_move)


def _key(s: GameState):
    return (s.robber, s.cops, s.to_move)


def canonicalize(g: GPGraph, s: GameState) -> GameState:
    """Least state of the dihedral orbit, ordered by (robber, cops, turn).

    The least robber is a_0 or b_0, so this equals rotating the robber to
    index 0 and then taking the smaller of the cop tuple and its reflection.
    """
    return min(orbit(g, s), key=_key)


def reduced_cops(s: GameState, n: int) -> tuple[int, ...]:
    """Cop tuple of ``canonicalize(s)`` without walking the whole orbit."""
    t = s.robber % n
    cops = tuple(sorted(rotate_id(c, -t, n) for c in s.cops))
    return min(cops, tuple(sorted(reflect_id(c, n) for c in cops)))


@dataclass(eq=False)
class WinTable:
    n: int
    k: int
    c: int
    symmetry: Symmetry
    bits: np.ndarray  # packed, little bit order
    distance: np.ndarray | None
    stats: dict = field(default_factory=dict)
    _win: np.ndarray | None = field(default=None, repr=False)
    _graph: GPGraph | None = field(default=None, repr=False)

    @property
    def graph(self) -> GPGraph:
        if self._graph is None:
            self._graph = make_graph(self.n, self.k)
        return self._graph

    @property
    def slots_per_multiset(self) -> int:
        return 2 if self.symmetry else 2 * self.n

    @property
    def size(self) -> int:
        return multiset_count(2 * self.n, self.c) * self.slots_per_multiset * 2

    @property
    def win(self) -> np.ndarray:
        if self._win is None:
            self._win = np.unpackbits(self.bits, count=self.size, bitorder="little")
        return self._win

    def index(self, s: GameState) -> int:
        if len(s.cops) != self.c:
            raise GPPursuitError(f"table is for {self.c} cops, state has {len(s.cops)}")
        R = self.slots_per_multiset
        if self.symmetry:
            cops = reduced_cops(s, self.n)
            rs = 1 if s.robber >= self.n else 0
        else:
            cops, rs = s.cops, s.robber
        return (rank(cops) * R + rs) * 2 + int(s.to_move)

    def copwin(self, s: GameState) -> bool:
        i = self.index(s)
        return bool((self.bits[i >> 3] >> (i & 7)) & 1)

    def capture_distance(self, s: GameState) -> int | None:
        if self.distance is None:
            return None
        d = int(self.distance[self.index(s)])
        return None if d == 0xFFFF else d

    def checksum(self) -> str:
        h = hashlib.sha256(self.bits.tobytes())
        if self.distance is not None:
            h.update(self.distance.astype("<u2").tobytes())
        return h.hexdigest()

    # -- cache file -------------------------------------------------------

    def to_bytes(self) -> bytes:
        head = _HEADER.pack(
            MAGIC, VERSION, self.n, self.k, self.c, int(self.symmetry),
            int(self.distance is not None), 0, self.size,
        )
        body = head + self.bits.tobytes()
        if self.distance is not None:
            body += self.distance.astype("<u2").tobytes()
        return body + hashlib.sha256(body).digest()

    @classmethod
    def from_bytes(cls, data: bytes) -> "WinTable":
        if len(data) < _HEADER.size + 32:
            raise CacheError("truncated table file")
        body, digest = data[:-32], data[-32:]
        if hashlib.sha256(body).digest() != digest:
            raise CacheError("checksum mismatch")
        magic, version, n, k, c, sym, has_d, _, size = _HEADER.unpack_from(body)
        if magic != MAGIC or version != VERSION:
            raise CacheError("not a GPWT v1 file")
        nbytes = (size + 7) // 8
        off = _HEADER.size
        bits = np.frombuffer(body, dtype=np.uint8, count=nbytes, offset=off).copy()
        dist = None
        if has_d:
            dist = np.frombuffer(body, dtype="<u2", count=size, offset=off + nbytes).astype(np.uint16)
        t = cls(n, k, c, Symmetry(sym), bits, dist)
        if t.size != size:
            raise CacheError("state count does not match header parameters")
        return t

    def save(self, path: Path) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_bytes(self.to_bytes())
        tmp.replace(path)

    @classmethod
    def load(cls, path: Path) -> "WinTable":
        return cls.from_bytes(Path(path).read_bytes())


def cache_path(cache_dir: Path, n: int, k: int, c: int, symmetry: Symmetry) -> Path:
    return Path(cache_dir) / f"gp_{n}_{k}_c{c}_{symmetry.name.lower()}.gpwt"
