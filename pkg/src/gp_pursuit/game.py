"""Rules of cops and robbers: states, legal moves, capture and trapping."""

from __future__ import annotations

import enum
import itertools
import json
from dataclasses import dataclass
from typing import Iterator

from .errors import ParamError, TurnError
from .graph import GPGraph, parse_vertex, require_family, vertex_name

MAX_COPS = 4


class Turn(enum.IntEnum):
    COPS = 0
    ROBBER = 1

    @property
    def letter(self) -> str:
        return "C" if self is Turn.COPS else "R"


@dataclass(frozen=True)
class GameState:
    """Cop multiset (sorted ids), robber id and side to move."""

    cops: tuple[int, ...]
    robber: int
    to_move: Turn = Turn.ROBBER

    def __post_init__(self):
        cops = tuple(sorted(int(c) for c in self.cops))
        if not 1 <= len(cops) <= MAX_COPS:
            raise ParamError(f"need 1..{MAX_COPS} cops, got {len(cops)}")
        object.__setattr__(self, "cops", cops)
        object.__setattr__(self, "robber", int(self.robber))
        object.__setattr__(self, "to_move", Turn(self.to_move))

    def with_turn(self, turn: Turn) -> "GameState":
        return GameState(self.cops, self.robber, turn)

    def to_text(self, n: int) -> str:
        cops = ",".join(vertex_name(c, n) for c in self.cops)
        return f"cops={cops} robber={vertex_name(self.robber, n)} turn={self.to_move.letter}"

    def to_json(self, n: int) -> str:
        return json.dumps(
            {
                "cops": [vertex_name(c, n) for c in self.cops],
                "robber": vertex_name(self.robber, n),
                "turn": self.to_move.letter,
            }
        )

    @classmethod
    def from_text(cls, text: str, n: int) -> "GameState":
        fields = dict(part.split("=", 1) for part in text.split())
        try:
            cops = tuple(parse_vertex(c, n) for c in fields["cops"].split(","))
            robber = parse_vertex(fields["robber"], n)
            turn = {"C": Turn.COPS, "R": Turn.ROBBER}[fields.get("turn", "R")]
        except KeyError as exc:
            raise ParamError(f"malformed state text {text!r}") from exc
        return cls(cops, robber, turn)

    @classmethod
    def from_json(cls, text: str, n: int) -> "GameState":
        obj = json.loads(text)
        turn = {"C": Turn.COPS, "R": Turn.ROBBER}[obj.get("turn", "R")]
        return cls(tuple(parse_vertex(c, n) for c in obj["cops"]), parse_vertex(obj["robber"], n), turn)


def robber_moves(g: GPGraph, s: GameState) -> list[int]:
    """Pass first, then the three neighbours in adjacency order."""
    if s.to_move is not Turn.ROBBER:
        raise TurnError("robber moves requested on the cops' turn")
    return [int(v) for v in g.closed[s.robber]]


def cop_moves(g: GPGraph, s: GameState) -> Iterator[tuple[int, ...]]:
    """Distinct sorted cop multisets reachable in one cop turn."""
    if s.to_move is not Turn.COPS:
        raise TurnError("cop moves requested on the robber's turn")
    seen = set()
    for combo in itertools.product(*(g.closed[c] for c in s.cops)):
        key = tuple(sorted(int(x) for x in combo))
        if key not in seen:
            seen.add(key)
            yield key


def is_capture(s: GameState) -> bool:
    return s.robber in s.cops


def covers(g: GPGraph, cop: int, v: int) -> bool:
    """Cop on ``v`` or adjacent to it."""
    return cop == v or g.adjacent(cop, v)


def is_trapped(g: GPGraph, s: GameState) -> bool:
    nbrs = g.adj[s.robber]
    if all(any(covers(g, c, int(v)) for c in s.cops) for v in nbrs):
        return True
    if s.to_move is Turn.COPS:
        return any(g.adjacent(c, s.robber) for c in s.cops)
    return False


@dataclass(frozen=True)
class Branch:
    """``members[0]`` is the anchor, ``members[1]`` the gate, then the two
    depth-3 vertices and the four depth-4 vertices (measured from the robber)."""

    anchor: int
    gate: int
    members: tuple[int, ...]


def branch(g: GPGraph, r: int, v: int, gate: int) -> Branch:
    members = [v, gate]
    depth3 = [int(x) for x in g.adj[gate] if x != v]
    members += depth3
    for x in depth3:
        members += [int(y) for y in g.adj[x] if y != gate]
    return Branch(v, gate, tuple(members))


def branches_of(g: GPGraph, r: int, v: int) -> tuple[Branch, Branch]:
    require_family(g)
    if not g.adjacent(r, v):
        raise ParamError(f"{g.name(v)} is not adjacent to {g.name(r)}")
    gates = [int(x) for x in g.adj[v] if x != r]
    return branch(g, r, v, gates[0]), branch(g, r, v, gates[1])


def is_legal_cop_move(g: GPGraph, old, new) -> bool:
    """Whether multiset ``new`` can be reached from ``old`` in one cop turn."""
    old, new = tuple(old), tuple(new)
    if len(old) != len(new):
        return False
    return any(
        all(covers(g, o, p) for o, p in zip(old, perm))
        for perm in set(itertools.permutations(new))
    )
