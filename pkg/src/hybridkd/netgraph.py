"""Network multigraph, protocol trees and the JSON network-description format.

A network is a multigraph of named nodes joined by QKD or KEM links. Each link
is a rated source of symmetric key. A protocol tree says how link keys are
combined into one end-to-end key between two users.

The on-disk format is a JSON object::

    {
      "nodes": ["A", "B", "X"],
      "links": [
        {"id": "q1", "kind": "qkd", "ends": ["A", "X"], "preset": "commercial", "distance_km": 10},
        {"id": "k1", "kind": "kem", "ends": ["X", "B"], "preset": "kyber1024-pc"},
        {"id": "k2", "kind": "kem", "ends": ["A", "B"], "rate_bps": 1000}
      ],
      "protocol": {"op": "xor", "children": [
        {"op": "series", "children": [{"op": "link", "id": "q1"}, {"op": "link", "id": "k1"}], "via": ["X"]},
        {"op": "link", "id": "k2"}
      ]}
    }

Secret-sharing nodes use ``{"op": "ss", "children": [...], "g": 2}`` for the
threshold scheme or ``"access": [[0, 1], [0, 2]]`` for an explicit access
structure over 0-based child indices. Both accept optional extras used only by
the bit-level simulator: ``"q"`` (field size) for thresholds, and ``"code"``
(``{"q", "G", "H"}``) realising an access structure.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Any, Iterator, NamedTuple, Union

if TYPE_CHECKING:
    from .gfss.lincode import LinearCode


class NetworkError(ValueError):
    """Base class for malformed networks and protocol trees."""


class ParseError(NetworkError):
    """The document is not valid JSON or does not follow the schema."""

    def __init__(self, message: str, position: str | None = None):
        self.position = position
        super().__init__(f"{message} (at {position})" if position else message)


class ValidationError(NetworkError):
    """The document parses but violates a graph or tree invariant."""


class LinkKind(str, Enum):
    QKD = "qkd"
    KEM = "kem"


@dataclass(frozen=True)
class ExplicitRate:
    bps: float

    def __post_init__(self):
        if not (self.bps >= 0 and self.bps != float("inf")):
            raise ValidationError(f"explicit rate must be finite and >= 0, got {self.bps}")


@dataclass(frozen=True)
class QkdPreset:
    name: str
    distance_km: float

    def __post_init__(self):
        if not self.distance_km >= 0:
            raise ValidationError(f"distance must be >= 0, got {self.distance_km}")


@dataclass(frozen=True)
class KemPreset:
    name: str


RateSpec = Union[ExplicitRate, QkdPreset, KemPreset]


@dataclass(frozen=True)
class Link:
    id: str
    kind: LinkKind
    ends: tuple[str, str]
    rate_spec: RateSpec

    def __post_init__(self):
        if not self.id:
            raise ValidationError("link id must be non-empty")
        if len(self.ends) != 2 or self.ends[0] == self.ends[1]:
            raise ValidationError(f"link {self.id!r} needs two distinct ends, got {self.ends}")
        if isinstance(self.rate_spec, QkdPreset) and self.kind is not LinkKind.QKD:
            raise ValidationError(f"link {self.id!r}: QKD preset on a {self.kind.value} link")
        if isinstance(self.rate_spec, KemPreset) and self.kind is not LinkKind.KEM:
            raise ValidationError(f"link {self.id!r}: KEM preset on a {self.kind.value} link")


@dataclass(frozen=True)
class NetworkGraph:
    nodes: tuple[str, ...]
    links: tuple[Link, ...]
    _by_id: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        seen: set[str] = set()
        for n in self.nodes:
            if not n:
                raise ValidationError("node id must be non-empty")
            if n in seen:
                raise ValidationError(f"duplicate id {n!r}")
            seen.add(n)
        by_id = {}
        for link in self.links:
            if link.id in seen:
                raise ValidationError(f"duplicate id {link.id!r}")
            seen.add(link.id)
            for end in link.ends:
                if end not in self.nodes:
                    raise ValidationError(f"link {link.id!r} references unknown node {end!r}")
            by_id[link.id] = link
        object.__setattr__(self, "_by_id", by_id)

    def link(self, link_id: str) -> Link:
        try:
            return self._by_id[link_id]
        except KeyError:
            raise ValidationError(f"unknown link id {link_id!r}") from None

    def has_link(self, link_id: str) -> bool:
        return link_id in self._by_id


# -- protocol trees ---------------------------------------------------------


@dataclass(frozen=True)
class Threshold:
    """Shamir-variant threshold scheme: all ``n`` shares needed, ``g`` secret elements out."""

    g: int
    q: int | None = None


@dataclass(frozen=True)
class AccessStructure:
    """Minimal access sets over 0-based child indices, optionally with a realising code."""

    sets: tuple[frozenset[int], ...]
    code: LinearCode | None = field(default=None, compare=False)


Scheme = Union[Threshold, AccessStructure]


@dataclass(frozen=True)
class Leaf:
    link_id: str


@dataclass(frozen=True)
class Bundle:
    children: tuple[ProtocolTree, ...]


@dataclass(frozen=True)
class Series:
    children: tuple[ProtocolTree, ...]
    via: tuple[str, ...]


@dataclass(frozen=True)
class Xor:
    children: tuple[ProtocolTree, ...]


@dataclass(frozen=True)
class SecretShare:
    children: tuple[ProtocolTree, ...]
    scheme: Scheme


ProtocolTree = Union[Leaf, Bundle, Series, Xor, SecretShare]


class Endpoints(NamedTuple):
    a: str
    b: str

    def same_pair(self, other: Endpoints) -> bool:
        return {self.a, self.b} == {other.a, other.b}


def iter_leaves(tree: ProtocolTree) -> Iterator[str]:
    if isinstance(tree, Leaf):
        yield tree.link_id
    else:
        for child in tree.children:
            yield from iter_leaves(child)


def iter_via(tree: ProtocolTree) -> Iterator[str]:
    if isinstance(tree, Leaf):
        return
    if isinstance(tree, Series):
        yield from tree.via
    for child in tree.children:
        yield from iter_via(child)


def elements(tree: ProtocolTree) -> list[str]:
    """Network elements an attacker could target: the tree's links and relay nodes."""
    out = list(dict.fromkeys(iter_leaves(tree)))
    out.extend(n for n in dict.fromkeys(iter_via(tree)) if n not in out)
    return out


def check_scheme(scheme: Scheme, n_children: int) -> None:
    if isinstance(scheme, Threshold):
        if not 1 <= scheme.g < n_children:
            raise ValidationError(f"threshold needs 1 <= g < {n_children}, got g={scheme.g}")
        return
    if not scheme.sets:
        raise ValidationError("access structure is empty")
    for s in scheme.sets:
        if not s:
            raise ValidationError("access set must be non-empty")
        bad = [i for i in s if not 0 <= i < n_children]
        if bad:
            raise ValidationError(f"access set index out of range: {bad}")
    for s in scheme.sets:
        for t in scheme.sets:
            if s < t:
                raise ValidationError(f"access set {sorted(t)} is a superset of {sorted(s)}")
    if len(set(scheme.sets)) != len(scheme.sets):
        raise ValidationError("duplicate access set")


def validate_tree(tree: ProtocolTree, graph: NetworkGraph) -> Endpoints:
    """Check every tree invariant against ``graph`` and return the end-user pair."""
    seen: set[str] = set()
    return _validate(tree, graph, seen)


def _validate(tree: ProtocolTree, graph: NetworkGraph, seen: set[str]) -> Endpoints:
    if isinstance(tree, Leaf):
        link = graph.link(tree.link_id)
        if tree.link_id in seen:
            raise ValidationError(f"link {tree.link_id!r} used more than once")
        seen.add(tree.link_id)
        return Endpoints(*link.ends)

    if not tree.children:
        raise ValidationError(f"{type(tree).__name__} has no children")
    ends = [_validate(c, graph, seen) for c in tree.children]

    if isinstance(tree, Series):
        via = tree.via
        if len(via) != len(ends) - 1:
            raise ValidationError(
                f"series with {len(ends)} children needs {len(ends) - 1} via nodes, got {len(via)}"
            )
        for m in via:
            if m not in graph.nodes:
                raise ValidationError(f"unknown via node {m!r}")
        if not via:
            return ends[0]
        pair0 = {ends[0].a, ends[0].b}
        if via[0] not in pair0:
            raise ValidationError(f"series chain broken: {via[0]!r} is not an end of child 0 {tuple(ends[0])}")
        a = (pair0 - {via[0]}).pop()
        for j in range(1, len(ends) - 1):
            if {ends[j].a, ends[j].b} != {via[j - 1], via[j]}:
                raise ValidationError(
                    f"series chain broken: child {j} {tuple(ends[j])} does not join {via[j - 1]!r} and {via[j]!r}"
                )
        last = {ends[-1].a, ends[-1].b}
        if via[-1] not in last:
            raise ValidationError(f"series chain broken: {via[-1]!r} is not an end of the last child {tuple(ends[-1])}")
        b = (last - {via[-1]}).pop()
        if a == b:
            raise ValidationError(f"series starts and ends at {a!r}")
        return Endpoints(a, b)

    for j, e in enumerate(ends[1:], start=1):
        if not e.same_pair(ends[0]):
            raise ValidationError(
                f"mismatched endpoints in {type(tree).__name__}: child 0 {tuple(ends[0])} vs child {j} {tuple(e)}"
            )
    if isinstance(tree, SecretShare):
        check_scheme(tree.scheme, len(tree.children))
    return ends[0]


# -- JSON format -------------------------------------------------------------


def _expect(obj: Any, typ, path: str, what: str):
    if not isinstance(obj, typ) or (typ is int and isinstance(obj, bool)):
        raise ParseError(f"expected {what}", path)
    return obj


def _str(obj: Any, path: str) -> str:
    s = _expect(obj, str, path, "a string")
    if not s:
        raise ParseError("empty identifier", path)
    return s


def _number(obj: Any, path: str) -> float:
    if isinstance(obj, bool) or not isinstance(obj, (int, float)):
        raise ParseError("expected a number", path)
    return obj


def _parse_link(obj: Any, path: str) -> Link:
    _expect(obj, dict, path, "a link object")
    link_id = _str(obj.get("id"), f"{path}.id")
    kind_raw = obj.get("kind")
    try:
        kind = LinkKind(kind_raw)
    except ValueError:
        raise ParseError(f"link kind must be 'qkd' or 'kem', got {kind_raw!r}", f"{path}.kind") from None
    ends = _expect(obj.get("ends"), list, f"{path}.ends", "a list of two node ids")
    if len(ends) != 2:
        raise ParseError("expected exactly two ends", f"{path}.ends")
    ends_t = (_str(ends[0], f"{path}.ends[0]"), _str(ends[1], f"{path}.ends[1]"))
    has_rate, has_preset = "rate_bps" in obj, "preset" in obj
    if has_rate == has_preset:
        raise ParseError("exactly one of 'rate_bps' or 'preset' is required", path)
    if has_rate:
        spec: RateSpec = ExplicitRate(_number(obj["rate_bps"], f"{path}.rate_bps"))
    elif kind is LinkKind.QKD:
        if "distance_km" not in obj:
            raise ParseError("QKD preset needs 'distance_km'", path)
        spec = QkdPreset(_str(obj["preset"], f"{path}.preset"), _number(obj["distance_km"], f"{path}.distance_km"))
    else:
        spec = KemPreset(_str(obj["preset"], f"{path}.preset"))
    return Link(link_id, kind, ends_t, spec)


def _parse_code(obj: Any, path: str):
    from .gfss.lincode import CodeError, LinearCode, lc_validate

    _expect(obj, dict, path, "a code object")
    try:
        code = LinearCode.from_lists(obj["q"], obj["G"], obj["H"])
        lc_validate(code)
        return code
    except (KeyError, TypeError) as exc:
        raise ParseError(f"bad code description: {exc}", path) from None
    except (CodeError, ValueError) as exc:
        raise ValidationError(f"{path}: {exc}") from None


def _parse_tree(obj: Any, path: str) -> ProtocolTree:
    _expect(obj, dict, path, "a protocol object")
    op = obj.get("op")
    if op == "link":
        return Leaf(_str(obj.get("id"), f"{path}.id"))
    if op not in ("bundle", "xor", "series", "ss"):
        raise ParseError(f"unknown op {op!r}", f"{path}.op")
    raw_children = _expect(obj.get("children"), list, f"{path}.children", "a list of children")
    children = tuple(_parse_tree(c, f"{path}.children[{i}]") for i, c in enumerate(raw_children))
    if op == "bundle":
        return Bundle(children)
    if op == "xor":
        return Xor(children)
    if op == "series":
        via = _expect(obj.get("via", []), list, f"{path}.via", "a list of node ids")
        return Series(children, tuple(_str(v, f"{path}.via[{i}]") for i, v in enumerate(via)))

    if ("g" in obj) == ("access" in obj):
        raise ParseError("secret-sharing node needs exactly one of 'g' or 'access'", path)
    if "g" in obj:
        q = obj.get("q")
        scheme: Scheme = Threshold(
            _expect(obj["g"], int, f"{path}.g", "an integer"),
            None if q is None else _expect(q, int, f"{path}.q", "an integer"),
        )
    else:
        code = _parse_code(obj["code"], f"{path}.code") if "code" in obj else None
        raw_sets = _expect(obj.get("access"), list, f"{path}.access", "a list of index lists")
        sets = []
        for i, s in enumerate(raw_sets):
            _expect(s, list, f"{path}.access[{i}]", "a list of child indices")
            sets.append(frozenset(_expect(x, int, f"{path}.access[{i}]", "integer indices") for x in s))
        scheme = AccessStructure(tuple(sets), code)
    return SecretShare(children, scheme)


def parse_network(text: str) -> tuple[NetworkGraph, ProtocolTree]:
    """Parse and fully validate a network-description document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from None
    _expect(doc, dict, "$", "a JSON object")
    for key in ("nodes", "links", "protocol"):
        if key not in doc:
            raise ParseError(f"missing top-level key {key!r}", "$")
    nodes = tuple(_str(n, f"$.nodes[{i}]") for i, n in enumerate(_expect(doc["nodes"], list, "$.nodes", "a list")))
    links = tuple(
        _parse_link(obj, f"$.links[{i}]") for i, obj in enumerate(_expect(doc["links"], list, "$.links", "a list"))
    )
    graph = NetworkGraph(nodes, links)
    tree = _parse_tree(doc["protocol"], "$.protocol")
    validate_tree(tree, graph)
    _check_codes(tree)
    return graph, tree


def parse_code(text: str):
    """Parse a standalone code file ``{"q": .., "G": [[..]], "H": [[..]]}``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from None
    return _parse_code(doc, "$")


def _check_codes(tree: ProtocolTree) -> None:
    if isinstance(tree, Leaf):
        return
    if isinstance(tree, SecretShare) and isinstance(tree.scheme, AccessStructure) and tree.scheme.code is not None:
        from .gfss.lincode import access_sets_for_children

        code = tree.scheme.code
        if code.n != len(tree.children) + 1:
            raise ValidationError(f"code length {code.n} does not match {len(tree.children)} children plus the secret")
        if set(access_sets_for_children(code)) != set(tree.scheme.sets):
            raise ValidationError("code's minimal access structure differs from the listed 'access' sets")
    for child in tree.children:
        _check_codes(child)


def _link_to_json(link: Link) -> dict:
    out: dict[str, Any] = {"id": link.id, "kind": link.kind.value, "ends": list(link.ends)}
    spec = link.rate_spec
    if isinstance(spec, ExplicitRate):
        out["rate_bps"] = spec.bps
    elif isinstance(spec, QkdPreset):
        out["preset"] = spec.name
        out["distance_km"] = spec.distance_km
    else:
        out["preset"] = spec.name
    return out


def tree_to_json(tree: ProtocolTree) -> dict:
    if isinstance(tree, Leaf):
        return {"op": "link", "id": tree.link_id}
    children = [tree_to_json(c) for c in tree.children]
    if isinstance(tree, Bundle):
        return {"op": "bundle", "children": children}
    if isinstance(tree, Xor):
        return {"op": "xor", "children": children}
    if isinstance(tree, Series):
        return {"op": "series", "children": children, "via": list(tree.via)}
    out: dict[str, Any] = {"op": "ss", "children": children}
    scheme = tree.scheme
    if isinstance(scheme, Threshold):
        out["g"] = scheme.g
        if scheme.q is not None:
            out["q"] = scheme.q
    else:
        out["access"] = [sorted(s) for s in scheme.sets]
        if scheme.code is not None:
            out["code"] = scheme.code.to_json()
    return out


def serialize_network(graph: NetworkGraph, tree: ProtocolTree) -> str:
    doc = {
        "nodes": list(graph.nodes),
        "links": [_link_to_json(link) for link in graph.links],
        "protocol": tree_to_json(tree),
    }
    return json.dumps(doc, indent=2)
