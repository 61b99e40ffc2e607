"""JSON interchange for instances and matchings.

Schema:
  instance: {"n": int, "agents": [str], "objects": [str],
             "kind": "full"|"topk", "preferences": {agent: [object, ...]}}
  matching: {"assignment": {agent: object}}

Symbolic names live only at this boundary; everything inside works on
dense 0-based indices.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .core import FullProfile, InvalidInputError, Matching, TopKProfile


class ParseError(ValueError):
    pass


@dataclass(frozen=True)
class InstanceDocument:
    agents: tuple[str, ...]
    objects: tuple[str, ...]
    profile: FullProfile | TopKProfile

    @property
    def n(self) -> int:
        return self.profile.n

    @property
    def kind(self) -> str:
        return "full" if isinstance(self.profile, FullProfile) else "topk"

    def agent_index(self, name: str) -> int:
        try:
            return self.agents.index(name)
        except ValueError:
            raise ParseError(f"unknown agent name {name!r}") from None

    def object_index(self, name: str) -> int:
        try:
            return self.objects.index(name)
        except ValueError:
            raise ParseError(f"unknown object name {name!r}") from None


def default_names(n: int) -> tuple[tuple[str, ...], tuple[str, ...]]:
    return (
        tuple(f"a{i + 1}" for i in range(n)),
        tuple(f"o{j + 1}" for j in range(n)),
    )


def parse_instance(text: str) -> InstanceDocument:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"not valid JSON: {e}") from None
    if not isinstance(doc, dict):
        raise ParseError("instance document must be a JSON object")
    for key in ("n", "agents", "objects", "kind", "preferences"):
        if key not in doc:
            raise ParseError(f"missing field {key!r}")
    n = doc["n"]
    agents = tuple(doc["agents"])
    objects = tuple(doc["objects"])
    if not isinstance(n, int) or n < 1:
        raise ParseError("field 'n' must be a positive integer")
    if len(agents) != n or len(set(agents)) != n:
        raise ParseError("field 'agents' must list n unique names")
    if len(objects) != n or len(set(objects)) != n:
        raise ParseError("field 'objects' must list n unique names")
    if doc["kind"] not in ("full", "topk"):
        raise ParseError("field 'kind' must be 'full' or 'topk'")
    obj_index = {name: j for j, name in enumerate(objects)}
    prefs = []
    for i, name in enumerate(agents):
        if name not in doc["preferences"]:
            raise ParseError(f"missing preferences for agent {name!r}")
        row = doc["preferences"][name]
        seen = set()
        indices = []
        for entry in row:
            if entry not in obj_index:
                raise ParseError(
                    f"agent {name!r}: unknown object name {entry!r}"
                )
            if entry in seen:
                raise ParseError(
                    f"agent {name!r}: object {entry!r} listed twice"
                )
            seen.add(entry)
            indices.append(obj_index[entry])
        prefs.append(tuple(indices))
    try:
        profile: FullProfile | TopKProfile
        if doc["kind"] == "full":
            profile = FullProfile(n, tuple(prefs))
        else:
            profile = TopKProfile(n, tuple(prefs))
    except InvalidInputError as e:
        raise ParseError(str(e)) from None
    return InstanceDocument(agents, objects, profile)


def serialize_instance(doc: InstanceDocument) -> str:
    return json.dumps(
        {
            "n": doc.n,
            "agents": list(doc.agents),
            "objects": list(doc.objects),
            "kind": doc.kind,
            "preferences": {
                doc.agents[i]: [doc.objects[o] for o in doc.profile.prefs[i]]
                for i in range(doc.n)
            },
        },
        indent=2,
    )


def document_for(profile: FullProfile | TopKProfile) -> InstanceDocument:
    agents, objects = default_names(profile.n)
    return InstanceDocument(agents, objects, profile)


def parse_matching(text: str, doc: InstanceDocument) -> Matching:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"not valid JSON: {e}") from None
    if not isinstance(raw, dict) or "assignment" not in raw:
        raise ParseError("matching document must contain 'assignment'")
    pairs = []
    for aname, oname in raw["assignment"].items():
        pairs.append((doc.agent_index(aname), doc.object_index(oname)))
    try:
        return Matching.of(pairs)
    except InvalidInputError as e:
        raise ParseError(str(e)) from None


def serialize_matching(M: Matching, doc: InstanceDocument) -> str:
    return json.dumps(
        {
            "assignment": {
                doc.agents[a]: doc.objects[o] for a, o in sorted(M.pairs)
            }
        },
        indent=2,
    )
