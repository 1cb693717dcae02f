"""Hierarchical control-tree catalog: types, JSON loading, validation, traversal.

A catalog is a tree of nodes (root > domain > class > control > issue) whose
leaves are the scorable assessment issues. Levels may be skipped on any path,
so a domain may own controls directly; the kind order must still strictly
descend. Catalogs are immutable after construction and safe to share across
threads.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from typing import Iterator

BUNDLED_CATALOG_RESOURCE = "iso27001-six-domain.json"

_ID_RE = re.compile(r"^[a-z0-9_.-]+$")


class CatalogError(ValueError):
    """Base error for catalog parsing and validation."""


class CatalogParseError(CatalogError):
    """The catalog document is not well-formed."""


class CatalogValidationError(CatalogError):
    """A structural invariant is violated; carries the offending node id."""

    def __init__(self, message: str, node_id: str | None = None):
        super().__init__(message)
        self.node_id = node_id


class NodeKind(Enum):
    ROOT = "root"
    DOMAIN = "domain"
    CLASS = "class"
    CONTROL = "control"
    ISSUE = "issue"

    @property
    def rank(self) -> int:
        """Position in the root > domain > class > control > issue order."""
        return _KIND_RANK[self]


_KIND_RANK = {
    NodeKind.ROOT: 0,
    NodeKind.DOMAIN: 1,
    NodeKind.CLASS: 2,
    NodeKind.CONTROL: 3,
    NodeKind.ISSUE: 4,
}


@dataclass(frozen=True)
class CatalogNode:
    """One node of the control tree. Issue nodes are the scorable leaves."""

    id: str
    name: str
    kind: NodeKind
    children: tuple[CatalogNode, ...] = ()
    description: str | None = None

    def walk(self) -> Iterator[CatalogNode]:
        """Yield this node and all descendants in depth-first document order."""
        yield self
        for child in self.children:
            yield from child.walk()


@dataclass(frozen=True)
class Catalog:
    """A validated control catalog with a fixed 0..scale_max integer scale."""

    name: str
    version: str
    scale_max: int
    root: CatalogNode
    # id -> node lookup, built once at construction
    _by_id: dict[str, CatalogNode] = field(
        default_factory=dict, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        by_id = {node.id: node for node in self.root.walk()}
        object.__setattr__(self, "_by_id", by_id)

    @property
    def ref(self) -> tuple[str, str]:
        return (self.name, self.version)


def validate_catalog(catalog: Catalog) -> None:
    """Check every structural invariant; raise CatalogValidationError on the
    first violation, naming the offending node.

    Invariants: scale_max is 4; the root node has kind 'root' and is the only
    root; ids are unique, non-empty and path-safe; children are empty exactly
    on issue nodes; kind order strictly descends along every path.
    """
    if catalog.scale_max != 4:
        raise CatalogValidationError(
            f"scale_max must be 4, got {catalog.scale_max!r}"
        )
    if catalog.root.kind is not NodeKind.ROOT:
        raise CatalogValidationError(
            f"top node {catalog.root.id!r} must have kind 'root', "
            f"got {catalog.root.kind.value!r}",
            node_id=catalog.root.id,
        )
    seen: set[str] = set()
    for node in catalog.root.walk():
        if not node.id or not _ID_RE.match(node.id):
            raise CatalogValidationError(
                f"node id {node.id!r} is not path-safe "
                "(allowed characters: a-z 0-9 _ . -)",
                node_id=node.id,
            )
        if node.id in seen:
            raise CatalogValidationError(
                f"duplicate node id {node.id!r}", node_id=node.id
            )
        seen.add(node.id)
        if node is not catalog.root and node.kind is NodeKind.ROOT:
            raise CatalogValidationError(
                f"node {node.id!r}: only the top node may have kind 'root'",
                node_id=node.id,
            )
        if node.kind is NodeKind.ISSUE:
            if node.children:
                raise CatalogValidationError(
                    f"issue node {node.id!r} must be a leaf", node_id=node.id
                )
        else:
            if not node.children:
                raise CatalogValidationError(
                    f"{node.kind.value} node {node.id!r} has no children",
                    node_id=node.id,
                )
        for child in node.children:
            if child.kind.rank <= node.kind.rank:
                raise CatalogValidationError(
                    f"node {child.id!r} of kind {child.kind.value!r} cannot be "
                    f"a child of {node.id!r} of kind {node.kind.value!r}",
                    node_id=child.id,
                )


def _node_from_dict(obj: object, path: str) -> CatalogNode:
    if not isinstance(obj, dict):
        raise CatalogParseError(f"node at {path} must be an object")
    for key in ("id", "name", "kind"):
        if key not in obj:
            raise CatalogParseError(f"node at {path} is missing {key!r}")
    node_id = obj["id"]
    if not isinstance(node_id, str):
        raise CatalogParseError(f"node at {path}: 'id' must be a string")
    try:
        kind = NodeKind(obj["kind"])
    except ValueError:
        raise CatalogParseError(
            f"node {node_id!r}: unknown kind {obj['kind']!r}"
        ) from None
    description = obj.get("description")
    if description is not None and not isinstance(description, str):
        raise CatalogParseError(f"node {node_id!r}: 'description' must be a string")
    raw_children = obj.get("children", [])
    if not isinstance(raw_children, list):
        raise CatalogParseError(f"node {node_id!r}: 'children' must be an array")
    children = tuple(
        _node_from_dict(child, f"{path}/children[{i}]")
        for i, child in enumerate(raw_children)
    )
    return CatalogNode(
        id=node_id,
        name=str(obj["name"]),
        kind=kind,
        children=children,
        description=description,
    )


def _node_to_dict(node: CatalogNode) -> dict:
    obj: dict = {"id": node.id, "name": node.name, "kind": node.kind.value}
    if node.description is not None:
        obj["description"] = node.description
    if node.children:
        obj["children"] = [_node_to_dict(child) for child in node.children]
    return obj


def load_catalog(text: str) -> Catalog:
    """Parse a UTF-8 JSON catalog document and validate it.

    Raises CatalogParseError on malformed documents and
    CatalogValidationError (with the offending node id) on invariant
    violations.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CatalogParseError(f"catalog document is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise CatalogParseError("catalog document must be a JSON object")
    for key in ("name", "version", "scale_max", "root"):
        if key not in doc:
            raise CatalogParseError(f"catalog document is missing {key!r}")
    if not isinstance(doc["scale_max"], int) or isinstance(doc["scale_max"], bool):
        raise CatalogParseError("'scale_max' must be an integer")
    catalog = Catalog(
        name=str(doc["name"]),
        version=str(doc["version"]),
        scale_max=doc["scale_max"],
        root=_node_from_dict(doc["root"], "root"),
    )
    validate_catalog(catalog)
    return catalog


def load_catalog_file(path: str) -> Catalog:
    """Read and load a catalog document from a file path."""
    with open(path, encoding="utf-8") as fh:
        return load_catalog(fh.read())


def dump_catalog(catalog: Catalog) -> str:
    """Serialize a catalog back to its JSON document form.

    Round-trip stable: load_catalog(dump_catalog(c)) is structurally equal
    to c (same ids, kinds, names and child order).
    """
    doc = {
        "name": catalog.name,
        "version": catalog.version,
        "scale_max": catalog.scale_max,
        "root": _node_to_dict(catalog.root),
    }
    return json.dumps(doc, indent=2) + "\n"


def catalog_to_dict(catalog: Catalog) -> dict:
    """The catalog document as a plain dict (what the API serves)."""
    return json.loads(dump_catalog(catalog))


def load_bundled_catalog() -> Catalog:
    """Load the catalog distributed with the package: the six-domain view of
    the 21 essential ISO 27001 controls, one placeholder issue per control.
    """
    text = (
        resources.files(__package__)
        .joinpath("catalogs", BUNDLED_CATALOG_RESOURCE)
        .read_text(encoding="utf-8")
    )
    return load_catalog(text)


def iter_nodes(catalog: Catalog) -> Iterator[CatalogNode]:
    """All nodes in depth-first document order, root first."""
    return catalog.root.walk()


def leaves(catalog: Catalog) -> list[CatalogNode]:
    """All issue-kind nodes in depth-first document order."""
    return [node for node in catalog.root.walk() if node.kind is NodeKind.ISSUE]


def nodes_of_kind(catalog: Catalog, kind: NodeKind) -> list[CatalogNode]:
    """All nodes of one kind in depth-first document order."""
    return [node for node in catalog.root.walk() if node.kind is kind]


def find_node(catalog: Catalog, node_id: str) -> CatalogNode | None:
    """The unique node with this id, or None. Not-found is a normal return."""
    return catalog._by_id.get(node_id)


def parent_map(catalog: Catalog) -> dict[str, str]:
    """Child id -> parent id for every non-root node."""
    parents: dict[str, str] = {}
    for node in catalog.root.walk():
        for child in node.children:
            parents[child.id] = node.id
    return parents
