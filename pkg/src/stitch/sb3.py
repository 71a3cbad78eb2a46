"""Load and serialize Scratch 3.0 projects.

``load_project`` accepts either a zip container holding a ``project.json``
entry or the document text itself, and reconstructs scripts from the flat
block table (next links become sequence order, hat-rooted stacks become
scripts, other top-level stacks become HEADLESS scripts). ``serialize_project``
is the inverse: it regenerates all internal ids, so a round trip is identity
up to ids and coordinates.
"""

from __future__ import annotations

import io
import json
import zipfile
from typing import Any

from . import catalog
from .model import (
    GLOBAL_SCOPE,
    BlockNode,
    BlockSeq,
    EntityRef,
    FieldSlot,
    InputSlot,
    Literal,
    MalformedContainer,
    MalformedDocument,
    ProjectAst,
    SchemaViolation,
    Script,
    StitchError,
    Target,
    validate_project,
)

PROJECT_ENTRY = "project.json"

_SUBSTACK_NAMES = ("SUBSTACK", "SUBSTACK2")

# input array type tags on the wire
_NUM_TAGS = {4, 5, 6, 7, 8}
_COLOR_TAG = 9
_STRING_TAG = 10
_BROADCAST_TAG = 11
_VARIABLE_TAG = 12
_LIST_TAG = 13

_ENTITY_FIELD_KINDS = {
    "VARIABLE": "variable",
    "LIST": "list",
    "BROADCAST_OPTION": "broadcast",
}

_TARGET_STRUCTURAL_KEYS = {"name", "isStage", "variables", "lists", "broadcasts", "blocks"}
_PROJECT_STRUCTURAL_KEYS = {"targets"}


def load_project(source: bytes | str) -> ProjectAst:
    """Parse a container or document into a ProjectAst.

    Never raises anything but the typed errors: arbitrary byte input yields
    MalformedContainer / MalformedDocument / SchemaViolation.
    """
    try:
        text = _extract_document(source)
        ast = _parse_document(text)
        validate_project(ast)
        return ast
    except StitchError:
        raise
    except Exception as exc:  # defensive boundary: schema surprises become typed errors
        raise MalformedDocument(f"unreadable project document: {exc}") from exc


def _extract_document(source: bytes | str) -> str:
    if isinstance(source, str):
        return source
    if source[:2] == b"PK":
        try:
            archive = zipfile.ZipFile(io.BytesIO(source))
        except zipfile.BadZipFile as exc:
            raise MalformedContainer(f"broken zip container: {exc}") from exc
        entry = next(
            (n for n in archive.namelist() if n == PROJECT_ENTRY or n.endswith("/" + PROJECT_ENTRY)),
            None,
        )
        if entry is None:
            raise MalformedContainer("container has no project.json entry")
        data = archive.read(entry)
    else:
        data = source
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise MalformedDocument("project document is not UTF-8 text") from exc


def _parse_document(text: str) -> ProjectAst:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"project document is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("targets"), list):
        raise MalformedDocument("project document has no targets array")

    broadcasts: list[str] = []
    entity_scopes: dict[str, tuple[str, str, str]] = {}  # id -> (kind, scope, name)
    raw_targets = doc["targets"]
    for raw in raw_targets:
        if not isinstance(raw, dict):
            raise MalformedDocument("target entry is not an object")
        scope = GLOBAL_SCOPE if raw.get("isStage") else str(raw.get("name", ""))
        for var_id, decl in _as_dict(raw.get("variables")).items():
            if isinstance(decl, list) and decl:
                entity_scopes[str(var_id)] = ("variable", scope, str(decl[0]))
        for list_id, decl in _as_dict(raw.get("lists")).items():
            if isinstance(decl, list) and decl:
                entity_scopes[str(list_id)] = ("list", scope, str(decl[0]))
        for b_id, b_name in _as_dict(raw.get("broadcasts")).items():
            if str(b_name) not in broadcasts:
                broadcasts.append(str(b_name))
            entity_scopes[str(b_id)] = ("broadcast", GLOBAL_SCOPE, str(b_name))

    targets = [_parse_target(raw, entity_scopes) for raw in raw_targets]

    ast = ProjectAst(targets=targets, broadcasts=broadcasts)
    ast.meta["monitors"] = doc.get("monitors", [])
    ast.meta["doc_meta"] = doc.get("meta", {})
    ast.meta["extra"] = {
        k: v
        for k, v in doc.items()
        if k not in _PROJECT_STRUCTURAL_KEYS | {"monitors", "meta"}
    }
    return ast


def _as_dict(value: Any) -> dict:
    return value if isinstance(value, dict) else {}


def _parse_target(raw: dict, entity_scopes: dict[str, tuple[str, str, str]]) -> Target:
    name = str(raw.get("name", ""))
    target = Target(name=name, is_stage=bool(raw.get("isStage", False)))
    id_map: dict[str, str] = {}
    for var_id, decl in _as_dict(raw.get("variables")).items():
        if isinstance(decl, list) and len(decl) >= 2:
            var_name = str(decl[0])
            if var_name in target.variables:
                raise SchemaViolation(f"duplicate variable name {var_name!r} in target {name!r}")
            target.variables[var_name] = decl[1]
            id_map[str(var_id)] = var_name
    for list_id, decl in _as_dict(raw.get("lists")).items():
        if isinstance(decl, list) and len(decl) >= 2:
            list_name = str(decl[0])
            if list_name in target.lists:
                raise SchemaViolation(f"duplicate list name {list_name!r} in target {name!r}")
            target.lists[list_name] = decl[1] if isinstance(decl[1], list) else []
            id_map[str(list_id)] = list_name
    target.meta["entity_ids"] = id_map
    target.meta["extra"] = {k: v for k, v in raw.items() if k not in _TARGET_STRUCTURAL_KEYS}
    target.meta["comments"] = raw.get("comments", {})

    parser = _BlockTableParser(_as_dict(raw.get("blocks")), name, entity_scopes)
    target.scripts = parser.parse_scripts()
    return target


class _BlockTableParser:
    """Resolve one target's flat block table into scripts."""

    def __init__(self, table: dict, target_name: str, entity_scopes: dict[str, tuple[str, str, str]]):
        self.table = {str(k): v for k, v in table.items() if isinstance(v, dict)}
        self.target_name = target_name
        self.entity_scopes = entity_scopes
        self.consumed: set[str] = set()

    def parse_scripts(self) -> list[Script]:
        scripts: list[Script] = []
        for block_id, raw in self.table.items():
            if not raw.get("topLevel"):
                continue
            opcode = str(raw.get("opcode", ""))
            if raw.get("shadow") and not catalog.is_hat(opcode):
                # stray top-level shadow (e.g. detached menu): workspace junk
                self.consumed.add(block_id)
                continue
            if catalog.is_hat(opcode):
                hat = self._parse_block(block_id)
                body = self._parse_chain(raw.get("next"), parent_id=block_id)
                scripts.append(Script(hat=hat, body=body))
            else:
                body = self._parse_chain(block_id, parent_id=None)
                scripts.append(Script(hat=None, body=body))
        leftover = sorted(set(self.table) - self.consumed)
        if leftover:
            raise SchemaViolation(
                f"block {leftover[0]!r} is not reachable from any script root",
                block_id=leftover[0],
            )
        return scripts

    def _raw(self, block_id: str, referrer: str | None) -> dict:
        raw = self.table.get(block_id)
        if raw is None:
            raise SchemaViolation(
                f"reference to missing block id {block_id!r}"
                + (f" from block {referrer!r}" if referrer else ""),
                block_id=block_id,
            )
        return raw

    def _parse_chain(self, start_id: Any, parent_id: str | None) -> BlockSeq:
        blocks: list[BlockNode] = []
        current = start_id
        referrer = parent_id
        seen: set[str] = set()
        while current is not None:
            current = str(current)
            if current in seen:
                raise SchemaViolation(f"next-link cycle at block {current!r}", block_id=current)
            seen.add(current)
            raw = self._raw(current, referrer)
            blocks.append(self._parse_block(current))
            referrer = current
            current = raw.get("next")
        return BlockSeq(blocks)

    def _parse_block(self, block_id: str) -> BlockNode:
        raw = self._raw(block_id, None)
        self.consumed.add(block_id)
        opcode = str(raw.get("opcode", ""))
        if not opcode:
            raise SchemaViolation(f"block {block_id!r} has empty opcode", block_id=block_id)
        node = BlockNode(opcode=opcode)
        node.meta["id"] = block_id
        for key in ("x", "y", "shadow", "topLevel"):
            if key in raw:
                node.meta[key] = raw[key]

        if opcode == "procedures_definition":
            self._parse_procedure_definition(node, raw, block_id)
            return node
        if opcode == "procedures_call":
            self._parse_procedure_call(node, raw, block_id)
            return node

        entry = catalog.lookup(opcode)
        substack_values: dict[str, Any] = {}
        raw_inputs = _as_dict(raw.get("inputs"))
        for input_name in self._ordered_names(raw_inputs, entry, kind="input"):
            arr = raw_inputs.get(input_name)
            if input_name in _SUBSTACK_NAMES:
                substack_values[input_name] = arr
                continue
            value = self._parse_input_value(arr, block_id, entry, input_name)
            node.inputs.append(InputSlot(input_name, value))

        raw_fields = _as_dict(raw.get("fields"))
        for field_name in self._ordered_names(raw_fields, entry, kind="field"):
            node.fields.append(self._parse_field(field_name, raw_fields[field_name], entry))

        node.substacks = self._parse_substacks(substack_values, entry, block_id)
        return node

    def _ordered_names(self, raw_map: dict, entry: catalog.CatalogEntry | None, kind: str) -> list[str]:
        """Catalog slot order first, then extras alphabetically: stable across
        documents that list the same slots in different orders."""
        present = list(raw_map)
        if entry is None:
            return sorted(present)
        if kind == "input":
            declared = [s.name for s in entry.slots if s.kind != "field"]
        else:
            declared = [s.name for s in entry.slots if s.kind == "field"]
        ordered = [n for n in declared if n in raw_map]
        ordered += sorted(n for n in present if n not in declared)
        return ordered

    def _parse_substacks(
        self, substack_values: dict[str, Any], entry: catalog.CatalogEntry | None, block_id: str
    ) -> list[BlockSeq]:
        count = entry.substack_count if entry else (2 if "SUBSTACK2" in substack_values else (1 if substack_values else 0))
        substacks: list[BlockSeq] = []
        for i in range(count):
            name = _SUBSTACK_NAMES[i]
            arr = substack_values.get(name)
            child_id = arr[1] if isinstance(arr, list) and len(arr) > 1 else None
            if isinstance(child_id, str):
                substacks.append(self._parse_chain(child_id, parent_id=block_id))
            else:
                substacks.append(BlockSeq())
        return substacks

    def _parse_input_value(
        self, arr: Any, block_id: str, entry: catalog.CatalogEntry | None, input_name: str
    ):
        if arr is None:
            return None
        if not isinstance(arr, list) or not arr:
            raise SchemaViolation(
                f"input {input_name!r} on block {block_id!r} has unknown shape",
                block_id=block_id,
            )
        primary = arr[1] if len(arr) > 1 else None
        if primary is None:
            return None
        if isinstance(primary, str):
            return self._parse_input_block(primary, block_id)
        if isinstance(primary, list):
            return self._parse_value_array(primary, block_id, input_name)
        raise SchemaViolation(
            f"input {input_name!r} on block {block_id!r} has unknown shape",
            block_id=block_id,
        )

    def _parse_input_block(self, child_id: str, block_id: str):
        raw = self._raw(child_id, block_id)
        child_opcode = str(raw.get("opcode", ""))
        menu_field = catalog.MENU_OPCODES.get(child_opcode)
        if menu_field is not None:
            self.consumed.add(child_id)
            fields = _as_dict(raw.get("fields"))
            chosen = fields.get(menu_field)
            text = str(chosen[0]) if isinstance(chosen, list) and chosen else ""
            return Literal(text, "menu")
        return self._parse_block(child_id)

    def _parse_value_array(self, arr: list, block_id: str, input_name: str):
        tag = arr[0] if arr else None
        if tag in _NUM_TAGS:
            return Literal(str(arr[1]) if len(arr) > 1 else "", "number")
        if tag == _COLOR_TAG:
            return Literal(str(arr[1]) if len(arr) > 1 else "", "color")
        if tag == _STRING_TAG:
            return Literal(str(arr[1]) if len(arr) > 1 else "", "string")
        if tag in (_BROADCAST_TAG, _VARIABLE_TAG, _LIST_TAG):
            kind = {11: "broadcast", 12: "variable", 13: "list"}[tag]
            name = str(arr[1]) if len(arr) > 1 else ""
            entity_id = str(arr[2]) if len(arr) > 2 else ""
            return self._resolve_ref(kind, name, entity_id)
        raise SchemaViolation(
            f"input {input_name!r} on block {block_id!r} has unknown value tag {tag!r}",
            block_id=block_id,
        )

    def _resolve_ref(self, kind: str, name: str, entity_id: str) -> EntityRef:
        info = self.entity_scopes.get(entity_id)
        if info is not None and info[0] == kind:
            return EntityRef(kind, info[2], info[1])
        if kind == "broadcast":
            return EntityRef(kind, name, GLOBAL_SCOPE)
        # fall back to name lookup: local shadows global
        for _, (k, scope, n) in self.entity_scopes.items():
            if k == kind and n == name and scope == self.target_name:
                return EntityRef(kind, name, scope)
        return EntityRef(kind, name, GLOBAL_SCOPE)

    def _parse_field(self, name: str, raw_field: Any, entry: catalog.CatalogEntry | None) -> FieldSlot:
        value = ""
        entity_id = ""
        if isinstance(raw_field, list) and raw_field:
            value = str(raw_field[0])
            if len(raw_field) > 1 and raw_field[1] is not None:
                entity_id = str(raw_field[1])
        entity_kind = None
        slot = entry.slot(name) if entry else None
        if slot is not None and slot.entity:
            entity_kind = slot.entity
        elif name in _ENTITY_FIELD_KINDS:
            entity_kind = _ENTITY_FIELD_KINDS[name]
        ref = self._resolve_ref(entity_kind, value, entity_id) if entity_kind else None
        return FieldSlot(name, value, ref)

    # --- custom blocks ---

    def _parse_procedure_definition(self, node: BlockNode, raw: dict, block_id: str) -> None:
        proto_arr = _as_dict(raw.get("inputs")).get("custom_block")
        proto_id = proto_arr[1] if isinstance(proto_arr, list) and len(proto_arr) > 1 else None
        if not isinstance(proto_id, str):
            raise SchemaViolation(
                f"procedures_definition {block_id!r} has no prototype", block_id=block_id
            )
        proto_raw = self._raw(proto_id, block_id)
        self.consumed.add(proto_id)
        mutation = _as_dict(proto_raw.get("mutation"))
        proccode = str(mutation.get("proccode", ""))
        names = _json_list(mutation.get("argumentnames"))
        defaults = _json_list(mutation.get("argumentdefaults"))
        warp = str(mutation.get("warp", "false")).lower()
        node.fields.append(
            FieldSlot("PROCCODE", proccode, EntityRef("procedure", proccode, self.target_name))
        )
        node.fields.append(FieldSlot("WARP", "true" if warp == "true" else "false"))
        for i, arg_name in enumerate(names):
            node.fields.append(FieldSlot(f"ARG{i}", str(arg_name)))
        node.meta["argumentdefaults"] = defaults
        # consume the prototype's shadow argument reporters
        for arr in _as_dict(proto_raw.get("inputs")).values():
            child = arr[1] if isinstance(arr, list) and len(arr) > 1 else None
            if isinstance(child, str) and child in self.table:
                self.consumed.add(child)

    def _parse_procedure_call(self, node: BlockNode, raw: dict, block_id: str) -> None:
        mutation = _as_dict(raw.get("mutation"))
        proccode = str(mutation.get("proccode", ""))
        node.fields.append(
            FieldSlot("PROCCODE", proccode, EntityRef("procedure", proccode, self.target_name))
        )
        arg_ids = _json_list(mutation.get("argumentids"))
        raw_inputs = _as_dict(raw.get("inputs"))
        for i, arg_id in enumerate(arg_ids):
            value = self._parse_input_value(raw_inputs.get(str(arg_id)), block_id, None, f"ARG{i}")
            node.inputs.append(InputSlot(f"ARG{i}", value))


def _json_list(value: Any) -> list:
    if isinstance(value, list):
        return value
    if isinstance(value, str):
        try:
            parsed = json.loads(value)
            return parsed if isinstance(parsed, list) else []
        except json.JSONDecodeError:
            return []
    return []


# --------------------------------------------------------------------------
# serialization
# --------------------------------------------------------------------------


def serialize_project(ast: ProjectAst) -> str:
    """Emit project document text; all internal ids are regenerated."""
    writer = _ProjectWriter(ast)
    return json.dumps(writer.build(), separators=(",", ":"))


def pack_project(ast: ProjectAst) -> bytes:
    """Emit a full container (zip with a project.json entry)."""
    buffer = io.BytesIO()
    with zipfile.ZipFile(buffer, "w", zipfile.ZIP_DEFLATED) as archive:
        archive.writestr(PROJECT_ENTRY, serialize_project(ast))
    return buffer.getvalue()


class _ProjectWriter:
    def __init__(self, ast: ProjectAst):
        self.ast = ast
        self.block_counter = 0
        self.entity_ids: dict[tuple[str, str, str], str] = {}
        self._assign_entity_ids()

    def _assign_entity_ids(self) -> None:
        counters = {"variable": 0, "list": 0, "broadcast": 0}

        def assign(kind: str, scope: str, name: str) -> str:
            key = (kind, scope, name)
            if key not in self.entity_ids:
                prefix = {"variable": "var", "list": "list", "broadcast": "bc"}[kind]
                self.entity_ids[key] = f"{prefix}{counters[kind]}"
                counters[kind] += 1
            return self.entity_ids[key]

        for target in self.ast.targets:
            scope = GLOBAL_SCOPE if target.is_stage else target.name
            for name in target.variables:
                assign("variable", scope, name)
            for name in target.lists:
                assign("list", scope, name)
        for name in self.ast.broadcast_names():
            assign("broadcast", GLOBAL_SCOPE, name)

    def entity_id(self, kind: str, scope: str, name: str) -> str:
        key = (kind, scope, name)
        if key not in self.entity_ids:
            if scope != GLOBAL_SCOPE and (kind, GLOBAL_SCOPE, name) in self.entity_ids:
                return self.entity_ids[(kind, GLOBAL_SCOPE, name)]
            # reference to an undeclared entity: mint an id so output stays loadable
            self.entity_ids[key] = f"auto_{kind}_{len(self.entity_ids)}"
        return self.entity_ids[key]

    def fresh_block_id(self) -> str:
        self.block_counter += 1
        return f"blk{self.block_counter}"

    def build(self) -> dict:
        doc: dict[str, Any] = {
            "targets": [self._build_target(t, i) for i, t in enumerate(self.ast.targets)],
            "monitors": self.ast.meta.get("monitors", []),
            "extensions": [],
            "meta": self.ast.meta.get("doc_meta")
            or {"semver": "3.0.0", "vm": "1.0.0", "agent": "stitch"},
        }
        for key, value in self.ast.meta.get("extra", {}).items():
            doc.setdefault(key, value)
        return doc

    def _build_target(self, target: Target, index: int) -> dict:
        scope = GLOBAL_SCOPE if target.is_stage else target.name
        raw: dict[str, Any] = {
            "isStage": target.is_stage,
            "name": target.name,
            "variables": {
                self.entity_id("variable", scope, name): [name, value]
                for name, value in target.variables.items()
            },
            "lists": {
                self.entity_id("list", scope, name): [name, items]
                for name, items in target.lists.items()
            },
            "broadcasts": (
                {
                    self.entity_id("broadcast", GLOBAL_SCOPE, name): name
                    for name in self.ast.broadcast_names()
                }
                if target.is_stage
                else {}
            ),
            "blocks": {},
            "comments": {},
        }
        blocks = raw["blocks"]
        for script_index, script in enumerate(target.scripts):
            writer = _ScriptWriter(self, target, blocks)
            writer.write_script(script, x=script_index * 320, y=0)

        extras = dict(target.meta.get("extra", {}))
        defaults: dict[str, Any] = {
            "currentCostume": 0,
            "costumes": [],
            "sounds": [],
            "volume": 100,
            "layerOrder": index,
        }
        if target.is_stage:
            defaults.update({"tempo": 60, "videoTransparency": 50, "videoState": "on"})
        else:
            defaults.update(
                {"visible": True, "x": 0, "y": 0, "size": 100, "direction": 90,
                 "draggable": False, "rotationStyle": "all around"}
            )
        for key, value in defaults.items():
            raw.setdefault(key, extras.pop(key, value))
        raw.update(extras)
        return raw


class _ScriptWriter:
    def __init__(self, project: _ProjectWriter, target: Target, blocks: dict):
        self.project = project
        self.target = target
        self.blocks = blocks

    def write_script(self, script: Script, x: int, y: int) -> None:
        chain: list[BlockNode] = list(script.all_blocks().blocks)
        if not chain:
            return
        ids = [self.project.fresh_block_id() for _ in chain]
        for i, node in enumerate(chain):
            raw = self._build_block(node, ids[i], parent=ids[i - 1] if i else None)
            raw["next"] = ids[i + 1] if i + 1 < len(chain) else None
            if i == 0:
                raw["topLevel"] = True
                raw["x"] = node.meta.get("x", x)
                raw["y"] = node.meta.get("y", y)
            self.blocks[ids[i]] = raw

    def _write_chain(self, seq: BlockSeq, parent: str) -> str | None:
        ids = [self.project.fresh_block_id() for _ in seq.blocks]
        for i, node in enumerate(seq.blocks):
            raw = self._build_block(node, ids[i], parent=ids[i - 1] if i else parent)
            raw["next"] = ids[i + 1] if i + 1 < len(ids) else None
            self.blocks[ids[i]] = raw
        return ids[0] if ids else None

    def _build_block(self, node: BlockNode, block_id: str, parent: str | None) -> dict:
        if node.opcode == "procedures_definition":
            return self._build_procedure_definition(node, block_id, parent)
        raw: dict[str, Any] = {
            "opcode": node.opcode,
            "next": None,
            "parent": parent,
            "inputs": {},
            "fields": {},
            "shadow": False,
            "topLevel": False,
        }
        entry = catalog.lookup(node.opcode)
        if node.opcode == "procedures_call":
            self._attach_call_mutation(node, raw, block_id)
        else:
            for slot in node.inputs:
                encoded = self._encode_input(slot, entry, block_id)
                if encoded is not None:
                    raw["inputs"][slot.name] = encoded
        for fslot in node.fields:
            if node.opcode == "procedures_call" and fslot.name == "PROCCODE":
                continue
            raw["fields"][fslot.name] = self._encode_field(fslot)
        for i, sub in enumerate(node.substacks):
            child = self._write_chain(sub, parent=block_id)
            if child is not None:
                raw["inputs"][_SUBSTACK_NAMES[i]] = [2, child]
        return raw

    def _encode_input(self, slot: InputSlot, entry: catalog.CatalogEntry | None, parent: str):
        value = slot.value
        if value is None:
            return None
        if isinstance(value, Literal):
            spec = entry.slot(slot.name) if entry else None
            if value.kind == "menu" and spec is not None and spec.menu_opcode:
                menu_id = self.project.fresh_block_id()
                self.blocks[menu_id] = {
                    "opcode": spec.menu_opcode,
                    "next": None,
                    "parent": parent,
                    "inputs": {},
                    "fields": {spec.menu_field or slot.name: [value.text, None]},
                    "shadow": True,
                    "topLevel": False,
                }
                return [1, menu_id]
            tag = {"number": 4, "color": _COLOR_TAG}.get(value.kind, _STRING_TAG)
            return [1, [tag, value.text]]
        if isinstance(value, EntityRef):
            entity_id = self.project.entity_id(value.kind, value.scope, value.name)
            tag = {"broadcast": _BROADCAST_TAG, "variable": _VARIABLE_TAG, "list": _LIST_TAG}[
                value.kind
            ]
            if value.kind == "broadcast":
                return [1, [tag, value.name, entity_id]]
            return [3, [tag, value.name, entity_id], [_STRING_TAG, ""]]
        child_id = self.project.fresh_block_id()
        self.blocks[child_id] = self._build_block(value, child_id, parent=parent)
        return [2, child_id]

    def _encode_field(self, fslot: FieldSlot) -> list:
        if fslot.ref is not None and fslot.ref.kind != "procedure":
            entity_id = self.project.entity_id(fslot.ref.kind, fslot.ref.scope, fslot.ref.name)
            return [fslot.value, entity_id]
        return [fslot.value, None]

    # --- custom blocks ---

    def _proc_parts(self, node: BlockNode) -> tuple[str, list[str], str]:
        proccode = ""
        warp = "false"
        arg_names: list[str] = []
        for fslot in node.fields:
            if fslot.name == "PROCCODE":
                proccode = fslot.value
            elif fslot.name == "WARP":
                warp = fslot.value
            elif fslot.name.startswith("ARG"):
                arg_names.append(fslot.value)
        return proccode, arg_names, warp

    @staticmethod
    def _arg_ids(proccode: str, count: int) -> list[str]:
        return [f"arg|{proccode}|{i}" for i in range(count)]

    def _build_procedure_definition(self, node: BlockNode, block_id: str, parent: str | None) -> dict:
        proccode, arg_names, warp = self._proc_parts(node)
        arg_ids = self._arg_ids(proccode, len(arg_names))
        placeholders = [tok for tok in proccode.split() if tok in ("%s", "%n", "%b")]
        defaults = node.meta.get("argumentdefaults") or [
            "" if i >= len(placeholders) or placeholders[i] != "%b" else "false"
            for i in range(len(arg_names))
        ]
        proto_id = self.project.fresh_block_id()
        proto_inputs = {}
        for i, arg_name in enumerate(arg_names):
            reporter_id = self.project.fresh_block_id()
            is_bool = i < len(placeholders) and placeholders[i] == "%b"
            self.blocks[reporter_id] = {
                "opcode": "argument_reporter_boolean" if is_bool else "argument_reporter_string_number",
                "next": None,
                "parent": proto_id,
                "inputs": {},
                "fields": {"VALUE": [arg_name, None]},
                "shadow": True,
                "topLevel": False,
            }
            proto_inputs[arg_ids[i]] = [1, reporter_id]
        self.blocks[proto_id] = {
            "opcode": "procedures_prototype",
            "next": None,
            "parent": block_id,
            "inputs": proto_inputs,
            "fields": {},
            "shadow": True,
            "topLevel": False,
            "mutation": {
                "tagName": "mutation",
                "children": [],
                "proccode": proccode,
                "argumentids": json.dumps(arg_ids),
                "argumentnames": json.dumps(arg_names),
                "argumentdefaults": json.dumps(defaults[: len(arg_names)]),
                "warp": warp,
            },
        }
        return {
            "opcode": "procedures_definition",
            "next": None,
            "parent": parent,
            "inputs": {"custom_block": [1, proto_id]},
            "fields": {},
            "shadow": False,
            "topLevel": False,
        }

    def _attach_call_mutation(self, node: BlockNode, raw: dict, block_id: str) -> None:
        proccode = ""
        for fslot in node.fields:
            if fslot.name == "PROCCODE":
                proccode = fslot.value
        arg_ids = self._arg_ids(proccode, len(node.inputs))
        for i, slot in enumerate(node.inputs):
            encoded = self._encode_input(slot, None, block_id)
            if encoded is not None:
                raw["inputs"][arg_ids[i]] = encoded
        raw["mutation"] = {
            "tagName": "mutation",
            "children": [],
            "proccode": proccode,
            "argumentids": json.dumps(arg_ids),
            "warp": "false",
        }


def opcode_catalog_lookup(opcode: str) -> catalog.CatalogEntry | None:
    """Deterministic catalog lookup; unknown opcodes return None."""
    return catalog.lookup(opcode)
