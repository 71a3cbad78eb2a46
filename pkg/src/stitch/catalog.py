"""Curated opcode catalog for the core Scratch 3.0 palettes.

Maps each opcode to its label template, palette category, block shape, and
ordered slot layout. The catalog drives text rendering, render specs, and
slot-arity validation. Opcodes outside the core palettes (extensions) resolve
to None and take the text fallback path everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field

HAT = "HAT"
STACK = "STACK"
C_BLOCK = "C_BLOCK"
REPORTER = "REPORTER"
BOOLEAN = "BOOLEAN"
CAP = "CAP"

CATEGORY_COLORS = {
    "motion": "#4C97FF",
    "looks": "#9966FF",
    "sound": "#CF63CF",
    "events": "#FFBF00",
    "control": "#FFAB19",
    "sensing": "#5CB1D6",
    "operators": "#59C059",
    "variables": "#FF8C1A",
    "lists": "#FF661A",
    "my-blocks": "#FF6680",
    "unknown": "#969696",
}


@dataclass(frozen=True)
class SlotSpec:
    """One socket on a block.

    kind: number | string | color | boolean | menu | field | broadcast
    ``menu`` slots collapse a shadow menu block (menu_opcode/menu_field name
    the shadow used on the wire). ``entity`` marks slots whose value names a
    variable, list, broadcast, or procedure.
    """

    name: str
    kind: str
    menu_opcode: str | None = None
    menu_field: str | None = None
    entity: str | None = None


@dataclass(frozen=True)
class CatalogEntry:
    opcode: str
    category: str
    shape: str
    template: str
    slots: tuple[SlotSpec, ...] = ()
    substack_count: int = 0

    def slot(self, name: str) -> SlotSpec | None:
        for s in self.slots:
            if s.name == name:
                return s
        return None

    def input_names(self) -> set[str]:
        return {s.name for s in self.slots if s.kind != "field"}

    def field_names(self) -> set[str]:
        return {s.name for s in self.slots if s.kind == "field"}


def _category_for(opcode: str) -> str:
    prefix = opcode.split("_", 1)[0]
    if prefix == "data":
        return "lists" if "list" in opcode else "variables"
    return {
        "motion": "motion",
        "looks": "looks",
        "sound": "sound",
        "event": "events",
        "control": "control",
        "sensing": "sensing",
        "operator": "operators",
        "procedures": "my-blocks",
        "argument": "my-blocks",
    }.get(prefix, "unknown")


def _num(name: str) -> SlotSpec:
    return SlotSpec(name, "number")


def _str(name: str) -> SlotSpec:
    return SlotSpec(name, "string")


def _bool(name: str) -> SlotSpec:
    return SlotSpec(name, "boolean")


def _color(name: str) -> SlotSpec:
    return SlotSpec(name, "color")


def _menu(name: str, menu_opcode: str, menu_field: str) -> SlotSpec:
    return SlotSpec(name, "menu", menu_opcode=menu_opcode, menu_field=menu_field)


def _field(name: str, entity: str | None = None) -> SlotSpec:
    return SlotSpec(name, "field", entity=entity)


_ENTRIES: list[CatalogEntry] = []


def _add(opcode: str, shape: str, template: str, *slots: SlotSpec, substacks: int = 0):
    _ENTRIES.append(
        CatalogEntry(
            opcode=opcode,
            category=_category_for(opcode),
            shape=shape,
            template=template,
            slots=tuple(slots),
            substack_count=substacks,
        )
    )


# --- motion ---
_add("motion_movesteps", STACK, "move {STEPS} steps", _num("STEPS"))
_add("motion_turnright", STACK, "turn right {DEGREES} degrees", _num("DEGREES"))
_add("motion_turnleft", STACK, "turn left {DEGREES} degrees", _num("DEGREES"))
_add("motion_goto", STACK, "go to {TO}", _menu("TO", "motion_goto_menu", "TO"))
_add("motion_gotoxy", STACK, "go to x: {X} y: {Y}", _num("X"), _num("Y"))
_add(
    "motion_glideto",
    STACK,
    "glide {SECS} secs to {TO}",
    _num("SECS"),
    _menu("TO", "motion_glideto_menu", "TO"),
)
_add(
    "motion_glidesecstoxy",
    STACK,
    "glide {SECS} secs to x: {X} y: {Y}",
    _num("SECS"),
    _num("X"),
    _num("Y"),
)
_add("motion_pointindirection", STACK, "point in direction {DIRECTION}", _num("DIRECTION"))
_add(
    "motion_pointtowards",
    STACK,
    "point towards {TOWARDS}",
    _menu("TOWARDS", "motion_pointtowards_menu", "TOWARDS"),
)
_add("motion_changexby", STACK, "change x by {DX}", _num("DX"))
_add("motion_setx", STACK, "set x to {X}", _num("X"))
_add("motion_changeyby", STACK, "change y by {DY}", _num("DY"))
_add("motion_sety", STACK, "set y to {Y}", _num("Y"))
_add("motion_ifonedgebounce", STACK, "if on edge, bounce")
_add("motion_setrotationstyle", STACK, "set rotation style {STYLE}", _field("STYLE"))
_add("motion_xposition", REPORTER, "x position")
_add("motion_yposition", REPORTER, "y position")
_add("motion_direction", REPORTER, "direction")

# --- looks ---
_add(
    "looks_sayforsecs",
    STACK,
    "say {MESSAGE} for {SECS} seconds",
    _str("MESSAGE"),
    _num("SECS"),
)
_add("looks_say", STACK, "say {MESSAGE}", _str("MESSAGE"))
_add(
    "looks_thinkforsecs",
    STACK,
    "think {MESSAGE} for {SECS} seconds",
    _str("MESSAGE"),
    _num("SECS"),
)
_add("looks_think", STACK, "think {MESSAGE}", _str("MESSAGE"))
_add(
    "looks_switchcostumeto",
    STACK,
    "switch costume to {COSTUME}",
    _menu("COSTUME", "looks_costume", "COSTUME"),
)
_add("looks_nextcostume", STACK, "next costume")
_add(
    "looks_switchbackdropto",
    STACK,
    "switch backdrop to {BACKDROP}",
    _menu("BACKDROP", "looks_backdrops", "BACKDROP"),
)
_add("looks_nextbackdrop", STACK, "next backdrop")
_add("looks_changesizeby", STACK, "change size by {CHANGE}", _num("CHANGE"))
_add("looks_setsizeto", STACK, "set size to {SIZE} %", _num("SIZE"))
_add(
    "looks_changeeffectby",
    STACK,
    "change {EFFECT} effect by {CHANGE}",
    _field("EFFECT"),
    _num("CHANGE"),
)
_add(
    "looks_seteffectto",
    STACK,
    "set {EFFECT} effect to {VALUE}",
    _field("EFFECT"),
    _num("VALUE"),
)
_add("looks_cleargraphiceffects", STACK, "clear graphic effects")
_add("looks_show", STACK, "show")
_add("looks_hide", STACK, "hide")
_add("looks_gotofrontback", STACK, "go to {FRONT_BACK} layer", _field("FRONT_BACK"))
_add(
    "looks_goforwardbackwardlayers",
    STACK,
    "go {FORWARD_BACKWARD} {NUM} layers",
    _field("FORWARD_BACKWARD"),
    _num("NUM"),
)
_add("looks_costumenumbername", REPORTER, "costume {NUMBER_NAME}", _field("NUMBER_NAME"))
_add("looks_backdropnumbername", REPORTER, "backdrop {NUMBER_NAME}", _field("NUMBER_NAME"))
_add("looks_size", REPORTER, "size")

# --- sound ---
_add(
    "sound_playuntildone",
    STACK,
    "play sound {SOUND_MENU} until done",
    _menu("SOUND_MENU", "sound_sounds_menu", "SOUND_MENU"),
)
_add(
    "sound_play",
    STACK,
    "start sound {SOUND_MENU}",
    _menu("SOUND_MENU", "sound_sounds_menu", "SOUND_MENU"),
)
_add("sound_stopallsounds", STACK, "stop all sounds")
_add("sound_changevolumeby", STACK, "change volume by {VOLUME}", _num("VOLUME"))
_add("sound_setvolumeto", STACK, "set volume to {VOLUME} %", _num("VOLUME"))
_add("sound_volume", REPORTER, "volume")

# --- events ---
_add("event_whenflagclicked", HAT, "when green flag clicked")
_add("event_whenkeypressed", HAT, "when {KEY_OPTION} key pressed", _field("KEY_OPTION"))
_add("event_whenthisspriteclicked", HAT, "when this sprite clicked")
_add("event_whenstageclicked", HAT, "when stage clicked")
_add(
    "event_whenbackdropswitchesto",
    HAT,
    "when backdrop switches to {BACKDROP}",
    _field("BACKDROP"),
)
_add(
    "event_whengreaterthan",
    HAT,
    "when {WHENGREATERTHANMENU} > {VALUE}",
    _field("WHENGREATERTHANMENU"),
    _num("VALUE"),
)
_add(
    "event_whenbroadcastreceived",
    HAT,
    "when I receive {BROADCAST_OPTION}",
    _field("BROADCAST_OPTION", entity="broadcast"),
)
_add(
    "event_broadcast",
    STACK,
    "broadcast {BROADCAST_INPUT}",
    SlotSpec("BROADCAST_INPUT", "broadcast", entity="broadcast"),
)
_add(
    "event_broadcastandwait",
    STACK,
    "broadcast {BROADCAST_INPUT} and wait",
    SlotSpec("BROADCAST_INPUT", "broadcast", entity="broadcast"),
)

# --- control ---
_add("control_wait", STACK, "wait {DURATION} seconds", _num("DURATION"))
_add("control_repeat", C_BLOCK, "repeat {TIMES}", _num("TIMES"), substacks=1)
_add("control_forever", C_BLOCK, "forever", substacks=1)
_add("control_if", C_BLOCK, "if {CONDITION} then", _bool("CONDITION"), substacks=1)
_add(
    "control_if_else",
    C_BLOCK,
    "if {CONDITION} then",
    _bool("CONDITION"),
    substacks=2,
)
_add("control_wait_until", STACK, "wait until {CONDITION}", _bool("CONDITION"))
_add(
    "control_repeat_until",
    C_BLOCK,
    "repeat until {CONDITION}",
    _bool("CONDITION"),
    substacks=1,
)
_add("control_stop", CAP, "stop {STOP_OPTION}", _field("STOP_OPTION"))
_add("control_start_as_clone", HAT, "when I start as a clone")
_add(
    "control_create_clone_of",
    STACK,
    "create clone of {CLONE_OPTION}",
    _menu("CLONE_OPTION", "control_create_clone_of_menu", "CLONE_OPTION"),
)
_add("control_delete_this_clone", CAP, "delete this clone")

# --- sensing ---
_add(
    "sensing_touchingobject",
    BOOLEAN,
    "touching {TOUCHINGOBJECTMENU} ?",
    _menu("TOUCHINGOBJECTMENU", "sensing_touchingobjectmenu", "TOUCHINGOBJECTMENU"),
)
_add("sensing_touchingcolor", BOOLEAN, "touching color {COLOR} ?", _color("COLOR"))
_add(
    "sensing_coloristouchingcolor",
    BOOLEAN,
    "color {COLOR} is touching {COLOR2} ?",
    _color("COLOR"),
    _color("COLOR2"),
)
_add(
    "sensing_distanceto",
    REPORTER,
    "distance to {DISTANCETOMENU}",
    _menu("DISTANCETOMENU", "sensing_distancetomenu", "DISTANCETOMENU"),
)
_add("sensing_askandwait", STACK, "ask {QUESTION} and wait", _str("QUESTION"))
_add("sensing_answer", REPORTER, "answer")
_add(
    "sensing_keypressed",
    BOOLEAN,
    "key {KEY_OPTION} pressed?",
    _menu("KEY_OPTION", "sensing_keyoptions", "KEY_OPTION"),
)
_add("sensing_mousedown", BOOLEAN, "mouse down?")
_add("sensing_mousex", REPORTER, "mouse x")
_add("sensing_mousey", REPORTER, "mouse y")
_add("sensing_loudness", REPORTER, "loudness")
_add("sensing_timer", REPORTER, "timer")
_add("sensing_resettimer", STACK, "reset timer")
_add(
    "sensing_of",
    REPORTER,
    "{PROPERTY} of {OBJECT}",
    _field("PROPERTY"),
    _menu("OBJECT", "sensing_of_object_menu", "OBJECT"),
)
_add("sensing_current", REPORTER, "current {CURRENTMENU}", _field("CURRENTMENU"))
_add("sensing_dayssince2000", REPORTER, "days since 2000")
_add("sensing_username", REPORTER, "username")

# --- operators ---
_add("operator_add", REPORTER, "{NUM1} + {NUM2}", _num("NUM1"), _num("NUM2"))
_add("operator_subtract", REPORTER, "{NUM1} - {NUM2}", _num("NUM1"), _num("NUM2"))
_add("operator_multiply", REPORTER, "{NUM1} * {NUM2}", _num("NUM1"), _num("NUM2"))
_add("operator_divide", REPORTER, "{NUM1} / {NUM2}", _num("NUM1"), _num("NUM2"))
_add(
    "operator_random",
    REPORTER,
    "pick random {FROM} to {TO}",
    _num("FROM"),
    _num("TO"),
)
_add("operator_gt", BOOLEAN, "{OPERAND1} > {OPERAND2}", _str("OPERAND1"), _str("OPERAND2"))
_add("operator_lt", BOOLEAN, "{OPERAND1} < {OPERAND2}", _str("OPERAND1"), _str("OPERAND2"))
_add(
    "operator_equals",
    BOOLEAN,
    "{OPERAND1} = {OPERAND2}",
    _str("OPERAND1"),
    _str("OPERAND2"),
)
_add("operator_and", BOOLEAN, "{OPERAND1} and {OPERAND2}", _bool("OPERAND1"), _bool("OPERAND2"))
_add("operator_or", BOOLEAN, "{OPERAND1} or {OPERAND2}", _bool("OPERAND1"), _bool("OPERAND2"))
_add("operator_not", BOOLEAN, "not {OPERAND}", _bool("OPERAND"))
_add("operator_join", REPORTER, "join {STRING1} {STRING2}", _str("STRING1"), _str("STRING2"))
_add(
    "operator_letter_of",
    REPORTER,
    "letter {LETTER} of {STRING}",
    _num("LETTER"),
    _str("STRING"),
)
_add("operator_length", REPORTER, "length of {STRING}", _str("STRING"))
_add(
    "operator_contains",
    BOOLEAN,
    "{STRING1} contains {STRING2} ?",
    _str("STRING1"),
    _str("STRING2"),
)
_add("operator_mod", REPORTER, "{NUM1} mod {NUM2}", _num("NUM1"), _num("NUM2"))
_add("operator_round", REPORTER, "round {NUM}", _num("NUM"))
_add("operator_mathop", REPORTER, "{OPERATOR} of {NUM}", _field("OPERATOR"), _num("NUM"))

# --- variables ---
_add("data_variable", REPORTER, "{VARIABLE}", _field("VARIABLE", entity="variable"))
_add(
    "data_setvariableto",
    STACK,
    "set {VARIABLE} to {VALUE}",
    _field("VARIABLE", entity="variable"),
    _str("VALUE"),
)
_add(
    "data_changevariableby",
    STACK,
    "change {VARIABLE} by {VALUE}",
    _field("VARIABLE", entity="variable"),
    _num("VALUE"),
)
_add(
    "data_showvariable",
    STACK,
    "show variable {VARIABLE}",
    _field("VARIABLE", entity="variable"),
)
_add(
    "data_hidevariable",
    STACK,
    "hide variable {VARIABLE}",
    _field("VARIABLE", entity="variable"),
)

# --- lists ---
_add("data_listcontents", REPORTER, "{LIST}", _field("LIST", entity="list"))
_add(
    "data_addtolist",
    STACK,
    "add {ITEM} to {LIST}",
    _str("ITEM"),
    _field("LIST", entity="list"),
)
_add(
    "data_deleteoflist",
    STACK,
    "delete {INDEX} of {LIST}",
    _num("INDEX"),
    _field("LIST", entity="list"),
)
_add("data_deletealloflist", STACK, "delete all of {LIST}", _field("LIST", entity="list"))
_add(
    "data_insertatlist",
    STACK,
    "insert {ITEM} at {INDEX} of {LIST}",
    _str("ITEM"),
    _num("INDEX"),
    _field("LIST", entity="list"),
)
_add(
    "data_replaceitemoflist",
    STACK,
    "replace item {INDEX} of {LIST} with {ITEM}",
    _num("INDEX"),
    _field("LIST", entity="list"),
    _str("ITEM"),
)
_add(
    "data_itemoflist",
    REPORTER,
    "item {INDEX} of {LIST}",
    _num("INDEX"),
    _field("LIST", entity="list"),
)
_add(
    "data_itemnumoflist",
    REPORTER,
    "item # of {ITEM} in {LIST}",
    _str("ITEM"),
    _field("LIST", entity="list"),
)
_add("data_lengthoflist", REPORTER, "length of {LIST}", _field("LIST", entity="list"))
_add(
    "data_listcontainsitem",
    BOOLEAN,
    "{LIST} contains {ITEM} ?",
    _field("LIST", entity="list"),
    _str("ITEM"),
)
_add("data_showlist", STACK, "show list {LIST}", _field("LIST", entity="list"))
_add("data_hidelist", STACK, "hide list {LIST}", _field("LIST", entity="list"))

# --- my blocks ---
_add(
    "procedures_definition",
    HAT,
    "define {PROCCODE}",
    _field("PROCCODE", entity="procedure"),
)
_add("procedures_call", STACK, "call {PROCCODE}", _field("PROCCODE", entity="procedure"))
_add(
    "argument_reporter_string_number",
    REPORTER,
    "{VALUE}",
    _field("VALUE"),
)
_add("argument_reporter_boolean", BOOLEAN, "{VALUE}", _field("VALUE"))

_BY_OPCODE: dict[str, CatalogEntry] = {e.opcode: e for e in _ENTRIES}

# shadow menu opcode -> the field inside it holding the chosen value
MENU_OPCODES: dict[str, str] = {}
for _entry in _ENTRIES:
    for _slot in _entry.slots:
        if _slot.kind == "menu" and _slot.menu_opcode:
            MENU_OPCODES[_slot.menu_opcode] = _slot.menu_field or _slot.name

COMMUTATIVE_OPCODES: dict[str, tuple[str, str]] = {
    "operator_add": ("NUM1", "NUM2"),
    "operator_multiply": ("NUM1", "NUM2"),
    "operator_and": ("OPERAND1", "OPERAND2"),
    "operator_or": ("OPERAND1", "OPERAND2"),
    "operator_equals": ("OPERAND1", "OPERAND2"),
}


def lookup(opcode: str) -> CatalogEntry | None:
    """Catalog entry for an opcode, or None for unknown/extension opcodes."""
    return _BY_OPCODE.get(opcode)


def is_hat(opcode: str) -> bool:
    entry = lookup(opcode)
    return entry is not None and entry.shape == HAT


def is_known(opcode: str) -> bool:
    return opcode in _BY_OPCODE


def color_for(category: str) -> str:
    return CATEGORY_COLORS.get(category, CATEGORY_COLORS["unknown"])


def all_opcodes() -> list[str]:
    return list(_BY_OPCODE)
