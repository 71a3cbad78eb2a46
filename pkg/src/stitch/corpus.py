"""Seeded-bug fixture corpus: ten project pairs, one planted bug each.

Each pair is a small game built at realistic scale (several sprites, roughly
a hundred and fifty blocks) where the student version differs from the
teacher version by exactly one behavioral defect. The bug categories cover
the usual novice failure modes: runaway clones, wrong color/coordinate
parameters, missing scripts or blocks, reversed conditions, stale state,
broadcast name mismatches, and misordered statements.

``build_pairs`` returns the pairs in memory; ``write_corpus`` lays them out
on disk as .sb3 containers plus an ``expected.json`` descriptor per pair,
alongside a set of equivalence variants (renamed/commuted/rewritten/noisy
copies of correct projects) that must diff clean.
"""

from __future__ import annotations

import copy
import json
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from . import mutate, sb3
from .build import blk, bcast, color, lit, menu, on_clone, on_flag, on_key, on_receive, project, script, sprite, stage, var
from .model import ProjectAst, Script


@dataclass(frozen=True)
class ExpectedBug:
    """What the top report item should look like for a seeded pair."""

    level: str
    kinds: tuple[str, ...]
    sprite: str

    def matches(self, item) -> bool:
        return (
            item.level == self.level
            and item.kind in self.kinds
            and item.location.sprite_name == self.sprite
        )

    def to_json(self) -> dict:
        return {"level": self.level, "kinds": list(self.kinds), "sprite": self.sprite}


@dataclass(frozen=True)
class FixturePair:
    name: str
    description: str
    expected: ExpectedBug
    _builder: Callable[[], tuple[ProjectAst, ProjectAst]]

    def build(self) -> tuple[ProjectAst, ProjectAst]:
        """Returns (student, teacher)."""
        return self._builder()


# --------------------------------------------------------------------------
# shared scenery
# --------------------------------------------------------------------------


def _title_sprite(start_message: str) -> "sprite":
    return sprite(
        "AAtitle",
        on_flag(
            blk("looks_gotofrontback", "front"),
            blk("motion_gotoxy", 0, 120),
            blk("looks_setsizeto", 140),
            blk("looks_seteffectto", "GHOST", 0),
            blk("looks_show"),
        ),
        on_flag(
            blk(
                "control_forever",
                sub=[
                    blk("looks_changesizeby", 4),
                    blk("control_wait", 0.3),
                    blk("looks_changesizeby", -4),
                    blk("control_wait", 0.3),
                ],
            ),
        ),
        script(
            "event_whenthisspriteclicked",
            blk("sound_play", "blip"),
            blk("event_broadcast", start_message),
            blk("looks_hide"),
        ),
        on_receive(start_message, blk("looks_hide")),
    )


def _particles_sprite(trigger_message: str) -> "sprite":
    return sprite(
        "ZZsparkle",
        on_flag(blk("looks_hide"), blk("looks_setsizeto", 40)),
        on_receive(
            trigger_message,
            blk(
                "control_repeat",
                6,
                sub=[
                    blk("control_create_clone_of", "_myself_"),
                    blk("control_wait", 0.2),
                ],
            ),
        ),
        on_clone(
            blk("motion_gotoxy", blk("operator_random", -220, 220), blk("operator_random", -40, 160)),
            blk("looks_show"),
            blk(
                "control_repeat",
                10,
                sub=[
                    blk("motion_changeyby", -6),
                    blk("motion_turnright", 12),
                    blk("looks_changeeffectby", "GHOST", 10),
                ],
            ),
            blk("control_delete_this_clone"),
        ),
    )


def _scenery_sprite(name: str, y: int, drift: int) -> "sprite":
    return sprite(
        name,
        on_flag(
            blk("looks_show"),
            blk("motion_gotoxy", 240, y),
            blk("looks_gotofrontback", "back"),
            blk(
                "control_forever",
                sub=[
                    blk("motion_changexby", -drift),
                    blk(
                        "control_if",
                        blk("operator_lt", blk("motion_xposition"), -240),
                        sub=[blk("motion_setx", 240)],
                    ),
                ],
            ),
        ),
        on_flag(
            blk(
                "control_forever",
                sub=[
                    blk("looks_switchcostumeto", f"{name}-a"),
                    blk("control_wait", 0.4),
                    blk("looks_switchcostumeto", f"{name}-b"),
                    blk("control_wait", 0.4),
                ],
            ),
        ),
        on_flag(
            blk("looks_seteffectto", "GHOST", 20),
            blk(
                "control_forever",
                sub=[
                    blk("looks_changeeffectby", "GHOST", 10),
                    blk("control_wait", 0.8),
                    blk("looks_changeeffectby", "GHOST", -10),
                    blk("control_wait", 0.8),
                ],
            ),
        ),
    )


def _hud_sprite(score_var: str, start_message: str) -> "sprite":
    return sprite(
        "ZZhud",
        on_flag(
            blk("motion_gotoxy", 170, 150),
            blk("looks_gotofrontback", "front"),
            blk("looks_setsizeto", 90),
            blk("looks_show"),
        ),
        on_receive(
            start_message,
            blk(
                "control_forever",
                sub=[
                    blk(
                        "looks_say",
                        blk("operator_join", "score: ", var(score_var)),
                    ),
                    blk("control_wait", 0.5),
                ],
            ),
        ),
        on_flag(
            blk(
                "control_forever",
                sub=[
                    blk(
                        "control_if",
                        blk("operator_gt", var(score_var), 9),
                        sub=[blk("looks_switchcostumeto", "hud-gold")],
                    ),
                    blk("control_wait", 1),
                ],
            ),
        ),
    )


def _game_stage(start_message: str, over_message: str, pinned_vars: tuple[str, ...] = ()) -> "stage":
    flag_body = [blk("data_showvariable", var(name)) for name in pinned_vars]
    flag_body += [
        blk("looks_switchbackdropto", "arena"),
        blk("sound_setvolumeto", 80),
        blk("sound_play", "theme"),
        blk("data_setvariableto", var("elapsed"), 0),
    ]
    return stage(
        on_flag(*flag_body),
        on_receive(
            start_message,
            blk(
                "control_forever",
                sub=[
                    blk("control_wait", 1),
                    blk("data_changevariableby", var("elapsed"), 1),
                ],
            ),
        ),
        on_receive(
            over_message,
            blk("looks_switchbackdropto", "game over"),
            blk("sound_stopallsounds"),
            blk("data_hidevariable", var("elapsed")),
        ),
        on_key(
            "m",
            blk("sound_setvolumeto", 0),
            blk("looks_sayforsecs", "muted", 1),
        ),
        on_key(
            "n",
            blk("sound_setvolumeto", 80),
            blk("looks_sayforsecs", "sound on", 1),
        ),
        on_receive(
            start_message,
            blk("looks_switchbackdropto", "arena"),
            blk("sound_changevolumeby", 10),
        ),
        variables={"elapsed": 0},
    )


# --------------------------------------------------------------------------
# the ten games
# --------------------------------------------------------------------------


def _clone_wars() -> tuple[ProjectAst, ProjectAst]:
    """Clone Wars: the spawner duplicates its clone block, so drones pile up."""
    spawner = sprite(
        "Hangar",
        on_receive(
            "battle",
            blk("looks_hide"),
            blk(
                "control_forever",
                sub=[
                    blk("control_wait", 1),
                    blk("control_create_clone_of", "Drone"),
                ],
            ),
        ),
    )
    drone = sprite(
        "Drone",
        on_flag(blk("looks_hide")),
        on_clone(
            blk("looks_show"),
            blk("motion_gotoxy", 0, 160),
            blk("motion_pointindirection", 180),
            blk(
                "control_repeat",
                40,
                sub=[
                    blk("motion_movesteps", 8),
                    blk("control_if", blk("sensing_touchingobject", "edge"), sub=[blk("motion_ifonedgebounce")]),
                ],
            ),
            blk("control_delete_this_clone"),
        ),
    )
    ship = sprite(
        "Ship",
        on_flag(blk("motion_gotoxy", 0, -140), blk("looks_show")),
        on_key("left arrow", blk("motion_changexby", -12)),
        on_key("right arrow", blk("motion_changexby", 12)),
        on_key("space", blk("event_broadcast", "pew"), blk("sound_play", "laser")),
        on_receive("pew", blk("looks_switchcostumeto", "ship-fire"), blk("control_wait", 0.1), blk("looks_switchcostumeto", "ship-idle")),
    )
    teacher = project(
        _game_stage("battle", "wrecked"),
        _title_sprite("battle"),
        _scenery_sprite("Stars", 60, 1),
        _scenery_sprite("Nebula", -40, 2),
        spawner,
        drone,
        ship,
        _particles_sprite("wrecked"),
        _hud_sprite("hull", "battle"),
    )
    teacher.stage.variables.setdefault("hull", 3)

    student = copy.deepcopy(teacher)
    loop = student.target("Hangar").scripts[0].body.blocks[1]
    clone_block = copy.deepcopy(loop.substacks[0].blocks[1])
    loop.substacks[0].blocks.append(clone_block)
    return student, teacher


def _bat_maze() -> tuple[ProjectAst, ProjectAst]:
    """Bat Maze: the wall-collision check tests the wrong color."""
    bat = sprite(
        "Bat",
        on_receive(
            "fly",
            blk("looks_show"),
            blk("motion_gotoxy", -200, -140),
            blk(
                "control_forever",
                sub=[
                    blk("motion_pointtowards", "mouse-pointer"),
                    blk("motion_movesteps", 4),
                    blk(
                        "control_if",
                        blk("sensing_touchingcolor", color("#1a5c30")),
                        sub=[
                            blk("sound_play", "squeak"),
                            blk("motion_gotoxy", -200, -140),
                        ],
                    ),
                    blk(
                        "control_if",
                        blk("sensing_touchingobject", "Exit"),
                        sub=[blk("event_broadcast", "escaped")],
                    ),
                ],
            ),
        ),
        on_flag(
            blk(
                "control_forever",
                sub=[
                    blk("looks_switchcostumeto", "wings-up"),
                    blk("control_wait", 0.2),
                    blk("looks_switchcostumeto", "wings-down"),
                    blk("control_wait", 0.2),
                ],
            ),
        ),
    )
    exit_door = sprite(
        "Exit",
        on_flag(blk("motion_gotoxy", 210, 150), blk("looks_show")),
        on_receive("escaped", blk("looks_say", "you made it!"), blk("sound_play", "tada")),
    )
    maze = sprite(
        "Maze",
        on_flag(
            blk("motion_gotoxy", 0, 0),
            blk("looks_gotofrontback", "back"),
            blk("looks_goforwardbackwardlayers", "forward", 1),
            blk("looks_show"),
        ),
    )
    teacher = project(
        _game_stage("fly", "escaped"),
        _title_sprite("fly"),
        _scenery_sprite("Fog", 100, 1),
        _scenery_sprite("Drips", -120, 1),
        bat,
        exit_door,
        maze,
        _particles_sprite("escaped"),
        _hud_sprite("tries", "fly"),
    )
    teacher.stage.variables.setdefault("tries", 0)

    student = copy.deepcopy(teacher)
    check = student.target("Bat").scripts[0].body.blocks[2].substacks[0].blocks[2]
    check.inputs[0].value.inputs[0].value = color("#d6a14b")
    return student, teacher


def _ping_pong() -> tuple[ProjectAst, ProjectAst]:
    """Ping Pong: the right paddle never got its movement script."""
    ball = sprite(
        "Ball",
        on_receive(
            "serve",
            blk("looks_show"),
            blk("motion_gotoxy", 0, 0),
            blk("motion_pointindirection", 75),
            blk(
                "control_forever",
                sub=[
                    blk("motion_movesteps", 10),
                    blk("motion_ifonedgebounce"),
                    blk(
                        "control_if",
                        blk("sensing_touchingobject", "PaddleL"),
                        sub=[blk("motion_pointindirection", 80), blk("sound_play", "ping")],
                    ),
                    blk(
                        "control_if",
                        blk("sensing_touchingobject", "PaddleR"),
                        sub=[blk("motion_pointindirection", -80), blk("sound_play", "pong")],
                    ),
                ],
            ),
        ),
    )
    paddle_left = sprite(
        "PaddleL",
        on_flag(blk("motion_gotoxy", -215, 0), blk("looks_show")),
        on_key("w", blk("motion_changeyby", 18)),
        on_key("s", blk("motion_changeyby", -18)),
    )
    paddle_right = sprite(
        "PaddleR",
        on_flag(blk("motion_gotoxy", 215, 0), blk("looks_show")),
        on_key("up arrow", blk("motion_changeyby", 18)),
        on_key("down arrow", blk("motion_changeyby", -18)),
    )
    teacher = project(
        _game_stage("serve", "out"),
        _title_sprite("serve"),
        _scenery_sprite("Net", 0, 0),
        _scenery_sprite("Crowd", 140, 1),
        ball,
        paddle_left,
        paddle_right,
        _particles_sprite("out"),
        _hud_sprite("rally", "serve"),
    )
    teacher.stage.variables.setdefault("rally", 0)

    student = copy.deepcopy(teacher)
    paddle = student.target("PaddleR")
    paddle.scripts = [s for s in paddle.scripts if s.trigger.hat_opcode != "event_whenkeypressed"] + [
        s for s in paddle.scripts if s.trigger.hat_opcode == "event_whenkeypressed"
    ][1:]
    return student, teacher


def _maze_game() -> tuple[ProjectAst, ProjectAst]:
    """Maze Game: after losing a life the explorer respawns at the wrong spot."""
    explorer = sprite(
        "Explorer",
        on_receive(
            "explore",
            blk("looks_show"),
            blk("motion_gotoxy", -205, -150),
            blk("motion_pointindirection", 90),
        ),
        on_key("up arrow", blk("motion_changeyby", 8)),
        on_key("down arrow", blk("motion_changeyby", -8)),
        on_key("left arrow", blk("motion_changexby", -8)),
        on_key("right arrow", blk("motion_changexby", 8)),
        on_receive(
            "caught",
            blk("sound_play", "ouch"),
            blk("data_changevariableby", var("lives"), -1),
            blk("motion_gotoxy", -205, -150),
            blk(
                "control_if",
                blk("operator_lt", var("lives"), 1),
                sub=[blk("event_broadcast", "lost")],
            ),
        ),
    )
    guard = sprite(
        "Guard",
        on_receive(
            "explore",
            blk("looks_show"),
            blk("motion_gotoxy", 60, 40),
            blk(
                "control_forever",
                sub=[
                    blk("motion_glidesecstoxy", 2, 60, -120),
                    blk("motion_glidesecstoxy", 2, 60, 40),
                ],
            ),
        ),
        on_flag(
            blk(
                "control_forever",
                sub=[
                    blk(
                        "control_if",
                        blk("sensing_touchingobject", "Explorer"),
                        sub=[blk("event_broadcast", "caught"), blk("control_wait", 1)],
                    ),
                ],
            ),
        ),
    )
    teacher = project(
        _game_stage("explore", "lost", pinned_vars=("lives",)),
        _title_sprite("explore"),
        _scenery_sprite("Torch", -100, 0),
        _scenery_sprite("Cobwebs", 130, 0),
        explorer,
        guard,
        sprite("Walls", on_flag(blk("motion_gotoxy", 0, 0), blk("looks_gotofrontback", "back"), blk("looks_show"))),
        _particles_sprite("lost"),
        _hud_sprite("lives", "explore"),
    )
    teacher.stage.variables.setdefault("lives", 3)

    student = copy.deepcopy(teacher)
    respawn = student.target("Explorer").scripts[-1].body.blocks[2]
    respawn.inputs[0].value = lit(0)
    respawn.inputs[1].value = lit(0)
    return student, teacher


def _apple_farm() -> tuple[ProjectAst, ProjectAst]:
    """Apple Farm: the drop handler never re-broadcasts, so only one apple falls."""
    apple = sprite(
        "Apple",
        on_receive(
            "drop",
            blk("looks_show"),
            blk("motion_gotoxy", blk("operator_random", -200, 200), 160),
            blk(
                "control_repeat_until",
                blk(
                    "operator_or",
                    blk("sensing_touchingobject", "Basket"),
                    blk("operator_lt", blk("motion_yposition"), -150),
                ),
                sub=[blk("motion_changeyby", -6)],
            ),
            blk(
                "control_if",
                blk("sensing_touchingobject", "Basket"),
                sub=[
                    blk("data_changevariableby", var("picked"), 1),
                    blk("sound_play", "plop"),
                ],
            ),
            blk("looks_hide"),
            blk("control_wait", 0.5),
            blk("event_broadcast", "drop"),
        ),
    )
    basket = sprite(
        "Basket",
        on_flag(blk("motion_gotoxy", 0, -130), blk("looks_show")),
        on_flag(
            blk(
                "control_forever",
                sub=[blk("motion_setx", blk("sensing_mousex"))],
            ),
        ),
    )
    farmer = sprite(
        "Farmer",
        on_flag(blk("motion_gotoxy", -180, -100), blk("looks_show")),
        script(
            "event_whenthisspriteclicked",
            blk("looks_say", "here they come!"),
            blk("event_broadcast", "drop"),
        ),
    )
    teacher = project(
        _game_stage("harvest", "done", pinned_vars=("picked",)),
        _title_sprite("harvest"),
        _scenery_sprite("Clouds", 120, 1),
        _scenery_sprite("Leaves", 40, 2),
        apple,
        basket,
        farmer,
        _particles_sprite("done"),
        _hud_sprite("picked", "harvest"),
    )
    teacher.stage.variables.setdefault("picked", 0)

    student = copy.deepcopy(teacher)
    body = student.target("Apple").scripts[0].body
    body.blocks = body.blocks[:-1]
    return student, teacher


def _super_mario() -> tuple[ProjectAst, ProjectAst]:
    """Super Mario: the fall-off-the-world check is reversed."""
    mario = sprite(
        "Mario",
        on_receive(
            "go",
            blk("looks_show"),
            blk("motion_gotoxy", -190, -60),
            blk(
                "control_forever",
                sub=[
                    blk("motion_changeyby", var("gravity")),
                    blk(
                        "control_if",
                        blk("sensing_touchingobject", "Bricks"),
                        sub=[blk("motion_changeyby", blk("operator_multiply", var("gravity"), -1))],
                    ),
                    blk(
                        "control_if",
                        blk("operator_lt", blk("motion_yposition"), -160),
                        sub=[blk("event_broadcast", "fell")],
                    ),
                ],
            ),
        ),
        on_key("right arrow", blk("motion_changexby", 10)),
        on_key("left arrow", blk("motion_changexby", -10)),
        on_key("space", blk("motion_changeyby", 60), blk("sound_play", "jump")),
    )
    bricks = sprite(
        "Bricks",
        on_flag(blk("motion_gotoxy", 0, -120), blk("looks_gotofrontback", "back"), blk("looks_show")),
    )
    goomba = sprite(
        "Goomba",
        on_receive(
            "go",
            blk("looks_show"),
            blk("motion_gotoxy", 200, -130),
            blk(
                "control_forever",
                sub=[
                    blk("motion_glidesecstoxy", 3, -200, -130),
                    blk("motion_glidesecstoxy", 3, 200, -130),
                ],
            ),
        ),
    )
    teacher = project(
        _game_stage("go", "fell", pinned_vars=("gravity",)),
        _title_sprite("go"),
        _scenery_sprite("Hills", 90, 1),
        _scenery_sprite("Pipes", -90, 1),
        mario,
        bricks,
        goomba,
        _particles_sprite("fell"),
        _hud_sprite("coins", "go"),
    )
    teacher.stage.variables.setdefault("gravity", -4)
    teacher.stage.variables.setdefault("coins", 0)

    student = copy.deepcopy(teacher)
    fall_check = student.target("Mario").scripts[0].body.blocks[2].substacks[0].blocks[2]
    fall_check.inputs[0].value.opcode = "operator_gt"
    return student, teacher


def _snake_game() -> tuple[ProjectAst, ProjectAst]:
    """Snake: death should trigger on walls or on the snake's own tail."""
    snake = sprite(
        "Snake",
        on_receive(
            "slither",
            blk("looks_show"),
            blk("motion_gotoxy", 0, 0),
            blk("motion_pointindirection", 90),
            blk(
                "control_forever",
                sub=[
                    blk("motion_movesteps", 5),
                    blk("control_create_clone_of", "Tail"),
                    blk(
                        "control_if",
                        blk(
                            "operator_or",
                            blk("sensing_touchingobject", "edge"),
                            blk("sensing_touchingobject", "Tail"),
                        ),
                        sub=[blk("event_broadcast", "dead")],
                    ),
                ],
            ),
        ),
        on_key("up arrow", blk("motion_pointindirection", 0)),
        on_key("down arrow", blk("motion_pointindirection", 180)),
        on_key("left arrow", blk("motion_pointindirection", -90)),
        on_key("right arrow", blk("motion_pointindirection", 90)),
    )
    tail = sprite(
        "Tail",
        on_flag(blk("looks_hide")),
        on_clone(
            blk("looks_show"),
            blk("motion_goto", "Snake"),
            blk("control_wait", 2),
            blk("control_delete_this_clone"),
        ),
    )
    mouse = sprite(
        "Mouse",
        on_receive(
            "slither",
            blk("looks_show"),
            blk(
                "control_forever",
                sub=[
                    blk("motion_gotoxy", blk("operator_random", -220, 220), blk("operator_random", -160, 160)),
                    blk("control_wait_until", blk("sensing_touchingobject", "Snake")),
                    blk("data_changevariableby", var("length"), 1),
                    blk("sound_play", "nibble"),
                ],
            ),
        ),
    )
    teacher = project(
        _game_stage("slither", "dead", pinned_vars=("length",)),
        _title_sprite("slither"),
        _scenery_sprite("Grass", -150, 0),
        _scenery_sprite("Pebbles", -170, 1),
        snake,
        tail,
        mouse,
        _particles_sprite("dead"),
        _hud_sprite("length", "slither"),
    )
    teacher.stage.variables.setdefault("length", 1)

    student = copy.deepcopy(teacher)
    death = student.target("Snake").scripts[0].body.blocks[3].substacks[0].blocks[2]
    condition = death.inputs[0].value
    death.inputs[0].value = condition.inputs[0].value  # drops the tail check
    return student, teacher


def _scratch_clicker() -> tuple[ProjectAst, ProjectAst]:
    """Scratch Clicker: restarting the game forgets to reset the counter."""
    button = sprite(
        "Button",
        on_flag(
            blk("motion_gotoxy", 0, -20),
            blk("looks_setsizeto", 150),
            blk("data_setvariableto", var("clicks"), 0),
            blk("looks_show"),
        ),
        script(
            "event_whenthisspriteclicked",
            blk("data_changevariableby", var("clicks"), 1),
            blk("sound_play", "pop"),
            blk("looks_setsizeto", 135),
            blk("control_wait", 0.05),
            blk("looks_setsizeto", 150),
            blk(
                "control_if",
                blk("operator_gt", var("clicks"), var("record")),
                sub=[blk("data_setvariableto", var("record"), var("clicks"))],
            ),
        ),
    )
    shop = sprite(
        "Shop",
        on_flag(blk("motion_gotoxy", -170, 120), blk("looks_show")),
        script(
            "event_whenthisspriteclicked",
            blk(
                "control_if_else",
                blk("operator_gt", var("clicks"), 49),
                sub=[
                    blk("data_changevariableby", var("clicks"), -50),
                    blk("event_broadcast", "upgrade"),
                ],
                sub2=[blk("looks_sayforsecs", "need 50 clicks", 2)],
            ),
        ),
        on_receive("upgrade", blk("looks_switchcostumeto", "shop-lit"), blk("sound_play", "chaching")),
    )
    teacher = project(
        _game_stage("clickfest", "closed", pinned_vars=("clicks", "record")),
        _title_sprite("clickfest"),
        _scenery_sprite("Confetti", 140, 2),
        _scenery_sprite("Banner", 100, 1),
        button,
        shop,
        _particles_sprite("upgrade"),
        _hud_sprite("clicks", "clickfest"),
    )
    teacher.stage.variables.setdefault("clicks", 0)
    teacher.stage.variables.setdefault("record", 0)

    student = copy.deepcopy(teacher)
    flag_body = student.target("Button").scripts[0].body
    flag_body.blocks = [b for b in flag_body.blocks if b.opcode != "data_setvariableto"]
    return student, teacher


def _cat_adventure() -> tuple[ProjectAst, ProjectAst]:
    """Cat Adventure: the cat listens for a message nobody sends."""
    bell = sprite(
        "Bell",
        on_flag(blk("motion_gotoxy", 150, 120), blk("looks_show")),
        script(
            "event_whenthisspriteclicked",
            blk("sound_play", "ding"),
            blk("event_broadcast", "adventure"),
        ),
    )
    cat = sprite(
        "Cat",
        on_flag(blk("motion_gotoxy", -180, -80), blk("looks_show")),
        on_receive(
            "adventure",
            blk("looks_say", "off we go!"),
            blk("motion_pointindirection", 90),
            blk(
                "control_repeat",
                30,
                sub=[
                    blk("motion_movesteps", 6),
                    blk("looks_nextcostume"),
                    blk("control_wait", 0.1),
                ],
            ),
            blk("event_broadcast", "arrived"),
        ),
    )
    owl = sprite(
        "Owl",
        on_receive(
            "arrived",
            blk("looks_show"),
            blk("looks_sayforsecs", "welcome to the forest", 2),
            blk("sound_play", "hoot"),
        ),
        on_flag(blk("looks_hide")),
    )
    teacher = project(
        _game_stage("adventure", "arrived"),
        _title_sprite("adventure"),
        _scenery_sprite("Forest", 80, 1),
        _scenery_sprite("Fireflies", -30, 1),
        bell,
        cat,
        owl,
        _particles_sprite("arrived"),
        _hud_sprite("treats", "adventure"),
    )
    teacher.stage.variables.setdefault("treats", 0)

    student = copy.deepcopy(teacher)
    receiver = student.target("Cat").scripts[1]
    receiver.hat.fields[0].value = "quest"
    receiver.hat.fields[0].ref = bcast("quest")
    student.broadcasts.append("quest")
    return student, teacher


def _platformer() -> tuple[ProjectAst, ProjectAst]:
    """Platformer: setup steps run in the wrong order, so the hero starts
    visible mid-air in the wrong costume."""
    hero = sprite(
        "Hero",
        on_flag(
            blk("motion_gotoxy", -190, -40),
            blk("looks_switchcostumeto", "stand"),
            blk("looks_show"),
        ),
        on_receive(
            "run",
            blk(
                "control_forever",
                sub=[
                    blk("motion_changeyby", -5),
                    blk(
                        "control_if",
                        blk("sensing_touchingobject", "Ground"),
                        sub=[blk("motion_changeyby", 5)],
                    ),
                ],
            ),
        ),
        on_key("right arrow", blk("motion_changexby", 9), blk("looks_nextcostume")),
        on_key("left arrow", blk("motion_changexby", -9), blk("looks_nextcostume")),
        on_key("up arrow", blk("motion_changeyby", 55)),
    )
    ground = sprite(
        "Ground",
        on_flag(blk("motion_gotoxy", 0, -150), blk("looks_gotofrontback", "back"), blk("looks_show")),
    )
    flagpole = sprite(
        "Flagpole",
        on_flag(blk("motion_gotoxy", 215, -80), blk("looks_show")),
        on_receive(
            "run",
            blk(
                "control_forever",
                sub=[
                    blk(
                        "control_if",
                        blk("sensing_touchingobject", "Hero"),
                        sub=[blk("event_broadcast", "finish"), blk("sound_play", "fanfare")],
                    ),
                ],
            ),
        ),
    )
    teacher = project(
        _game_stage("run", "finish"),
        _title_sprite("run"),
        _scenery_sprite("Peaks", 110, 1),
        _scenery_sprite("Birds", 150, 2),
        hero,
        ground,
        flagpole,
        _particles_sprite("finish"),
        _hud_sprite("gems", "run"),
    )
    teacher.stage.variables.setdefault("gems", 0)

    student = copy.deepcopy(teacher)
    setup = student.target("Hero").scripts[0].body
    setup.blocks = [setup.blocks[1], setup.blocks[2], setup.blocks[0]]
    return student, teacher


PAIRS: list[FixturePair] = [
    FixturePair(
        "clone-wars",
        "Cloned sprites accumulate over time",
        ExpectedBug("BLOCK", ("EXTRA",), "Hangar"),
        _clone_wars,
    ),
    FixturePair(
        "bat-maze",
        "Wrong picked color",
        ExpectedBug("PARAMETER", ("MODIFIED",), "Bat"),
        _bat_maze,
    ),
    FixturePair(
        "ping-pong",
        "Moving scripts missed",
        ExpectedBug("SCRIPT", ("MISSING",), "PaddleR"),
        _ping_pong,
    ),
    FixturePair(
        "maze-game",
        "Wrong respawn location",
        ExpectedBug("PARAMETER", ("MODIFIED",), "Explorer"),
        _maze_game,
    ),
    FixturePair(
        "apple-farm",
        "Missing re-transmission logic",
        ExpectedBug("BLOCK", ("MISSING",), "Apple"),
        _apple_farm,
    ),
    FixturePair(
        "super-mario",
        "Reversed logic condition",
        ExpectedBug("PARAMETER", ("MODIFIED",), "Mario"),
        _super_mario,
    ),
    FixturePair(
        "snake-game",
        "Wrong death determination logic",
        ExpectedBug("PARAMETER", ("MODIFIED",), "Snake"),
        _snake_game,
    ),
    FixturePair(
        "scratch-clicker",
        "Value carries over after reset",
        ExpectedBug("BLOCK", ("MISSING",), "Button"),
        _scratch_clicker,
    ),
    FixturePair(
        "cat-adventure",
        "Message mismatch",
        ExpectedBug("SCRIPT", ("MISSING",), "Cat"),
        _cat_adventure,
    ),
    FixturePair(
        "platformer",
        "Misordered scripts",
        ExpectedBug("BLOCK", ("MISSING", "EXTRA"), "Hero"),
        _platformer,
    ),
]


def build_pairs() -> list[tuple[FixturePair, ProjectAst, ProjectAst]]:
    """All seeded pairs as (descriptor, student, teacher)."""
    return [(pair, *pair.build()) for pair in PAIRS]


def build_demo_pair() -> tuple[ProjectAst, ProjectAst]:
    """Tiny single-bug pair used by UI walkthroughs: the classic 'move (3)
    steps' where the target says 'move (10) steps'."""
    teacher = project(
        sprite(
            "Cat",
            on_flag(
                blk("looks_show"),
                blk("motion_movesteps", 10),
                blk("looks_say", "off I go"),
            ),
        ),
    )
    student = copy.deepcopy(teacher)
    student.target("Cat").scripts[0].body.blocks[1].inputs[0].value = lit(3)
    return student, teacher


def build_equivalence_variants() -> list[tuple[str, ProjectAst, ProjectAst]]:
    """Ten (variant, original) pairs that must diff as functionally equivalent.

    Variants cycle through renaming, commuting, boolean rewrites, pure noise,
    and seeded combinations of all four.
    """
    variants: list[tuple[str, ProjectAst, ProjectAst]] = []
    recipes = [
        ("alpha-rename", (mutate.rename_entities,)),
        ("commute", (mutate.commute_operands,)),
        ("demorgan", (mutate.rewrite_booleans,)),
        ("noise", (mutate.add_noise,)),
    ]
    for i, pair in enumerate(PAIRS):
        _, teacher = pair.build()
        if i < len(recipes):
            label, steps = recipes[i]
        else:
            label, steps = "combined", tuple(step for _, s in recipes for step in s)
        rng = random.Random(1000 + i)
        variant = copy.deepcopy(teacher)
        for step in steps:
            variant = step(variant, rng)
        variants.append((f"{pair.name}-{label}", variant, teacher))
    return variants


def write_corpus(root: str | Path) -> dict:
    """Write pairs/ and variants/ with .sb3 containers and descriptors."""
    root = Path(root)
    summary = {"pairs": [], "variants": []}
    for pair, student, teacher in build_pairs():
        pair_dir = root / "pairs" / pair.name
        pair_dir.mkdir(parents=True, exist_ok=True)
        (pair_dir / "student.sb3").write_bytes(sb3.pack_project(student))
        (pair_dir / "teacher.sb3").write_bytes(sb3.pack_project(teacher))
        (pair_dir / "expected.json").write_text(
            json.dumps(
                {"description": pair.description, "expected": pair.expected.to_json()},
                indent=2,
            )
        )
        summary["pairs"].append(pair.name)
    for name, variant, original in build_equivalence_variants():
        variant_dir = root / "variants" / name
        variant_dir.mkdir(parents=True, exist_ok=True)
        (variant_dir / "student.sb3").write_bytes(sb3.pack_project(variant))
        (variant_dir / "teacher.sb3").write_bytes(sb3.pack_project(original))
        summary["variants"].append(name)
    demo_student, demo_teacher = build_demo_pair()
    demo_dir = root / "demo" / "move-steps"
    demo_dir.mkdir(parents=True, exist_ok=True)
    (demo_dir / "student.sb3").write_bytes(sb3.pack_project(demo_student))
    (demo_dir / "teacher.sb3").write_bytes(sb3.pack_project(demo_teacher))
    summary["demo"] = ["move-steps"]
    return summary
