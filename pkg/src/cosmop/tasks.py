"""Ready-made goal formulas for the bundled scenes."""

from __future__ import annotations

from importlib import resources

from cosmop.logic.ast import Eventually, Formula, Last, Not, conj
from cosmop.logic.parser import parse_formula
from cosmop.primitives import ROBOT_X, carried, obj_x, obj_y
from cosmop.scene import SceneDescription

# temporary drop area and final object states of the clean-up task
TEMP_AREA = (-1500, -500, -2500, -1000)  # xlo, xhi, ylo, yhi
CLEANUP_GOAL = ((1900, 1000), (2000, 1000))


def in_box(j, xlo, xhi, ylo, yhi) -> Formula:
    return conj(obj_x(j).ge(xlo), obj_x(j).le(xhi), obj_y(j).ge(ylo), obj_y(j).le(yhi))


def cleanup_goal(n_objects=2) -> Formula:
    """Each object visits the temporary area uncarried; all end at their goal states."""
    temp = [Eventually(conj(in_box(j, *TEMP_AREA), Not(carried(j)))) for j in range(1, n_objects + 1)]
    final = conj(*(conj(obj_x(j).eq(x), obj_y(j).eq(y), Not(carried(j)))
                   for j, (x, y) in enumerate(CLEANUP_GOAL[:n_objects], 1)))
    return conj(*temp, Last(final))


def blocked_goal(x=10**6) -> Formula:
    """Object 1 must end outside any workspace: never satisfiable."""
    return Last(obj_x(1).eq(x))


def tautology_goal() -> Formula:
    return Last(ROBOT_X.eq(ROBOT_X))


def data_text(name: str) -> str:
    return resources.files("cosmop.data").joinpath(name).read_text()


def load_bundled_goal(name="cleanup.ltl") -> Formula:
    return parse_formula(data_text(name))


def cleanup_scene() -> SceneDescription:
    from cosmop.scene import load_scene
    return load_scene(data_text("cleanup_scene.json"))
