"""Named groups, G-sets and spaces so that the standard examples run without input files."""

from __future__ import annotations

import json
import re
from pathlib import Path

from .groups import (
    FiniteGroup,
    GSetAction,
    GroupError,
    action_from_generator,
    action_from_json,
    cyclic_group,
    disjoint_union,
    empty_action,
    regular_action,
    trivial_action,
)
from .layers import (
    FiniteGSpace,
    SpaceError,
    affine_line_scaling,
    multiplicative_inversion,
    multiplicative_translation,
)

HEXAGONAL_POINTS = ("e", "z1", "z2", "z3", "w1", "w2")
SQUARE_POINTS = ("e", "z1", "z2", "t")


def group_by_name(name: str) -> FiniteGroup:
    m = re.fullmatch(r"Z(\d+)", name.strip())
    if m:
        return cyclic_group(int(m.group(1)))
    if name == "trivial":
        return cyclic_group(1)
    path = Path(name)
    if path.exists():
        data = json.loads(path.read_text())
        data = data.get("group", data)
        return FiniteGroup(tuple(data["elements"]), data["table"], name=data.get("name", path.stem))
    raise GroupError(f"unknown group {name!r} (use Z<d> or a JSON file)")


def hexagonal_action() -> GSetAction:
    """Z6 on six points, the generator acting as (e)(z1 z2 z3)(w1 w2)."""
    return action_from_generator(cyclic_group(6), HEXAGONAL_POINTS, [0, 2, 3, 1, 5, 4])


def square_action() -> GSetAction:
    """Z4 on four points, the generator acting as (e)(z1 z2)(t)."""
    return action_from_generator(cyclic_group(4), SQUARE_POINTS, [0, 2, 1, 3])


def sign_action() -> GSetAction:
    """Z2 swapping 1 and -1."""
    return action_from_generator(cyclic_group(2), ("1", "-1"), [1, 0])


def trivial_points(k: int) -> tuple:
    if k == 2:
        return ("1", "-1")
    return tuple(f"s{i}" for i in range(1, k + 1))


def action_by_name(name: str, group: FiniteGroup | None = None) -> GSetAction:
    """Built-in G-sets.

    ``hexagonal``, ``square`` and ``sign`` fix their group; ``trivial<k>``
    (trivial action on k points, ``1, -1`` when k = 2), ``point``, ``empty``,
    ``regular`` and ``regular+point`` use ``group``.  Anything else is read as
    a JSON action file.
    """
    name = name.strip()
    if name == "hexagonal":
        return hexagonal_action()
    if name == "square":
        return square_action()
    if name == "sign":
        return sign_action()
    path = Path(name)
    if path.exists():
        return action_from_json(json.loads(path.read_text()))
    if group is None:
        raise GroupError(f"action {name!r} needs --group")
    m = re.fullmatch(r"trivial(\d*)", name)
    if m:
        return trivial_action(group, trivial_points(int(m.group(1) or 1)))
    if name == "point":
        return trivial_action(group, ("0",))
    if name == "empty":
        return empty_action(group)
    if name == "regular":
        return regular_action(group)
    if name == "regular+point":
        return disjoint_union(regular_action(group), trivial_action(group, ("0",)))
    raise GroupError(f"unknown action {name!r}")


def space_by_name(name: str, q: int | None = None, d: int | None = None, ginv: bool = False) -> FiniteGSpace:
    """``affine`` (F_q with mu_d scaling), ``gm`` (F_q^* with inversion when
    ``ginv``, else mu_d translation), or a JSON space file."""
    if name == "affine":
        return affine_line_scaling(_need(q, "q"), d or 2)
    if name == "gm":
        if ginv:
            return multiplicative_inversion(_need(q, "q"))
        return multiplicative_translation(_need(q, "q"), d or 2)
    path = Path(name)
    if path.exists():
        return FiniteGSpace(action_from_json(json.loads(path.read_text())), name=path.stem)
    raise SpaceError(f"unknown space {name!r}")


def _need(v, what):
    if v is None:
        raise SpaceError(f"--{what} is required for this space")
    return v


GRID_GROUP_ORDERS = (1, 2, 3, 4, 6)


def grid_actions() -> list[tuple[str, GSetAction]]:
    """The fixture G-sets used by the validation grid."""
    out = []
    for d in GRID_GROUP_ORDERS:
        G = cyclic_group(d)
        out.append((f"Z{d}/empty", empty_action(G)))
        out.append((f"Z{d}/point", trivial_action(G, ("0",))))
        out.append((f"Z{d}/trivial2", trivial_action(G, trivial_points(2))))
        if d > 1:
            out.append((f"Z{d}/regular", regular_action(G)))
            out.append((f"Z{d}/regular+point", action_by_name("regular+point", G)))
    out.append(("Z2/sign", sign_action()))
    out.append(("Z4/square", square_action()))
    out.append(("Z6/hexagonal", hexagonal_action()))
    return out
