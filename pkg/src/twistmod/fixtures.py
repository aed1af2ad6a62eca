"""Named short exact sequences, families and their JSON files.

Every fixture is rebuilt from constructors; the files shipped under
``fixtures/`` are only a serialized copy, checked by ``regen-fixtures``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import linalg
from .groups import Group, cyclic, klein_four, subgroup_from_elements
from .morph import EquivariantMap, ShortExactSeq, ses_from_mono, split_ses
from .reps import (
    Module,
    direct_sum,
    dumps,
    induce,
    module_from_json,
    regular_module,
    submodule,
    trivial_module,
)
from .telescope import InclusionFamily, jordan_family_cp, jordan_module, string_family_v4, string_module_v4

SCHEMA = 1


@dataclass(frozen=True)
class SesFixture:
    name: str
    ses: ShortExactSeq
    split: bool  # expected answer, recorded when the fixture was designed

    @property
    def p(self) -> int:
        return self.ses.p


def _mono(x: Module, y: Module, mat) -> EquivariantMap:
    return EquivariantMap(x, y, np.array(mat, dtype=linalg.DTYPE).reshape(y.dim, x.dim))


def _ses(name: str, x: Module, y: Module, mat) -> ShortExactSeq:
    return ses_from_mono(_mono(x, y, mat), name)


def _socle_vector(g: Group) -> list[int]:
    return [1] * g.order


def c2_fixtures() -> list[SesFixture]:
    g = cyclic(2)
    k = trivial_module(g, 2)
    reg = regular_module(g, 2)
    reg_k = direct_sum(reg, k)
    return [
        SesFixture("socle_c2", _ses("socle_c2", k, reg, [1, 1]), False),
        SesFixture("split_k_k_c2", split_ses(k, k, "split_k_k_c2"), True),
        SesFixture("split_reg_k_c2", split_ses(reg, k, "split_reg_k_c2"), True),
        SesFixture("socle_into_reg_plus_k_c2", _ses("socle_into_reg_plus_k_c2", k, reg_k, [1, 1, 0]), False),
        SesFixture("diagonal_into_reg_plus_k_c2", _ses("diagonal_into_reg_plus_k_c2", k, reg_k, [1, 1, 1]), True),
    ]


def v4_fixtures() -> list[SesFixture]:
    g = klein_four()
    k = trivial_module(g, 2)
    reg = regular_module(g, 2)
    m1, m2 = string_module_v4(1, g), string_module_v4(2, g)
    # augmentation ideal of kV4: spanned by e_g - e_1 for g != 1
    aug = np.zeros((4, 3), dtype=linalg.DTYPE)
    aug[0, :] = 1
    aug[1, 0] = aug[2, 1] = aug[3, 2] = 1
    rad = submodule(reg, aug).named("rad kV4")
    c2 = subgroup_from_elements(g, [0, 1])
    perm = induce(c2, trivial_module(c2.sub, 2)).named("k[V4/C2]")
    return [
        SesFixture("socle_v4", _ses("socle_v4", k, reg, _socle_vector(g)), False),
        SesFixture("augmentation_v4", ses_from_mono(EquivariantMap(rad, reg, aug), "augmentation_v4"), False),
        SesFixture("string_inclusion_v4", _ses("string_inclusion_v4", m1, m2, linalg.identity(5)[:, :3]), False),
        SesFixture("split_m1_m2_v4", split_ses(m1, m2, "split_m1_m2_v4"), True),
        SesFixture(
            "k_into_k_plus_reg_v4",
            _ses("k_into_k_plus_reg_v4", k, direct_sum(k, reg), [1] + _socle_vector(g)),
            True,
        ),
        SesFixture("socle_permutation_v4", _ses("socle_permutation_v4", k, perm, [1, 1]), False),
    ]


def jordan_fixtures(p: int = 3) -> list[SesFixture]:
    """Sequences of Jordan blocks over kC_p, p odd."""
    if p < 3:
        raise ValueError("Jordan fixtures need p >= 3 (three block sizes)")
    g = cyclic(p)
    j1, j2, j3 = (jordan_module(p, n, g) for n in (1, 2, 3))
    x = np.eye(3, k=-1, dtype=linalg.DTYPE)
    j2_j3 = direct_sum(j2, j3)
    c = f"c{p}"
    return [
        SesFixture(f"socle_j2_{c}", _ses(f"socle_j2_{c}", j1, j2, [0, 1]), False),
        SesFixture(f"socle_j3_{c}", _ses(f"socle_j3_{c}", j1, j3, [0, 0, 1]), False),
        SesFixture(f"j2_into_j3_{c}", _ses(f"j2_into_j3_{c}", j2, j3, x[:, :2]), False),
        SesFixture(f"split_j1_j2_{c}", split_ses(j1, j2, f"split_j1_j2_{c}"), True),
        SesFixture(f"split_j3_j1_{c}", split_ses(j3, j1, f"split_j3_j1_{c}"), True),
        SesFixture(
            f"graph_j2_into_j2_j3_{c}",
            _ses(f"graph_j2_into_j2_j3_{c}", j2, j2_j3, np.vstack([linalg.identity(2), x[:, :2]])),
            True,
        ),
    ]


def ses_fixtures(p: int | None = None) -> list[SesFixture]:
    """The shipped fixture set (C2, V4 at p=2; C3 at p=3), or the part in characteristic ``p``.

    Other odd primes get the Jordan-block sequences over C_p.
    """
    if p is None:
        return c2_fixtures() + v4_fixtures() + jordan_fixtures(3)
    if p == 2:
        return c2_fixtures() + v4_fixtures()
    return jordan_fixtures(p)


def valid_qs(p: int) -> list[int]:
    return {2: [2, 4], 3: [3]}.get(p, [p])


# -- serialization -------------------------------------------------------------


def _module_entry(m: Module) -> dict:
    return {"dim": m.dim, "action": [a.reshape(-1).tolist() for a in m.action], "name": m.name}


def ses_to_json(S: ShortExactSeq) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "ses",
        "name": S.name,
        "p": S.p,
        "group": S.group.to_json(),
        "modules": {"X": _module_entry(S.X), "Y": _module_entry(S.Y), "Z": _module_entry(S.Z)},
        "maps": [
            {"name": "d1", "src_ref": "X", "dst_ref": "Y", "matrix": S.d1.matrix.tolist()},
            {"name": "d2", "src_ref": "Y", "dst_ref": "Z", "matrix": S.d2.matrix.tolist()},
        ],
    }


def ses_from_json(data: dict, verify: bool = False) -> ShortExactSeq:
    """Load a sequence; maps are not checked here so broken files can be reported by check_ses."""
    if data.get("kind") != "ses":
        raise ValueError("not a short exact sequence file")
    g = Group.from_json(data["group"])
    p = int(data["p"])
    mods = {
        key: module_from_json({"p": p, "dim": e["dim"], "action": e["action"], "name": e.get("name", "")}, g)
        for key, e in data["modules"].items()
    }
    maps = {}
    for entry in data["maps"]:
        src, dst = mods[entry["src_ref"]], mods[entry["dst_ref"]]
        mat = np.array(entry["matrix"], dtype=linalg.DTYPE).reshape(dst.dim, src.dim)
        maps[entry["name"]] = EquivariantMap(src, dst, mat, verify=verify)
    return ShortExactSeq(maps["d1"], maps["d2"], data.get("name", ""))


def family_to_json(fam: InclusionFamily) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "family",
        "label": fam.label,
        "p": fam.modules[0].p,
        "group": fam.modules[0].group.to_json(),
        "modules": [_module_entry(m) for m in fam.modules],
        "maps": [
            {"name": f"iota{n}", "src_ref": n - 1, "dst_ref": n, "matrix": f.matrix.tolist()}
            for n, f in enumerate(fam.inclusions, start=1)
        ],
    }


def family_from_json(data: dict) -> InclusionFamily:
    if data.get("kind") != "family":
        raise ValueError("not an inclusion family file")
    g = Group.from_json(data["group"])
    p = int(data["p"])
    mods = tuple(
        module_from_json({"p": p, "dim": e["dim"], "action": e["action"], "name": e.get("name", "")}, g)
        for e in data["modules"]
    )
    incs = tuple(
        EquivariantMap(mods[e["src_ref"]], mods[e["dst_ref"]], np.array(e["matrix"], dtype=linalg.DTYPE))
        for e in data["maps"]
    )
    return InclusionFamily(mods, incs, data.get("label", ""))


def load_ses(path: str | Path) -> ShortExactSeq:
    return ses_from_json(json.loads(Path(path).read_text()))


def fixture_files() -> dict[str, str]:
    """File name -> serialized content for everything shipped under fixtures/."""
    files = {f"{fx.name}.json": dumps(ses_to_json(fx.ses)) for fx in ses_fixtures()}
    files["family_v4_string.json"] = dumps(family_to_json(string_family_v4(6)))
    files["family_jordan_c3.json"] = dumps(family_to_json(jordan_family_cp(3, 3)))
    files["family_jordan_c2.json"] = dumps(family_to_json(jordan_family_cp(2, 2)))
    return files


def regenerate(directory: str | Path, check: bool = False) -> list[str]:
    """Write all fixture files, or with ``check`` only list the ones that differ."""
    directory = Path(directory)
    changed = []
    for name, text in sorted(fixture_files().items()):
        path = directory / name
        if not path.exists() or path.read_text() != text:
            changed.append(name)
            if not check:
                directory.mkdir(parents=True, exist_ok=True)
                path.write_text(text)
    return changed
