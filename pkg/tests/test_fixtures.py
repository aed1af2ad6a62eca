import json
from pathlib import Path

import numpy as np
import pytest

from twistmod.fixtures import (
    family_from_json,
    family_to_json,
    fixture_files,
    load_ses,
    regenerate,
    ses_fixtures,
    ses_from_json,
    ses_to_json,
    valid_qs,
)
from twistmod.morph import check_ses, is_split_mono
from twistmod.telescope import string_family_v4

SHIPPED = Path(__file__).resolve().parents[1] / "fixtures"


def test_fixture_set_shape():
    fxs = ses_fixtures()
    assert len(fxs) >= 12
    assert sum(fx.split for fx in fxs) >= 4
    assert sum(not fx.split for fx in fxs) >= 4
    assert {fx.ses.group.name for fx in fxs} >= {"C2", "V4", "C3"}
    assert len({fx.name for fx in fxs}) == len(fxs)
    assert valid_qs(2) == [2, 4] and valid_qs(3) == [3]


@pytest.mark.parametrize("fx", ses_fixtures(), ids=lambda f: f.name)
def test_fixture_labels_are_honest(fx):
    assert check_ses(fx.ses).ok
    assert (is_split_mono(fx.ses.d1) is not None) == fx.split


@pytest.mark.parametrize("fx", ses_fixtures(), ids=lambda f: f.name)
def test_ses_roundtrip(fx):
    data = json.loads(json.dumps(ses_to_json(fx.ses)))
    back = ses_from_json(data, verify=True)
    assert back.name == fx.ses.name
    assert np.array_equal(back.d1.matrix, fx.ses.d1.matrix)
    assert np.array_equal(back.d2.matrix, fx.ses.d2.matrix)
    assert np.array_equal(back.Y.action, fx.ses.Y.action)


def test_family_roundtrip():
    fam = string_family_v4(4)
    back = family_from_json(json.loads(json.dumps(family_to_json(fam))))
    assert [m.dim for m in back.modules] == [3, 5, 7, 9]
    assert all(np.array_equal(a.matrix, b.matrix) for a, b in zip(back.inclusions, fam.inclusions))


def test_shipped_files_match_constructors():
    assert regenerate(SHIPPED, check=True) == []
    assert sorted(p.name for p in SHIPPED.glob("*.json")) == sorted(fixture_files())


def test_regenerate_writes_then_is_idempotent(tmp_path):
    written = regenerate(tmp_path)
    assert len(written) == len(fixture_files())
    assert regenerate(tmp_path, check=True) == []
    (tmp_path / "socle_c2.json").write_text("{}")
    assert regenerate(tmp_path, check=True) == ["socle_c2.json"]


def test_load_shipped_sequence():
    S = load_ses(SHIPPED / "socle_c2.json")
    assert S.dims == (1, 2, 1)
    assert is_split_mono(S.d1) is None


def test_corrupted_sequence_fails_verification():
    data = json.loads((SHIPPED / "split_k_k_c2.json").read_text())
    data["maps"][1]["matrix"] = [[1, 1]]
    S = ses_from_json(data)
    assert not check_ses(S).ok
