from __future__ import annotations

import numpy as np
import pytest

from oracles import is_difference_family
from qsteiner.designkit import (Design, DesignRejected, DifferenceFamily, NotCoprime, RepsFile,
                                WrongCharacteristic, df_size, expand, extract_df, report_code_size,
                                verify_df, verify_orbit_union, verify_steiner)
from qsteiner.ffield import build_field
from qsteiner.orbits import GroupSpec, build_orbit_table
from qsteiner.presets import flagship_reps_path


@pytest.fixture(scope="module")
def flagship(f13):
    rf = RepsFile.read(flagship_reps_path())
    return rf, expand(rf.reps, GroupSpec("normalizer", f13), 2, 3)


def test_reps_file(flagship, tmp_path):
    rf, _ = flagship
    assert (rf.q, rf.t, rf.k, rf.n, rf.group) == (2, 2, 3, 13, "normalizer")
    assert rf.reps.shape == (15, 7)
    assert rf.reps[0].tolist() == [0, 1, 1249, 5040, 7258, 7978, 8105]
    rf.write(tmp_path / "r.txt", comments=["copy"])
    assert np.array_equal(RepsFile.read(tmp_path / "r.txt").reps, rf.reps)


def test_fano_plane_is_not_a_q_analog_here(f7):
    # a single Singer orbit of 3-subspaces in GF(2^7) is far from a design
    group = GroupSpec("singer", f7)
    tab = build_orbit_table(3, group)
    design = expand(tab.reps[:1], group, 2, 3)
    rep = verify_steiner(design, f7)
    assert not rep.accepted
    assert rep.histogram[0] > 0
    with pytest.raises(DesignRejected):
        report_code_size(design, rep)


@pytest.mark.slow
def test_flagship_accept_and_corruptions(flagship, f13):
    _, design = flagship
    rep = verify_steiner(design, f13)
    assert rep.accepted
    assert report_code_size(design, rep) == ("A_2(13,4,3)", 1_597_245)
    # drop a block: 7 two-subspaces become uncovered
    short = Design(2, 2, 3, 13, design.blocks[1:])
    rep = verify_steiner(short, f13)
    assert not rep.accepted and rep.histogram[0] == 7
    # duplicate a block: 7 two-subspaces covered twice
    dup = Design(2, 2, 3, 13, np.vstack([design.blocks, design.blocks[:1]]))
    rep = verify_steiner(dup, f13)
    assert not rep.accepted and rep.histogram[">=2"] == 7
    # replace a block by a non-subspace
    bad = design.blocks.copy()
    bad[0] = [0, 1, 2, 3, 4, 5, 6]
    rep = verify_steiner(Design(2, 2, 3, 13, bad), f13)
    assert not rep.accepted and rep.invalid_blocks == 1


def test_expand_sizes(f7):
    for kind in ("singer", "galois", "normalizer"):
        group = GroupSpec(kind, f7)
        tab = build_orbit_table(3, group)
        design = expand(tab.reps, group, 3, 3)
        assert len(design) == tab.total()


def test_design_file_roundtrip(tmp_path, f7):
    group = GroupSpec("normalizer", f7)
    tab = build_orbit_table(3, group)
    design = expand(tab.reps[:2], group, 2, 3)
    design.write(tmp_path / "d.txt")
    assert (tmp_path / "d.txt").read_text().splitlines()[0] == f"2 2 3 7 {len(design)}"
    again = Design.read(tmp_path / "d.txt")
    assert np.array_equal(again.blocks, design.blocks)


def test_verify_orbit_union(f7):
    group = GroupSpec("normalizer", f7)
    tab = build_orbit_table(3, group)
    assert verify_orbit_union(tab.reps, group, 3, 3).accepted
    assert not verify_orbit_union(tab.reps[1:], group, 3, 3).accepted
    twice = np.vstack([tab.reps, tab.reps[:1]])
    assert verify_orbit_union(twice, group, 3, 3).histogram[">=2"] == tab.lengths[0]
    # agrees with block-level verification
    design = expand(tab.reps, group, 3, 3)
    assert verify_steiner(design, f7).accepted


@pytest.mark.slow
def test_extract_df(flagship, f13):
    _, design = flagship
    df = extract_df(design, f13)
    assert len(df.blocks) == df_size(13, 3) == 195
    assert verify_df(df).accepted and is_difference_family(8191, df.blocks)
    # the block-level path gives the same family up to Singer shifts
    plain = extract_df(Design(2, 2, 3, 13, design.blocks), f13)
    assert len(plain.blocks) == 195 and verify_df(plain).accepted


def test_df_guards(f13):
    d = Design(2, 2, 3, 12, np.zeros((0, 7), np.int64))
    with pytest.raises(NotCoprime):
        extract_df(d, f13)
    d3 = Design(3, 2, 3, 7, np.zeros((0, 26), np.int64))
    with pytest.raises(WrongCharacteristic):
        extract_df(d3, build_field(3, 7))


def test_verify_df_small():
    assert verify_df(DifferenceFamily(7, [(0, 1, 3)])).accepted
    rep = verify_df(DifferenceFamily(7, [(0, 1, 2)]))
    assert not rep.accepted and rep.differences == 6
    assert verify_df(DifferenceFamily(13, [(0, 1, 4), (0, 2, 7)])).accepted


def test_df_file_roundtrip(tmp_path):
    df = DifferenceFamily(13, [(0, 1, 4), (0, 2, 7)])
    df.write(tmp_path / "df.txt")
    assert (tmp_path / "df.txt").read_text().splitlines()[0] == "13 3 1"
    again = DifferenceFamily.read(tmp_path / "df.txt")
    assert again.blocks == df.blocks
