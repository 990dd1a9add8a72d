import numpy as np
import pytest

from wangreduce import blocks
from wangreduce.geometry import CUBE, Polyform
from wangreduce.lattice import BoxRegion, QuotientRegion
from wangreduce.tiling import (
    Placement, TilingCertificate, TilingError, build_tiling, build_tiling3, build_tiling4,
    encoder_column_check, flip_linker, linker_basis, linker_lattice_check, linker_points,
    matching_layer_check, placed_volume, read_certificate, shift_encoder, time_alignment_check,
    verify_partition, volume_conserved, write_certificate,
)
from wangreduce.reduction import north_word
from wangreduce.wang import WangAssignment, solve_torus, uniform_set


def _cube_cert(placements):
    region = QuotientRegion.from_rows([[10, 0, 0], [0, 10, 0], [0, 0, 10]])
    tiles = {"u": blocks.block("u"), "U": blocks.block("U")}
    return TilingCertificate(region, tiles, tuple(Placement(n, (0, 0, 0)) for n in placements))


def test_functional_cube_partition():
    assert verify_partition(_cube_cert(["u", "U"])).ok


def test_missing_piece_is_uncovered():
    v = verify_partition(_cube_cert(["u"]))
    assert not v.ok and v.kind == "uncovered"
    assert v.witness in blocks.block("U")


def test_duplicate_piece_is_double_covered():
    v = verify_partition(_cube_cert(["u", "U", "u"]))
    assert v.kind == "double-covered"
    assert v.witness in blocks.block("u")


def test_translation_through_the_quotient():
    region = QuotientRegion.from_rows([[10, 0, 0], [0, 10, 0], [0, 0, 10]])
    tiles = {"u": blocks.block("u"), "U": blocks.block("U")}
    cert = TilingCertificate(region, tiles, (Placement("u", (30, -10, 70)), Placement("U", (0, 0, 0))))
    assert verify_partition(cert).ok


def test_unknown_tile_and_dimension_errors():
    region = QuotientRegion.from_rows([[2, 0], [0, 2]])
    with pytest.raises(TilingError):
        verify_partition(TilingCertificate(region, {}, (Placement("a", (0, 0)),)))
    with pytest.raises(TilingError):
        verify_partition(TilingCertificate(region, {"a": Polyform.box((1, 1, 1))}, (Placement("a", (0, 0)),)))


def test_box_region_outside():
    tiles = {"d": Polyform.box((1, 2))}
    cert = TilingCertificate(BoxRegion((1, 2)), tiles, (Placement("d", (0, 1)),))
    v = verify_partition(cert)
    assert v.kind == "outside" and v.witness == (0, 2)


def test_uniform_set_one_by_one(uniform_cert3):
    cert = uniform_cert3
    assert verify_partition(cert).ok
    assert cert.count("encoder") == 1
    assert volume_conserved(cert)
    assert linker_basis(cert) == (10, 60, 40)
    assert linker_lattice_check(cert)


def test_sample_3d(cert3):
    assert verify_partition(cert3).ok
    assert placed_volume(cert3) == cert3.region.size == 1_728_000
    assert linker_basis(cert3) == (10, 60, 60)
    assert linker_lattice_check(cert3)
    assert encoder_column_check(cert3)
    assert matching_layer_check(cert3)


def test_placement_counts(cert3, sample, sample_torus):
    t, p, ab = sample.t, sample.p, sample_torus.a * sample_torus.b
    assert cert3.count("encoder") == ab
    assert cert3.count("linker_U") + cert3.count("linker_D") == 4 * t * ab
    assert cert3.count("filler") == ab * (p - 1) * 2 * 4 * t


def test_linker_variants_follow_north_words(cert3, sample, sample_torus):
    # 1-bits are bridged by U-linkers
    want = sum(north_word(sample, k).count("1") for _, _, k in
               ((i, j, sample_torus[i, j]) for i, j in sample_torus.cells()))
    assert cert3.count("linker_U") == want


def test_linker_points_form_the_fact_lattice(cert3):
    pts = linker_points(cert3)
    diffs = pts - pts[0]
    assert not np.any(diffs % np.array([10, 60, 60]))


def test_flipped_linker_fails(cert3):
    v = verify_partition(flip_linker(cert3, 0))
    assert not v.ok and v.witness is not None


def test_deleted_filler_fails(cert3):
    n = cert3.indices_of("filler")[0]
    v = verify_partition(cert3.without(n))
    assert v.kind == "uncovered"


def test_duplicated_placement_fails(cert3):
    v = verify_partition(cert3.plus(cert3.placements[-1]))
    assert v.kind == "double-covered"


def test_deleted_linker_breaks_lattice(cert3):
    n = cert3.indices_of("linker")[3]
    assert not linker_lattice_check(cert3.without(n))


def test_shifted_linker_breaks_lattice(cert3):
    n = cert3.indices_of("linker")[0]
    pl = cert3.placements[n]
    moved = cert3.swapped(n, Placement(pl.tile, (pl.offset[0], pl.offset[1], pl.offset[2] + 10)))
    assert not linker_lattice_check(moved)


def test_encoder_columns_with_two_periods(sample, sample_torus):
    cert = build_tiling3(sample, sample_torus, z_periods=2)
    assert verify_partition(cert).ok
    assert encoder_column_check(cert)
    assert linker_lattice_check(cert)
    assert not encoder_column_check(cert.without(cert.indices_of("encoder")[0]))


def test_mismatched_assignment_fails(sample):
    bad = WangAssignment.from_rows([[0], [1], [2]])
    with pytest.raises(TilingError):
        build_tiling3(sample, bad)
    v = verify_partition(build_tiling3(sample, bad, check=False))
    assert not v.ok and v.witness is not None


def test_every_single_tile_change_fails(sample, sample_torus):
    for i, j in sample_torus.cells():
        for tile in range(sample.p):
            if tile == sample_torus[i, j]:
                continue
            A = sample_torus.with_tile(i, j, tile)
            assert not verify_partition(build_tiling3(sample, A, check=False)).ok, (i, j, tile)


def test_assignment_out_of_range(sample):
    with pytest.raises(TilingError):
        build_tiling3(sample, WangAssignment(1, 1, ((7,),)), check=False)


def test_build_tiling_dimension(sample, sample_torus):
    with pytest.raises(TilingError):
        build_tiling(sample, sample_torus, 5)


def test_uniform_4d():
    W = uniform_set(2, 1)
    cert = build_tiling4(W, solve_torus(W, 1, 1))
    assert verify_partition(cert).ok
    assert volume_conserved(cert)


def test_uniform_larger_torus():
    W = uniform_set(2, 1)
    cert = build_tiling3(W, solve_torus(W, 2, 2))
    assert verify_partition(cert).ok
    assert linker_lattice_check(cert) and matching_layer_check(cert)


def test_certificate_file_round_trip(tmp_path, uniform_cert3):
    path = tmp_path / "c.cert"
    write_certificate(uniform_cert3, path)
    again = read_certificate(path)
    assert again.placements == uniform_cert3.placements
    assert again.region.size == uniform_cert3.region.size
    assert dict(again.params) == dict(uniform_cert3.params)
    assert verify_partition(again).ok


def test_certificate_file_errors(tmp_path):
    path = tmp_path / "c.cert"
    path.write_text("dim 2\nlattice 1 0\nlattice 0 1\nplacements 2\n")
    with pytest.raises(TilingError):
        read_certificate(path)
    path.write_text("dim 2\nbogus\n")
    with pytest.raises(TilingError):
        read_certificate(path)


@pytest.mark.slow
def test_sample_4d(cert4):
    assert verify_partition(cert4).ok
    assert volume_conserved(cert4)
    assert linker_lattice_check(cert4)
    assert encoder_column_check(cert4)
    assert time_alignment_check(cert4)
    assert matching_layer_check(cert4)


@pytest.mark.slow
def test_shifted_encoder_fails_4d(cert4):
    v = verify_partition(shift_encoder(cert4, 0, 5))
    assert not v.ok
    assert not time_alignment_check(shift_encoder(cert4, 0, 5))


@pytest.mark.slow
def test_4d_linker_time_shift_matters(cert4):
    n = cert4.indices_of("linker")[0]
    pl = cert4.placements[n]
    off = list(pl.offset)
    off[3] += 5
    assert not verify_partition(cert4.swapped(n, Placement(pl.tile, tuple(off)))).ok


def test_time_alignment_is_4d_only(uniform_cert3):
    with pytest.raises(TilingError):
        time_alignment_check(uniform_cert3)


def test_no_linkers(uniform_cert3):
    cert = uniform_cert3.with_placements([p for p in uniform_cert3.placements if not p.tile.startswith("linker")])
    with pytest.raises(TilingError):
        linker_lattice_check(cert)


def test_rep_point_is_l_block_corner(uniform_cert3):
    pl = next(p for p in uniform_cert3.placements if p.tile.startswith("linker"))
    pts = linker_points(uniform_cert3.with_placements([pl]))
    assert tuple(pts[0]) == (pl.offset[0], pl.offset[1] + CUBE, pl.offset[2])
