import pytest

from wangreduce import blocks, reduction
from wangreduce.geometry import CUBE, is_connected
from wangreduce.reduction import (
    ReductionError, brick_match, build_encoder3, build_encoder4, build_linker3, build_tileset,
    encoder3_layout, encoder4_layout, linker3_layout, linker4_layout, north_word, south_word,
)
from wangreduce.wang import WangError, uniform_set

# Encoder level-2 grid transcribed by hand from the figure of the sample
# encoder: per encoding layer, (south row, north row) as u/d strings.
ENCODER_ROWS = {
    0: ("dddu" "dddd" "uuuu" "duuu", "uuuu" "dduu" "dddu" "dddd"),
    2: ("dudu" "dddd" "uuuu" "dddu", "uuuu" "duuu" "dudu" "dddd"),
    4: ("duuu" "dddd" "uuuu" "dduu", "uuuu" "dddu" "duuu" "dddd"),
}

# linker level-2 grid transcribed from the U-linker figure: layer -> {(x, y): id}
LINKER_U_LAYERS = {
    0: {(0, -1): "U", (0, 0): "FC", (0, 1): "l", (0, 2): "FC", (0, 3): "U"},
    1: {(0, 0): "t", (0, 1): "y1", (0, 2): "FC", (0, 3): "T", (0, 4): "T", (0, 5): "T", (0, 6): "T", (0, 7): "Y1"},
    2: {(0, 0): "FC", (0, 1): "x", (0, 2): "FC", (1, 1): "X"},
    3: {(0, 0): "t", (0, 1): "y0", (0, 2): "FC", (0, 3): "T", (0, 4): "T", (0, 5): "T", (0, 6): "T", (0, 7): "Y0"},
    4: {(0, 0): "FC", (0, 1): "FC", (0, 2): "FC"},
    5: {(0, 0): "t", (0, 1): "y0", (0, 2): "FC", (0, 3): "T", (0, 4): "T", (0, 5): "T", (0, 6): "T", (0, 7): "Y0"},
    6: {(0, 1): "L"},
}


def _letters(word):
    return "".join("u" if b == "1" else "d" for b in word)


def test_encoder_matches_figure(sample):
    layout = encoder3_layout(sample)
    assert len(layout.slots) == 16 * 3 * 6 + 1
    for z, (south, north) in ENCODER_ROWS.items():
        row = layout.layer(z)
        assert "".join(row[(x, 0)] for x in range(16)) == south
        assert "".join(row[(x, 2)] for x in range(16)) == north
        mid = [row[(x, 1)] for x in range(16)]
        if z == 0:
            assert mid[1] == "e" and mid.count("FC") == 15
        else:
            assert mid == ["FC"] * 16
    for z in (1, 3, 5):
        assert set(layout.layer(z).values()) == {"t"}
        assert len(layout.layer(z)) == 48
    assert layout.layer(6) == {(1, 1): "E"}


def test_encoder_words(sample):
    layout = encoder3_layout(sample)
    for k, (south, north) in enumerate(ENCODER_ROWS.values()):
        assert _letters(layout.north_words[k]) == north
        assert _letters(layout.south_words[k]) == south
        assert north_word(sample, k) == layout.north_words[k]
        assert south_word(sample, k) == layout.south_words[k]


def test_word_segments(sample):
    t = sample.t
    for k in range(sample.p):
        n, s = north_word(sample, k), south_word(sample, k)
        assert n[:t] == "1" * t and n[3 * t:] == "0" * t
        assert s[t:2 * t] == "0" * t and s[2 * t:3 * t] == "1" * t


def test_linker_matches_figure(sample):
    layout = linker3_layout(sample, "U")
    for z, want in LINKER_U_LAYERS.items():
        assert layout.layer(z) == want
    assert layout.layers() == list(range(7))


def test_D_linker_differs_only_in_attachments(sample):
    u = linker3_layout(sample, "U").slots
    d = linker3_layout(sample, "D").slots
    diff = {s for s in u if u[s] != d[s]}
    assert diff == {(0, -1, 0), (0, 3, 0)}
    assert d[(0, -1, 0)] == "D"


def test_linker_variant_checked(sample):
    with pytest.raises(ReductionError):
        linker3_layout(sample, "Q")


def test_4d_encoder_slot_map(sample):
    base = encoder3_layout(sample)
    lifted = encoder4_layout(sample)
    assert len(lifted.slots) == len(base.slots) + 3
    row = lifted.layer(0)
    assert row[(1, 1)] == "w4" and row[(7, 1)] == "E4"
    for z in (0, 2, 4):
        assert lifted.layer(z)[(-1, 1)] == "V4" and lifted.layer(z)[(15, 1)] == "v4"
    assert lifted.layer(6) == {(1, 1): "W4"}
    for s, b in base.slots.items():
        if b == "u":
            assert lifted.slots[s] == "D4"
        elif b == "d":
            assert lifted.slots[s] == "C4"
        elif b == "t":
            assert lifted.slots[s] == "t"


def test_4d_linker_slot_map(sample):
    base = linker3_layout(sample, "U").slots
    lifted = linker4_layout(sample).slots
    assert set(base) == set(lifted)
    assert lifted[(0, -1, 0)] == lifted[(0, 3, 0)] == "c4"
    assert lifted[(0, 1, 6)] == "L" and lifted[(1, 1, 2)] == "X"


def test_tile_counts(sample):
    assert sorted(build_tileset(sample, 3).names) == ["encoder", "filler", "linker_D", "linker_U"]
    assert sorted(build_tileset(sample, 4).names) == ["encoder", "filler", "linker"]


@pytest.mark.parametrize("dim", [3, 4])
def test_tiles_connected(sample, dim):
    assert build_tileset(sample, dim).all_connected()


def test_tile_volumes(sample):
    enc, layout = build_encoder3(sample)
    want = sum(len(reduction.block_shape(b, 3)) for b in layout.slots.values())
    assert len(enc) == want == 257664
    assert len(build_linker3(sample, "U")) == len(build_linker3(sample, "D")) == 19016


def test_4d_encoder_volume(sample):
    enc, layout = build_encoder4(sample)
    assert len(enc) == sum(len(reduction.block_shape(b, 4)) for b in layout.slots.values())


def test_encoder_blocks_land_in_their_slots(sample):
    enc, layout = build_encoder3(sample)
    cells = set(map(tuple, enc.cells.tolist()))
    for (x, y, z), b in list(layout.slots.items())[:40]:
        shape = blocks.block(b)
        for c in shape.cells[:5]:
            assert (c[0] + CUBE * x, c[1] + CUBE * y, c[2] + CUBE * z) in cells


def test_general_t_and_p():
    W = uniform_set(3, 5)  # q=5 -> t=5
    layout = encoder3_layout(W)
    assert layout.extents == (20, 3, 6)
    assert layout.layer(6) == {(1, 1): "E"}
    assert is_connected(reduction.build_linker3(W, "D"))


def test_p1_rejected():
    with pytest.raises(WangError):
        build_tileset(uniform_set(1), 3)


def test_bad_dimension(sample):
    with pytest.raises(ReductionError):
        build_tileset(sample, 5)


def test_brick_match_follows_wang_rules(sample):
    # the upper-west encoder holds the Wang north neighbour, the upper-east one the east neighbour
    for lower in range(3):
        for west in range(3):
            for east in range(3):
                ok = (sample.tiles[lower].north == sample.tiles[west].south
                      and sample.tiles[lower].east == sample.tiles[east].west)
                assert brick_match(sample, lower, west, east) == ok
