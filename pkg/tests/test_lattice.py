import itertools

import numpy as np
import pytest

from wangreduce.lattice import BoxRegion, LatticeError, QuotientRegion, hermite_normal_form, parse_box, read_lattice


def _det(rows):
    return round(abs(np.linalg.det(np.array(rows, dtype=float))))


def test_hnf_is_upper_triangular():
    h = hermite_normal_form([[80, 60, 0], [-240, 180, 0], [0, 0, 60]])
    assert h == [[80, 60, 0], [0, 360, 0], [0, 0, 60]]


def test_hnf_of_generating_set():
    assert hermite_normal_form([[2, 0], [0, 2], [1, 1]]) == [[1, 1], [0, 2]]


def test_hnf_rejects_degenerate():
    with pytest.raises(LatticeError):
        hermite_normal_form([[1, 2], [2, 4]])


@pytest.mark.parametrize("rows", [
    [[3, 1], [1, 2]],
    [[4, 0, 0], [0, 2, 1], [1, 1, 3]],
    [[20, 60, 0, 0], [-20, 60, 0, 0], [0, 0, 40, 0], [0, 0, 0, 10]],
    [[-5, 2], [7, -3]],
])
def test_region_size_is_det(rows):
    assert QuotientRegion.from_rows(rows).size == _det(rows)


def test_reduce_is_lattice_invariant():
    rows = [[4, 0, 0], [0, 2, 1], [1, 1, 3]]
    R = QuotientRegion.from_rows(rows)
    rng = np.random.default_rng(1)
    pts = rng.integers(-50, 50, size=(200, 3))
    shift = rng.integers(-3, 4, size=(200, 3)) @ np.array(rows)
    assert np.array_equal(R.index(pts), R.index(pts + shift))


def test_residues_cover_every_class_once():
    rows = [[3, 1], [1, 2]]
    R = QuotientRegion.from_rows(rows)
    box = np.array(list(itertools.product(range(-10, 10), repeat=2)))
    assert set(R.index(box).tolist()) == set(range(R.size))


def test_contains():
    R = QuotientRegion.from_rows([[10, 0], [0, 6]])
    assert R.contains((20, -6))
    assert not R.contains((5, 0))


def test_cell_of_inverts_index():
    R = QuotientRegion.from_rows([[4, 0, 0], [0, 2, 1], [1, 1, 3]])
    for i in range(R.size):
        assert R.index(np.array([R.cell_of(i)]))[0] == i


def test_box_region():
    B = parse_box("3x2")
    assert B.size == 6
    idx = B.index(np.array([[0, 0], [2, 1], [3, 0], [-1, 0]]))
    assert idx.tolist() == [0, 5, -1, -1]
    assert B.cell_of(5) == (2, 1)


@pytest.mark.parametrize("text", ["3x", "0x2", "ax2"])
def test_bad_box(text):
    with pytest.raises(LatticeError):
        parse_box(text)


def test_read_lattice(tmp_path):
    p = tmp_path / "l.txt"
    p.write_text("# periods\n2 0\nlattice 0 3\n")
    assert read_lattice(p).size == 6


def test_box_region_index_and_outside():
    box = BoxRegion((3, 2), origin=(1, -1))
    assert box.size == 6
    idx = box.index([[1, -1], [3, 0], [0, 0], [1, 1]])
    assert idx.tolist() == [0, 5, -1, -1]
    for i in range(box.size):
        assert box.index([box.cell_of(i)])[0] == i


def test_parse_box_matches_region():
    assert parse_box("3x3") == BoxRegion((3, 3))
    assert parse_box("10x10x10").size == 1000
