import pytest

from wangreduce.wang import sample_set, find_periodic, uniform_set, solve_torus
from wangreduce.tiling import build_tiling3, build_tiling4


@pytest.fixture(scope="session")
def sample():
    return sample_set()


@pytest.fixture(scope="session")
def sample_torus(sample):
    A = find_periodic(sample, max_side=4)
    assert A is not None
    return A


@pytest.fixture(scope="session")
def cert3(sample, sample_torus):
    return build_tiling3(sample, sample_torus)


@pytest.fixture(scope="session")
def cert4(sample, sample_torus):
    return build_tiling4(sample, sample_torus)


@pytest.fixture(scope="session")
def uniform2():
    return uniform_set(2, 1)


@pytest.fixture(scope="session")
def uniform_cert3(uniform2):
    return build_tiling3(uniform2, solve_torus(uniform2, 1, 1))


def bfs_components(cells):
    """Face-connected component count by plain breadth-first search."""
    todo = {tuple(int(v) for v in c) for c in cells}
    count = 0
    while todo:
        count += 1
        stack = [todo.pop()]
        while stack:
            c = stack.pop()
            for axis in range(len(c)):
                for step in (-1, 1):
                    n = c[:axis] + (c[axis] + step,) + c[axis + 1:]
                    if n in todo:
                        todo.remove(n)
                        stack.append(n)
    return count


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
