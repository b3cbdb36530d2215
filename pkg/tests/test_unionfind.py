from __future__ import annotations

import importlib
import random
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aida import _unionfind_py, unionfind
from oracles import reachability_partition

KERNELS = [pytest.param(_unionfind_py.label_components, id="python")]
try:
    from aida import _unionfind
except ImportError:  # pragma: no cover - extension not built
    pass
else:
    KERNELS.append(pytest.param(_unionfind.label_components, id="cython"))


def as_partition(labels) -> set[frozenset[int]]:
    groups: dict[int, set[int]] = {}
    for i, root in enumerate(labels):
        groups.setdefault(root, set()).add(i)
    return {frozenset(g) for g in groups.values()}


def random_graph(rng: random.Random, max_nodes: int = 200):
    n = rng.randint(0, max_nodes)
    density = rng.choice([0.0, 0.002, 0.005, 0.01, 0.02, 0.05])
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < density]
    return n, edges


@pytest.mark.parametrize("kernel", KERNELS)
def test_kernel_matches_oracle(kernel):
    rng = random.Random(20240101)
    for _ in range(100):
        n, edges = random_graph(rng)
        labels = unionfind.as_index_array([u for u, _ in edges]), unionfind.as_index_array([v for _, v in edges])
        got = kernel(n, *labels)
        assert as_partition(got) == reachability_partition(n, edges)
        # label is the smallest member of each component
        for i, root in enumerate(got):
            assert root <= i and got[root] == root


@pytest.mark.parametrize("kernel", KERNELS)
def test_small_cases(kernel):
    arr = unionfind.as_index_array
    assert list(kernel(0, arr([]), arr([]))) == []
    assert list(kernel(3, arr([]), arr([]))) == [0, 1, 2]
    assert list(kernel(5, arr([1, 4]), arr([0, 3]))) == [0, 0, 2, 3, 3]


@pytest.mark.parametrize("kernel", KERNELS)
def test_out_of_range_rejected(kernel):
    arr = unionfind.as_index_array
    with pytest.raises((IndexError, ValueError)):
        kernel(2, arr([0]), arr([2]))
    with pytest.raises((IndexError, ValueError)):
        kernel(2, arr([0, 1]), arr([1]))


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 40).flatmap(lambda n: st.tuples(
    st.just(n), st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=60))))
def test_backends_agree(case):
    n, edges = case
    s, t = [u for u, _ in edges], [v for _, v in edges]
    assert list(unionfind.label_components(n, s, t)) == list(_unionfind_py.label_components(
        n, unionfind.as_index_array(s), unionfind.as_index_array(t)))


def test_pure_python_override():
    code = "import aida.unionfind as u; print(u.BACKEND)"
    out = subprocess.run([sys.executable, "-c", code], env={"AIDA_PURE_PYTHON": "1", "PATH": ""},
                         capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
    assert importlib.import_module("aida.unionfind").BACKEND in ("cython", "python")
