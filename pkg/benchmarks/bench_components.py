"""Compare the compiled and pure-Python component-labelling kernels.

    python3 benchmarks/bench_components.py --nodes 100000 --edges 80000
"""
from __future__ import annotations

import argparse
import random
import sys
import timeit

from aida import _unionfind_py
from aida.unionfind import as_index_array

try:
    from aida import _unionfind
except ImportError:
    _unionfind = None


def random_graph(n: int, m: int, seed: int):
    rng = random.Random(seed)
    sources = as_index_array(rng.randrange(n) for _ in range(m))
    targets = as_index_array(rng.randrange(n) for _ in range(m))
    return sources, targets


def best_of(fn, repeat: int) -> float:
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--nodes", type=int, default=100_000)
    parser.add_argument("--edges", type=int, default=80_000)
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    sources, targets = random_graph(args.nodes, args.edges, args.seed)
    py = best_of(lambda: _unionfind_py.label_components(args.nodes, sources, targets), args.repeat)
    print(f"graph: {args.nodes} nodes, {args.edges} edges (seed {args.seed}), best of {args.repeat}")
    print(f"python  {py * 1e3:9.2f} ms")
    if _unionfind is None:
        print("cython  not built; run `pip install -e . --no-build-isolation`")
        return 1
    cy = best_of(lambda: _unionfind.label_components(args.nodes, sources, targets), args.repeat)
    same = list(_unionfind.label_components(args.nodes, sources, targets)) == list(
        _unionfind_py.label_components(args.nodes, sources, targets))
    print(f"cython  {cy * 1e3:9.2f} ms")
    print(f"speedup {py / cy:9.1f}x  (labels identical: {same})")
    return 0 if same else 1


if __name__ == "__main__":
    sys.exit(main())
