"""Compare the compiled tick kernel against the pure-Python step.

    python3 benchmarks/bench_kernels.py --ticks 200 --nr 25 --ns 25
"""

import argparse
import time

import numpy as np

from sarswarm.simulation import advance, compiled_available
from sarswarm.world import ArenaConfig, SensorConfig, Strategy, build_world


def _world(args):
    return build_world(ArenaConfig(), SensorConfig(), args.nr, args.ns, Strategy(args.strategy),
                       layout_seed=1, agent_seed=2, walk_seed=3)


def time_backend(args, backend: str) -> tuple[float, object]:
    best = float("inf")
    world = None
    for _ in range(args.repeat):
        world = _world(args)
        t0 = time.perf_counter()
        advance(world, args.ticks, backend)
        best = min(best, time.perf_counter() - t0)
    return best, world


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--ticks", type=int, default=200)
    p.add_argument("--nr", type=int, default=25)
    p.add_argument("--ns", type=int, default=25)
    p.add_argument("--strategy", type=int, default=1, choices=[1, 2, 3])
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args()

    if not compiled_available():
        raise SystemExit("compiled kernel not built; run `pip install -e . --no-build-isolation` first")

    t_py, w_py = time_backend(args, "python")
    t_c, w_c = time_backend(args, "compiled")
    same = np.array_equal(w_py.pos, w_c.pos) and w_py.retrieved == w_c.retrieved
    print(f"agents {args.nr + args.ns}, ticks {args.ticks}, best of {args.repeat}")
    print(f"python    {t_py * 1e3 / args.ticks:9.3f} ms/tick")
    print(f"compiled  {t_c * 1e3 / args.ticks:9.3f} ms/tick")
    print(f"speedup   {t_py / t_c:9.1f}x   identical state: {same}")
    print(f"projected full trial (15000 ticks): python {t_py / args.ticks * 15000:.0f} s, "
          f"compiled {t_c / args.ticks * 15000:.2f} s")


if __name__ == "__main__":
    main()
