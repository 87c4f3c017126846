"""Per-agent random-walk streams.

SplitMix64 is used instead of numpy generators because the compiled kernel
must reproduce the exact same draws from a single 64-bit state per agent.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1
_INV_2_53 = 1.0 / 9007199254740992.0

WALK_HALF_RANGE = 1000.0


def splitmix64(state: int) -> tuple[int, int]:
    """Advance ``state`` and return ``(new_state, output)``."""
    state = (state + 0x9E3779B97F4A7C15) & _MASK
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return state, z ^ (z >> 31)


def uniform01(state: int) -> tuple[int, float]:
    state, z = splitmix64(state)
    return state, (z >> 11) * _INV_2_53


def draw_heading(state: int) -> tuple[int, float, float]:
    """Random-walk vector with both components uniform on [-1000, 1000)."""
    while True:
        state, u = uniform01(state)
        state, v = uniform01(state)
        vx = -WALK_HALF_RANGE + 2.0 * WALK_HALF_RANGE * u
        vy = -WALK_HALF_RANGE + 2.0 * WALK_HALF_RANGE * v
        if vx != 0.0 or vy != 0.0:
            return state, vx, vy
