"""xoshiro256** generator, seeded through splitmix64.

State transition (all arithmetic mod 2^64)::

    result = rotl(s1 * 5, 7) * 9
    t  = s1 << 17
    s2 ^= s0; s3 ^= s1; s1 ^= s2; s0 ^= s3
    s2 ^= t;  s3 = rotl(s3, 45)

A 64-bit seed fills ``s0..s3`` with four consecutive splitmix64 outputs.
Restart ``r`` of the annealer uses that state advanced by ``r`` calls of
:meth:`Xoshiro256.jump` (2^128 steps each), so restart streams never overlap.
Uniform doubles are ``(next() >> 11) * 2^-53``.
"""
from __future__ import annotations

MASK = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
JUMP = (0x180EC6D33CFD0ABA, 0xD5A61266F0C9392C, 0xA9582618E03FC9AA, 0x39ABDC4529B1661C)


def splitmix64(state: int) -> tuple[int, int]:
    """Return ``(new_state, output)``."""
    state = (state + GOLDEN) & MASK
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return state, z ^ (z >> 31)


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & MASK


class Xoshiro256:
    """Reference implementation; the annealer kernel mirrors it in compiled code."""

    def __init__(self, seed: int = 0, state=None):
        if state is not None:
            self.s = [int(w) & MASK for w in state]
        else:
            sm = int(seed) & MASK
            self.s = []
            for _ in range(4):
                sm, out = splitmix64(sm)
                self.s.append(out)

    def next(self) -> int:
        s = self.s
        result = (_rotl((s[1] * 5) & MASK, 7) * 9) & MASK
        t = (s[1] << 17) & MASK
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = _rotl(s[3], 45)
        return result

    def random(self) -> float:
        return (self.next() >> 11) * 2.0**-53

    def jump(self) -> None:
        acc = [0, 0, 0, 0]
        for word in JUMP:
            for b in range(64):
                if word & (1 << b):
                    for k in range(4):
                        acc[k] ^= self.s[k]
                self.next()
        self.s = acc

    def state(self) -> tuple:
        return tuple(self.s)


def restart_states(seed: int, restarts: int) -> list:
    """Initial state of each restart's stream."""
    rng = Xoshiro256(seed)
    out = []
    for _ in range(restarts):
        out.append(rng.state())
        rng.jump()
    return out
