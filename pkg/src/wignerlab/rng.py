"""Counter-based random streams.

Every random number is a pure function of a key path and a counter, so a
matrix entry drawn for ``(seed, N, trial, component, i, j)`` is the same no
matter which worker generates it or in which order trials are scheduled.

The generator is SplitMix64 evaluated at an arbitrary position: the output
for counter ``c`` under key ``k`` is ``mix(k + (c + 1) * GOLDEN)``.  Keys are
derived by folding each path word through the same finalizer.
"""

from __future__ import annotations

import numpy as np

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_MASK = (1 << 64) - 1
_TWO_M53 = 2.0**-53


def _mix(x: np.ndarray) -> np.ndarray:
    # SplitMix64 finalizer; uint64 arrays wrap silently
    x = x ^ (x >> np.uint64(30))
    x = x * _M1
    x = x ^ (x >> np.uint64(27))
    x = x * _M2
    return x ^ (x >> np.uint64(31))


def _mix_int(x: int) -> int:
    return int(_mix(np.array([x & _MASK], dtype=np.uint64))[0])


class CounterStream:
    """A keyed, random-access stream of 64-bit words.

    >>> s = CounterStream(42).child(128, 7)
    >>> u = s.uniforms(np.arange(4, dtype=np.uint64))
    >>> bool(np.all((u > 0) & (u < 1)))
    True
    """

    __slots__ = ("key", "path")

    def __init__(self, seed: int, path: tuple[int, ...] = ()):
        if seed < 0 or seed > _MASK:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
        key = _mix_int(seed ^ 0x5851F42D4C957F2D)
        for word in path:
            key = _mix_int(key ^ _mix_int(int(word) + 0x632BE59BD9B4E019))
        self.key = key
        self.path = (int(seed),) + tuple(int(w) for w in path)

    def child(self, *words: int) -> "CounterStream":
        return CounterStream(self.path[0], self.path[1:] + tuple(words))

    def bits(self, counters: np.ndarray) -> np.ndarray:
        c = np.asarray(counters, dtype=np.uint64)
        return _mix(np.uint64(self.key) + (c + np.uint64(1)) * GOLDEN)

    def uniforms(self, counters: np.ndarray) -> np.ndarray:
        """Doubles in the open interval (0, 1), 53 bits of resolution."""
        b = self.bits(counters) >> np.uint64(11)
        return (b.astype(np.float64) + 0.5) * _TWO_M53

    def __repr__(self) -> str:
        return f"CounterStream(path={self.path})"


def trial_stream(seed: int, N: int, trial: int) -> CounterStream:
    """Substream for one Monte Carlo trial at matrix size ``N``."""
    return CounterStream(seed, (N, trial))
