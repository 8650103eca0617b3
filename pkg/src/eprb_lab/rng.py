"""Deterministic, counter-based randomness shared by every sampler.

All randomness in this package is derived from a single published mixing
function rather than from stateful generator objects, so that every draw is
a pure function of ``(seed, stream path)`` and results are bit-identical
regardless of worker count, chunking, or traversal order.

Algorithm (documented contract; changing it is a breaking change):

* ``mix64(z)`` is the splitmix64 step applied to a 64-bit input::

      z = (z + 0x9E3779B97F4A7C15) mod 2**64
      z = ((z XOR (z >> 30)) * 0xBF58476D1CE4E5B9) mod 2**64
      z = ((z XOR (z >> 27)) * 0x94D049BB133111EB) mod 2**64
      return z XOR (z >> 31)

* ``derive(seed, p1, p2, ..., pk)`` folds a path of nonnegative integers
  into a stream value::

      h = mix64(seed); h = mix64(h XOR p1); ...; h = mix64(h XOR pk)

  Note ``derive(seed, *path, i) == mix64(derive(seed, *path) XOR i)``, which
  is what the vectorized samplers exploit.

* ``uniform*`` maps a stream value to a double in [0, 1) using its top
  53 bits: ``(h >> 11) * 2**-53``.

Seeds are folded into 64 bits two's-complement style (``seed & (2**64-1)``),
so negative Python ints are accepted.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1

_GOLDEN = 0x9E3779B97F4A7C15
_MIX_A = 0xBF58476D1CE4E5B9
_MIX_B = 0x94D049BB133111EB

_U_GOLDEN = np.uint64(_GOLDEN)
_U_MIX_A = np.uint64(_MIX_A)
_U_MIX_B = np.uint64(_MIX_B)
_U30 = np.uint64(30)
_U27 = np.uint64(27)
_U31 = np.uint64(31)
_U11 = np.uint64(11)
_INV_2_53 = 2.0 ** -53


def mix64(z: int) -> int:
    """splitmix64 step on a Python int (reference implementation)."""
    z = (z + _GOLDEN) & MASK64
    z = ((z ^ (z >> 30)) * _MIX_A) & MASK64
    z = ((z ^ (z >> 27)) * _MIX_B) & MASK64
    return z ^ (z >> 31)


def derive(seed: int, *path: int) -> int:
    """Stream value for ``(seed, path)``: mix64 folded over the path."""
    h = mix64(seed & MASK64)
    for p in path:
        h = mix64(h ^ (p & MASK64))
    return h


def uniform(seed: int, *path: int) -> float:
    """Uniform double in [0, 1) for the stream value of ``(seed, path)``."""
    return (derive(seed, *path) >> 11) * _INV_2_53


def mix64_vec(z: np.ndarray) -> np.ndarray:
    """Elementwise mix64 on a uint64 array; matches :func:`mix64` exactly."""
    with np.errstate(over="ignore"):  # mod-2**64 wraparound is the algorithm
        z = z + _U_GOLDEN
        z = (z ^ (z >> _U30)) * _U_MIX_A
        z = (z ^ (z >> _U27)) * _U_MIX_B
        return z ^ (z >> _U31)


def derive_vec(seed: int | np.ndarray, *path: int | np.ndarray) -> np.ndarray:
    """Vectorized :func:`derive`.

    ``seed`` and each path element may be a scalar or a uint64-compatible
    array; arrays broadcast. Scalars are masked into 64 bits first.
    """
    h = mix64_vec(_as_u64(seed))
    for p in path:
        h = mix64_vec(h ^ _as_u64(p))
    return h


def uniform_vec(state: np.ndarray) -> np.ndarray:
    """Map uint64 stream values to uniform doubles in [0, 1)."""
    return (state >> _U11).astype(np.float64) * _INV_2_53


def _as_u64(value: int | np.ndarray) -> np.ndarray:
    if isinstance(value, np.ndarray):
        return value.astype(np.uint64, copy=False)
    return np.uint64(int(value) & MASK64)
