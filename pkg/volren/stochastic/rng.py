"""
Counter-based random streams.

Every stream is a Philox4x32-10 generator (numpy.random.Philox) whose 128-bit key is the pair (seed, stream), with
the counter starting at 0. Uniform doubles are numpy's Generator.random() output. Given the seed and the stream
index, the sequence is fully determined, and streams can be drawn independently and in any order.
"""
import numpy as np

from volren.errors import DomainError

# samples served by one stream in Monte Carlo runs
STREAM_BLOCK = 65536

_UINT64_LIMIT = 2**64


def philox_generator(seed: int, stream: int = 0) -> np.random.Generator:
    seed, stream = int(seed), int(stream)
    if not 0 <= seed < _UINT64_LIMIT:
        raise DomainError(f"seed must be in [0, 2**64), got {seed}")
    if not 0 <= stream < _UINT64_LIMIT:
        raise DomainError(f"stream must be in [0, 2**64), got {stream}")
    key = np.array([seed, stream], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def stream_uniforms(seed: int, stream: int, count: int) -> np.ndarray:
    """
    The first `count` uniform variates in [0, 1) of a stream.
    """
    return philox_generator(seed, stream).random(count)


def block_layout(n_samples: int, block: int = STREAM_BLOCK):
    """
    (stream, size) pairs covering n_samples: sample j is drawn by stream j // block at offset j % block.
    """
    n_streams = -(-n_samples // block)
    return [(s, min(block, n_samples - s * block)) for s in range(n_streams)]
