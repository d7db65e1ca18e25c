"""Deterministic derivation of named RNG substreams from a master seed.

Every stochastic element of a scenario (line noise, device offset sampling,
calibration trials, Monte Carlo devices) draws from its own substream so that
runs are reproducible and independent parts can execute in any order, or in
parallel, without changing results.

The mixing function is fixed so another implementation can reproduce the
streams bit for bit: take SHA-256 over the ASCII string
``"<master_seed>:<role>:<index>"`` and interpret the first 8 bytes as a
big-endian unsigned 64-bit integer. That integer seeds a PCG64 generator
(numpy's default_rng).
"""

import hashlib

import numpy as np

# Name of the PRNG contract carried in scenario configs. Changing the
# algorithm breaks cross-run byte equality, so it is pinned by name.
PRNG_ALGORITHM = "numpy-pcg64"

ROLE_NOISE = "noise"      # line-noise waveform of a run
ROLE_OFFSET = "offset"    # per-device offset-voltage sampling (index = device id)
ROLE_TRIAL = "trial"      # calibration trials (index = trial number)
ROLE_CHECK = "check"      # in-run pipeline audit sampling


def substream_seed(master_seed: int, role: str, index: int) -> int:
    """Derive the 64-bit seed of substream (role, index) from the master seed."""
    msg = f"{master_seed}:{role}:{index}".encode("ascii")
    digest = hashlib.sha256(msg).digest()
    return int.from_bytes(digest[:8], "big")


def substream_rng(master_seed: int, role: str, index: int) -> np.random.Generator:
    """PCG64 generator for substream (role, index)."""
    return np.random.default_rng(substream_seed(master_seed, role, index))
