"""Deterministic 64-bit seed derivation for independent random streams.

Experiment trials must be individually reproducible: rerunning trial i of a
sweep, alone, has to consume exactly the same randomness as trial i inside
the full sweep.  We therefore never share one generator across trials.
Instead every trial derives its own seed from the base seed with the
SplitMix64 permutation, one round per stream index:

    trial embedding stream: mix(base_seed, trial_index, 0)
    trial tree stream:      mix(base_seed, trial_index, 1)

SplitMix64 is the public-domain generator of Steele, Lea and Flood; a single
round is a bijection on 64-bit words, so distinct index tuples collide only
if the underlying 64-bit hash does.
"""

MASK64 = (1 << 64) - 1

_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def splitmix64(x: int) -> int:
    """One SplitMix64 round: advance by the golden-ratio increment and mix."""
    x = (x + _GOLDEN) & MASK64
    x = ((x ^ (x >> 30)) * _MIX1) & MASK64
    x = ((x ^ (x >> 27)) * _MIX2) & MASK64
    return x ^ (x >> 31)


def mix(base_seed: int, *indices: int) -> int:
    """Derive a child seed from ``base_seed`` and one or more stream indices.

    Folding is sequential, so mix(s, i, j) == mix(mix(s, i), j); any subset
    of trials can be reproduced without running the others.
    """
    h = base_seed & MASK64
    for x in indices:
        h = splitmix64(h ^ (x & MASK64))
    return h
