import numpy as np

# Stream tags mixed into derived seeds so different draws never share a stream
SENSOR_STREAM = 1
CAMPAIGN_STREAM = 2
MODEM_STREAM = 3


def derive_seed(*entropy: int) -> int:
    """A 64-bit seed that depends on every integer in ``entropy`` and their order."""
    state = np.random.SeedSequence([int(e) for e in entropy]).generate_state(1, dtype=np.uint64)
    return int(state[0])


def rng_for(*entropy: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(derive_seed(*entropy)))
