"""Surface-code noise model: per-level logical error rates and Pauli sampling.

The logical error rate of a distance-d patch is eps' * (p')^{d_e} per code
cycle, with d_e = (d+1)/2 for odd d and d/2 for even d. A distance profile
assigns a code distance to every tree level; the linear profile gives the
root the largest distance and the leaves distance 1, and the odd-paired
profile rounds every even distance down to the odd value below it (same
d_e, hence same rates, fewer physical qubits).

Error channels are sampled per code cycle. The default "rounds" mode draws
each cycle independently; "aggregate" mode draws one net-parity flip per
qubit per layer, which leaves the final state distribution unchanged to
leading order (X*X = Z*Z = identity, so only the parity of hits matters)
and is what the batched engine uses.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Literal, Mapping, Sequence

import numpy as np

Channel = Literal["xz", "x", "z"]
SampleMode = Literal["rounds", "aggregate"]


@dataclass(frozen=True)
class SurfaceParams:
    """Surface-code scaling constants: rate = epsilon_prime * p_ratio^{d_e}."""

    epsilon_prime: float = 0.03
    p_ratio: float = 0.1

    def __post_init__(self):
        if self.epsilon_prime <= 0:
            raise ValueError("epsilon_prime must be > 0")
        if not 0 < self.p_ratio < 1:
            raise ValueError("p_ratio must lie in (0, 1)")


@dataclass(frozen=True)
class CycleCost:
    """Code cycles per unit of code distance: c for CSWAP steps, s for SWAP."""

    c: int = 2
    s: int = 1

    def __post_init__(self):
        if self.c < 1 or self.s < 1:
            raise ValueError("cycle costs must be integers >= 1")
        if self.c != int(self.c) or self.s != int(self.s):
            raise ValueError("cycle costs must be integers")


def effective_distance(d: int) -> int:
    """d_e: (d+1)/2 for odd d, d/2 for even d."""
    if d < 1:
        raise ValueError(f"distance must be >= 1, got {d}")
    return (d + 1) // 2


def logical_error_rate(params: SurfaceParams, d: int) -> float:
    """Per-code-cycle logical error rate of a distance-d patch, clamped to [0, 1]."""
    rate = params.epsilon_prime * params.p_ratio ** effective_distance(d)
    return min(max(rate, 0.0), 1.0)


class DistanceProfile:
    """Assignment of code distance to tree levels 0..n (root is level 0)."""

    def __init__(self, kind: str, n: int, uniform_d: int | None = None):
        if n < 1:
            raise ValueError("tree depth n must be >= 1")
        if kind not in ("linear", "odd_paired", "uniform"):
            raise ValueError(f"unknown profile kind {kind!r}")
        if kind == "uniform":
            if uniform_d is None or uniform_d < 1:
                raise ValueError("uniform profile needs a distance >= 1")
        elif uniform_d is not None:
            raise ValueError("uniform_d only applies to the uniform profile")
        self.kind = kind
        self.n = n
        self.uniform_d = uniform_d

    @classmethod
    def linear(cls, n: int) -> "DistanceProfile":
        return cls("linear", n)

    @classmethod
    def odd_paired(cls, n: int) -> "DistanceProfile":
        return cls("odd_paired", n)

    @classmethod
    def uniform(cls, n: int, d: int) -> "DistanceProfile":
        return cls("uniform", n, uniform_d=d)

    def distance(self, level: int) -> int:
        if not 0 <= level <= self.n:
            raise ValueError(f"level {level} outside [0, {self.n}]")
        if self.kind == "uniform":
            return self.uniform_d
        d = self.n - level + 1
        if self.kind == "odd_paired" and d % 2 == 0:
            d -= 1
        return d

    def distances(self) -> list[int]:
        return [self.distance(l) for l in range(self.n + 1)]

    def __repr__(self) -> str:
        if self.kind == "uniform":
            return f"DistanceProfile.uniform(n={self.n}, d={self.uniform_d})"
        return f"DistanceProfile.{self.kind}(n={self.n})"


def level_error_rate(params: SurfaceParams, profile: DistanceProfile, level: int) -> float:
    """Logical error rate at the profile's distance for one tree level."""
    return logical_error_rate(params, profile.distance(level))


@dataclass(frozen=True)
class PauliEvent:
    qubit: int
    kind: Literal["X", "Z"]

    def __post_init__(self):
        if self.kind not in ("X", "Z"):
            raise ValueError(f"kind must be X or Z, got {self.kind!r}")


def _channel_probs(rate: float, channel: Channel) -> tuple[float, float]:
    if channel == "xz":
        return rate / 2.0, rate / 2.0
    if channel == "x":
        return rate, 0.0
    if channel == "z":
        return 0.0, rate
    raise ValueError(f"unknown channel {channel!r}")


def net_flip_probability(p_round: float, cycles: int) -> float:
    """P(odd number of hits) over `cycles` Bernoulli(p_round) rounds."""
    return 0.5 * (1.0 - (1.0 - 2.0 * p_round) ** cycles)


def sample_layer_errors(
    rng: np.random.Generator,
    per_qubit_rate: Mapping[int, float] | Sequence[float],
    cycles: int,
    mode: SampleMode = "rounds",
    channel: Channel = "xz",
) -> list[PauliEvent]:
    """Sample the Pauli events one layer of parallel gates inflicts.

    In "rounds" mode every code cycle independently emits X with
    probability rate/2 and Z with probability rate/2 per qubit (full rate
    for single-channel configurations). In "aggregate" mode one net X and
    one net Z parity flip is drawn per qubit, with the equivalent odd-hit
    probability; at most one event per qubit and kind is emitted.
    """
    if cycles < 1:
        raise ValueError("cycles must be >= 1")
    if isinstance(per_qubit_rate, Mapping):
        items = sorted(per_qubit_rate.items())
    else:
        items = list(enumerate(per_qubit_rate))
    events: list[PauliEvent] = []
    for qubit, rate in items:
        if not 0.0 <= rate <= 1.0:
            raise ValueError(f"rate for qubit {qubit} outside [0, 1]")
        if rate == 0.0:
            continue
        px, pz = _channel_probs(rate, channel)
        if mode == "rounds":
            for _ in range(cycles):
                if px and rng.random() < px:
                    events.append(PauliEvent(qubit, "X"))
                if pz and rng.random() < pz:
                    events.append(PauliEvent(qubit, "Z"))
        elif mode == "aggregate":
            qx = net_flip_probability(px, cycles) if px else 0.0
            qz = net_flip_probability(pz, cycles) if pz else 0.0
            if qx and rng.random() < qx:
                events.append(PauliEvent(qubit, "X"))
            if qz and rng.random() < qz:
                events.append(PauliEvent(qubit, "Z"))
        else:
            raise ValueError(f"unknown mode {mode!r}")
    return events


class NoiseModel:
    """Per-qubit error rates for a schedule plus sampling configuration.

    `flat_rate` overrides the surface-code rates with one uniform
    per-cycle rate for every qubit (used by small benchmark circuits).
    """

    def __init__(
        self,
        params: SurfaceParams,
        profile: DistanceProfile,
        channel: Channel = "xz",
        mode: SampleMode = "rounds",
        flat_rate: float | None = None,
    ):
        self.params = params
        self.profile = profile
        self.channel = channel
        self.mode = mode
        self.flat_rate = flat_rate

    def rate_for_level(self, level: int) -> float:
        if self.flat_rate is not None:
            return self.flat_rate
        return level_error_rate(self.params, self.profile, level)

    def per_qubit_rates(self, levels: Iterable[int]) -> np.ndarray:
        return np.array([self.rate_for_level(l) for l in levels], dtype=float)


def trajectory_rng(seed: int, stream: int) -> np.random.Generator:
    """Counter-based generator for stream `stream` of a seeded experiment.

    Distinct streams are statistically independent Philox streams keyed by
    (seed, stream), so trials can run in any order or in parallel and
    reproduce exactly.
    """
    key = np.array([seed & 0xFFFFFFFFFFFFFFFF, stream & 0xFFFFFFFFFFFFFFFF], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))
