"""Classical channels, causal partitions, factorizations, and entropy.

A channel is a row-stochastic matrix P(Y|X) over finite labeled alphabets.
Grouping inputs whose conditional output rows coincide gives the causal
partition; reading the reduced channel off one representative per class
gives the coarsest deterministic-first-stage factorization of the channel.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "AlphabetMismatch",
    "Channel",
    "Factorization",
    "FactorizationCheck",
    "InputDistribution",
    "InvalidChannel",
    "Partition",
    "ROW_TOL",
    "causal_factorization",
    "causal_partition",
    "classical_fidelity",
    "factorization_from_partition",
    "pushforward",
    "rbsc",
    "shannon_entropy",
    "singleton_partition",
    "verify_factorization",
]

# Default max-norm tolerance for "these output rows are the same distribution".
ROW_TOL = 1e-9


class InvalidChannel(ValueError):
    """Channel data violates shape, row-sum, or entry-range constraints."""


class AlphabetMismatch(ValueError):
    """Two objects indexed by different alphabets were combined."""


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class Channel:
    """Conditional distribution P(Y|X) over finite alphabets.

    ``matrix[i, j]`` is the probability of output ``outputs[j]`` given input
    ``inputs[i]``. Rows must sum to 1 within 1e-9 and entries must lie in
    [0, 1] up to round-off.
    """

    inputs: tuple
    outputs: tuple
    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        m = np.asarray(self.matrix, dtype=float)
        if m.ndim != 2:
            raise InvalidChannel(f"matrix must be 2-D, got ndim={m.ndim}")
        if m.shape != (len(self.inputs), len(self.outputs)):
            raise InvalidChannel(
                f"matrix shape {m.shape} does not match alphabets "
                f"({len(self.inputs)}x{len(self.outputs)})"
            )
        if len(self.inputs) < 1 or len(self.outputs) < 1:
            raise InvalidChannel("alphabets must be nonempty")
        if len(set(self.inputs)) != len(self.inputs):
            raise InvalidChannel("duplicate input labels")
        if len(set(self.outputs)) != len(self.outputs):
            raise InvalidChannel("duplicate output labels")
        if m.min() < -1e-12 or m.max() > 1 + 1e-12:
            raise InvalidChannel("entries must lie in [0, 1]")
        rowsum_err = np.abs(m.sum(axis=1) - 1.0).max()
        if rowsum_err > 1e-9:
            raise InvalidChannel(f"row sums deviate from 1 by {rowsum_err:.3e}")
        object.__setattr__(self, "matrix", _freeze(m))

    @property
    def n_inputs(self) -> int:
        return len(self.inputs)

    @property
    def n_outputs(self) -> int:
        return len(self.outputs)

    def row(self, i: int) -> np.ndarray:
        """Conditional output distribution of input index ``i``."""
        return self.matrix[i]

    def to_json(self) -> dict:
        return {
            "inputs": list(self.inputs),
            "outputs": list(self.outputs),
            "rows": self.matrix.tolist(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "Channel":
        if not isinstance(data, dict):
            raise InvalidChannel("channel document must be a JSON object")
        missing = {"inputs", "outputs", "rows"} - set(data)
        if missing:
            raise InvalidChannel(f"channel document missing keys: {sorted(missing)}")
        return cls(tuple(data["inputs"]), tuple(data["outputs"]), np.asarray(data["rows"], dtype=float))


def rbsc(p: float) -> Channel:
    """Four-input binary symmetric channel with each row duplicated once."""
    if not 0.0 <= p <= 1.0:
        raise InvalidChannel(f"p must lie in [0, 1], got {p}")
    rows = np.array([[1 - p, p], [p, 1 - p], [1 - p, p], [p, 1 - p]])
    return Channel(("0", "1", "2", "3"), ("0", "1"), rows)


@dataclass(frozen=True)
class Partition:
    """Disjoint cover of ``range(size)`` by nonempty index classes.

    Classes are stored sorted internally and ordered by their lowest member,
    so the lowest-index input of each class acts as its canonical
    representative.
    """

    classes: tuple
    size: int

    def __post_init__(self):
        canon = tuple(tuple(sorted(c)) for c in self.classes)
        canon = tuple(sorted(canon, key=lambda c: c[0] if c else -1))
        seen: set = set()
        for c in canon:
            if not c:
                raise ValueError("partition classes must be nonempty")
            seen.update(c)
        if sum(len(c) for c in canon) != len(seen) or seen != set(range(self.size)):
            raise ValueError(
                f"classes must disjointly cover range({self.size})"
            )
        object.__setattr__(self, "classes", canon)

    @property
    def n_classes(self) -> int:
        return len(self.classes)

    @property
    def representatives(self) -> tuple:
        """Lowest-index member of each class, in class order."""
        return tuple(c[0] for c in self.classes)

    def class_index_of(self, x: int) -> int:
        for k, c in enumerate(self.classes):
            if x in c:
                return k
        raise IndexError(f"element {x} not covered by partition")

    def refines(self, other: "Partition") -> bool:
        """True if every class of self sits inside a class of ``other``."""
        if self.size != other.size:
            return False
        owner = {}
        for k, c in enumerate(other.classes):
            for x in c:
                owner[x] = k
        return all(len({owner[x] for x in c}) == 1 for c in self.classes)


def singleton_partition(n: int) -> Partition:
    return Partition(tuple((i,) for i in range(n)), n)


@dataclass(frozen=True)
class InputDistribution:
    """Probability distribution over a channel's input alphabet."""

    probs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        if p.ndim != 1 or p.size < 1:
            raise ValueError("probabilities must form a nonempty vector")
        if p.min() < -1e-12:
            raise ValueError(f"negative probability {p.min():.3e}")
        if abs(p.sum() - 1.0) > 1e-9:
            raise ValueError(f"probabilities sum to {p.sum()!r}, not 1")
        object.__setattr__(self, "probs", _freeze(p))

    @property
    def full_support(self) -> bool:
        return bool(self.probs.min() > 0)

    @classmethod
    def uniform(cls, n: int) -> "InputDistribution":
        return cls(np.full(n, 1.0 / n))


@dataclass(frozen=True)
class Factorization:
    """Deterministic first stage (partition) plus reduced second stage.

    ``reduced`` maps class representatives to the original output alphabet.
    Construction does not check that the reduced rows reproduce any
    particular channel; use ``verify_factorization`` for that.
    """

    partition: Partition
    reduced: Channel


def causal_partition(c: Channel, tol: float = ROW_TOL) -> Partition:
    """Group inputs whose conditional output rows agree within ``tol``.

    Inputs are scanned in order and matched against the representative of
    each existing class (first match wins), which keeps the result
    deterministic even though tolerance-equality is not transitive.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    reps: list[int] = []
    classes: list[list[int]] = []
    for x in range(c.n_inputs):
        for k, r in enumerate(reps):
            if np.abs(c.matrix[x] - c.matrix[r]).max() <= tol:
                classes[k].append(x)
                break
        else:
            reps.append(x)
            classes.append([x])
    return Partition(tuple(tuple(cl) for cl in classes), c.n_inputs)


def factorization_from_partition(c: Channel, p: Partition) -> Factorization:
    """Factorization whose reduced rows are read off class representatives."""
    if p.size != c.n_inputs:
        raise AlphabetMismatch(
            f"partition covers {p.size} elements, channel has {c.n_inputs} inputs"
        )
    reps = p.representatives
    reduced = Channel(
        tuple(c.inputs[r] for r in reps),
        c.outputs,
        c.matrix[list(reps)],
    )
    return Factorization(p, reduced)


def causal_factorization(c: Channel, tol: float = ROW_TOL) -> Factorization:
    """The coarsest valid factorization: one class per distinct row."""
    return factorization_from_partition(c, causal_partition(c, tol))


def _probs(d) -> np.ndarray:
    if isinstance(d, InputDistribution):
        return d.probs
    return InputDistribution(np.asarray(d, dtype=float)).probs


def shannon_entropy(d) -> float:
    """Entropy -sum p log2 p in bits, with 0 log 0 = 0."""
    p = _probs(d)
    p = p[p > 0]
    return float(-(p * np.log2(p)).sum()) + 0.0  # + 0.0 normalizes -0.0


def pushforward(d, p: Partition) -> InputDistribution:
    """Distribution over partition classes: each class sums its members."""
    probs = _probs(d)
    if probs.size != p.size:
        raise AlphabetMismatch(
            f"distribution over {probs.size} elements, partition over {p.size}"
        )
    return InputDistribution(
        np.array([probs[list(c)].sum() for c in p.classes])
    )


def classical_fidelity(q1, q2) -> float:
    """Bhattacharyya coefficient sum_k sqrt(q1_k q2_k) in [0, 1]."""
    a, b = _probs(q1), _probs(q2)
    if a.size != b.size:
        raise AlphabetMismatch(f"distributions over {a.size} vs {b.size} outcomes")
    return float(np.sqrt(np.clip(a, 0, None) * np.clip(b, 0, None)).sum())


@dataclass(frozen=True)
class FactorizationCheck:
    """Outcome of verifying a factorization against a channel.

    ``violations`` holds (input label, output label, |delta|) triples for
    every entry where the reduced row of the input's class disagrees with
    the channel row.
    """

    ok: bool
    tol: float
    violations: tuple = field(default=())

    def __bool__(self) -> bool:
        return self.ok


def verify_factorization(c: Channel, f: Factorization, tol: float = ROW_TOL) -> FactorizationCheck:
    """Check that every input's row matches its class's reduced row."""
    p = f.partition
    if p.size != c.n_inputs:
        raise AlphabetMismatch(
            f"partition covers {p.size} elements, channel has {c.n_inputs} inputs"
        )
    if f.reduced.outputs != c.outputs:
        raise AlphabetMismatch("reduced channel output alphabet differs")
    if f.reduced.n_inputs != p.n_classes:
        raise AlphabetMismatch("reduced channel must have one row per class")
    violations = []
    for k, cl in enumerate(p.classes):
        for x in cl:
            delta = c.matrix[x] - f.reduced.matrix[k]
            for j in np.flatnonzero(np.abs(delta) > tol):
                violations.append((c.inputs[x], c.outputs[j], float(abs(delta[j]))))
    return FactorizationCheck(not violations, tol, tuple(violations))
