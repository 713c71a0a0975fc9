"""Antisymmetric generator families used by the spectral bounds.

A bipartite generator is a tensor product of two rotation-group
generators L_(i,j) = |i><j| - |j><i|, one per side; the product is a
real symmetric matrix. The expectation <psi|J|psi*> vanishes on every
product state, which is what makes these operators entanglement
witnesses at the pure-state level.

Tripartite single-versus-pair splits embed a product of a single-party
generator and a pair-space generator into the three-party ordering.
The canonical sets order each pair subspace by ascending party index.
The hand-picked example operators instead use the cyclic conventions
1|23, 2|31, 3|12 (pair factors in that order); the closed-form noise
thresholds they reproduce are sensitive to this choice.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionTooSmallError, InvalidSplitError, ParameterRangeError

# Pair-factor orderings per single party, 0-based: ascending for the
# canonical sets, cyclic for the example operators.
_ASCENDING_PAIRS = {0: (1, 2), 1: (0, 2), 2: (0, 1)}
_CYCLIC_PAIRS = {0: (1, 2), 1: (2, 0), 2: (0, 1)}


@dataclass(frozen=True)
class Bipartition:
    """Split of subsystem indices into two nonempty disjoint groups."""

    side_a: tuple[int, ...]
    side_b: tuple[int, ...]

    def __post_init__(self):
        a, b = tuple(self.side_a), tuple(self.side_b)
        object.__setattr__(self, "side_a", a)
        object.__setattr__(self, "side_b", b)
        if not a or not b:
            raise InvalidSplitError("both sides must be nonempty")
        n = len(a) + len(b)
        if set(a) | set(b) != set(range(n)) or set(a) & set(b):
            raise InvalidSplitError(f"sides {a} | {b} must partition 0..{n - 1}")

    @classmethod
    def single(cls, index: int, n_parts: int) -> "Bipartition":
        """One subsystem versus the rest."""
        rest = tuple(i for i in range(n_parts) if i != index)
        return cls((index,), rest)

    @property
    def label(self) -> str:
        fmt = lambda side: "".join(str(i + 1) for i in side)
        return f"{fmt(self.side_a)}|{fmt(self.side_b)}"


@dataclass(frozen=True)
class GeneratorSet:
    """Ordered family of symmetric generators for one bipartition.

    ``index_map[t]`` records the rotation-plane pair ((i, j), (k, l))
    behind operator t: (i, j) on the first side, (k, l) on the second.
    """

    operators: tuple[np.ndarray, ...]
    index_map: tuple[tuple[tuple[int, int], tuple[int, int]], ...]
    dims: tuple[int, ...]
    split: str = "1|2"

    def __post_init__(self):
        if len(self.operators) != len(self.index_map):
            raise ParameterRangeError("one index entry per operator required")

    @property
    def count(self) -> int:
        return len(self.operators)


@dataclass(frozen=True)
class GeneratorTriple:
    """Three aligned generator families, one per single-versus-pair split.

    ``operators[s][t]`` is the t-th generator for split s in the order
    1|23, 2|13, 3|12; the three families share index alignment so a
    subset choice t applies across splits.
    """

    operators: tuple[tuple[np.ndarray, ...], ...]
    source: str = "canonical"

    def __post_init__(self):
        if len(self.operators) != 3:
            raise InvalidSplitError("exactly three split families required")
        if len({len(ops) for ops in self.operators}) != 1:
            raise ParameterRangeError("split families must have equal lengths")

    @property
    def count(self) -> int:
        return len(self.operators[0])


def _plane_pairs(d: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(d) for j in range(i + 1, d)]


def so_generators(d: int) -> list[np.ndarray]:
    """Rotation generators |i><j| - |j><i| of dimension d, pairs in
    lexicographic order. Requires d >= 2."""
    if int(d) < 2:
        raise DimensionTooSmallError(f"no antisymmetric generators in dimension {d}")
    out = []
    for i, j in _plane_pairs(int(d)):
        L = np.zeros((d, d))
        L[i, j] = 1.0
        L[j, i] = -1.0
        out.append(L)
    return out


def bipartite_generators(m: int, n: int) -> GeneratorSet:
    """All products L_(i,j) x L_(k,l) on C^m x C^n.

    The family has m*n*(m-1)*(n-1)/4 members ordered lexicographically
    by ((i, j), (k, l)). Each operator is real symmetric and the family
    is trace-orthogonal.
    """
    left = so_generators(m)
    right = so_generators(n)
    ops = []
    index_map = []
    for a, (i, j) in zip(left, _plane_pairs(m)):
        for b, (k, l) in zip(right, _plane_pairs(n)):
            ops.append(np.kron(a, b))
            index_map.append(((i, j), (k, l)))
    return GeneratorSet(tuple(ops), tuple(index_map), (int(m), int(n)))


def _embed_single_pair(single: np.ndarray, pair_op: np.ndarray, s: int, p: int, q: int, d: int) -> np.ndarray:
    """Place ``single`` on party s and ``pair_op`` on the (p, q) pair
    subspace (factor p before factor q) inside the three-party ordering."""
    t = np.kron(single, pair_op).reshape((d,) * 6)
    perm = [0, 0, 0]
    perm[s], perm[p], perm[q] = 0, 1, 2  # party -> axis currently holding it
    t = np.transpose(t, axes=perm + [ax + 3 for ax in perm])
    return np.ascontiguousarray(t.reshape(d**3, d**3))


def _single_index(split) -> int:
    if isinstance(split, Bipartition):
        if len(split.side_a) != 1 or len(split.side_b) != 2:
            raise InvalidSplitError(f"split {split.label} is not single versus pair")
        return split.side_a[0]
    s = int(split)
    if s not in (0, 1, 2):
        raise InvalidSplitError(f"single-party index {s} outside 0..2")
    return s


def tripartite_generators(d: int, split) -> GeneratorSet:
    """Single-versus-pair generator family on three d-level systems.

    Products of a single-party rotation generator with a pair-space
    rotation generator, the pair subspace ordered by ascending party
    index. ``split`` is the single party, given as an index in 0..2 or
    as a one-versus-two Bipartition. For d = 2 the family has 6 members.
    """
    if int(d) < 2:
        raise DimensionTooSmallError(f"no antisymmetric generators in dimension {d}")
    d = int(d)
    s = _single_index(split)
    p, q = _ASCENDING_PAIRS[s]
    singles = so_generators(d)
    pairs = so_generators(d * d)
    ops = []
    index_map = []
    for a, (i, j) in zip(singles, _plane_pairs(d)):
        for b, (k, l) in zip(pairs, _plane_pairs(d * d)):
            ops.append(_embed_single_pair(a, b, s, p, q, d))
            index_map.append(((i, j), (k, l)))
    label = Bipartition.single(s, 3).label
    return GeneratorSet(tuple(ops), tuple(index_map), (d, d, d), label)


def canonical_triple(d: int = 2) -> GeneratorTriple:
    """The three canonical split families, index-aligned."""
    sets = [tripartite_generators(d, s) for s in range(3)]
    return GeneratorTriple(tuple(gs.operators for gs in sets), "canonical")


def example_operators(family: str) -> GeneratorTriple:
    """Hand-picked one-operator-per-split families for the noisy GHZ and
    W detection examples.

    Each operator is S x L with S = |0><1| - |1><0| on the single qubit.
    For "ghz" the pair factor is |00><11| - |11><00|, for "w" it is
    |00><10| - |10><00|. Pair subspaces follow the cyclic orderings
    (2,3), (3,1), (1,2); the W closed form depends on this.
    """
    family = str(family).lower()
    if family not in ("ghz", "w"):
        raise ParameterRangeError(f"unknown example family {family!r}")
    single = np.array([[0.0, 1.0], [-1.0, 0.0]])  # |0><1| - |1><0|
    pair_op = np.zeros((4, 4))
    if family == "ghz":
        pair_op[0, 3] = 1.0
        pair_op[3, 0] = -1.0
    else:
        pair_op[0, 2] = 1.0
        pair_op[2, 0] = -1.0
    ops = []
    for s in range(3):
        p, q = _CYCLIC_PAIRS[s]
        ops.append((_embed_single_pair(single, pair_op, s, p, q, 2),))
    return GeneratorTriple(tuple(ops), family)
