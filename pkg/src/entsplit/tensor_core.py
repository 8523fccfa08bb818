"""Dense linear algebra over explicit tensor-product spaces.

Flat indices are row-major over the party order, so party 0 is the most
significant digit: in a 2x3 space ``|ij>`` sits at flat index ``3*i + j``.
Parties are 0-indexed in code and printed 1-indexed.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.stats import unitary_group

from .errors import ContractViolation, DimensionError, NormalizationError

# representation round-off (hermiticity, normalisation)
REPR_TOL = 1e-12
# eigenvalue / singular value / unitarity checks
SPECTRAL_TOL = 1e-10


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=complex, copy=True)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class TensorSpace:
    """The space C^{d_1} x ... x C^{d_m}."""

    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims:
            raise DimensionError("a tensor space needs at least one party")
        if any(d < 2 for d in dims):
            raise DimensionError(f"every local dimension must be >= 2, got {dims}")
        object.__setattr__(self, "dims", dims)

    @property
    def total_dim(self) -> int:
        return math.prod(self.dims)

    @property
    def parties(self) -> int:
        return len(self.dims)

    def __str__(self) -> str:
        return "x".join(str(d) for d in self.dims)


@dataclass(frozen=True)
class Ket:
    """A (possibly unnormalized) pure state in a tensor space."""

    space: TensorSpace
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != self.space.total_dim:
            raise DimensionError(
                f"{amps.size} amplitudes given for a space of dimension {self.space.total_dim}"
            )
        object.__setattr__(self, "amplitudes", _frozen(amps))

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    @property
    def is_normalized(self) -> bool:
        return abs(self.norm**2 - 1.0) <= REPR_TOL

    def normalized(self) -> Ket:
        n = self.norm
        if n == 0.0:
            raise NormalizationError("cannot normalize the zero vector")
        return Ket(self.space, self.amplitudes / n)

    def tensor(self) -> np.ndarray:
        """Amplitudes reshaped to one axis per party."""
        return self.amplitudes.reshape(self.space.dims)

    def overlap(self, other: Ket) -> complex:
        """<self|other>."""
        return complex(np.vdot(self.amplitudes, other.amplitudes))


@dataclass(frozen=True)
class Operator:
    """A D x D matrix acting on a tensor space."""

    space: TensorSpace
    matrix: np.ndarray
    hermitian: bool = False

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        D = self.space.total_dim
        if mat.shape != (D, D):
            raise DimensionError(f"operator of shape {mat.shape} on a space of dimension {D}")
        if self.hermitian and D and np.max(np.abs(mat - mat.conj().T)) > REPR_TOL:
            raise ContractViolation("operator flagged hermitian is not hermitian")
        object.__setattr__(self, "matrix", _frozen(mat))

    def expectation(self, psi: Ket) -> complex:
        return complex(np.vdot(psi.amplitudes, self.matrix @ psi.amplitudes))

    def apply(self, psi: Ket) -> Ket:
        return Ket(self.space, self.matrix @ psi.amplitudes)


@dataclass(frozen=True)
class Bipartition:
    """A cut of the parties ``{0..m-1}`` into two non-empty sides.

    The canonical form keeps party 0 on the left; build instances with
    :meth:`of` to get it.
    """

    left: frozenset[int]
    right: frozenset[int] = field(default=frozenset())

    @classmethod
    def of(cls, left: Iterable[int], parties: int) -> Bipartition:
        left = frozenset(int(p) for p in left)
        everyone = frozenset(range(parties))
        if not left or not left < everyone:
            raise ContractViolation(f"{sorted(left)} is not a proper non-empty subset of {parties} parties")
        right = everyone - left
        if 0 not in left:
            left, right = right, left
        return cls(left, right)

    @property
    def parties(self) -> int:
        return len(self.left) + len(self.right)

    def validate(self, space: TensorSpace) -> None:
        if self.left & self.right or (self.left | self.right) != frozenset(range(space.parties)):
            raise ContractViolation(f"cut {self} is not valid for {space.parties} parties")
        if not self.left or not self.right:
            raise ContractViolation(f"cut {self} has an empty side")

    def side_dims(self, space: TensorSpace) -> tuple[int, int]:
        dl = math.prod(space.dims[p] for p in sorted(self.left))
        dr = math.prod(space.dims[p] for p in sorted(self.right))
        return dl, dr

    def __str__(self) -> str:
        fmt = lambda s: "{" + ",".join(str(p + 1) for p in sorted(s)) + "}"
        return f"{fmt(self.left)}|{fmt(self.right)}"


def all_bipartitions(parties: int) -> list[Bipartition]:
    """Every cut of ``parties`` parties, 2**(m-1) - 1 of them, in a fixed order."""
    if parties < 2:
        return []
    rest = range(1, parties)
    cuts = []
    for size in range(0, parties - 1):
        for combo in itertools.combinations(rest, size):
            cuts.append(Bipartition.of((0, *combo), parties))
    return cuts


def single_party_cuts(parties: int) -> list[Bipartition]:
    """The m cuts ``{i}|rest``; a state is fully product iff it is product on all of them."""
    if parties == 2:
        return [Bipartition.of([0], 2)]
    return [Bipartition.of([i], parties) for i in range(parties)]


def reshape_across(amplitudes: np.ndarray, dims: Sequence[int], cut: Bipartition) -> np.ndarray:
    """Matrix (left x right) of a flat amplitude vector, or a batch of them.

    A trailing batch axis is not supported; a leading one is (shape ``(N, D)``).
    """
    left, right = sorted(cut.left), sorted(cut.right)
    dl = math.prod(dims[p] for p in left)
    dr = math.prod(dims[p] for p in right)
    amps = np.asarray(amplitudes)
    if amps.ndim == 1:
        t = amps.reshape(dims).transpose(left + right)
        return t.reshape(dl, dr)
    n = amps.shape[0]
    t = amps.reshape((n, *dims)).transpose([0] + [p + 1 for p in left + right])
    return t.reshape(n, dl, dr)


def ket_from_labels(space: TensorSpace, labels: Sequence[int]) -> Ket:
    """Computational basis ket ``|l_1 l_2 ... l_m>``."""
    if len(labels) != space.parties:
        raise DimensionError(f"{len(labels)} labels for {space.parties} parties")
    for lab, d in zip(labels, space.dims):
        if not 0 <= lab < d:
            raise DimensionError(f"label {lab} out of range for local dimension {d}")
    amps = np.zeros(space.total_dim, dtype=complex)
    amps[np.ravel_multi_index(tuple(labels), space.dims)] = 1.0
    return Ket(space, amps)


def ket_from_terms(space: TensorSpace, terms: dict[str, complex] | Sequence[tuple[Sequence[int], complex]]) -> Ket:
    """Unnormalized ket from ``{"01": 1, "10": -1}``-style terms.

    String keys need single-digit labels; pass ``((0, 1), coeff)`` pairs otherwise.
    """
    items = terms.items() if isinstance(terms, dict) else terms
    amps = np.zeros(space.total_dim, dtype=complex)
    for labels, coeff in items:
        if isinstance(labels, str):
            labels = [int(c) for c in labels]
        amps += coeff * ket_from_labels(space, labels).amplitudes
    return Ket(space, amps)


def product_ket(space: TensorSpace, factors: Sequence[np.ndarray]) -> Ket:
    """Kronecker product of one local vector per party."""
    if len(factors) != space.parties:
        raise DimensionError(f"{len(factors)} factors for {space.parties} parties")
    out = np.ones(1, dtype=complex)
    for f, d in zip(factors, space.dims):
        f = np.asarray(f, dtype=complex).reshape(-1)
        if f.size != d:
            raise DimensionError(f"factor of length {f.size} for local dimension {d}")
        out = np.kron(out, f)
    return Ket(space, out)


def schmidt_coefficients(psi: Ket, cut: Bipartition) -> np.ndarray:
    """Schmidt coefficients of a normalized ket across ``cut``, non-increasing."""
    if not psi.is_normalized:
        raise NormalizationError(f"ket has squared norm {psi.norm**2!r}, expected 1")
    cut.validate(psi.space)
    return np.linalg.svd(reshape_across(psi.amplitudes, psi.space.dims, cut), compute_uv=False)


def second_schmidt(amplitudes: np.ndarray, dims: Sequence[int], cut: Bipartition) -> np.ndarray:
    """Second Schmidt coefficient of normalized amplitude vectors, batched on axis 0."""
    mats = reshape_across(amplitudes, dims, cut)
    sv = np.linalg.svd(mats, compute_uv=False)
    return sv[..., 1]


def is_product(psi: Ket, cut: Bipartition, tol: float = SPECTRAL_TOL) -> bool:
    return bool(schmidt_coefficients(psi, cut)[1] <= tol)


def _require_hermitian(op: Operator) -> None:
    m = op.matrix
    if np.max(np.abs(m - m.conj().T)) > REPR_TOL:
        raise ContractViolation("operator is not hermitian")


def partial_transpose(rho: Operator, cut: Bipartition) -> Operator:
    """Transpose the indices of the parties on the right side of ``cut``."""
    _require_hermitian(rho)
    cut.validate(rho.space)
    dims = rho.space.dims
    m = len(dims)
    t = rho.matrix.reshape(dims + dims)
    axes = list(range(2 * m))
    for p in cut.right:
        axes[p], axes[m + p] = axes[m + p], axes[p]
    out = t.transpose(axes).reshape(rho.space.total_dim, rho.space.total_dim)
    return Operator(rho.space, out, hermitian=True)


def min_eigenvalue(op: Operator) -> float:
    _require_hermitian(op)
    return float(np.linalg.eigvalsh(op.matrix)[0])


def density(psi: Ket) -> Operator:
    """``|psi><psi|`` for a normalized ket."""
    a = psi.amplitudes
    return Operator(psi.space, np.outer(a, a.conj()), hermitian=True)


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    return unitary_group.rvs(d, random_state=rng) if d > 1 else np.ones((1, 1), dtype=complex)


def random_local_unitary(space: TensorSpace, seed) -> Operator:
    """``U_1 x ... x U_m`` with Haar-random factors; deterministic in ``seed``."""
    rng = np.random.default_rng(seed)
    u = np.ones((1, 1), dtype=complex)
    for d in space.dims:
        u = np.kron(u, haar_unitary(d, rng))
    return Operator(space, u)


def haar_vector(d: int, rng: np.random.Generator) -> np.ndarray:
    """Uniformly random unit vector in C^d."""
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)
