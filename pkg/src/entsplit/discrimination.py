"""Local unambiguous identification of orthogonal mixed states.

A state ``rho_i`` of an orthogonal set can be identified without error by LOCC
with nonzero probability iff some product state ``phi`` has
``<phi|rho_i|phi> > 0`` and ``<phi|rho_j|phi> = 0`` for all ``j != i``. Only the
supports enter, so eigenvalue weights are carried along but never consulted
here.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.linalg import null_space

from .errors import ContractViolation, DimensionError
from .product_search import (
    ProductVerdict,
    SearchConfig,
    VerdictKind,
    detect_biseparable,
    detect_product,
    gauss_newton_polish,
    optimize_product_overlap,
)
from .splitting import GEOMETRY_TOL, Splitting, Subspace
from .tensor_core import (
    SPECTRAL_TOL,
    Bipartition,
    Ket,
    TensorSpace,
    all_bipartitions,
    haar_vector,
    random_local_unitary,
    reshape_across,
    single_party_cuts,
)

# overlaps at or below this count as exactly zero
ZERO_TOL = 1e-9
# a witness must overlap its own state by at least this much
NONZERO_TOL = 1e-6
NPT_TOL = 1e-9
# weight of the own-support term in the penalised witness search
_OWN_WEIGHT = 0.5


@dataclass(frozen=True, eq=False)
class MixedState:
    support: Subspace
    weights: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.weights is not None:
            w = np.asarray(self.weights, dtype=float).reshape(-1)
            if w.size != self.support.dim or np.any(w <= 0) or abs(w.sum() - 1) > 1e-9:
                raise ContractViolation(
                    f"weights for {self.support.label!r} must be {self.support.dim} positive numbers summing to 1"
                )
            object.__setattr__(self, "weights", w)

    @property
    def rank(self) -> int:
        return self.support.dim

    def density(self) -> np.ndarray:
        w = self.weights if self.weights is not None else np.full(self.rank, 1.0 / self.rank)
        b = self.support.basis
        return (b * w) @ b.conj().T


@dataclass(frozen=True, eq=False)
class StateSet:
    """Mixed states with pairwise orthogonal supports."""

    space: TensorSpace
    states: tuple[MixedState, ...]
    require_mixed: bool = True

    def __post_init__(self):
        states = tuple(self.states)
        object.__setattr__(self, "states", states)
        for st in states:
            if st.support.space != self.space:
                raise DimensionError(f"state {st.support.label!r} lives in {st.support.space}")
            if self.require_mixed and st.rank < 2:
                raise ContractViolation(f"state {st.support.label!r} has rank {st.rank}; mixed states need rank >= 2")
        for a, b in itertools.combinations(states, 2):
            if np.max(np.abs(a.support.projector @ b.support.projector)) > GEOMETRY_TOL:
                raise ContractViolation(
                    f"supports of {a.support.label!r} and {b.support.label!r} are not orthogonal"
                )

    @classmethod
    def from_splitting(cls, sp: Splitting, weights: Optional[Sequence] = None) -> StateSet:
        weights = weights or [None] * len(sp)
        return cls(sp.space, tuple(MixedState(s, w) for s, w in zip(sp.subspaces, weights)))

    def __len__(self) -> int:
        return len(self.states)

    @property
    def labels(self) -> list[str]:
        return [st.support.label or f"rho_{i + 1}" for i, st in enumerate(self.states)]

    @property
    def full_rank_sum(self) -> bool:
        return sum(st.rank for st in self.states) == self.space.total_dim


class Identifiability(str, enum.Enum):
    IDENTIFIABLE = "identifiable"
    NOT_IDENTIFIABLE_CERTIFIED = "not_identifiable_certified"
    NOT_IDENTIFIABLE_NUMERICAL = "not_identifiable_numerical"
    INCONCLUSIVE = "inconclusive"

    def __str__(self) -> str:
        return self.value

    @property
    def identifiable(self) -> bool:
        return self is Identifiability.IDENTIFIABLE

    @property
    def not_identifiable(self) -> bool:
        return self in (Identifiability.NOT_IDENTIFIABLE_CERTIFIED, Identifiability.NOT_IDENTIFIABLE_NUMERICAL)


@dataclass(frozen=True)
class StateIdentifiability:
    index: int
    verdict: Identifiability
    witness: Optional[Ket]
    max_overlap: float
    product_verdict: Optional[ProductVerdict] = None


_FROM_KIND = {
    VerdictKind.PRODUCT_FOUND: Identifiability.IDENTIFIABLE,
    VerdictKind.CERTIFIED_PRODUCT: Identifiability.IDENTIFIABLE,
    VerdictKind.CERTIFIED_ENTANGLED: Identifiability.NOT_IDENTIFIABLE_CERTIFIED,
    VerdictKind.NUMERICALLY_ENTANGLED: Identifiability.NOT_IDENTIFIABLE_NUMERICAL,
    VerdictKind.INCONCLUSIVE: Identifiability.INCONCLUSIVE,
}


def witness_overlaps(states: StateSet, phi: Ket) -> np.ndarray:
    """``<phi|P_j|phi>`` for every support projector ``P_j``."""
    a = phi.amplitudes / np.linalg.norm(phi.amplitudes)
    return np.array([float(np.sum(np.abs(st.support.basis.conj().T @ a) ** 2)) for st in states.states])


def _check_witness(states: StateSet, i: int, phi: Ket) -> bool:
    ov = witness_overlaps(states, phi)
    others = np.delete(ov, i)
    return bool(ov[i] >= NONZERO_TOL and (others.size == 0 or others.max() <= ZERO_TOL))


def _search_in_complement(states: StateSet, i: int, cfg: SearchConfig) -> StateIdentifiability:
    space = states.space
    own = states.states[i].support.basis
    others = [st.support.basis for j, st in enumerate(states.states) if j != i]
    if others:
        k_basis = null_space(np.hstack(others).conj().T, rcond=SPECTRAL_TOL)
    else:
        k_basis = np.eye(space.total_dim, dtype=complex)
    # phase A: favour product states in K that also lean towards supp(rho_i)
    penalised = np.hstack([k_basis, np.sqrt(_OWN_WEIGHT) * own])
    res_a = optimize_product_overlap(space, penalised, None, cfg, orthonormal=False)
    # phase B: pull every restart into K proper, starting from where phase A ended
    res_b = optimize_product_overlap(
        space, k_basis, None, cfg, polish=False, init=[f.copy() for f in res_a.restart_factors]
    )
    kdef = 1.0 - res_b.restart_values
    best_own, best_phi = 0.0, None
    order = np.argsort(kdef)
    for r in order[: min(8, len(order))]:
        if kdef[r] > 1e-3:
            break
        factors = [f[r] for f in res_b.restart_factors]
        k_ov, factors = gauss_newton_polish(k_basis, list(space.dims), factors)
        if 1.0 - k_ov > cfg.product_tol:
            continue
        phi = np.ones(1, dtype=complex)
        for f in factors:
            phi = np.kron(phi, f)
        phi_ket = Ket(space, phi)
        own_ov = witness_overlaps(states, phi_ket)[i]
        if own_ov > best_own:
            best_own, best_phi = own_ov, phi_ket
    if best_phi is not None and _check_witness(states, i, best_phi):
        return StateIdentifiability(i, Identifiability.IDENTIFIABLE, best_phi, best_own)
    if kdef.min() >= cfg.entangled_gap:
        return StateIdentifiability(i, Identifiability.NOT_IDENTIFIABLE_NUMERICAL, None, best_own)
    return StateIdentifiability(i, Identifiability.INCONCLUSIVE, best_phi, best_own)


def identifiable_witness(states: StateSet, i: int, cfg: SearchConfig = SearchConfig()) -> StateIdentifiability:
    """Search for a product state that identifies ``states[i]`` unambiguously.

    When the ranks add up to the full dimension the only candidates live in
    ``supp(rho_i)`` itself and this is plain product detection there.
    Otherwise product states are sought in the orthocomplement ``K_i`` of the
    other supports, preferring ones that overlap ``supp(rho_i)``.
    """
    if not 0 <= i < len(states):
        raise IndexError(f"state index {i} out of range for {len(states)} states")
    if states.full_rank_sum:
        support = states.states[i].support
        pv = detect_product(support, None, cfg)
        verdict = _FROM_KIND[pv.kind]
        witness = pv.witness if verdict.identifiable else None
        if witness is not None and not _check_witness(states, i, witness):
            verdict, witness = Identifiability.INCONCLUSIVE, None
        return StateIdentifiability(i, verdict, witness, pv.max_overlap, pv)
    return _search_in_complement(states, i, cfg)


@dataclass(frozen=True)
class Property1Report:
    holds: bool
    inconclusive: bool
    genuine: bool
    states: tuple

    @property
    def identifiable(self) -> list[int]:
        return [s.index for s in self.states if isinstance(s, StateIdentifiability) and s.verdict.identifiable]


def check_property1(states: StateSet, cfg: SearchConfig = SearchConfig(), genuine: bool = False) -> Property1Report:
    """No state of the set is locally unambiguously identifiable.

    With ``genuine=True`` (three or more parties, ranks summing to the full
    dimension) the requirement is that no support contains a state that is
    product across any bipartition.
    """
    if genuine:
        if states.space.parties < 3:
            raise ContractViolation("genuine Property 1 needs at least three parties")
        if not states.full_rank_sum:
            raise ContractViolation("genuine Property 1 is defined for ranks summing to the full dimension")
        reports = tuple(detect_biseparable(st.support, cfg) for st in states.states)
        holds = all(r.genuinely_entangled for r in reports)
        inconclusive = not holds and all(r.genuinely_entangled or r.inconclusive for r in reports)
        return Property1Report(holds, inconclusive, True, reports)
    results = tuple(identifiable_witness(states, i, cfg) for i in range(len(states)))
    holds = all(r.verdict.not_identifiable for r in results)
    inconclusive = not holds and not any(r.verdict.identifiable for r in results)
    return Property1Report(holds, inconclusive, False, results)


@dataclass(frozen=True)
class SetClass:
    """Membership in the nested families S3 < S2 < S1.

    ``None`` marks a flag the numerical evidence cannot settle. Membership in
    S1 (no perfect LOCC discrimination) is never computed.
    """

    in_S2: Optional[bool]
    in_S3: Optional[bool]
    states: tuple[StateIdentifiability, ...]
    in_S1: str = "not-computed"


def classify_set(states: StateSet, cfg: SearchConfig = SearchConfig()) -> SetClass:
    results = tuple(identifiable_witness(states, i, cfg) for i in range(len(states)))
    n_not = sum(r.verdict.not_identifiable for r in results)
    n_yes = sum(r.verdict.identifiable for r in results)
    n = len(results)
    in_s3 = True if n_not == n else (False if n_yes else None)
    in_s2 = True if n_not >= 1 else (False if n_yes == n else None)
    assert not in_s3 or in_s2, "S3 membership must imply S2 membership"
    return SetClass(in_s2, in_s3, results)


# ---------------------------------------------------------------------------
# elimination game


@dataclass(frozen=True)
class EliminationTable:
    outcomes: tuple[str, ...]
    eliminated: tuple[tuple[int, ...], ...]
    dead_outcomes: tuple[str, ...]
    null_outcomes: tuple[str, ...]
    weights: np.ndarray
    two_state_implication: Optional[str]

    def row(self, outcome: str) -> tuple[int, ...]:
        return self.eliminated[self.outcomes.index(outcome)]

    def as_dict(self) -> dict[str, tuple[int, ...]]:
        return dict(zip(self.outcomes, self.eliminated))


def basis_label(space: TensorSpace, psi: Ket) -> str:
    """``|01>`` for computational basis states, ``e<k>`` otherwise."""
    a = psi.amplitudes
    k = int(np.argmax(np.abs(a)))
    if abs(abs(a[k]) - 1) <= 1e-12:
        digits = np.unravel_index(k, space.dims)
        sep = "" if max(space.dims) <= 10 else ","
        return "|" + sep.join(str(int(x)) for x in digits) + ">"
    return ""


def computational_basis(space: TensorSpace) -> list[Ket]:
    eye = np.eye(space.total_dim, dtype=complex)
    return [Ket(space, eye[k]) for k in range(space.total_dim)]


def local_basis(space: TensorSpace, seed) -> list[Ket]:
    """A random product basis: the computational basis rotated by a local unitary."""
    u = random_local_unitary(space, seed).matrix
    return [Ket(space, u[:, k]) for k in range(space.total_dim)]


def _check_product_basis(space: TensorSpace, basis: Sequence[Ket]) -> np.ndarray:
    mat = np.stack([np.asarray(b.amplitudes) for b in basis], axis=1)
    D = space.total_dim
    if mat.shape != (D, D):
        raise ContractViolation(f"a basis of {space} needs {D} vectors, got {mat.shape[1]}")
    if np.max(np.abs(mat.conj().T @ mat - np.eye(D))) > SPECTRAL_TOL:
        raise ContractViolation("measurement basis is not orthonormal")
    for cut in single_party_cuts(space.parties):
        sv = np.linalg.svd(reshape_across(mat.T, space.dims, cut), compute_uv=False)
        if np.max(sv[:, 1]) > SPECTRAL_TOL:
            raise ContractViolation("measurement basis contains a non-product vector")
    return mat


def elimination_table(states: StateSet, basis: Sequence[Ket]) -> EliminationTable:
    """Which states each outcome of a product-basis measurement rules out.

    Outcome ``e`` eliminates ``rho_i`` when ``<e|rho_i|e> = 0`` while some other
    state gives it nonzero probability. Dead outcomes eliminate nothing.
    """
    mat = _check_product_basis(states.space, basis)
    weights = np.array(
        [np.real(np.einsum("dk,de,ek->k", mat.conj(), st.density(), mat)) for st in states.states]
    ).T
    labels = []
    for k, b in enumerate(basis):
        labels.append(basis_label(states.space, b) or f"e{k}")
    eliminated, dead, null = [], [], []
    for k, w in enumerate(weights):
        zero = w <= ZERO_TOL
        if zero.all():
            null.append(labels[k])
            eliminated.append(())
            continue
        elim = tuple(int(i) for i in np.flatnonzero(zero))
        eliminated.append(elim)
        if not elim:
            dead.append(labels[k])
    implication = None
    if len(states) == 2 and any(eliminated):
        implication = "two states: eliminating one identifies the other, so Property 1 cannot hold"
    return EliminationTable(tuple(labels), tuple(eliminated), tuple(dead), tuple(null), weights, implication)


# ---------------------------------------------------------------------------
# NPT evidence


@dataclass(frozen=True)
class CutNPT:
    fraction_npt: float
    min_eigenvalue: float
    max_eigenvalue: float
    mean_eigenvalue: float


@dataclass(frozen=True)
class NPTProbeReport:
    samples: int
    fraction_npt: float
    per_cut: dict[Bipartition, CutNPT]
    worst_cut: Bipartition


def _pt_min_eigs(psis: np.ndarray, dims: Sequence[int], cut: Bipartition) -> np.ndarray:
    """Smallest eigenvalue of the partial transpose of each ``|psi><psi|`` (batched)."""
    n, D = psis.shape
    m = len(dims)
    rho = np.einsum("ni,nj->nij", psis, psis.conj()).reshape((n, *dims, *dims))
    axes = list(range(2 * m + 1))
    for p in cut.right:
        axes[1 + p], axes[1 + m + p] = axes[1 + m + p], axes[1 + p]
    pt = rho.transpose(axes).reshape(n, D, D)
    return np.linalg.eigvalsh(pt)[:, 0]


def random_states_in(S: Subspace, n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` Haar-random unit vectors of ``S`` as rows."""
    coeffs = np.stack([haar_vector(S.dim, rng) for _ in range(n)])
    return coeffs @ S.basis.T


def npt_probe(S: Subspace, samples: int = 1000, seed=0) -> NPTProbeReport:
    """Partial-transpose negativity of random pure states drawn from ``S``.

    Every cut is probed; ``fraction_npt`` is the fraction on the worst one.
    """
    if S.dim < 2:
        raise ContractViolation("npt_probe expects a subspace of dimension >= 2")
    rng = np.random.default_rng(seed)
    psis = random_states_in(S, samples, rng)
    per_cut = {}
    for cut in all_bipartitions(S.space.parties):
        eig = _pt_min_eigs(psis, S.space.dims, cut)
        per_cut[cut] = CutNPT(
            fraction_npt=float(np.mean(eig < -NPT_TOL)),
            min_eigenvalue=float(eig.min()),
            max_eigenvalue=float(eig.max()),
            mean_eigenvalue=float(eig.mean()),
        )
    worst = min(per_cut, key=lambda c: (per_cut[c].fraction_npt, -per_cut[c].max_eigenvalue))
    return NPTProbeReport(samples, per_cut[worst].fraction_npt, per_cut, worst)
