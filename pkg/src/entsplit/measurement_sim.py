"""Projective measurements built from splittings, applied to product inputs."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ContractViolation, NormalizationError, ZeroProbabilityError
from .product_search import SearchConfig
from .splitting import Splitting, subspace_verdict, verify_splitting
from .tensor_core import (
    Bipartition,
    Ket,
    Operator,
    TensorSpace,
    all_bipartitions,
    haar_vector,
    reshape_across,
    single_party_cuts,
)

# a post-measurement state counts as entangled above this second Schmidt coefficient
ENTANGLED_SCHMIDT = 1e-6
# outcomes below this probability are not inspected
MIN_PROBABILITY = 1e-9
FORCED_ZERO = 1e-12
_MODES = {"bipartite": "bipartite", "completely_product": "completely_entangled", "genuine": "genuinely_entangled"}


@dataclass(frozen=True, eq=False)
class ProjectiveMeasurement:
    space: TensorSpace
    projectors: tuple[Operator, ...]
    bases: tuple[np.ndarray, ...]
    labels: tuple[str, ...]
    splitting: Optional[Splitting] = None

    @classmethod
    def from_splitting(cls, sp: Splitting) -> ProjectiveMeasurement:
        check = verify_splitting(sp)
        if not (check.orthogonal and check.complete):
            raise ContractViolation(f"projectors do not form a measurement: {check}")
        if not check.min_rank_ok:
            raise ContractViolation("rank-1 projectors are excluded")
        projs = tuple(Operator(sp.space, s.projector, hermitian=True) for s in sp.subspaces)
        return cls(sp.space, projs, tuple(s.basis for s in sp.subspaces), tuple(sp.labels), sp)

    @property
    def ranks(self) -> tuple[int, ...]:
        return tuple(b.shape[1] for b in self.bases)

    def __len__(self) -> int:
        return len(self.projectors)


@dataclass(frozen=True)
class OutcomeRecord:
    outcome: int
    probability: float
    post_state: Ket
    schmidt_second: dict[Bipartition, float]
    probabilities: np.ndarray

    @property
    def min_entanglement(self) -> float:
        return min(self.schmidt_second.values())

    @property
    def max_entanglement(self) -> float:
        return max(self.schmidt_second.values())


def _product_batch(space: TensorSpace, n: int, seed) -> np.ndarray:
    rng = np.random.default_rng(seed)
    out = np.empty((n, space.total_dim), dtype=complex)
    for k in range(n):
        v = np.ones(1, dtype=complex)
        for d in space.dims:
            v = np.kron(v, haar_vector(d, rng))
        out[k] = v
    return out


def sample_product_states(space: TensorSpace, n: int, seed=0) -> list[Ket]:
    """``n`` product kets with independent Haar-uniform local factors."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return [Ket(space, a) for a in _product_batch(space, n, seed)]


def born_probabilities(meas: ProjectiveMeasurement, psi: np.ndarray) -> np.ndarray:
    """Outcome probabilities for a batch of amplitude vectors (rows)."""
    psi = np.atleast_2d(psi)
    return np.stack([np.sum(np.abs(psi @ b.conj()) ** 2, axis=1) for b in meas.bases], axis=1)


def measure(
    meas: ProjectiveMeasurement,
    psi: Ket,
    rng: Optional[np.random.Generator] = None,
    outcome: Optional[int] = None,
) -> OutcomeRecord:
    """One run of the measurement on ``psi``.

    The outcome is drawn from the Born probabilities unless ``outcome`` forces
    it. The post-measurement state is ``P_i psi / sqrt(p_i)``.
    """
    if not psi.is_normalized:
        raise NormalizationError("measure() needs a normalized input state")
    a = psi.amplitudes
    probs = born_probabilities(meas, a)[0]
    if outcome is None:
        rng = rng if rng is not None else np.random.default_rng()
        outcome = int(rng.choice(len(probs), p=probs / probs.sum()))
    elif not 0 <= outcome < len(meas):
        raise IndexError(f"outcome {outcome} out of range")
    p = float(probs[outcome])
    if p <= FORCED_ZERO:
        raise ZeroProbabilityError(f"outcome {outcome} has probability {p:.3e}")
    b = meas.bases[outcome]
    post = b @ (b.conj().T @ a) / np.sqrt(p)
    post = post / np.linalg.norm(post)
    cuts = all_bipartitions(meas.space.parties)
    ss = {
        cut: float(np.linalg.svd(reshape_across(post, meas.space.dims, cut), compute_uv=False)[1])
        for cut in cuts
    }
    return OutcomeRecord(outcome, p, Ket(meas.space, post), ss, probs)


@dataclass(frozen=True)
class SampleReport:
    samples: int
    inputs_tested: int
    outcome_counts: tuple[int, ...]
    min_entanglement: float
    max_born_error: float
    counterexample: Optional[Ket] = None
    counterexample_outcome: Optional[int] = None
    counterexample_index: Optional[int] = None


@dataclass(frozen=True)
class Property2Report:
    mode: str
    holds: bool
    inconclusive: bool
    structural: tuple
    empirical: SampleReport


def post_state_score(posts: np.ndarray, dims, mode: str) -> np.ndarray:
    """Per-state entanglement score: > ENTANGLED_SCHMIDT means entangled in the mode's sense."""
    m = len(dims)
    if mode == "bipartite":
        cuts = [Bipartition.of([0], 2)]
    elif mode == "completely_product":
        cuts = single_party_cuts(m)
    else:
        cuts = all_bipartitions(m)
    scores = np.stack(
        [np.linalg.svd(reshape_across(posts, dims, c), compute_uv=False)[:, 1] for c in cuts], axis=1
    )
    # fully product iff product on every single-party cut; genuine needs every cut entangled
    return scores.max(axis=1) if mode == "completely_product" else scores.min(axis=1)


def computational_inputs(space: TensorSpace) -> np.ndarray:
    return np.eye(space.total_dim, dtype=complex)


def run_samples(meas: ProjectiveMeasurement, inputs: np.ndarray, mode: str, rng: np.random.Generator) -> SampleReport:
    """Enumerate every outcome with p > MIN_PROBABILITY for each input row."""
    dims = meas.space.dims
    probs = born_probabilities(meas, inputs)
    born_err = float(np.max(np.abs(probs.sum(axis=1) - 1.0)))
    assert born_err <= 1e-9, f"Born probabilities sum to 1 +- {born_err:.2e}"
    counts = np.zeros(len(meas), dtype=int)
    for p in probs:
        counts[rng.choice(len(p), p=p / p.sum())] += 1
    min_ent = np.inf
    first_bad: Optional[tuple[int, int]] = None
    for i, b in enumerate(meas.bases):
        live = np.flatnonzero(probs[:, i] > MIN_PROBABILITY)
        if live.size == 0:
            continue
        coeff = inputs[live] @ b.conj()
        posts = coeff @ b.T
        posts /= np.linalg.norm(posts, axis=1, keepdims=True)
        score = post_state_score(posts, dims, mode)
        min_ent = min(min_ent, float(score.min()))
        bad = live[score <= ENTANGLED_SCHMIDT]
        if bad.size and (first_bad is None or bad[0] < first_bad[0]):
            first_bad = (int(bad[0]), i)
    cx = Ket(meas.space, inputs[first_bad[0]]) if first_bad else None
    return SampleReport(
        samples=len(inputs),
        inputs_tested=len(inputs),
        outcome_counts=tuple(int(c) for c in counts),
        min_entanglement=float(min_ent),
        max_born_error=born_err,
        counterexample=cx,
        counterexample_outcome=first_bad[1] if first_bad else None,
        counterexample_index=first_bad[0] if first_bad else None,
    )


def certify_property2(
    meas: ProjectiveMeasurement,
    cfg: SearchConfig = SearchConfig(),
    mode: str = "bipartite",
    samples: int = 1000,
    include_basis: bool = True,
) -> Property2Report:
    """Does every outcome turn every product input into an entangled state?

    The verdict is structural: each projector's support must be free of
    product states in the requested sense. Independently, ``samples`` random
    product inputs (preceded by the computational basis) are pushed through
    every outcome; a product post-state is a counterexample, and finding one
    while the structural verdict holds is treated as an internal error.
    """
    if mode not in _MODES:
        raise ContractViolation(f"unknown mode {mode!r}; expected one of {tuple(_MODES)}")
    m = meas.space.parties
    if mode == "bipartite" and m != 2:
        raise ContractViolation("bipartite mode needs two parties")
    if mode != "bipartite" and m < 3:
        raise ContractViolation(f"{mode} mode needs at least three parties")
    if meas.splitting is None:
        raise ContractViolation("structural check needs the measurement's splitting")
    split_mode = _MODES[mode]
    structural = tuple(subspace_verdict(S, split_mode, cfg) for S in meas.splitting.subspaces)
    ent = [v.genuinely_entangled if hasattr(v, "genuinely_entangled") else v.entangled for v in structural]
    holds = all(ent)
    inconclusive = not holds and all(e or v.inconclusive for e, v in zip(ent, structural))

    parts = [computational_inputs(meas.space)] if include_basis else []
    if samples:
        parts.append(_product_batch(meas.space, samples, [int(cfg.seed) & 0xFFFFFFFF, 0x50AB]))
    inputs = np.vstack(parts)
    report = run_samples(meas, inputs, mode, np.random.default_rng([int(cfg.seed) & 0xFFFFFFFF, 0xC0C0]))
    if report.counterexample is not None and holds:
        raise AssertionError("product post-state found although every support is entangled")
    return Property2Report(mode, holds, inconclusive, structural, report)
