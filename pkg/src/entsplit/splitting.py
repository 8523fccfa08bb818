"""Splittings of a composite space into mutually orthogonal subspaces.

A :class:`Splitting` stores only supports; any mixed state with those supports
(and any projective measurement onto them) inherits the same verdicts.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import ContractViolation, DimensionError, PreconditionError, RankDeficiencyError
from .product_search import (
    BiseparabilityReport,
    SearchConfig,
    detect_biseparable,
    detect_product,
)
from .tensor_core import SPECTRAL_TOL, Ket, TensorSpace, ket_from_terms

GEOMETRY_TOL = 1e-9

MODES = ("bipartite", "completely_entangled", "genuinely_entangled")
_MODE_ALIASES = {"ces": "completely_entangled", "ges": "genuinely_entangled"}


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex, copy=True)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class Subspace:
    """Orthonormal basis (columns of ``basis``) of a subspace.

    ``spanning`` keeps the vectors the subspace was built from, before
    orthonormalization, so exact small-integer data stays available.
    """

    space: TensorSpace
    basis: np.ndarray
    spanning: Optional[np.ndarray] = None
    label: str = ""

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=complex)
        if b.ndim == 1:
            b = b.reshape(-1, 1)
        if b.shape[0] != self.space.total_dim:
            raise DimensionError(f"basis vectors of length {b.shape[0]} for dimension {self.space.total_dim}")
        gram = b.conj().T @ b
        if b.shape[1] and np.max(np.abs(gram - np.eye(b.shape[1]))) > SPECTRAL_TOL:
            raise ContractViolation("subspace basis is not orthonormal; use orthonormalize()")
        object.__setattr__(self, "basis", _readonly(b))
        if self.spanning is not None:
            object.__setattr__(self, "spanning", _readonly(np.asarray(self.spanning).reshape(b.shape[0], -1)))

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @cached_property
    def projector(self) -> np.ndarray:
        p = self.basis @ self.basis.conj().T
        p.flags.writeable = False
        return p

    def kets(self) -> list[Ket]:
        return [Ket(self.space, self.basis[:, j]) for j in range(self.dim)]

    def contains(self, psi: Ket, tol: float = GEOMETRY_TOL) -> bool:
        a = psi.amplitudes
        return float(np.linalg.norm(a - self.projector @ a)) <= tol * max(1.0, float(np.linalg.norm(a)))

    def relabel(self, label: str) -> Subspace:
        return Subspace(self.space, self.basis, self.spanning, label)

    def transformed(self, unitary: np.ndarray) -> Subspace:
        """Image under a unitary acting on the whole space."""
        sp = None if self.spanning is None else unitary @ self.spanning
        return Subspace(self.space, unitary @ self.basis, sp, self.label)


def orthonormalize(space: TensorSpace, vectors: Iterable, label: str = "") -> Subspace:
    """Gram-Schmidt with one re-orthogonalization pass.

    ``vectors`` may be :class:`Ket` objects or plain arrays. Raises
    :class:`RankDeficiencyError` when they are linearly dependent.
    """
    cols = [np.asarray(v.amplitudes if isinstance(v, Ket) else v, dtype=complex).reshape(-1) for v in vectors]
    if not cols:
        raise RankDeficiencyError(f"subspace {label!r} has no spanning vectors")
    D = space.total_dim
    for c in cols:
        if c.size != D:
            raise DimensionError(f"subspace {label!r}: vector of length {c.size}, expected {D}")
    raw = np.stack(cols, axis=1)
    norms = np.linalg.norm(raw, axis=0)
    if np.any(norms == 0):
        raise RankDeficiencyError(f"subspace {label!r} contains a zero vector")
    sv = np.linalg.svd(raw / norms, compute_uv=False)
    if len(cols) > D or sv[-1] <= SPECTRAL_TOL * sv[0]:
        raise RankDeficiencyError(f"subspace {label!r}: spanning vectors are linearly dependent")
    q = np.zeros((D, len(cols)), dtype=complex)
    for j, v in enumerate(cols):
        w = v.copy()
        for _ in range(2):
            w -= q[:, :j] @ (q[:, :j].conj().T @ w)
        q[:, j] = w / np.linalg.norm(w)
    return Subspace(space, q, spanning=raw, label=label)


@dataclass(frozen=True, eq=False)
class Splitting:
    space: TensorSpace
    subspaces: tuple[Subspace, ...]
    name: str = ""

    def __post_init__(self):
        subs = tuple(self.subspaces)
        for s in subs:
            if s.space != self.space:
                raise DimensionError(f"subspace {s.label!r} lives in {s.space}, splitting in {self.space}")
        object.__setattr__(self, "subspaces", subs)

    @property
    def profile(self) -> tuple[int, ...]:
        return tuple(s.dim for s in self.subspaces)

    @property
    def labels(self) -> list[str]:
        return [s.label or f"S{i + 1}" for i, s in enumerate(self.subspaces)]

    def __len__(self) -> int:
        return len(self.subspaces)

    def __iter__(self):
        return iter(self.subspaces)

    def __getitem__(self, i) -> Subspace:
        return self.subspaces[i]


def splitting_from_groups(space: TensorSpace, vectors: Sequence[Ket], groups: Sequence[Sequence[int]], name: str = "") -> Splitting:
    """Splitting whose i-th subspace is spanned by ``vectors[j]`` for ``j`` in ``groups[i]`` (0-based)."""
    subs = [
        orthonormalize(space, [vectors[j] for j in g], label=f"rho_{i + 1}")
        for i, g in enumerate(groups)
    ]
    return Splitting(space, tuple(subs), name)


@dataclass(frozen=True)
class SplittingCheck:
    orthogonal: bool
    complete: bool
    min_rank_ok: bool
    profile: tuple[int, ...]
    orthogonality_error: float
    completeness_error: float

    @property
    def valid(self) -> bool:
        return self.orthogonal and self.complete and self.min_rank_ok


def verify_splitting(sp: Splitting) -> SplittingCheck:
    """Structural checks of a splitting; ``profile`` lists the ranks in descending order."""
    projs = [s.projector for s in sp.subspaces]
    ortho = 0.0
    for i, j in itertools.combinations(range(len(projs)), 2):
        ortho = max(ortho, float(np.max(np.abs(projs[i] @ projs[j]))))
    D = sp.space.total_dim
    total = sum(projs) if projs else np.zeros((D, D))
    compl = float(np.max(np.abs(total - np.eye(D))))
    return SplittingCheck(
        orthogonal=ortho <= GEOMETRY_TOL,
        complete=compl <= GEOMETRY_TOL,
        min_rank_ok=all(s.dim >= 2 for s in sp.subspaces),
        profile=tuple(sorted(sp.profile, reverse=True)),
        orthogonality_error=ortho,
        completeness_error=compl,
    )


def normalize_mode(mode: str) -> str:
    mode = _MODE_ALIASES.get(mode, mode)
    if mode not in MODES:
        raise ContractViolation(f"unknown mode {mode!r}; expected one of {MODES}")
    return mode


def subspace_verdict(S: Subspace, mode: str, cfg: SearchConfig):
    """ProductVerdict (bipartite / completely entangled) or BiseparabilityReport (genuine)."""
    mode = normalize_mode(mode)
    m = S.space.parties
    if mode == "bipartite":
        if m != 2:
            raise ContractViolation(f"bipartite mode needs two parties, space has {m}")
        return detect_product(S, None, cfg)
    if m < 3:
        raise ContractViolation(f"{mode} mode needs at least three parties, space has {m}")
    if mode == "completely_entangled":
        return detect_product(S, None, cfg)
    return detect_biseparable(S, cfg)


def _is_entangled(v) -> bool:
    return v.genuinely_entangled if isinstance(v, BiseparabilityReport) else v.entangled


def _is_inconclusive(v) -> bool:
    return v.inconclusive


@dataclass(frozen=True)
class EntangledSplittingReport:
    mode: str
    verdicts: tuple
    overall: bool
    inconclusive: bool
    profile: tuple[int, ...]


def verify_entangled_splitting(sp: Splitting, cfg: SearchConfig = SearchConfig(), mode: str = "bipartite") -> EntangledSplittingReport:
    """Check every subspace is entangled in the requested sense.

    ``overall`` is true iff all subspaces are; ``inconclusive`` flags the case
    where nothing product was found but some verdict sits in the gap band.
    """
    check = verify_splitting(sp)
    if not check.valid:
        raise ContractViolation(f"not a valid splitting: {check}")
    mode = normalize_mode(mode)
    verdicts = tuple(subspace_verdict(S, mode, cfg) for S in sp.subspaces)
    overall = all(_is_entangled(v) for v in verdicts)
    inconclusive = not overall and all(_is_entangled(v) or _is_inconclusive(v) for v in verdicts)
    return EntangledSplittingReport(mode, verdicts, overall, inconclusive, check.profile)


# ---------------------------------------------------------------------------
# feasibility


@dataclass(frozen=True)
class FeasibilityReport:
    total_dim: int
    max_entangled_dim: Optional[int]
    violations: tuple[str, ...]
    cardinality_max: int
    cardinality_min: Optional[int]
    achievable_profiles: tuple[tuple[int, ...], ...]
    degeneracy_degree: int

    @property
    def feasible(self) -> bool:
        return not self.violations and self.max_entangled_dim is not None


def _partitions(total: int, largest: int, smallest: int) -> list[tuple[int, ...]]:
    """Partitions of ``total`` into parts in ``[smallest, largest]``, parts descending."""
    if total == 0:
        return [()]
    out = []
    for part in range(min(total, largest), smallest - 1, -1):
        for rest in _partitions(total - part, part, smallest):
            out.append((part, *rest))
    return out


def feasibility(space: TensorSpace, profile: Sequence[int] = ()) -> FeasibilityReport:
    """Necessary conditions for a splitting into entangled subspaces.

    For two parties an entangled subspace has dimension at most
    ``(d_1 - 1)(d_2 - 1)``. No such bound is used for more parties, where the
    maximum is reported as unknown (``None``) and the profile is never declared
    feasible. ``degeneracy_degree`` counts the profiles that pass the
    necessary conditions; each one still has to be realised by construction.
    """
    D = space.total_dim
    max_ent = (space.dims[0] - 1) * (space.dims[1] - 1) if space.parties == 2 else None
    violations = []
    profile = tuple(int(r) for r in profile)
    for r in profile:
        if r < 2:
            violations.append(f"rank {r} < 2")
        if max_ent is not None and r > max_ent:
            violations.append(f"rank {r} exceeds the maximal entangled dimension {max_ent}")
    if profile and sum(profile) != D:
        violations.append(f"ranks sum to {sum(profile)}, total dimension is {D}")
    if max_ent is None:
        violations.append("no entangled-dimension bound known for more than two parties")
        profiles: list[tuple[int, ...]] = []
        card_min = None
    else:
        profiles = _partitions(D, max_ent, 2) if max_ent >= 2 else []
        card_min = math.ceil(D / max_ent) if max_ent > 0 else None
    if max_ent is not None and max_ent < 2:
        violations.append(f"maximal entangled dimension {max_ent} < 2: no admissible splitting")
    return FeasibilityReport(
        total_dim=D,
        max_entangled_dim=max_ent,
        violations=tuple(dict.fromkeys(violations)),
        cardinality_max=D // 2,
        cardinality_min=card_min,
        achievable_profiles=tuple(profiles),
        degeneracy_degree=len(profiles),
    )


# ---------------------------------------------------------------------------
# constructions from the literature


def _bell_2x2(space: TensorSpace, rows: tuple[int, int], cols: tuple[int, int]) -> list[Ket]:
    (i0, i1), (j0, j1) = rows, cols
    return [
        ket_from_terms(space, [((i0, j0), 1), ((i1, j1), 1)]),
        ket_from_terms(space, [((i0, j0), 1), ((i1, j1), -1)]),
        ket_from_terms(space, [((i0, j1), 1), ((i1, j0), 1)]),
        ket_from_terms(space, [((i0, j1), 1), ((i1, j0), -1)]),
    ]


def _ex1() -> Splitting:
    sp = TensorSpace((2, 2))
    phi_p = ket_from_terms(sp, {"00": 1, "11": 1})
    phi_m = ket_from_terms(sp, {"00": 1, "11": -1})
    vecs = [phi_p, ket_from_terms(sp, {"01": 1}), phi_m, ket_from_terms(sp, {"10": 1})]
    return splitting_from_groups(sp, vecs, [[0, 1], [2, 3]], "EX1_2x2")


def _pairs_2x3_vectors() -> tuple[TensorSpace, list[Ket]]:
    sp = TensorSpace((2, 3))
    vecs = [
        ket_from_terms(sp, {"01": 1, "10": 1}),
        ket_from_terms(sp, {"00": 1, "12": 1}),
        ket_from_terms(sp, {"02": 1, "11": 1}),
        ket_from_terms(sp, {"00": 1, "12": -1}),
        ket_from_terms(sp, {"01": 1, "10": -1}),
        ket_from_terms(sp, {"02": 1, "11": -1}),
    ]
    return sp, vecs


def _ex2() -> Splitting:
    sp, v = _pairs_2x3_vectors()
    return splitting_from_groups(sp, v, [[0, 1], [2, 3], [4, 5]], "EX2_2x3")


def _rhoprime() -> Splitting:
    sp, v = _pairs_2x3_vectors()
    s = splitting_from_groups(sp, v, [[0, 1, 2, 3], [4, 5]], "RHOPRIME_2x3")
    return Splitting(sp, (s[0].relabel("rho_prime"), s[1].relabel("rho_3")), "RHOPRIME_2x3")


def _ex3() -> Splitting:
    sp = TensorSpace((2, 4))
    v = _bell_2x2(sp, (0, 1), (0, 1)) + _bell_2x2(sp, (0, 1), (2, 3))
    return splitting_from_groups(sp, v, [[0, 4], [1, 5], [2, 6], [3, 7]], "EX3_2x4_MAX")


def _ex4() -> Splitting:
    sp = TensorSpace((2, 4))
    v = [
        ket_from_terms(sp, {"00": 1, "12": 1}),
        ket_from_terms(sp, {"00": 1, "12": -1}),
        ket_from_terms(sp, {"01": 1, "13": 1}),
        ket_from_terms(sp, {"01": 1, "13": -1}),
        ket_from_terms(sp, {"02": 1, "11": 1}),
        ket_from_terms(sp, {"02": 1, "11": -1}),
        ket_from_terms(sp, {"03": 1, "10": 1}),
        ket_from_terms(sp, {"03": 1, "10": -1}),
    ]
    return splitting_from_groups(sp, v, [[0, 2, 4], [3, 5, 6], [1, 7]], "EX4_2x4_MIN")


def _ex5() -> Splitting:
    sp = TensorSpace((3, 3))
    v = [
        ket_from_terms(sp, {"00": 1, "11": 1, "22": 1}),
        ket_from_terms(sp, {"00": 1, "11": -1}),
        ket_from_terms(sp, {"00": 1, "11": 1, "22": -2}),
        ket_from_terms(sp, {"01": 1, "12": 1}),
        ket_from_terms(sp, {"01": 1, "12": -1}),
        ket_from_terms(sp, {"02": 1, "20": 1}),
        ket_from_terms(sp, {"02": 1, "20": -1}),
        ket_from_terms(sp, {"10": 1, "21": 1}),
        ket_from_terms(sp, {"10": 1, "21": -1}),
    ]
    return splitting_from_groups(sp, v, [[0, 3, 5], [1, 6, 8], [2, 4, 7]], "EX5_3x3")


def _ex6() -> Splitting:
    sp = TensorSpace((2, 2, 2, 2))
    ghz_pairs = [("0000", "1111"), ("0011", "1100"), ("0101", "1010"), ("0110", "1001")]
    vecs = []
    for a, b in ghz_pairs:
        vecs.append(ket_from_terms(sp, {a: 1, b: 1}))
        vecs.append(ket_from_terms(sp, {a: 1, b: -1}))
    for w in (("0001", "0010", "0100", "1000"), ("1110", "1101", "1011", "0111")):
        for signs in ((1, 1, 1, 1), (1, 1, -1, -1), (1, -1, 1, -1), (1, -1, -1, 1)):
            vecs.append(ket_from_terms(sp, dict(zip(w, signs))))
    return splitting_from_groups(sp, vecs, [[i, i + 8] for i in range(8)], "EX6_4QUBIT")


_FIXTURES = {
    "EX1_2x2": _ex1,
    "EX2_2x3": _ex2,
    "EX3_2x4_MAX": _ex3,
    "EX4_2x4_MIN": _ex4,
    "EX5_3x3": _ex5,
    "EX6_4QUBIT": _ex6,
    "RHOPRIME_2x3": _rhoprime,
}
FIXTURE_IDS = tuple(_FIXTURES)


def fixture(fixture_id: str) -> Splitting:
    try:
        build = _FIXTURES[fixture_id]
    except KeyError:
        raise KeyError(f"unknown fixture {fixture_id!r}; known: {', '.join(FIXTURE_IDS)}") from None
    return build()


def generate_bell_pairing(d1: int, d2: int) -> Splitting:
    """Maximum-cardinality splitting of ``C^d1 x C^d2`` into 2-dim entangled subspaces.

    The space is tiled by 2x2 blocks, each carrying a Bell-type basis; Bell
    states of the same type are paired across consecutive blocks (with an odd
    block count the chain wraps into the next type). Any two such states from
    different blocks span an entangled plane, because each one already has a
    full-rank 2x2 coefficient block the other does not touch.
    """
    if d1 % 2 or d2 % 2:
        raise PreconditionError(
            f"Bell pairing needs both dimensions even, got {d1}x{d2}; use search_splitting instead"
        )
    space = TensorSpace((d1, d2))
    blocks = [((2 * a, 2 * a + 1), (2 * b, 2 * b + 1)) for a in range(d1 // 2) for b in range(d2 // 2)]
    if len(blocks) < 2:
        raise PreconditionError("a single 2x2 block cannot be split into entangled planes")
    per_block = [_bell_2x2(space, rows, cols) for rows, cols in blocks]
    chain = [per_block[k][t] for t in range(4) for k in range(len(blocks))]
    groups = [[2 * p, 2 * p + 1] for p in range(len(chain) // 2)]
    return splitting_from_groups(space, chain, groups, f"BELL_PAIRING_{d1}x{d2}")


# ---------------------------------------------------------------------------
# randomized search

# orthogonal integer bases of a transversal's span; every vector has >= 2 nonzero entries
_TRANSVERSAL_BASES = {
    2: [(1, 1), (1, -1)],
    3: [(1, 1, 1), (1, -1, 0), (1, 1, -2)],
}


def _closed_block(a: tuple, b: tuple) -> bool:
    """``{|0x>, |1x'>}`` and ``{|0x'>, |1x>}``: together they span a whole 2x2 block."""
    if len(a) != 2 or len(b) != 2 or not set(a).isdisjoint(b):
        return False
    return {r for r, _ in a} == {r for r, _ in b} and {c for _, c in a} == {c for _, c in b}


def _random_transversals(d1: int, d2: int, rng: np.random.Generator, tries: int = 200):
    """Cover the d1 x d2 grid by 2- and 3-cell sets with distinct rows and columns."""
    cells = [(i, j) for i in range(d1) for j in range(d2)]
    for _ in range(tries):
        free = set(cells)
        groups = []
        order = [cells[k] for k in rng.permutation(len(cells))]
        ok = True
        for c in order:
            if c not in free:
                continue
            free.discard(c)
            remaining = len(free) + 1
            # size 3 only when parity forces it (or occasionally, for variety)
            want3 = remaining % 2 == 1 or (remaining >= 5 and rng.random() < 0.15)
            size = 3 if want3 and remaining >= 3 else 2
            group = [c]
            for _ in range(size - 1):
                opts = [x for x in free if all(x[0] != g[0] and x[1] != g[1] for g in group)]
                if not opts:
                    ok = False
                    break
                pick = opts[int(rng.integers(len(opts)))]
                group.append(pick)
                free.discard(pick)
            if not ok:
                break
            groups.append(tuple(group))
        if not ok:
            continue
        pairs = [g for g in groups if len(g) == 2]
        if any(_closed_block(a, b) for a, b in itertools.combinations(pairs, 2)):
            continue
        return groups
    return None


def _entangled_basis(space: TensorSpace, transversals) -> list[Ket]:
    vecs = []
    for t in transversals:
        for coeffs in _TRANSVERSAL_BASES[len(t)]:
            vecs.append(ket_from_terms(space, [(cell, c) for cell, c in zip(t, coeffs) if c != 0]))
    return vecs


def search_splitting(
    space: TensorSpace,
    profile: Sequence[int],
    cfg: SearchConfig = SearchConfig(),
    *,
    budget: int = 100_000,
    screen: Optional[SearchConfig] = None,
) -> Optional[Splitting]:
    """Randomized backtracking for a splitting with the given rank profile.

    Builds entangled bases out of +-1 (and 1, 1, -2) superpositions of
    computational states on row/column transversals, then groups basis vectors
    into subspaces, accepting a group only when the product search calls it
    entangled. ``budget`` caps the number of candidate groups tested. Returns
    ``None`` when nothing is found, which proves nothing about existence.
    """
    rep = feasibility(space, profile)
    if not rep.feasible:
        raise PreconditionError(f"profile {tuple(profile)} is infeasible in {space}: {'; '.join(rep.violations)}")
    d1, d2 = space.dims
    sizes = sorted((int(r) for r in profile), reverse=True)
    screen = screen or cfg.with_(restarts=min(cfg.restarts, 12), max_iters=min(cfg.max_iters, 200))
    rng = np.random.default_rng([int(cfg.seed) & 0xFFFFFFFF, 0x5EA2C])
    spent = 0
    cache: dict[tuple[int, ...], bool] = {}

    def entangled(vecs, idx) -> bool:
        nonlocal spent
        key = tuple(sorted(idx))
        if key not in cache:
            spent += 1
            S = orthonormalize(space, [vecs[i] for i in key])
            cache[key] = detect_product(S, None, screen).entangled
        return cache[key]

    def place(vecs, remaining: list[int], sizes_left: list[int], chosen: list):
        if not sizes_left:
            return list(chosen)
        # the first remaining vector must land in some group; anchoring it prunes symmetric branches
        anchor, rest = remaining[0], remaining[1:]
        for size in sorted(set(sizes_left), reverse=True):
            others = list(sizes_left)
            others.remove(size)
            combos = list(itertools.combinations(rest, size - 1))
            for k in rng.permutation(len(combos)):
                if spent >= budget:
                    return None
                idx = (anchor, *combos[k])
                if not entangled(vecs, idx):
                    continue
                left = [i for i in remaining if i not in idx]
                found = place(vecs, left, others, chosen + [idx])
                if found is not None:
                    return found
        return None

    while spent < budget:
        transversals = _random_transversals(d1, d2, rng)
        if transversals is None:
            continue
        vecs = _entangled_basis(space, transversals)
        cache.clear()
        groups = place(vecs, list(range(len(vecs))), sizes, [])
        if groups is None:
            continue
        sp = Splitting(
            space,
            tuple(orthonormalize(space, [vecs[i] for i in g], label=f"rho_{n + 1}") for n, g in enumerate(groups)),
            f"SEARCH_{space}_{'-'.join(map(str, sizes))}",
        )
        if verify_splitting(sp).valid and verify_entangled_splitting(sp, cfg, "bipartite").overall:
            return sp
    return None


# ---------------------------------------------------------------------------
# regrouping


def regroup_parties(sp: Splitting, new_dims: Sequence[int], index_map: Optional[Sequence[int]] = None) -> Splitting:
    """Re-read the same vectors in a space with a different party structure.

    By default flat index ``k`` stays ``k``, which for ``C^2 x C^4 -> (C^2)^3``
    is the relabeling ``|0> -> |00>, |1> -> |01>, |2> -> |10>, |3> -> |11>``.
    ``index_map[k]`` gives the new flat index of old basis state ``k``.
    """
    new_space = TensorSpace(tuple(new_dims))
    D = sp.space.total_dim
    if new_space.total_dim != D:
        raise ContractViolation(f"cannot regroup {sp.space} ({D}) into {new_space} ({new_space.total_dim})")
    perm = np.arange(D) if index_map is None else np.asarray(index_map, dtype=int)
    if sorted(perm.tolist()) != list(range(D)):
        raise ContractViolation("index_map is not a permutation of the basis")

    def move(a: np.ndarray) -> np.ndarray:
        out = np.zeros_like(a)
        out[perm] = a
        return out

    subs = tuple(
        Subspace(new_space, move(s.basis), None if s.spanning is None else move(s.spanning), s.label)
        for s in sp.subspaces
    )
    return Splitting(new_space, subs, f"{sp.name}->{new_space}" if sp.name else "")
