"""JSON problem files.

Layout::

    {
      "dims": [2, 3],
      "subspaces": [
        {"label": "rho_1", "vectors": [[[0, 0], [1, 0], ...], ...], "weights": [0.5, 0.5]},
        ...
      ],
      "settings": {"seed": 0, "restarts": 64, "samples": 1000, ...}
    }

Complex entries are ``[re, im]`` pairs (a bare number is read as real).
Vectors need not be normalized; weights and settings are optional.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, Sequence, Union

import numpy as np

from .discrimination import MixedState, StateSet
from .errors import DimensionError, ProblemFileError, RankDeficiencyError
from .product_search import SearchConfig
from .splitting import Splitting, orthonormalize, verify_splitting
from .tensor_core import TensorSpace

SETTING_KEYS = ("product_tol", "entangled_gap", "restarts", "max_iters", "stall_tol", "seed", "samples")


@dataclass(frozen=True, eq=False)
class Problem:
    splitting: Splitting
    weights: tuple[Optional[np.ndarray], ...]
    settings: dict[str, Any] = field(default_factory=dict)

    @property
    def space(self) -> TensorSpace:
        return self.splitting.space

    @property
    def covers_space(self) -> bool:
        return verify_splitting(self.splitting).complete

    def state_set(self) -> StateSet:
        return StateSet(
            self.space,
            tuple(MixedState(s, w) for s, w in zip(self.splitting.subspaces, self.weights)),
        )

    def search_config(self, **overrides) -> SearchConfig:
        base = {k: v for k, v in self.settings.items() if k in SearchConfig.__dataclass_fields__}
        base.update({k: v for k, v in overrides.items() if v is not None})
        return SearchConfig(**base)


def _complex(entry, where: str) -> complex:
    if isinstance(entry, (int, float)) and not isinstance(entry, bool):
        return complex(entry)
    if (
        isinstance(entry, list)
        and len(entry) == 2
        and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in entry)
    ):
        return complex(entry[0], entry[1])
    raise ProblemFileError(f"{where}: expected [re, im], got {entry!r}")


def problem_from_dict(data: Any, source: str = "<dict>") -> Problem:
    if not isinstance(data, dict):
        raise ProblemFileError(f"{source}: top level must be an object")
    dims = data.get("dims")
    if not isinstance(dims, list) or not dims or not all(isinstance(d, int) for d in dims):
        raise ProblemFileError(f"{source}: 'dims' must be a non-empty list of integers")
    try:
        space = TensorSpace(tuple(dims))
    except DimensionError as e:
        raise ProblemFileError(f"{source}: {e}") from None
    D = space.total_dim
    raw_subs = data.get("subspaces")
    if not isinstance(raw_subs, list) or not raw_subs:
        raise ProblemFileError(f"{source}: 'subspaces' must be a non-empty list")
    subs, weights = [], []
    for n, entry in enumerate(raw_subs):
        if not isinstance(entry, dict):
            raise ProblemFileError(f"{source}: subspace #{n + 1} must be an object")
        label = str(entry.get("label", f"rho_{n + 1}"))
        vectors = entry.get("vectors")
        if not isinstance(vectors, list) or not vectors:
            raise ProblemFileError(f"{source}: subspace {label!r} needs a non-empty 'vectors' list")
        rows = []
        for k, vec in enumerate(vectors):
            if not isinstance(vec, list):
                raise ProblemFileError(f"{source}: subspace {label!r}, vector {k + 1} is not a list")
            if len(vec) != D:
                raise ProblemFileError(
                    f"{source}: dimension mismatch in subspace {label!r}, vector {k + 1}: "
                    f"{len(vec)} entries for dims {dims} (expected {D})"
                )
            rows.append([_complex(x, f"{source}: subspace {label!r}, vector {k + 1}") for x in vec])
        try:
            subs.append(orthonormalize(space, [np.array(r) for r in rows], label=label))
        except RankDeficiencyError as e:
            raise ProblemFileError(f"{source}: rank deficiency in subspace {label!r}: {e}") from None
        w = entry.get("weights")
        if w is not None:
            if not isinstance(w, list) or len(w) != len(vectors):
                raise ProblemFileError(f"{source}: weights of {label!r} must list one number per vector")
            w = np.asarray(w, dtype=float)
            if np.any(w <= 0) or not math.isclose(w.sum(), 1.0, abs_tol=1e-9):
                raise ProblemFileError(f"{source}: weights of {label!r} must be positive and sum to 1")
        weights.append(w)
    settings = data.get("settings", {}) or {}
    if not isinstance(settings, dict):
        raise ProblemFileError(f"{source}: 'settings' must be an object")
    unknown = set(settings) - set(SETTING_KEYS)
    if unknown:
        raise ProblemFileError(f"{source}: unknown settings {sorted(unknown)}")
    name = str(data.get("name", ""))
    return Problem(Splitting(space, tuple(subs), name), tuple(weights), dict(settings))


def load_problem(path: Union[str, Path]) -> Problem:
    """Read and validate a problem file; every subspace is orthonormalized."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ProblemFileError(f"{path}: {e.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ProblemFileError(f"{path}: line {e.lineno}, column {e.colno}: {e.msg}") from None
    return problem_from_dict(data, str(path))


def encode_vector(v: np.ndarray) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in np.asarray(v, dtype=complex).reshape(-1)]


def problem_to_dict(
    sp: Splitting,
    settings: Optional[dict] = None,
    weights: Optional[Sequence] = None,
) -> dict:
    """Serializable form; spanning vectors are written when known, else the orthonormal basis."""
    subs = []
    for i, s in enumerate(sp.subspaces):
        vecs = s.spanning if s.spanning is not None else s.basis
        entry = {"label": sp.labels[i], "vectors": [encode_vector(vecs[:, j]) for j in range(vecs.shape[1])]}
        if weights is not None and weights[i] is not None:
            entry["weights"] = [float(x) for x in weights[i]]
        subs.append(entry)
    out = {"dims": list(sp.space.dims), "subspaces": subs}
    if sp.name:
        out["name"] = sp.name
    if settings:
        out["settings"] = dict(settings)
    return out


def save_problem(sp: Splitting, path: Union[str, Path], settings: Optional[dict] = None, weights=None) -> None:
    Path(path).write_text(json.dumps(problem_to_dict(sp, settings, weights), indent=2) + "\n")
