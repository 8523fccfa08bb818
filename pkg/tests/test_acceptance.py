"""Acceptance criteria 1 to 12, one test each.

Every criterion records a PASS/FAIL line in ``RESULTS``; ``conftest.py``
prints them at the end of the session. The file also runs on its own:

    python3 tests/test_acceptance.py
"""

import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))
import oracles  # noqa: E402

from entsplit.discrimination import (  # noqa: E402
    StateSet,
    check_property1,
    classify_set,
    computational_basis,
    elimination_table,
    npt_probe,
)
from entsplit.measurement_sim import (  # noqa: E402
    ProjectiveMeasurement,
    born_probabilities,
    certify_property2,
    run_samples,
    sample_product_states,
)
from entsplit.product_search import (  # noqa: E402
    SearchConfig,
    VerdictKind,
    certificate_applies,
    certify_2xd_dim2,
    detect_biseparable,
    detect_product,
)
from entsplit.splitting import (  # noqa: E402
    FIXTURE_IDS,
    Subspace,
    fixture,
    generate_bell_pairing,
    orthonormalize,
    search_splitting,
    verify_entangled_splitting,
    verify_splitting,
)
from entsplit.tensor_core import Bipartition, TensorSpace, all_bipartitions  # noqa: E402

CFG = SearchConfig()
CUT = Bipartition.of([0], 2)
RESULTS: list[str] = []

PROFILES = {
    "EX2_2x3": (2, 2, 2),
    "EX3_2x4_MAX": (2, 2, 2, 2),
    "EX4_2x4_MIN": (3, 3, 2),
    "EX5_3x3": (3, 3, 3),
    "EX6_4QUBIT": (2,) * 8,
}
ENTANGLED = ("EX2_2x3", "EX3_2x4_MAX", "EX4_2x4_MIN", "EX5_3x3")
TABLE_2X3 = {"|00>": (2,), "|01>": (1,), "|02>": (0,), "|10>": (1,), "|11>": (0,), "|12>": (2,)}


def record(n: int, ok: bool, detail: str, t0: float) -> None:
    RESULTS.append(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}  [{time.perf_counter() - t0:.1f}s]")


def criterion_1() -> tuple[bool, str]:
    bad = []
    for fid, prof in PROFILES.items():
        c = verify_splitting(fixture(fid))
        ok = c.valid and c.profile == prof and c.orthogonality_error <= 1e-9 and c.completeness_error <= 1e-9
        if not ok:
            bad.append(fid)
    return not bad, f"{len(PROFILES) - len(bad)}/{len(PROFILES)} fixtures verified" + (f", failing {bad}" if bad else "")


def _entangled_kind_ok(S: Subspace) -> bool:
    v = detect_product(S, None, CFG)
    if certificate_applies(S, CUT):
        return v.kind is VerdictKind.CERTIFIED_ENTANGLED
    return v.kind is VerdictKind.NUMERICALLY_ENTANGLED and 1 - v.max_overlap >= CFG.entangled_gap


def criterion_2() -> tuple[bool, str]:
    n_ok = n_all = 0
    for fid in ENTANGLED:
        for S in fixture(fid).subspaces:
            n_all += 1
            n_ok += _entangled_kind_ok(S)
    # non-entangled supports: the forced numerical path must report ProductFound
    prod_ok = prod_all = 0
    for fid in ("EX1_2x2", "RHOPRIME_2x3"):
        for S in fixture(fid).subspaces:
            if detect_product(S, None, CFG).entangled:
                continue
            prod_all += 1
            num = detect_product(S, None, CFG, use_certificate=False)
            prod_ok += num.kind is VerdictKind.PRODUCT_FOUND
    ok = n_ok == n_all and prod_ok == prod_all == 3
    return ok, f"entangled {n_ok}/{n_all}, ProductFound on non-entangled supports {prod_ok}/{prod_all} (expect 3)"


def criterion_3(trials: int = 1000) -> tuple[bool, str]:
    rng = np.random.default_rng(3)
    sp = TensorSpace((2, 2))
    num = cert = 0
    for _ in range(trials):
        S = Subspace(sp, oracles.random_subspace_basis(4, 2, rng))
        num += detect_product(S, None, CFG, use_certificate=False).kind is VerdictKind.PRODUCT_FOUND
        cert += detect_product(S, None, CFG).kind is VerdictKind.CERTIFIED_PRODUCT
    return num == cert == trials, f"ProductFound {num}/{trials}, certificate agrees {cert}/{trials}"


def criterion_4(per_shape: int = 200) -> tuple[bool, str]:
    rng = np.random.default_rng(4)
    parts = []
    ok = True
    for dims in [(2, 2), (2, 3), (2, 4), (3, 3), (3, 4)]:
        sp = TensorSpace(dims)
        bound = (dims[0] - 1) * (dims[1] - 1)
        span = sp.total_dim - 1 - bound
        hits = 0
        for t in range(per_shape):
            # mostly the hardest case, dimension bound + 1, with larger ones mixed in
            k = bound + 1 + (0 if t % 2 == 0 else (t // 2) % span)
            S = Subspace(sp, oracles.random_subspace_basis(sp.total_dim, k, rng))
            hits += detect_product(S, None, CFG, use_certificate=False).kind is VerdictKind.PRODUCT_FOUND
        ok &= hits == per_shape
        parts.append(f"{dims[0]}x{dims[1]} {hits}/{per_shape}")
    return ok, "ProductFound " + ", ".join(parts)


def _mode(fid: str) -> tuple[str, str, bool]:
    multi = fixture(fid).space.parties > 2
    return ("genuinely_entangled", "genuine", True) if multi else ("bipartite", "bipartite", False)


def criterion_5() -> tuple[bool, str]:
    agree = 0
    rows = []
    for fid in FIXTURE_IDS:
        sp = fixture(fid)
        split_mode, meas_mode, genuine = _mode(fid)
        p1 = check_property1(StateSet.from_splitting(sp), CFG, genuine=genuine).holds
        ent = verify_entangled_splitting(sp, CFG, split_mode).overall
        p2 = certify_property2(ProjectiveMeasurement.from_splitting(sp), CFG, meas_mode, samples=0).holds
        agree += p1 == ent == p2
        rows.append(f"{fid}={'T' if ent else 'F'}")
    return agree == len(FIXTURE_IDS), f"{agree}/{len(FIXTURE_IDS)} agree ({' '.join(rows)})"


def criterion_6() -> tuple[bool, str]:
    want = {"EX2_2x3": (True, True), "RHOPRIME_2x3": (False, True), "EX1_2x2": (False, False)}
    ok = True
    for fid, (s3, s2) in want.items():
        c = classify_set(StateSet.from_splitting(fixture(fid)), CFG)
        ok &= (c.in_S3, c.in_S2) == (s3, s2)
        ok &= not c.in_S3 or bool(c.in_S2)
    return ok, "EX2 in S3, RHOPRIME in S2 only, EX1 in neither; S3 implies S2 on every call"


def criterion_7() -> tuple[bool, str]:
    tab = elimination_table(StateSet.from_splitting(fixture("EX2_2x3")), computational_basis(TensorSpace((2, 3))))
    exact = tab.as_dict() == TABLE_2X3 and len(tab.outcomes) == 6 and tab.dead_outcomes == ()
    tab5 = elimination_table(StateSet.from_splitting(fixture("EX5_3x3")), computational_basis(TensorSpace((3, 3))))
    ex5 = set(tab5.dead_outcomes) == {"|00>", "|11>"} and len(tab5.dead_outcomes) == 2
    return exact and ex5, f"EX2 table exact: {exact}; EX5 dead outcomes {list(tab5.dead_outcomes)}"


def criterion_8(samples: int = 10_000) -> tuple[bool, str]:
    rep1 = certify_property2(ProjectiveMeasurement.from_splitting(fixture("EX1_2x2")), CFG, "bipartite", samples=100)
    cx = rep1.empirical.counterexample
    found = cx is not None and np.flatnonzero(np.abs(cx.amplitudes) > 1e-12).tolist() in ([1], [2])
    m2 = ProjectiveMeasurement.from_splitting(fixture("EX2_2x3"))
    inputs = np.stack([k.amplitudes for k in sample_product_states(m2.space, samples, seed=8)])
    born = float(np.max(np.abs(born_probabilities(m2, inputs).sum(axis=1) - 1)))
    rep2 = run_samples(m2, inputs, "bipartite", np.random.default_rng(8))
    ok = found and rep2.counterexample is None and rep2.min_entanglement > 1e-6 and born <= 1e-9
    return ok, (
        f"EX1 counterexample {'found' if found else 'missing'}; EX2 {samples} inputs, "
        f"min second Schmidt {rep2.min_entanglement:.3g}, Born error {born:.1e}"
    )


def criterion_9(samples: int = 1000) -> tuple[bool, str]:
    sp = fixture("EX6_4QUBIT")
    cuts_ok = 0
    for S in sp.subspaces:
        rep = detect_biseparable(S, CFG)
        cuts_ok += sum(v.entangled for v in rep.verdicts.values())
    n_cuts = len(all_bipartitions(4)) * len(sp)
    rep = certify_property2(ProjectiveMeasurement.from_splitting(sp), CFG, "genuine", samples=samples)
    ok = cuts_ok == n_cuts == 56 and rep.holds and rep.empirical.counterexample is None
    return ok, (
        f"{cuts_ok}/{n_cuts} cuts entangled; genuine mode over {samples} inputs holds={rep.holds}, "
        f"min score {rep.empirical.min_entanglement:.3g}"
    )


def _passes_1_and_2(sp) -> bool:
    c = verify_splitting(sp)
    return c.valid and all(_entangled_kind_ok(S) for S in sp.subspaces)


def criterion_10() -> tuple[bool, str]:
    bell = {f"{a}x{b}": _passes_1_and_2(generate_bell_pairing(a, b)) for a, b in [(2, 4), (4, 4)]}
    found = {}
    for dims, prof in [((2, 4), (3, 3, 2)), ((3, 3), (3, 3, 3))]:
        sp = search_splitting(TensorSpace(dims), prof, CFG, budget=100_000)
        found[prof] = (
            sp is not None
            and verify_splitting(sp).valid
            and verify_splitting(sp).profile == prof
            and verify_entangled_splitting(sp, CFG).overall
        )
    ok = all(bell.values()) and all(found.values())
    return ok, f"Bell pairings {bell}; searches {{(3,3,2) in 2x4: {found[(3, 3, 2)]}, (3,3,3) in 3x3: {found[(3, 3, 3)]}}}"


def criterion_11(samples: int = 1000) -> tuple[bool, str]:
    worst = -np.inf
    fractions = []
    for fid in ENTANGLED + ("EX6_4QUBIT",):
        for k, S in enumerate(fixture(fid).subspaces):
            r = npt_probe(S, samples=samples, seed=k)
            fractions.append(r.fraction_npt)
            worst = max(worst, max(c.max_eigenvalue for c in r.per_cut.values()))
    sp = TensorSpace((2, 3))
    ctrl = npt_probe(orthonormalize(sp, [np.eye(6)[0], np.eye(6)[1]]), samples=samples, seed=0).fraction_npt
    ok = min(fractions) == 1.0 and worst < -1e-9 and ctrl == 0.0
    return ok, (
        f"{len(fractions)} subspaces, min NPT fraction {min(fractions)}, "
        f"largest min-PT eigenvalue {worst:.3g}; control fraction {ctrl}"
    )


def criterion_12(trials: int = 1000) -> tuple[bool, str]:
    parts = []
    total = 0
    for dims in [(2, 3), (2, 4)]:
        rng = np.random.default_rng(12 + dims[1])
        sp = TensorSpace(dims)
        bad = 0
        n_prod = 0
        for t in range(trials):
            B = oracles.random_subspace_basis(sp.total_dim, 2, rng)
            if t % 4 == 0:
                # plant a product vector so both verdicts are exercised
                a = oracles.random_subspace_basis(dims[0], 1, rng)[:, 0]
                b = oracles.random_subspace_basis(dims[1], 1, rng)[:, 0]
                B = np.stack([np.kron(a, b), B[:, 1]], axis=1)
            S = orthonormalize(sp, list(B.T))
            cert = certify_2xd_dim2(S)
            num = detect_product(S, None, CFG, use_certificate=False)
            bad += (cert.entangled and num.product) or (cert.product and num.entangled)
            n_prod += cert.product
        total += bad
        parts.append(f"{dims[0]}x{dims[1]}: {bad} contradictions, {n_prod} certified product")
    return total == 0, "; ".join(parts)


CRITERIA = [
    criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
    criterion_7, criterion_8, criterion_9, criterion_10, criterion_11, criterion_12,
]


@pytest.mark.parametrize("n", range(1, 13))
def test_acceptance(n):
    t0 = time.perf_counter()
    try:
        ok, detail = CRITERIA[n - 1]()
    except Exception as exc:  # record the failure, then let pytest report it
        record(n, False, f"raised {type(exc).__name__}: {exc}", t0)
        raise
    record(n, ok, detail, t0)
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for n, fn in enumerate(CRITERIA, start=1):
        t0 = time.perf_counter()
        ok, detail = fn()
        record(n, ok, detail, t0)
        print(RESULTS[-1], flush=True)
        failed += not ok
    sys.exit(1 if failed else 0)
