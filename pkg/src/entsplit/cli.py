"""``entsplit`` command-line front end.

Every command prints a short human summary, or with ``--json`` a report whose
field set is fixed per command (see ``REPORT_FIELDS``). Exit codes:

    0  the requested property holds / the operation succeeded
    1  the property fails and a counterexample was found
    2  inconclusive
    3  usage or input error
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Optional, Sequence

import numpy as np

from .discrimination import (
    StateSet,
    check_property1,
    classify_set,
    computational_basis,
    elimination_table,
    local_basis,
    npt_probe,
    witness_overlaps,
)
from .errors import EntsplitError
from .measurement_sim import (
    ENTANGLED_SCHMIDT,
    MIN_PROBABILITY,
    ProjectiveMeasurement,
    born_probabilities,
    certify_property2,
    measure,
    post_state_score,
)
from .problem import Problem, encode_vector, load_problem, problem_to_dict, save_problem
from .product_search import BiseparabilityReport, ProductVerdict, SearchConfig
from .splitting import (
    FIXTURE_IDS,
    Splitting,
    feasibility,
    fixture,
    generate_bell_pairing,
    normalize_mode,
    regroup_parties,
    search_splitting,
    subspace_verdict,
    verify_entangled_splitting,
    verify_splitting,
)
from .tensor_core import Ket, TensorSpace, haar_vector

__all__ = ["main", "run", "build_parser", "load_problem", "REPORT_FIELDS"]

OK, FAILS, INCONCLUSIVE, USAGE = 0, 1, 2, 3

COMMANDS = (
    "verify", "detect", "identify", "classify", "eliminate", "measure",
    "certify", "generate", "search", "fixtures", "regroup", "npt",
)
_COMMON = {"command", "exit_code", "message", "settings", "source", "dims"}
REPORT_FIELDS: dict[str, frozenset] = {
    "verify": frozenset(_COMMON | {"mode", "profile", "structure", "overall", "inconclusive", "subspaces"}),
    "detect": frozenset(_COMMON | {"mode", "subspaces"}),
    "identify": frozenset(_COMMON | {"mode", "holds", "inconclusive", "states"}),
    "classify": frozenset(_COMMON | {"in_S1", "in_S2", "in_S3", "states"}),
    "eliminate": frozenset(_COMMON | {"basis", "outcomes", "table", "weights", "dead_outcomes", "null_outcomes", "two_state_implication"}),
    "measure": frozenset(_COMMON | {"mode", "input", "probabilities", "outcomes"}),
    "certify": frozenset(_COMMON | {"mode", "profile", "holds", "inconclusive", "structural", "empirical"}),
    "generate": frozenset(_COMMON | {"profile", "overall", "problem"}),
    "search": frozenset(_COMMON | {"profile", "budget", "feasibility", "found", "problem"}),
    "fixtures": frozenset(_COMMON | {"fixtures"}),
    "regroup": frozenset(_COMMON | {"mode", "from_dims", "profile", "structure", "overall", "inconclusive", "subspaces"}),
    "npt": frozenset(_COMMON | {"samples", "subspaces"}),
}
_MEAS_MODE = {"bipartite": "bipartite", "completely_entangled": "completely_product", "genuinely_entangled": "genuine"}


class UsageError(EntsplitError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# JSON encoding


def _ket(k: Optional[Ket]) -> Optional[list]:
    return None if k is None else encode_vector(k.amplitudes)


def _verdict(v: ProductVerdict) -> dict:
    return {
        "kind": v.kind.value,
        "max_overlap": float(v.max_overlap),
        "cut": None if v.cut is None else str(v.cut),
        "source": v.source,
        "witness": _ket(v.witness),
    }


def _support_verdict(label: str, v) -> dict:
    if isinstance(v, BiseparabilityReport):
        worst = v.verdicts[v.worst_cut]
        status = "entangled" if v.genuinely_entangled else ("inconclusive" if v.inconclusive else "product")
        return {
            "label": label,
            "status": status,
            "kind": "GenuinelyEntangled" if v.genuinely_entangled else worst.kind.value,
            "max_overlap": float(worst.max_overlap),
            "worst_cut": str(v.worst_cut),
            "witness": _ket(worst.witness) if worst.product else None,
            "cuts": {str(c): _verdict(x) for c, x in v.verdicts.items()},
        }
    status = "entangled" if v.entangled else ("inconclusive" if v.inconclusive else "product")
    return {
        "label": label,
        "status": status,
        "kind": v.kind.value,
        "max_overlap": float(v.max_overlap),
        "worst_cut": None if v.cut is None else str(v.cut),
        "witness": _ket(v.witness),
        "cuts": None,
    }


def _fmt_ket(space: TensorSpace, amps: np.ndarray, digits: int = 4) -> str:
    eps = 10.0 ** -digits
    sep = "" if max(space.dims) <= 10 else ","
    out = ""
    for k in np.flatnonzero(np.abs(amps) > eps):
        z = complex(amps[k])
        idx = sep.join(str(int(x)) for x in np.unravel_index(k, space.dims))
        if abs(z.imag) < eps:
            sign, coeff = ("-" if z.real < 0 else "+"), f"{abs(z.real):.{digits}f}"
        else:
            sign, coeff = "+", f"({z.real:.{digits}f}{z.imag:+.{digits}f}j)"
        if not out:
            out = ("-" if sign == "-" else "") + f"{coeff}|{idx}>"
        else:
            out += f" {sign} {coeff}|{idx}>"
    return out or "0"


def _status_code(entangled: bool, inconclusive: bool) -> int:
    return OK if entangled else (INCONCLUSIVE if inconclusive else FAILS)


# ---------------------------------------------------------------------------
# loading and settings


def _load(args) -> tuple[Splitting, Problem, str]:
    if args.fixture and args.problem:
        raise UsageError("give either --fixture or --problem, not both")
    if args.fixture:
        try:
            sp = fixture(args.fixture)
        except KeyError:
            raise UsageError(f"unknown fixture {args.fixture!r}; known: {', '.join(FIXTURE_IDS)}") from None
        return sp, Problem(sp, tuple(None for _ in sp.subspaces), {}), f"fixture:{args.fixture}"
    if args.problem:
        prob = load_problem(args.problem)
        return prob.splitting, prob, f"problem:{Path(args.problem).name}"
    raise UsageError(f"{args.command} needs --fixture ID or --problem FILE")


def _config(args, prob: Optional[Problem] = None) -> tuple[SearchConfig, int]:
    settings = dict(prob.settings) if prob is not None else {}
    flags = {
        "product_tol": args.tol_product,
        "entangled_gap": args.gap,
        "restarts": args.restarts,
        "max_iters": args.max_iters,
        "seed": args.seed,
    }
    samples = args.samples if args.samples is not None else int(settings.pop("samples", 1000))
    settings.pop("samples", None)
    settings.update({k: v for k, v in flags.items() if v is not None})
    try:
        cfg = SearchConfig(**settings)
    except (TypeError, ValueError) as e:
        raise UsageError(f"bad settings: {e}") from None
    return cfg, samples


def _settings_json(cfg: SearchConfig, samples: int) -> dict:
    return {
        "product_tol": cfg.product_tol,
        "entangled_gap": cfg.entangled_gap,
        "restarts": cfg.restarts,
        "max_iters": cfg.max_iters,
        "stall_tol": cfg.stall_tol,
        "seed": cfg.seed,
        "samples": samples,
    }


def _mode(args, space: TensorSpace) -> str:
    if args.mode is None:
        return "bipartite" if space.parties == 2 else "genuinely_entangled"
    mode = normalize_mode(args.mode)
    if (mode == "bipartite") != (space.parties == 2):
        raise UsageError(f"mode {args.mode} does not apply to a {space.parties}-party space")
    return mode


def _report(command: str, code: int, message: str, cfg: SearchConfig, n_samples: int, source, dims, **fields) -> dict:
    rep = {
        "command": command,
        "exit_code": code,
        "message": message,
        "settings": _settings_json(cfg, n_samples),
        "source": source,
        "dims": None if dims is None else list(dims),
        **fields,
    }
    assert set(rep) == REPORT_FIELDS[command], f"report fields drifted for {command}"
    return rep


# ---------------------------------------------------------------------------
# commands; each returns (report, human lines)


def _structure_errors(check) -> list[str]:
    errs = []
    if not check.orthogonal:
        errs.append(f"subspaces not orthogonal (max |P_i P_j| = {check.orthogonality_error:.3e})")
    if not check.complete:
        errs.append(f"projectors do not sum to the identity (error {check.completeness_error:.3e})")
    if not check.min_rank_ok:
        errs.append("some subspace has rank < 2")
    return errs


def _entangled_summary(sp: Splitting, cfg: SearchConfig, mode: str):
    check = verify_splitting(sp)
    structure = {
        "orthogonal": check.orthogonal,
        "complete": check.complete,
        "min_rank_ok": check.min_rank_ok,
        "valid": check.valid,
        "errors": _structure_errors(check),
    }
    if not check.valid:
        return FAILS, structure, False, False, [], [f"not a valid splitting: {'; '.join(structure['errors'])}"]
    rep = verify_entangled_splitting(sp, cfg, mode)
    subs = [_support_verdict(lab, v) for lab, v in zip(sp.labels, rep.verdicts)]
    lines = [f"  {s['label']}: {s['kind']} (max product overlap {s['max_overlap']:.6g})" for s in subs]
    return _status_code(rep.overall, rep.inconclusive), structure, rep.overall, rep.inconclusive, subs, lines


def cmd_verify(args):
    sp, prob, source = _load(args)
    cfg, samples = _config(args, prob)
    mode = _mode(args, sp.space)
    code, structure, overall, inconc, subs, lines = _entangled_summary(sp, cfg, mode)
    profile = ",".join(map(str, sorted(sp.profile, reverse=True)))
    head = {
        OK: f"entangled splitting of {sp.space} ({mode}), profile {profile}",
        FAILS: f"not an entangled splitting of {sp.space} ({mode})",
        INCONCLUSIVE: f"inconclusive: no product state found but some overlaps sit in the gap band ({mode})",
    }[code]
    rep = _report(
        "verify", code, head, cfg, samples, source, sp.space.dims,
        mode=mode, profile=list(sp.profile), structure=structure,
        overall=overall, inconclusive=inconc, subspaces=subs,
    )
    return rep, [head, *lines]


def cmd_detect(args):
    sp, prob, source = _load(args)
    cfg, samples = _config(args, prob)
    mode = _mode(args, sp.space)
    chosen = list(range(len(sp)))
    if args.subspace:
        if args.subspace not in sp.labels:
            raise UsageError(f"no subspace labelled {args.subspace!r}; labels: {', '.join(sp.labels)}")
        chosen = [sp.labels.index(args.subspace)]
    subs = [_support_verdict(sp.labels[i], subspace_verdict(sp.subspaces[i], mode, cfg)) for i in chosen]
    statuses = [s["status"] for s in subs]
    code = FAILS if "product" in statuses else (INCONCLUSIVE if "inconclusive" in statuses else OK)
    msg = {OK: "no product state in any subspace", FAILS: "product state found", INCONCLUSIVE: "inconclusive"}[code]
    lines = [msg] + [f"  {s['label']}: {s['kind']} (max product overlap {s['max_overlap']:.6g})" for s in subs]
    for s in subs:
        if s["status"] == "product" and s["witness"] is not None:
            amps = np.array([complex(*z) for z in s["witness"]])
            lines.append(f"    witness in {s['label']}: {_fmt_ket(sp.space, amps)}")
    return _report("detect", code, msg, cfg, samples, source, sp.space.dims, mode=mode, subspaces=subs), lines


def _state_set(prob: Problem) -> StateSet:
    try:
        return prob.state_set()
    except EntsplitError as e:
        raise UsageError(f"supports do not form an orthogonal state set: {e}") from None


def cmd_identify(args):
    sp, prob, source = _load(args)
    cfg, samples = _config(args, prob)
    states = _state_set(prob)
    multi = sp.space.parties > 2
    mode = _mode(args, sp.space)
    genuine = multi and mode == "genuinely_entangled"
    rep1 = check_property1(states, cfg, genuine=genuine)
    entries, lines = [], []
    for i, r in enumerate(rep1.states):
        label = sp.labels[i]
        if genuine:
            worst = r.verdicts[r.worst_cut]
            verdict = "not_identifiable" if r.genuinely_entangled else ("inconclusive" if r.inconclusive else "identifiable")
            witness = worst.witness if worst.product else None
            entries.append({
                "label": label, "verdict": verdict, "max_overlap": float(worst.max_overlap),
                "witness": _ket(witness), "overlaps": None, "cut": str(r.worst_cut),
            })
        else:
            witness = r.witness if r.verdict.identifiable else None
            entries.append({
                "label": label, "verdict": r.verdict.value, "max_overlap": float(r.max_overlap),
                "witness": _ket(witness),
                "overlaps": None if witness is None else [float(x) for x in witness_overlaps(states, witness)],
                "cut": None,
            })
        line = f"  {label}: {entries[-1]['verdict']}"
        if witness is not None:
            line += f", witness {_fmt_ket(sp.space, witness.amplitudes)}"
        lines.append(line)
    code = _status_code(rep1.holds, rep1.inconclusive)
    n_id = sum(e["verdict"] in ("identifiable",) for e in entries)
    msg = {
        OK: f"Property 1 holds: none of the {len(entries)} states is locally identifiable",
        FAILS: f"Property 1 fails: {n_id} of {len(entries)} states locally identifiable",
        INCONCLUSIVE: "Property 1 inconclusive",
    }[code]
    rep = _report("identify", code, msg, cfg, samples, source, sp.space.dims,
                  mode=mode if multi else "bipartite", holds=rep1.holds, inconclusive=rep1.inconclusive, states=entries)
    return rep, [msg, *lines]


def cmd_classify(args):
    sp, prob, source = _load(args)
    cfg, samples = _config(args, prob)
    cls = classify_set(_state_set(prob), cfg)
    entries = [
        {"label": sp.labels[r.index], "verdict": r.verdict.value, "max_overlap": float(r.max_overlap), "witness": _ket(r.witness)}
        for r in cls.states
    ]
    code = INCONCLUSIVE if cls.in_S2 is None or cls.in_S3 is None else OK
    show = lambda f: "undetermined" if f is None else ("yes" if f else "no")
    msg = f"in S3: {show(cls.in_S3)}, in S2: {show(cls.in_S2)}, in S1: {cls.in_S1}"
    lines = [msg] + [f"  {e['label']}: {e['verdict']}" for e in entries]
    rep = _report("classify", code, msg, cfg, samples, source, sp.space.dims,
                  in_S1=cls.in_S1, in_S2=cls.in_S2, in_S3=cls.in_S3, states=entries)
    return rep, lines


def cmd_eliminate(args):
    sp, prob, source = _load(args)
    cfg, samples = _config(args, prob)
    states = _state_set(prob)
    basis_kind = args.basis or "computational"
    basis = computational_basis(sp.space) if basis_kind == "computational" else local_basis(sp.space, cfg.seed)
    tab = elimination_table(states, basis)
    labels = sp.labels
    table = {o: [labels[i] for i in e] for o, e in zip(tab.outcomes, tab.eliminated)}
    lines = [f"elimination table ({basis_kind} basis)"]
    width = max(len(o) for o in tab.outcomes)
    for o in tab.outcomes:
        row = ", ".join(table[o]) if table[o] else ("(impossible)" if o in tab.null_outcomes else "-")
        lines.append(f"  {o:<{width}}  eliminates {row}")
    lines.append("dead outcomes: " + (" ".join(tab.dead_outcomes) if tab.dead_outcomes else "none"))
    if tab.two_state_implication:
        lines.append(tab.two_state_implication)
    msg = f"{len(tab.dead_outcomes)} dead outcome(s) of {len(tab.outcomes)}"
    rep = _report(
        "eliminate", OK, msg, cfg, samples, source, sp.space.dims,
        basis=basis_kind, outcomes=list(tab.outcomes), table=table,
        weights=[[float(x) for x in row] for row in tab.weights],
        dead_outcomes=list(tab.dead_outcomes), null_outcomes=list(tab.null_outcomes),
        two_state_implication=tab.two_state_implication,
    )
    return rep, lines


def _parse_input(space: TensorSpace, text: str, seed: int) -> Ket:
    if text == "random":
        rng = np.random.default_rng([int(seed) & 0xFFFFFFFF, 0x1A9])
        v = np.ones(1, dtype=complex)
        for d in space.dims:
            v = np.kron(v, haar_vector(d, rng))
        return Ket(space, v)
    parts = text.split(",") if "," in text else list(text)
    try:
        digits = tuple(int(p) for p in parts)
    except ValueError:
        raise UsageError(f"--input must be 'random' or basis digits like 01, got {text!r}") from None
    if len(digits) != space.parties or any(not 0 <= x < d for x, d in zip(digits, space.dims)):
        raise UsageError(f"--input {text!r} is not a basis state of {space}")
    amps = np.zeros(space.total_dim, dtype=complex)
    amps[np.ravel_multi_index(digits, space.dims)] = 1
    return Ket(space, amps)


def cmd_measure(args):
    sp, prob, source = _load(args)
    cfg, samples = _config(args, prob)
    mode = _mode(args, sp.space)
    meas = ProjectiveMeasurement.from_splitting(sp)
    psi = _parse_input(sp.space, args.input or "random", cfg.seed)
    probs = born_probabilities(meas, psi.amplitudes)[0]
    outcomes, lines, product_seen = [], [], False
    for i, p in enumerate(probs):
        if p <= MIN_PROBABILITY:
            continue
        rec = measure(meas, psi, outcome=i)
        score = float(post_state_score(rec.post_state.amplitudes[None, :], sp.space.dims, _MEAS_MODE[mode])[0])
        ent = score > ENTANGLED_SCHMIDT
        product_seen |= not ent
        outcomes.append({
            "label": meas.labels[i],
            "probability": float(p),
            "post_state": _ket(rec.post_state),
            "schmidt_second": {str(c): v for c, v in rec.schmidt_second.items()},
            "entangled": bool(ent),
        })
        lines.append(
            f"  {meas.labels[i]}: p = {p:.6f}, post-state {_fmt_ket(sp.space, rec.post_state.amplitudes)}"
            f" ({'entangled' if ent else 'PRODUCT'})"
        )
    code = FAILS if product_seen else OK
    msg = f"input {_fmt_ket(sp.space, psi.amplitudes)}: {len(outcomes)} possible outcome(s)" + (
        ", some post-state is product" if product_seen else ", every post-state entangled"
    )
    rep = _report("measure", code, msg, cfg, samples, source, sp.space.dims, mode=mode,
                  input=_ket(psi), probabilities=[float(p) for p in probs], outcomes=outcomes)
    return rep, [msg, *lines]


def cmd_certify(args):
    sp, prob, source = _load(args)
    cfg, samples = _config(args, prob)
    mode = _mode(args, sp.space)
    try:
        meas = ProjectiveMeasurement.from_splitting(sp)
    except EntsplitError as e:
        raise UsageError(str(e)) from None
    rep2 = certify_property2(meas, cfg, _MEAS_MODE[mode], samples=samples)
    emp = rep2.empirical
    code = _status_code(rep2.holds, rep2.inconclusive)
    profile = ",".join(map(str, sorted(sp.profile, reverse=True)))
    if code == OK:
        msg = f"Property 2 holds ({len(meas)} outcomes, profile {profile})"
    elif code == FAILS:
        msg = f"Property 2 fails ({len(meas)} outcomes, profile {profile})"
        if emp.counterexample is not None:
            msg += (f": input {_fmt_ket(sp.space, emp.counterexample.amplitudes)} leaves a product state"
                    f" after outcome {meas.labels[emp.counterexample_outcome]}")
    else:
        msg = f"Property 2 inconclusive ({len(meas)} outcomes, profile {profile})"
    structural = [_support_verdict(lab, v) for lab, v in zip(meas.labels, rep2.structural)]
    empirical = {
        "inputs_tested": emp.inputs_tested,
        "outcome_counts": list(emp.outcome_counts),
        "min_entanglement": emp.min_entanglement,
        "max_born_error": emp.max_born_error,
        "counterexample": _ket(emp.counterexample),
        "counterexample_outcome": None if emp.counterexample_outcome is None else meas.labels[emp.counterexample_outcome],
    }
    lines = [msg, f"  {emp.inputs_tested} product inputs, smallest post-state entanglement {emp.min_entanglement:.6g}"]
    rep = _report("certify", code, msg, cfg, samples, source, sp.space.dims, mode=mode, profile=list(sp.profile),
                  holds=rep2.holds, inconclusive=rep2.inconclusive, structural=structural, empirical=empirical)
    return rep, lines


def _write_problem(sp: Splitting, out: Optional[str]) -> Optional[str]:
    if out:
        save_problem(sp, out)
        return out
    return None


def cmd_generate(args):
    cfg, samples = _config(args)
    if not args.dims or len(args.dims) != 2:
        raise UsageError("generate needs --dims d1 d2")
    sp = generate_bell_pairing(*args.dims)
    rep = verify_entangled_splitting(sp, cfg, "bipartite")
    code = _status_code(rep.overall, rep.inconclusive)
    profile = ",".join(map(str, sp.profile))
    msg = f"Bell pairing of {sp.space}: {len(sp)} subspaces, profile {profile}"
    written = _write_problem(sp, args.out)
    lines = [msg] + ([f"written to {written}"] if written else [])
    out = _report("generate", code, msg, cfg, samples, "generated", sp.space.dims,
                  profile=list(sp.profile), overall=rep.overall, problem=problem_to_dict(sp))
    return out, lines


def cmd_search(args):
    cfg, samples = _config(args)
    if not args.dims or not args.profile:
        raise UsageError("search needs --dims and --profile")
    space = TensorSpace(tuple(args.dims))
    if space.parties != 2:
        raise UsageError("search works on two-party spaces")
    feas = feasibility(space, args.profile)
    fjson = {
        "feasible": feas.feasible,
        "violations": list(feas.violations),
        "max_entangled_dim": feas.max_entangled_dim,
        "cardinality_min": feas.cardinality_min,
        "cardinality_max": feas.cardinality_max,
        "degeneracy_degree": feas.degeneracy_degree,
    }
    profile = ",".join(map(str, args.profile))
    if not feas.feasible:
        msg = f"profile {profile} is impossible in {space}: {'; '.join(feas.violations)}"
        return _report("search", FAILS, msg, cfg, samples, "search", space.dims, profile=list(args.profile),
                       budget=args.budget, feasibility=fjson, found=False, problem=None), [msg]
    sp = search_splitting(space, args.profile, cfg, budget=args.budget)
    if sp is None:
        msg = f"no splitting with profile {profile} found in {space} within budget {args.budget} (existence not ruled out)"
        return _report("search", INCONCLUSIVE, msg, cfg, samples, "search", space.dims, profile=list(args.profile),
                       budget=args.budget, feasibility=fjson, found=False, problem=None), [msg]
    written = _write_problem(sp, args.out)
    msg = f"found a splitting of {space} with profile {profile}"
    lines = [msg] + [f"  {lab}: {_fmt_ket(space, s.spanning[:, 0])} ..." for lab, s in zip(sp.labels, sp.subspaces)]
    lines += [f"written to {written}"] if written else []
    return _report("search", OK, msg, cfg, samples, "search", space.dims, profile=list(args.profile),
                   budget=args.budget, feasibility=fjson, found=True, problem=problem_to_dict(sp)), lines


def cmd_fixtures(args):
    cfg, samples = _config(args)
    if args.fixture:
        sp, _, source = _load(args)
        written = _write_problem(sp, args.out)
        msg = f"{args.fixture}: {sp.space}, profile {','.join(map(str, sp.profile))}"
        entries = [{"id": args.fixture, "dims": list(sp.space.dims), "profile": list(sp.profile), "problem": problem_to_dict(sp)}]
        lines = [msg] + ([f"written to {written}"] if written else [])
        return _report("fixtures", OK, msg, cfg, samples, source, sp.space.dims, fixtures=entries), lines
    entries, lines = [], []
    for fid in FIXTURE_IDS:
        sp = fixture(fid)
        entries.append({"id": fid, "dims": list(sp.space.dims), "profile": list(sp.profile), "problem": None})
        lines.append(f"  {fid:<14} {str(sp.space):<8} profile {','.join(map(str, sp.profile))}")
    msg = f"{len(entries)} fixtures"
    return _report("fixtures", OK, msg, cfg, samples, "catalog", None, fixtures=entries), [msg, *lines]


def cmd_regroup(args):
    sp, prob, source = _load(args)
    cfg, samples = _config(args, prob)
    if not args.to:
        raise UsageError("regroup needs --to d1 d2 ...")
    try:
        new = regroup_parties(sp, args.to)
    except EntsplitError as e:
        raise UsageError(str(e)) from None
    mode = _mode(args, new.space) if args.mode else ("bipartite" if new.space.parties == 2 else "completely_entangled")
    code, structure, overall, inconc, subs, lines = _entangled_summary(new, cfg, mode)
    written = _write_problem(new, args.out)
    msg = f"regrouped {sp.space} -> {new.space}; " + {
        OK: f"every subspace entangled ({mode})",
        FAILS: f"not an entangled splitting ({mode})",
        INCONCLUSIVE: f"inconclusive ({mode})",
    }[code]
    lines = [msg, *lines] + ([f"written to {written}"] if written else [])
    rep = _report("regroup", code, msg, cfg, samples, source, new.space.dims, mode=mode, from_dims=list(sp.space.dims),
                  profile=list(new.profile), structure=structure, overall=overall, inconclusive=inconc, subspaces=subs)
    return rep, lines


def cmd_npt(args):
    sp, prob, source = _load(args)
    cfg, samples = _config(args, prob)
    subs, lines = [], []
    for i, (lab, S) in enumerate(zip(sp.labels, sp.subspaces)):
        r = npt_probe(S, samples=samples, seed=[int(cfg.seed) & 0xFFFFFFFF, i])
        subs.append({
            "label": lab,
            "fraction_npt": r.fraction_npt,
            "worst_cut": str(r.worst_cut),
            "cuts": {
                str(c): {"fraction_npt": x.fraction_npt, "min_eigenvalue": x.min_eigenvalue,
                         "max_eigenvalue": x.max_eigenvalue, "mean_eigenvalue": x.mean_eigenvalue}
                for c, x in r.per_cut.items()
            },
        })
        lines.append(f"  {lab}: NPT fraction {r.fraction_npt:.4f} on worst cut {r.worst_cut}")
    code = OK if all(s["fraction_npt"] == 1.0 for s in subs) else FAILS
    msg = f"{samples} samples per subspace: " + ("every sample NPT on every cut" if code == OK else "some sample has a PPT cut")
    return _report("npt", code, msg, cfg, samples, source, sp.space.dims, samples=samples, subspaces=subs), [msg, *lines]


_DISPATCH = {
    "verify": cmd_verify, "detect": cmd_detect, "identify": cmd_identify, "classify": cmd_classify,
    "eliminate": cmd_eliminate, "measure": cmd_measure, "certify": cmd_certify, "generate": cmd_generate,
    "search": cmd_search, "fixtures": cmd_fixtures, "regroup": cmd_regroup, "npt": cmd_npt,
}


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_argument_group("input")
    src.add_argument("--fixture", metavar="ID", help=f"built-in splitting: {', '.join(FIXTURE_IDS)}")
    src.add_argument("--problem", metavar="FILE", help="JSON problem file")
    knobs = common.add_argument_group("numerics (defaults follow SearchConfig)")
    knobs.add_argument("--tol-product", type=float, help="overlap deficit below which a product state is declared found")
    knobs.add_argument("--gap", type=float, help="overlap deficit above which a subspace is declared entangled")
    knobs.add_argument("--restarts", type=int)
    knobs.add_argument("--max-iters", type=int)
    knobs.add_argument("--samples", type=int, help="random inputs / samples (default 1000)")
    knobs.add_argument("--seed", type=int)
    common.add_argument("--mode", choices=["bipartite", "ces", "ges"])
    common.add_argument("--json", action="store_true", help="emit the machine-readable report")

    parser = _Parser(prog="entsplit", description="Splittings of composite spaces into entangled subspaces.")
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    helps = {
        "verify": "check that a splitting is a valid decomposition into entangled subspaces",
        "detect": "product-state detection in each subspace",
        "identify": "local unambiguous identifiability of supported states",
        "classify": "membership in the nested set families",
        "eliminate": "elimination table for a product-basis measurement",
        "measure": "apply the splitting's projective measurement to one input",
        "certify": "entanglement generation by the projective measurement",
        "generate": "Bell-pairing splitting of an even-dimension space",
        "search": "randomized search for a splitting with a given profile",
        "fixtures": "list or export built-in splittings",
        "regroup": "reinterpret a splitting with a new party structure",
        "npt": "partial-transpose negativity of random states in each subspace",
    }
    subs = {name: sub.add_parser(name, parents=[common], help=h, description=h) for name, h in helps.items()}
    subs["detect"].add_argument("--subspace", metavar="LABEL")
    subs["eliminate"].add_argument("--basis", choices=["computational", "random"], default="computational")
    subs["measure"].add_argument("--input", metavar="DIGITS|random", help="basis state such as 01, or 'random'")
    for name in ("generate", "search"):
        subs[name].add_argument("--dims", type=int, nargs="+", metavar="D")
    subs["search"].add_argument("--profile", type=int, nargs="+", metavar="R")
    subs["search"].add_argument("--budget", type=int, default=100_000)
    subs["regroup"].add_argument("--to", type=int, nargs="+", metavar="D")
    for name in ("generate", "search", "fixtures", "regroup"):
        subs[name].add_argument("--out", metavar="FILE", help="write the splitting as a problem file")
    return parser


def execute(argv: Sequence[str]) -> tuple[int, Optional[dict], list[str]]:
    """Parse and run ``argv``; returns the exit code, the report dict (or None) and the printed lines."""
    parser = build_parser()
    args = parser.parse_args(list(argv))
    if args.command is None:
        parser.print_help(sys.stderr)
        return USAGE, None, []
    try:
        report, lines = _DISPATCH[args.command](args)
    except (EntsplitError, KeyError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else str(e)
        return USAGE, None, [f"entsplit {args.command}: error: {msg}"]
    return report["exit_code"], report, lines


def run(argv: Sequence[str], stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    json_mode = "--json" in argv
    try:
        code, report, lines = execute(argv)
    except SystemExit as e:
        return int(e.code) if isinstance(e.code, int) else USAGE
    if report is None:
        for line in lines:
            print(line, file=stderr)
        return code
    if json_mode:
        stdout.write(json.dumps(_jsonable(report), indent=2, sort_keys=True) + "\n")
    else:
        for line in lines:
            print(line, file=stdout)
    return code


def _jsonable(x: Any) -> Any:
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    return x


def main(argv: Optional[Sequence[str]] = None) -> None:
    sys.exit(run(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
