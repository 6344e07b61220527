"""Full classification of a graph and the cross-checks between verdicts.

The headline verdict is ``purely_infinite = K and DL``. The remaining
flags either come from independent graph criteria (IH, local
contraction, cofinality, simplicity) or are declared alongside the
headline verdict (``implied_flags``), never computed on their own.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Optional

from pigraph.conditions import ConditionReport, check_conditions
from pigraph.cylinders import SynthesisBudgetExceeded, synthesize_witness, verify_witness
from pigraph.formats import dumps, path_to_dict, to_jsonable, witness_from_dict, witness_to_dict, _loads
from pigraph.graph_model import (
    FiniteGraph,
    GraphError,
    GraphHandle,
    PeriodicGraph,
    add_tails as attach_tails,
    ensure_valid,
    validate_no_sinks,
)
from pigraph.structure import (
    connects_to_loop,
    exitless_cycle,
    has_cycles,
    has_property_IH,
    is_cofinal,
    locally_contracting_criterion,
    nontrivial_isotropy_certificate,
    unreached_infinite_path,
)
from pigraph.tails import tail_loop_condition

IMPLIED_FLAGS = (
    "real_rank_zero",
    "o_infinity_stable",
    "strongly_purely_infinite",
    "quotients_have_infinite_projections",
)

BASIS = {
    "purely_infinite": "Condition (K) and Condition (DL)",
    "implied_flags": "implied by theorem, not computed",
    "af_verdict": "literature: AF exactly when the graph has no cycles",
    "essentially_principal": "decided as Condition (K)",
}

GROUPOID_CAVEAT = (
    "Pure infiniteness is tied to paradoxical cylinder sets here only "
    "because these are graph groupoids; for a general ample groupoid only "
    "the implication from paradoxicality to pure infiniteness is available, "
    "and nothing in this report should be read as a statement about that "
    "wider class."
)


class SinksPresent(GraphError):
    pass


@dataclass
class ClassificationReport:
    graph_kind: str
    tails_added: bool
    conditions: ConditionReport
    property_IH: bool
    locally_contracting: bool
    cofinal: bool
    simple: bool
    purely_infinite: bool
    implied_flags: dict
    af_verdict: bool
    certificates: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    basis: dict = field(default_factory=lambda: dict(BASIS))
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "ClassificationReport":
        d = dict(d)
        d["conditions"] = ConditionReport(**d["conditions"])
        return cls(**d)


def _condition_report(g: GraphHandle) -> ConditionReport:
    c = check_conditions(g)
    certs = dict(c.certificates)
    if "K" in certs:
        v, cycle = certs["K"]
        certs["K"] = {"vertex": str(v), "cycle": path_to_dict(cycle)}
    return ConditionReport(c.K, c.I, c.DI, c.DL, c.essentially_principal, to_jsonable(certs))


def _structure_certificates(g: GraphHandle) -> dict:
    certs = {}
    iso = nontrivial_isotropy_certificate(g)
    if iso is not None:
        certs["isotropy"] = to_jsonable(iso)
    loop = exitless_cycle(g)
    if loop is not None:
        certs["exitless_cycle"] = path_to_dict(loop)
    for v in g.canonical_vertices():
        if not connects_to_loop(g, v):
            certs["no_loop_reached"] = str(v)
            break
    for v in g.canonical_vertices():
        if unreached_infinite_path(g, v) is not None:
            certs["not_cofinal_at"] = str(v)
            break
    return certs


def prepare(g: GraphHandle, add_tails: bool = False) -> tuple[GraphHandle, bool]:
    """Validate ``g`` and remove sinks if asked; returns ``(graph, tails_added)``."""
    ensure_valid(g)
    sinks = validate_no_sinks(g)
    if not sinks:
        return g, False
    if not add_tails:
        raise SinksPresent(f"sinks present: {', '.join(map(str, sinks))} (try --add-tails)")
    if not isinstance(g, FiniteGraph):
        raise SinksPresent("tails can only be added to finite graphs")
    return attach_tails(g), True


def classify(
    g: GraphHandle,
    add_tails: bool = False,
    witnesses: bool = False,
    budget: int = 16,
) -> ClassificationReport:
    """Assemble every verdict for ``g``.

    With ``witnesses`` set and a purely infinite verdict, a verified
    paradoxical decomposition of ``Z(v)`` is attached for each canonical
    vertex. A synthesis that runs out of budget is noted, never fatal.
    """
    kind = "periodic" if isinstance(g, PeriodicGraph) else "finite"
    h, tails_added = prepare(g, add_tails)
    cond = _condition_report(h)
    pi = cond.K and cond.DL
    ih = has_property_IH(h)
    cofinal = is_cofinal(h)
    report = ClassificationReport(
        graph_kind=kind,
        tails_added=tails_added,
        conditions=cond,
        property_IH=ih,
        locally_contracting=locally_contracting_criterion(h),
        cofinal=cofinal,
        simple=cofinal and exitless_cycle(h) is None,
        purely_infinite=pi,
        implied_flags={name: pi for name in IMPLIED_FLAGS},
        af_verdict=not has_cycles(h),
        certificates=_structure_certificates(h),
        notes=[GROUPOID_CAVEAT],
    )
    if witnesses and pi:
        for v in h.canonical_vertices():
            try:
                w = synthesize_witness(h, v, budget)
            except SynthesisBudgetExceeded as exc:
                report.notes.append(f"no witness for Z({v}): {exc}")
                continue
            report.witnesses[str(v)] = witness_to_dict(w)
    return report


def consistency_check(r: ClassificationReport, g: GraphHandle) -> list[str]:
    """Equivalences that must hold between the verdicts; ``[]`` means Ok."""
    out = []
    c = r.conditions
    pi = r.purely_infinite
    h = attach_tails(g) if r.tails_added and isinstance(g, FiniteGraph) else g
    if (c.K and c.DI) != pi:
        out.append("(K∧DI) ≠ purely_infinite")
    if (c.K and c.DL) != pi:
        out.append("(K∧DL) ≠ purely_infinite")
    if isinstance(g, FiniteGraph) and (c.K and tail_loop_condition(g)) != pi:
        out.append("(K ∧ tail_loop_condition) ≠ purely_infinite")
    if c.DI and not c.I:
        out.append("DI holds but I fails")
    if c.DI and not c.DL:
        out.append("DI holds but DL fails")
    if pi and not r.property_IH:
        out.append("purely_infinite holds but IH fails")
    if c.essentially_principal != c.K:
        out.append("essentially_principal ≠ K")
    for name, value in r.implied_flags.items():
        if value != pi:
            out.append(f"implied flag {name} ≠ purely_infinite")
    if r.af_verdict != (not has_cycles(h)):
        out.append("af_verdict ≠ (graph has no cycles)")
    for v, wd in r.witnesses.items():
        try:
            problems = verify_witness(witness_from_dict(wd, h), h)
        except GraphError as exc:
            problems = [str(exc)]
        if problems:
            out.append(f"witness for Z({v}) fails verification: {problems[0]}")
    return out


def render_json(r: ClassificationReport) -> str:
    return dumps(r.to_dict())


def parse_report_json(text: str) -> ClassificationReport:
    return ClassificationReport.from_dict(_loads(text))


def summary_lines(r: ClassificationReport) -> list[str]:
    c = r.conditions
    rows = [
        ("purely_infinite", r.purely_infinite),
        ("K", c.K),
        ("I", c.I),
        ("DI", c.DI),
        ("DL", c.DL),
        ("essentially_principal", c.essentially_principal),
        ("property_IH", r.property_IH),
        ("locally_contracting", r.locally_contracting),
        ("cofinal", r.cofinal),
        ("simple", r.simple),
        ("af", r.af_verdict),
    ]
    lines = [f"{name:<22} {str(value).lower()}" for name, value in rows]
    if r.tails_added:
        lines.insert(0, "(tails added to sinks)")
    return lines


def first_witness(r: ClassificationReport) -> Optional[dict]:
    return next(iter(r.witnesses.values()), None)
