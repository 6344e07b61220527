"""Cylinder sets, basic bisections and paradoxical decompositions.

``Z(mu)`` is the set of infinite paths starting with ``mu``; the empty
path at ``v`` gives ``Z(v)``. Two cylinders are nested or disjoint, and
they are nested exactly when one base is a prefix of the other. In a graph
without sinks every finite path extends to an infinite one, so all set
questions about finitely many cylinders reduce to finite prefix checks.

A bisection ``Z(alpha, beta)`` maps ``beta x`` to ``alpha x``; its domain
is ``Z(beta)`` and its range is ``Z(alpha)``.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from pigraph.conditions import Marker, di_decomposition, has_unbounded_bad_paths
from pigraph.graph_model import GraphError, GraphHandle, NotComposable, Path, path_concat
from pigraph.structure import VertexClass, classify_vertices, _check_vertex


class NotInDomain(GraphError):
    pass


class NotParadoxical(GraphError):
    pass


class SynthesisBudgetExceeded(GraphError):
    pass


@dataclass(frozen=True)
class CylinderSet:
    base: Path

    def __str__(self) -> str:
        return f"Z({self.base})"


def cyl(p: Path) -> CylinderSet:
    return CylinderSet(p)


@dataclass(frozen=True)
class Bisection:
    alpha: Path
    beta: Path

    @property
    def well_formed(self) -> bool:
        return self.alpha.end == self.beta.end

    @property
    def lag(self) -> int:
        return len(self.beta) - len(self.alpha)

    def __str__(self) -> str:
        return f"Z({self.alpha.word() or self.alpha.base}, {self.beta.word() or self.beta.base})"


@dataclass(frozen=True)
class ParadoxicalWitness:
    mu: Path
    first: tuple = ()
    second: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "first", tuple(self.first))
        object.__setattr__(self, "second", tuple(self.second))


@dataclass(frozen=True)
class CoverCheckResult:
    verdict: bool
    uncovered_branch: Optional[Path] = None

    def __bool__(self) -> bool:
        return self.verdict


@dataclass(frozen=True)
class Violation:
    clause: str
    indices: tuple = ()
    message: str = ""

    def __str__(self) -> str:
        return f"({self.clause}) {self.message}"


# ---------------------------------------------------------------------------
# prefix calculus


def cyl_intersect(a: CylinderSet, b: CylinderSet) -> Optional[CylinderSet]:
    """The intersection, which is one of the inputs or empty (``None``)."""
    if a.base.is_prefix_of(b.base):
        return b
    if b.base.is_prefix_of(a.base):
        return a
    return None


def cyl_subset(a: CylinderSet, b: CylinderSet) -> bool:
    return b.base.is_prefix_of(a.base)


def cyl_disjoint(a: CylinderSet, b: CylinderSet) -> bool:
    return not a.base.comparable(b.base)


def covers(family: Iterable[Path], mu: Path, g: GraphHandle) -> CoverCheckResult:
    """Does the union of ``Z(p)`` over ``family`` contain ``Z(mu)``?

    Extensions of ``mu`` are expanded only while they are still a proper
    prefix of some member; an extension with no member below or above it
    is a missed branch, and it extends to an infinite path because the
    graph has no sinks.
    """
    members = [p for p in family if p.comparable(mu)]
    if any(p.is_prefix_of(mu) for p in members):
        return CoverCheckResult(True)
    stack = [mu]
    while stack:
        node = stack.pop()
        if any(p.is_prefix_of(node) for p in members):
            continue
        if not any(node.is_prefix_of(p) for p in members):
            return CoverCheckResult(False, node)
        for arc in reversed(g.out_edges(node.end)):
            stack.append(Path(node.base, node.edges + (arc.ref,), arc.dst))
    return CoverCheckResult(True)


def pairwise_disjoint(paths: Sequence[Path]) -> Optional[tuple[int, int]]:
    """Indices of the first pair of overlapping cylinders, if any."""
    for i in range(len(paths)):
        for j in range(i + 1, len(paths)):
            if paths[i].comparable(paths[j]):
                return i, j
    return None


def partitions(family: Sequence[Path], mu: Path, g: GraphHandle) -> bool:
    family = list(family)
    return covers(family, mu, g).verdict and pairwise_disjoint(family) is None


# ---------------------------------------------------------------------------
# bisections


def bisection_inverse(b: Bisection) -> Bisection:
    return Bisection(b.beta, b.alpha)


def bisection_compose(b1: Bisection, b2: Bisection) -> Bisection:
    """The product ``b1 b2``: first apply ``b2``, then ``b1``.

    Needs ``b1.beta`` and ``b2.alpha`` prefix comparable; with
    ``b1.beta = b2.alpha tau`` the result is ``Z(b1.alpha, b2.beta tau)``,
    and with ``b2.alpha = b1.beta tau`` it is ``Z(b1.alpha tau, b2.beta)``.
    """
    beta, gamma = b1.beta, b2.alpha
    if gamma.is_prefix_of(beta):
        tau = beta.edges[len(gamma):]
        return Bisection(b1.alpha, Path(b2.beta.base, b2.beta.edges + tau, beta.end))
    if beta.is_prefix_of(gamma):
        tau = gamma.edges[len(beta):]
        return Bisection(Path(b1.alpha.base, b1.alpha.edges + tau, gamma.end), b2.beta)
    raise NotComposable(f"{b1} and {b2} do not compose")


def bisection_translate(b: Bisection, c: CylinderSet) -> CylinderSet:
    """Image of ``c ⊆ Z(beta)`` under ``b``: swap the ``beta`` prefix for ``alpha``."""
    if not b.beta.is_prefix_of(c.base):
        raise NotInDomain(f"{c} is not inside Z({b.beta})")
    rest = c.base.edges[len(b.beta):]
    return CylinderSet(Path(b.alpha.base, b.alpha.edges + rest, c.base.end))


# ---------------------------------------------------------------------------
# paradoxical witnesses


def _valid_path(g: GraphHandle, p: Path) -> bool:
    try:
        return g.path(p.base, p.edges) == p
    except GraphError:
        return False


def verify_witness(w: ParadoxicalWitness, g: GraphHandle) -> list[Violation]:
    """Check a paradoxical decomposition of ``Z(mu)``; ``[]`` means valid.

    Clauses: (a) each bisection is well formed, (b) the beta sides and the
    delta sides each have union exactly ``Z(mu)``, (c) every alpha and gamma cylinder
    lies in ``Z(mu)``, (d) those ``n + m`` cylinders are pairwise disjoint.
    """
    out = []
    fams = {"first": w.first, "second": w.second}
    for name, fam in fams.items():
        if not fam:
            out.append(Violation("a", (name,), f"{name} family is empty"))
        for i, b in enumerate(fam):
            if not (_valid_path(g, b.alpha) and _valid_path(g, b.beta)) or not b.well_formed:
                out.append(Violation("a", (name, i), f"{b} is not a bisection of this graph"))
    if out:
        return out
    for name, fam in fams.items():
        res = covers([b.beta for b in fam], w.mu, g)
        if not res.verdict:
            out.append(Violation("b", (name,), f"{name} family misses {res.uncovered_branch}"))
        for i, b in enumerate(fam):
            if not w.mu.is_prefix_of(b.beta):
                out.append(Violation("b", (name, i), f"Z({b.beta}) sticks out of Z({w.mu})"))
    images = [(name, i, b.alpha) for name, fam in fams.items() for i, b in enumerate(fam)]
    for name, i, a in images:
        if not w.mu.is_prefix_of(a):
            out.append(Violation("c", (name, i), f"Z({a}) is not inside Z({w.mu})"))
    for x in range(len(images)):
        for y in range(x + 1, len(images)):
            if images[x][2].comparable(images[y][2]):
                out.append(
                    Violation(
                        "d",
                        (images[x][:2], images[y][:2]),
                        f"Z({images[x][2]}) and Z({images[y][2]}) overlap",
                    )
                )
    return out


def _repeat(p: Path, cycle: Path, times: int) -> Path:
    for _ in range(times):
        p = path_concat(p, cycle)
    return p


def cycle_words(mu: Path, nu: Path, budget: int) -> list[Path]:
    """Pairwise prefix-incomparable cycles built from two first-return cycles.

    Yields ``mu nu, nu mu, mu^2 nu, nu^2 mu, ...`` up to exponent ``budget``.
    Words from the same family first differ where one reads ``nu`` and the
    other ``mu``; words from different families differ in the first letter
    block. ``mu`` and ``nu`` are incomparable because neither revisits the
    base vertex before its end.
    """
    out = []
    for k in range(1, budget + 1):
        out.append(path_concat(_repeat(Path.at(mu.base), mu, k), nu))
        out.append(path_concat(_repeat(Path.at(nu.base), nu, k), mu))
    return out


def synthesize_witness(g: GraphHandle, v, budget: int = 16) -> ParadoxicalWitness:
    """Build and verify a paradoxical decomposition of ``Z(v)``.

    Start from a decomposition ``Z(v) = ⊔ Z(beta_i)`` with companions
    ``alpha_i`` through V2, cut each ``alpha_i = p_i q_i`` at its first V2
    vertex and insert distinct cycle words there. Cutting at the *first*
    V2 vertex makes any two cut prefixes equal or incomparable, so branches
    sharing a prefix only need different words, and branches with
    different prefixes never collide.
    """
    v = _check_vertex(g, v)
    cls = classify_vertices(g)
    v1 = cls.members(VertexClass.V1)
    if v1:
        raise NotParadoxical(f"Condition (K) fails at {v1[0]}")
    unbounded, cert = has_unbounded_bad_paths(g, v, Marker.V2)
    if unbounded:
        raise NotParadoxical(f"Z({v}) admits no decomposition through V2 ({cert})")
    groups: dict = defaultdict(list)
    for beta, alpha in di_decomposition(g, v, Marker.V2):
        cur = alpha.base
        cut = 0
        for cut in range(len(alpha) + 1):
            if cut:
                cur = g.edge(alpha.edges[cut - 1]).dst
            if cls.of(cur) is VertexClass.V2:
                break
        head = Path(alpha.base, alpha.edges[:cut], cur)
        tail = Path(cur, alpha.edges[cut:], alpha.end)
        groups[head].append((beta, tail))
    first, second = [], []
    for head, branches in groups.items():
        mu, nu = cls.cycles_at(head.end)[:2]
        words = cycle_words(mu, nu, budget)
        if 2 * len(branches) > len(words):
            raise SynthesisBudgetExceeded(
                f"{len(branches)} branches at {head.end} need exponents beyond {budget}"
            )
        for k, (beta, tail) in enumerate(branches):
            first.append(Bisection(path_concat(path_concat(head, words[2 * k]), tail), beta))
            second.append(Bisection(path_concat(path_concat(head, words[2 * k + 1]), tail), beta))
    witness = ParadoxicalWitness(Path.at(v), tuple(first), tuple(second))
    problems = verify_witness(witness, g)
    if problems:
        raise AssertionError(f"synthesized witness failed verification: {problems}")
    return witness


def transport_witness(w: ParadoxicalWitness, mu: Path) -> ParadoxicalWitness:
    """Prefix every path of a witness for ``Z(t(mu))`` by ``mu``."""
    if w.mu.edges or w.mu.base != mu.end:
        raise NotComposable(f"witness is for {w.mu}, not Z({mu.end})")

    def lift(b: Bisection) -> Bisection:
        return Bisection(path_concat(mu, b.alpha), path_concat(mu, b.beta))

    return ParadoxicalWitness(mu, tuple(map(lift, w.first)), tuple(map(lift, w.second)))


def witness_for_path(g: GraphHandle, mu: Path, budget: int = 16) -> ParadoxicalWitness:
    """A verified witness for ``Z(mu)``, transported from ``Z(t(mu))``."""
    w = transport_witness(synthesize_witness(g, mu.end, budget), mu)
    problems = verify_witness(w, g)
    if problems:
        raise AssertionError(f"transported witness failed verification: {problems}")
    return w
