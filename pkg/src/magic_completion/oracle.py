"""Brute-force ground truth and property verification sweeps.

Everything here is deliberately independent of the staged engine: the search
enumerates raw assignments and prunes on forbidden triangles only.  The
property checks compare the engine against this ground truth and against the
structural guarantees the engine is supposed to provide (optimality around
the magic value, parity preservation, automorphism preservation, magic-edge
provenance, obstacle validity, strong amalgamation).
"""

from __future__ import annotations

import functools
import itertools
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

from .completion import magic_complete, shortest_path_complete
from .errors import InputError, ResourceLimitError
from .obstacles import extract_obstacle, validate_obstacle_hom
from .params import (CASE_III, ParameterTuple, classify_admissible,
                     eligible_magic)
from .space import (LabelledCycle, LabelledGraph, allowed_cube, automorphisms,
                    canonical_cycle, cycle_to_graph, fork_graph,
                    graph_to_matrix, is_automorphism, is_member,
                    matrix_to_graph, serialize_graph)

PROPERTY_ORDER = (
    "oracle-equivalence",
    "optimality",
    "parity",
    "automorphism-preservation",
    "m-edge-provenance",
    "obstacle-extraction",
    "amalgamation",
)


@dataclass(frozen=True)
class CompletionSet:
    base: LabelledGraph
    completions: tuple[LabelledGraph, ...]


@dataclass(frozen=True)
class Failure:
    instance: str
    detail: str


@dataclass
class PropertyReport:
    name: str
    instances: int
    failures: list[Failure] = field(default_factory=list)
    stats: dict[str, int] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures


def format_report(report: PropertyReport) -> str:
    lines = [f"PROPERTY {report.name} instances={report.instances} "
             f"failures={len(report.failures)}"]
    for failure in report.failures:
        lines.append(f"counterexample {failure.detail}")
        lines.extend("  " + text for text in failure.instance.strip("\n").split("\n"))
    return "\n".join(lines) + "\n"


def _search(p: ParameterTuple, g: LabelledGraph, max_missing: int,
            value_order: str, find_all: bool):
    if g.delta != p.delta:
        raise InputError(f"graph delta {g.delta} differs from parameter delta {p.delta}")
    cube = allowed_cube(p)
    mat = graph_to_matrix(g)
    n = g.n
    for u, v, w in itertools.combinations(range(n), 3):
        a, b, c = mat[u][v], mat[u][w], mat[v][w]
        if a is not None and b is not None and c is not None and not cube[a][b][c]:
            return []
    missing = [(u, v) for u in range(n) for v in range(u + 1, n) if mat[u][v] is None]
    if len(missing) > max_missing:
        raise ResourceLimitError(
            f"{len(missing)} missing pairs exceed the search budget of {max_missing}")
    if value_order == "ascending":
        values = list(range(1, p.delta + 1))
    elif value_order == "descending":
        values = list(range(p.delta, 0, -1))
    else:
        raise InputError(f"unknown value order {value_order!r}")
    results: list[LabelledGraph] = []

    def consistent(u: int, v: int, val: int) -> bool:
        row_u, row_v = mat[u], mat[v]
        for w in range(n):
            if w == u or w == v:
                continue
            a, b = row_u[w], row_v[w]
            if a is not None and b is not None and not cube[val][a][b]:
                return False
        return True

    def descend(idx: int) -> bool:
        if idx == len(missing):
            results.append(matrix_to_graph(p.delta, mat))
            return not find_all
        u, v = missing[idx]
        for val in values:
            if consistent(u, v, val):
                mat[u][v] = mat[v][u] = val
                if descend(idx + 1):
                    mat[u][v] = mat[v][u] = None
                    return True
                mat[u][v] = mat[v][u] = None
        return False

    descend(0)
    return results


def brute_force_completable(p: ParameterTuple, g: LabelledGraph,
                            max_missing: int = 18,
                            value_order: str = "ascending") -> LabelledGraph | None:
    """First completion in depth-first order, or None.  value_order exists so
    tests can confirm the verdict does not depend on the search order."""
    results = _search(p, g, max_missing, value_order, find_all=False)
    return results[0] if results else None


def enumerate_all_completions(p: ParameterTuple, g: LabelledGraph,
                              max_missing: int = 12) -> CompletionSet:
    """Every completion, ordered lexicographically by the assignment vector."""
    results = _search(p, g, max_missing, "ascending", find_all=True)
    return CompletionSet(g, tuple(results))


def enumerate_members(p: ParameterTuple, size: int) -> list[LabelledGraph]:
    """All complete members of the class on `size` labelled vertices."""
    empty = LabelledGraph(size, p.delta)
    return list(enumerate_all_completions(p, empty, max_missing=size * (size - 1) // 2
                                          ).completions)


def _optparity(p: ParameterTuple, magic: int, completed: LabelledGraph,
               comps: CompletionSet):
    """Shared scan for the optimality and parity checks on one instance."""
    case = classify_admissible(p).case_tag
    opt_stats = {"clause1": 0, "clause2": 0, "clause3": 0}
    par_stats = {"parity-exception": 0}
    opt_details: list[str] = []
    par_details: list[str] = []
    pairs = comps.base.missing_pairs()
    parity_exception_possible = (
        case == CASE_III
        and p.c == 2 * p.delta + p.k1 + 1
        and p.c != 2 * p.k1 + 2 * p.k2 + 1
        and magic > p.k1 > 1)
    low = min(p.k1, magic - 1)
    high = max(p.k2, magic + 1)
    for other in comps.completions:
        for u, v in pairs:
            dbar = completed.get(u, v)
            dprime = other.get(u, v)
            if dprime >= dbar >= magic:
                opt_stats["clause1"] += 1
            elif dprime <= dbar <= magic:
                opt_stats["clause2"] += 1
            elif (case == "II-B" and dbar == magic - 1 and dprime > magic
                  and (dprime - dbar) % 2 == 0):
                opt_stats["clause3"] += 1
            else:
                opt_details.append(
                    f"pair ({u}, {v}): engine={dbar} other={dprime} magic={magic}")
            if dbar <= low or dbar >= high:
                if (dprime - dbar) % 2 != 0:
                    if parity_exception_possible and dbar == p.k1:
                        par_stats["parity-exception"] += 1
                    else:
                        par_details.append(
                            f"pair ({u}, {v}): engine={dbar} other={dprime} "
                            f"differ in parity")
    return opt_details, opt_stats, par_details, par_stats


def check_optimality(p: ParameterTuple, magic: int, g: LabelledGraph,
                     max_missing: int = 12) -> PropertyReport:
    """Against every completion, each engine value sits on the magic side of it
    (or uses the one sanctioned exceptional clause)."""
    outcome = magic_complete(p, magic, g)
    if not outcome.completable:
        raise InputError("optimality is only defined for completable inputs")
    comps = enumerate_all_completions(p, g, max_missing=max_missing)
    details, stats, _, _ = _optparity(p, magic, outcome.completed, comps)
    failures = [Failure(serialize_graph(g), d) for d in details]
    return PropertyReport("optimality", 1, failures, stats)


def check_parity(p: ParameterTuple, magic: int, g: LabelledGraph,
                 max_missing: int = 12) -> PropertyReport:
    """Engine values at or below min(K1, M-1), or at or above max(K2, M+1),
    share parity with every completion's value (modulo the one exception)."""
    outcome = magic_complete(p, magic, g)
    if not outcome.completable:
        raise InputError("parity is only defined for completable inputs")
    comps = enumerate_all_completions(p, g, max_missing=max_missing)
    _, _, details, stats = _optparity(p, magic, outcome.completed, comps)
    failures = [Failure(serialize_graph(g), d) for d in details]
    return PropertyReport("parity", 1, failures, stats)


def check_automorphism_preservation(p: ParameterTuple, magic: int,
                                    g: LabelledGraph) -> PropertyReport:
    """Input automorphisms survive both completion engines."""
    auts = automorphisms(g)
    completed = magic_complete(p, magic, g).completed
    spc = shortest_path_complete(p.delta, g)
    failures = []
    for perm in auts:
        if not is_automorphism(completed, perm):
            failures.append(Failure(serialize_graph(g),
                                    f"permutation {perm} lost by staged completion"))
        if not is_automorphism(spc, perm):
            failures.append(Failure(serialize_graph(g),
                                    f"permutation {perm} lost by shortest-path completion"))
    return PropertyReport("automorphism-preservation", 1, failures,
                          {"input-automorphisms": len(auts)})


def _provenance_details(p: ParameterTuple, magic: int, g: LabelledGraph,
                        completed: LabelledGraph) -> list[str]:
    """Magic-labelled pairs in forbidden or perimeter-capped triangles of the
    completed graph must already be input edges."""
    cube = allowed_cube(p)
    details = []
    for u, v, w in itertools.combinations(range(completed.n), 3):
        a, b, c = completed.get(u, v), completed.get(u, w), completed.get(v, w)
        if cube[a][b][c] and a + b + c < p.c:
            continue
        for x, y, d in ((u, v, a), (u, w, b), (v, w, c)):
            if d == magic and g.get(x, y) is None:
                details.append(
                    f"triangle ({u}, {v}, {w}) uses derived magic edge ({x}, {y})")
    return details


def check_m_edge_provenance(p: ParameterTuple, magic: int,
                            g: LabelledGraph) -> PropertyReport:
    outcome = magic_complete(p, magic, g)
    details = [] if outcome.completable else _provenance_details(
        p, magic, g, outcome.completed)
    failures = [Failure(serialize_graph(g), d) for d in details]
    return PropertyReport("m-edge-provenance", 1, failures, {})


@lru_cache(maxsize=None)
def _cycle_uncompletable(p: ParameterTuple, labels: tuple[int, ...],
                         max_missing: int) -> bool:
    g = cycle_to_graph(LabelledCycle(labels), p.delta)
    return brute_force_completable(p, g, max_missing=max_missing) is None


def _embeddings(a: LabelledGraph, b: LabelledGraph) -> list[tuple[int, ...]]:
    """All label-preserving injections between complete graphs."""
    out = []
    for image in itertools.permutations(range(b.n), a.n):
        if all(a.get(x, y) == b.get(image[x], image[y]) for x, y in a.pairs()):
            out.append(image)
    return out


def _glue(p: ParameterTuple, a: LabelledGraph, b1: LabelledGraph,
          b2: LabelledGraph, emb1: tuple[int, ...],
          emb2: tuple[int, ...]) -> LabelledGraph:
    """Free superposition of b1 and b2 over their shared copies of a.

    The glued graph keeps b1's vertex ids; vertices of b2 outside the shared
    part get fresh ids.  Pairs across the two sides stay missing.
    """
    for name, graph in (("a", a), ("b1", b1), ("b2", b2)):
        if graph.delta != p.delta:
            raise InputError(f"{name} has delta {graph.delta}, expected {p.delta}")
        if not graph.is_complete():
            raise InputError(f"{name} must be a complete graph")
    for name, emb, b in (("emb1", emb1, b1), ("emb2", emb2, b2)):
        if len(emb) != a.n or len(set(emb)) != a.n:
            raise InputError(f"{name} is not an injection of a")
        if any(not 0 <= x < b.n for x in emb):
            raise InputError(f"{name} maps outside its target")
        for x, y in a.pairs():
            if a.get(x, y) != b.get(emb[x], emb[y]):
                raise InputError(f"{name} does not preserve labels")
    if not is_member(p, b1) or not is_member(p, b2):
        raise InputError("both sides of an amalgam must belong to the class")
    mapping: dict[int, int] = {}
    for x in range(a.n):
        mapping[emb2[x]] = emb1[x]
    next_id = b1.n
    for y in range(b2.n):
        if y not in mapping:
            mapping[y] = next_id
            next_id += 1
    edges = list(b1.edges())
    shared = set(emb2)
    for x, y, d in b2.edges():
        if x in shared and y in shared:
            continue  # already present via b1, consistency enforced above
        edges.append((mapping[x], mapping[y], d))
    edges = [(min(u, v), max(u, v), d) for u, v, d in edges]
    return LabelledGraph(next_id, p.delta, edges)


def amalgamate(p: ParameterTuple, magic: int, a: LabelledGraph,
               b1: LabelledGraph, b2: LabelledGraph,
               emb1: tuple[int, ...], emb2: tuple[int, ...]):
    """Glue b1 and b2 along their copies of a, then run the completion engine.

    For admissible parameters the outcome must always be Completable.
    """
    return magic_complete(p, magic, _glue(p, a, b1, b2, emb1, emb2))


def check_amalgamation(p: ParameterTuple, magic: int,
                       max_part_size: int = 3) -> PropertyReport:
    """Exhaustive strong-amalgamation sweep over small complete members."""
    members = {size: enumerate_members(p, size)
               for size in range(0, max_part_size + 1)}
    report = PropertyReport("amalgamation", 0)
    for a_size in range(0, max_part_size + 1):
        for a in members[a_size]:
            sides = []
            for b_size in range(a_size, max_part_size + 1):
                for b in members[b_size]:
                    sides.extend((b, emb) for emb in _embeddings(a, b))
            for (b1, e1), (b2, e2) in itertools.product(sides, sides):
                glued = _glue(p, a, b1, b2, e1, e2)
                report.instances += 1
                if not magic_complete(p, magic, glued).completable:
                    report.failures.append(Failure(
                        serialize_graph(glued),
                        f"amalgam over a={a.edges()} with emb1={e1} emb2={e2} "
                        f"is uncompletable"))
    return report


@dataclass(frozen=True)
class ExhaustiveScope:
    """Every partial graph on exactly `vertices` labelled vertices."""
    vertices: int


@dataclass(frozen=True)
class RandomScope:
    """Deterministic fork instances, then `count` seeded random instances."""
    count: int
    seed: int
    vertices: int = 5


def _random_member(p: ParameterTuple, magic: int, rng: random.Random,
                   size: int) -> LabelledGraph:
    """Random complete member, grown one vertex at a time.

    Each new distance is drawn from the values that keep all triangles against
    the already-built part allowed; if the greedy draw dead-ends, the whole
    vertex falls back to the magic distance, which always works.
    """
    cube = allowed_cube(p)
    mat = [[None] * size for _ in range(size)]
    for i in range(size):
        mat[i][i] = 0
    for v in range(size):
        placed = True
        for u in range(v):
            options = [val for val in range(1, p.delta + 1)
                       if all(mat[u][w] is None or mat[v][w] is None
                              or cube[val][mat[u][w]][mat[v][w]]
                              for w in range(v))]
            if not options:
                placed = False
                break
            val = rng.choice(options)
            mat[u][v] = mat[v][u] = val
        if not placed:
            for u in range(v):
                mat[u][v] = mat[v][u] = magic
    return matrix_to_graph(p.delta, mat)


def _extend_member(p: ParameterTuple, magic: int, rng: random.Random,
                   base: LabelledGraph, size: int) -> LabelledGraph:
    """Random complete member of the given size containing `base` on 0..n-1."""
    cube = allowed_cube(p)
    mat = [[None] * size for _ in range(size)]
    for i in range(size):
        mat[i][i] = 0
    for u, v, d in base.edges():
        mat[u][v] = mat[v][u] = d
    for v in range(base.n, size):
        placed = True
        for u in range(v):
            options = [val for val in range(1, p.delta + 1)
                       if all(mat[u][w] is None or mat[v][w] is None
                              or cube[val][mat[u][w]][mat[v][w]]
                              for w in range(v))]
            if not options:
                placed = False
                break
            mat[u][v] = mat[v][u] = rng.choice(options)
        if not placed:
            for u in range(v):
                mat[u][v] = mat[v][u] = magic
    return matrix_to_graph(p.delta, mat)


def _random_instance(p: ParameterTuple, magic: int, rng: random.Random,
                     vertices: int) -> LabelledGraph:
    if rng.random() < 0.5:
        edges = []
        for u, v in itertools.combinations(range(vertices), 2):
            if rng.random() >= 0.25:
                edges.append((u, v, rng.randint(1, p.delta)))
        return LabelledGraph(vertices, p.delta, edges)
    member = _random_member(p, magic, rng, vertices)
    kept = [(u, v, d) for u, v, d in member.edges() if rng.random() >= 0.5]
    return LabelledGraph(vertices, p.delta, kept)


def scope_instances(p: ParameterTuple, magic: int, scope) -> list[LabelledGraph]:
    """Materialize the instance list for a verification scope."""
    if isinstance(scope, ExhaustiveScope):
        pairs = list(itertools.combinations(range(scope.vertices), 2))
        out = []
        for assignment in itertools.product(range(p.delta + 1), repeat=len(pairs)):
            edges = [(u, v, d) for (u, v), d in zip(pairs, assignment) if d > 0]
            out.append(LabelledGraph(scope.vertices, p.delta, edges))
        return out
    if isinstance(scope, RandomScope):
        out = [fork_graph(a, b, p.delta)
               for a in range(1, p.delta + 1) for b in range(a, p.delta + 1)]
        rng = random.Random(scope.seed)
        out.extend(_random_instance(p, magic, rng, scope.vertices)
                   for _ in range(scope.count))
        return out
    raise InputError(f"unknown scope {scope!r}")


def _instance_findings(p: ParameterTuple, magic: int, enum_budget: int,
                       brute_budget: int, g: LabelledGraph):
    """Per-instance results: (serialized instance or None, list of findings).

    A finding is (property, counted, failure detail or None, stats delta).
    Budget overruns mark the property as skipped instead of failing.
    """
    findings: list[tuple[str, bool, str | None, dict[str, int]]] = []
    outcome = magic_complete(p, magic, g)
    try:
        witness = brute_force_completable(p, g, max_missing=brute_budget)
        if (witness is not None) != outcome.completable:
            findings.append(("oracle-equivalence", True,
                             f"engine says completable={outcome.completable}, "
                             f"search says {witness is not None}", {}))
        else:
            findings.append(("oracle-equivalence", True, None, {}))
    except ResourceLimitError:
        findings.append(("oracle-equivalence", False, None, {"skipped": 1}))
    auts = automorphisms(g)
    spc = shortest_path_complete(p.delta, g)
    aut_detail = None
    for perm in auts:
        if not is_automorphism(outcome.completed, perm):
            aut_detail = f"permutation {perm} lost by staged completion"
            break
        if not is_automorphism(spc, perm):
            aut_detail = f"permutation {perm} lost by shortest-path completion"
            break
    findings.append(("automorphism-preservation", True, aut_detail, {}))
    if outcome.completable:
        try:
            comps = enumerate_all_completions(p, g, max_missing=enum_budget)
            opt_details, opt_stats, par_details, par_stats = _optparity(
                p, magic, outcome.completed, comps)
            findings.append(("optimality", True,
                             opt_details[0] if opt_details else None, opt_stats))
            findings.append(("parity", True,
                             par_details[0] if par_details else None, par_stats))
        except ResourceLimitError:
            findings.append(("optimality", False, None, {"skipped": 1}))
            findings.append(("parity", False, None, {"skipped": 1}))
    else:
        details = _provenance_details(p, magic, g, outcome.completed)
        findings.append(("m-edge-provenance", True,
                         details[0] if details else None, {}))
        obstacle = extract_obstacle(p, magic, g, outcome.trace)
        if not validate_obstacle_hom(g, obstacle):
            findings.append(("obstacle-extraction", True,
                             f"invalid homomorphism for obstacle {obstacle.cycle.labels}",
                             {}))
        else:
            labels = canonical_cycle(obstacle.cycle).labels
            try:
                if _cycle_uncompletable(p, labels, brute_budget):
                    findings.append(("obstacle-extraction", True, None, {}))
                else:
                    findings.append(("obstacle-extraction", True,
                                     f"extracted cycle {labels} is completable", {}))
            except ResourceLimitError:
                findings.append(("obstacle-extraction", False, None, {"skipped": 1}))
    text = serialize_graph(g) if any(f[2] for f in findings) else None
    return text, findings


def _random_amalgamation(p: ParameterTuple, magic: int, scope: RandomScope,
                         max_part_size: int = 3) -> PropertyReport:
    rng = random.Random(scope.seed + 1)
    report = PropertyReport("amalgamation", 0)
    for _ in range(min(scope.count, 250)):
        a = _random_member(p, magic, rng, rng.randint(0, 2))
        b1 = _extend_member(p, magic, rng, a, rng.randint(a.n, max_part_size))
        b2 = _extend_member(p, magic, rng, a, rng.randint(a.n, max_part_size))
        identity = tuple(range(a.n))
        glued = _glue(p, a, b1, b2, identity, identity)
        report.instances += 1
        if not magic_complete(p, magic, glued).completable:
            report.failures.append(Failure(
                serialize_graph(glued),
                f"amalgam over a={a.edges()} is uncompletable"))
    return report


def _pmap(fn, items, jobs: int):
    if jobs <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        chunk = max(1, len(items) // (jobs * 8))
        return list(pool.map(fn, items, chunksize=chunk))


def run_verification_suite(p: ParameterTuple, magic: int, scope, jobs: int = 1,
                           enum_budget: int = 12, brute_budget: int = 18,
                           amalgam_size: int = 3) -> list[PropertyReport]:
    """Run every property over a scope and merge the reports in a fixed order.

    Results are deterministic for a given scope (random scopes are seeded).
    Budget overruns within a sub-check are counted under a "skipped" stat.
    """
    if magic not in eligible_magic(p):
        raise InputError(f"{magic} is not an eligible magic distance for {p.key()}")
    instances = scope_instances(p, magic, scope)
    worker = functools.partial(_instance_findings, p, magic, enum_budget, brute_budget)
    per_instance = _pmap(worker, instances, jobs)
    reports = {name: PropertyReport(name, 0) for name in PROPERTY_ORDER}
    for text, findings in per_instance:
        for name, counted, detail, stats in findings:
            report = reports[name]
            if counted:
                report.instances += 1
            if detail is not None:
                report.failures.append(Failure(text or "", detail))
            for key, value in stats.items():
                report.stats[key] = report.stats.get(key, 0) + value
    if isinstance(scope, ExhaustiveScope):
        reports["amalgamation"] = check_amalgamation(p, magic, max_part_size=amalgam_size)
    else:
        reports["amalgamation"] = _random_amalgamation(p, magic, scope,
                                                       max_part_size=amalgam_size)
    return [reports[name] for name in PROPERTY_ORDER]
