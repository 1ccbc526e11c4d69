"""Random instance generation and the reduction verification engine.

Generation is rejection-free and constructive: occurrence/degree/overlap
budgets are enforced by drawing against per-item credit counters. Every
generator is deterministic in its seed; trial i of a verification run uses
seed + i, so concurrent workers cannot change outcomes.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

from . import oracles, reductions
from .instances import (
    Ap2dmInstance,
    CnfFormula,
    Digraph,
    LinSystem,
    Parity,
    UGraph,
    Unit,
    XceInstance,
    XorSystem,
    serialize,
    size_param,
    validate,
)


class GenerationError(ValueError):
    """Unsatisfiable generation constraint combination."""


MASK64 = (1 << 64) - 1


class SplitMix64:
    """SplitMix64 PRNG (Steele, Lea, Flood 2014). Portable: the whole
    algorithm is these few lines, so any implementation can reproduce the
    stream. State advances by the golden-gamma constant; output is the
    finalizing mix of the new state."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def randrange(self, n: int) -> int:
        """Uniform-ish integer in [0, n) via modulo (documented, portable)."""
        if n <= 0:
            raise ValueError("randrange needs a positive bound")
        return self.next64() % n

    def randint(self, a: int, b: int) -> int:
        return a + self.randrange(b - a + 1)

    def chance(self, p: float) -> bool:
        return (self.next64() >> 11) / float(1 << 53) < p

    def choice(self, seq):
        return seq[self.randrange(len(seq))]

    def shuffle(self, seq: list):
        for i in range(len(seq) - 1, 0, -1):
            j = self.randrange(i + 1)
            seq[i], seq[j] = seq[j], seq[i]


@dataclass(frozen=True)
class GenSpec:
    """What to generate: problem class, size knob, constraint tags, seed.

    max_size bounds the primary size knob (variables, vertices, elements);
    the per-trial instance size is drawn from [1, max_size]. sat_bias is the
    fraction of trials that plant a witness (assignment, path, cover).
    """

    problem: str
    max_size: int
    seed: int = 0
    clauses: int | None = None  # exact clause count for 2sat3, None = draw
    max_clauses: int | None = None  # cap on the drawn clause count
    occ_bound: int = 3
    deg_bound: int = 3
    overlap_bound: int = 4
    col_bound: int = 3
    max_rows: int = 8
    exemption_density: float = 0.3
    sat_bias: float = 0.5
    # joint cap on n + m_cls for 2sat3 (keeps downstream oracle budgets)
    vc_budget: int | None = None


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------


def _plant_unsat_core(n: int, cap: int, rng: SplitMix64) -> list[tuple[int, int]] | None:
    """An unsatisfiable exact clean occ<=3 core: implication chains
    x ~> !x (through fresh variables p_i) and !x ~> x (through a bridge
    variable c and fresh q_i). Needs 4 variables and 5 clauses minimum;
    polarities are flipped per variable for variety. None if it cannot fit.
    """
    if n < 4 or cap < 5:
        return None
    budget_vars = n - 4
    budget_cls = cap - 5
    a = 1 + rng.randrange(1 + min(2, budget_vars, budget_cls))
    budget_vars -= a - 1
    budget_cls -= a - 1
    b = 1 + rng.randrange(1 + min(2, budget_vars, budget_cls))
    ids = list(range(1, n + 1))
    rng.shuffle(ids)
    x, c = ids[0], ids[1]
    ps = ids[2:2 + a]
    qs = ids[2 + a:2 + a + b]
    sign = {v: (1 if rng.chance(0.5) else -1) for v in ids[:2 + a + b]}

    def lit(v: int, positive: bool) -> int:
        return sign[v] * v if positive else -sign[v] * v

    clauses = [(lit(x, False), lit(ps[0], True))]
    for p1, p2 in zip(ps, ps[1:]):
        clauses.append((lit(p1, False), lit(p2, True)))
    clauses.append((lit(ps[-1], False), lit(x, False)))
    clauses.append((lit(x, True), lit(c, True)))
    clauses.append((lit(c, False), lit(qs[0], True)))
    for q1, q2 in zip(qs, qs[1:]):
        clauses.append((lit(q1, False), lit(q2, True)))
    clauses.append((lit(qs[-1], False), lit(c, False)))
    return clauses


def _gen_2sat3(spec: GenSpec, rng: SplitMix64) -> CnfFormula:
    # An explicit clause count pins n to the size knob; otherwise n is drawn.
    n = spec.max_size if spec.clauses is not None else rng.randint(1, spec.max_size)
    cap = (spec.occ_bound * n) // 2
    if spec.vc_budget is not None:
        cap = min(cap, spec.vc_budget - n)
    if spec.max_clauses is not None:
        cap = min(cap, spec.max_clauses)
    if n < 2:
        cap = 0  # a clean 2-literal clause needs two distinct variables
    if spec.clauses is not None:
        if spec.clauses > (spec.occ_bound * n) // 2:
            raise GenerationError(
                f"{spec.clauses} clauses exceed floor({spec.occ_bound}*{n}/2) literal slots")
        m = spec.clauses
    else:
        m = rng.randint(0, max(0, cap))
    # trial mix: planted satisfying assignment / planted unsatisfiable core
    # (random alone is YES-heavy at these sizes) / fully random
    roll = (rng.next64() >> 11) / float(1 << 53)
    planted = roll < spec.sat_bias
    want_core = not planted and roll < spec.sat_bias + (1.0 - spec.sat_bias) / 2
    sigma = [rng.chance(0.5) for _ in range(n + 1)]
    credits = [spec.occ_bound] * (n + 1)
    clauses: list[tuple[int, int]] = []
    if want_core and spec.occ_bound >= 3:
        core = _plant_unsat_core(n, cap, rng)
        if core is not None:
            clauses.extend(core)
            for clause in core:
                for l in clause:
                    credits[abs(l)] -= 1
            m = max(m, len(core))
    for _ in range(m - len(clauses)):
        avail = [v for v in range(1, n + 1) if credits[v] > 0]
        if len(avail) < 2:
            if spec.clauses is None:
                break  # drawn count: stop at the credit frontier
            raise GenerationError("occurrence credits stranded; lower the clause count")
        # draw the two largest credits (rng tie-breaks) so credits never
        # concentrate on a single variable
        top = max(credits[v] for v in avail)
        firsts = [v for v in avail if credits[v] == top]
        v1 = firsts[rng.randrange(len(firsts))]
        others = [v for v in avail if v != v1]
        second = max(credits[v] for v in others)
        seconds = [v for v in others if credits[v] == second]
        v2 = seconds[rng.randrange(len(seconds))]
        credits[v1] -= 1
        credits[v2] -= 1
        if planted:
            true_slot = rng.randrange(2)
            lits = []
            for slot, v in enumerate((v1, v2)):
                if slot == true_slot:
                    lits.append(v if sigma[v] else -v)
                else:
                    lits.append(v if rng.chance(0.5) else -v)
        else:
            lits = [v if rng.chance(0.5) else -v for v in (v1, v2)]
        clauses.append(tuple(lits))
    rng.shuffle(clauses)
    return CnfFormula(n, tuple(clauses))


def _gen_ugraph(spec: GenSpec, rng: SplitMix64) -> UGraph:
    n = rng.randint(1, spec.max_size)
    k = spec.deg_bound
    planted = rng.chance(spec.sat_bias)
    deg = [0] * (n + 1)
    edges: list[tuple[int, int]] = []
    present: set[tuple[int, int]] = set()
    if planted:
        # Plant a 2-checkered cover: pick V'; edges either leave V' or join
        # two V' vertices whose degrees stay <= 2 (so the edge is a grip).
        inside = [v for v in range(1, n + 1) if rng.chance(0.5)]
        inside_set = set(inside)
        attempts = rng.randint(0, 2 * n)
        for _ in range(attempts):
            u = rng.randint(1, n)
            v = rng.randint(1, n)
            if u == v:
                continue
            e = (min(u, v), max(u, v))
            if e in present:
                continue
            if u in inside_set and v in inside_set:
                if deg[u] >= 2 or deg[v] >= 2:
                    continue
            elif u not in inside_set and v not in inside_set:
                continue  # would be uncovered
            if deg[u] >= k or deg[v] >= k:
                continue
            present.add(e)
            edges.append(e)
            deg[u] += 1
            deg[v] += 1
    else:
        attempts = rng.randint(0, 2 * n)
        for _ in range(attempts):
            u = rng.randint(1, n)
            v = rng.randint(1, n)
            if u == v:
                continue
            e = (min(u, v), max(u, v))
            if e in present or deg[u] >= k or deg[v] >= k:
                continue
            present.add(e)
            edges.append(e)
            deg[u] += 1
            deg[v] += 1
    return UGraph(n, tuple(edges))


def _gen_dstcon_raw(spec: GenSpec, rng: SplitMix64) -> Digraph:
    """Small raw reachability instances shaped so that normalize_dstcon
    yields at most max_size vertices: componentwise degree <= 2, indegree of
    s and outdegree of t <= 1, no direct s->t edge at the size limit."""
    n = rng.randint(1, max(1, spec.max_size - 2))
    s, t = 1, n
    planted = rng.chance(spec.sat_bias)
    indeg = [0] * (n + 1)
    outdeg = [0] * (n + 1)
    present: set[tuple[int, int]] = set()
    edges: list[tuple[int, int]] = []

    def room(u, v):
        if u == v or (u, v) in present:
            return False
        if outdeg[u] >= 2 or indeg[v] >= 2:
            return False
        if v == s and indeg[s] >= 1:
            return False
        if u == t and outdeg[t] >= 1:
            return False
        if (u, v) == (s, t) and n + 3 > spec.max_size:
            return False  # subdivision would overflow the target size
        return True

    def add(u, v):
        present.add((u, v))
        edges.append((u, v))
        outdeg[u] += 1
        indeg[v] += 1

    if planted and n >= 2:
        waypoints = [v for v in range(2, n) if rng.chance(0.5)]
        path = [s] + waypoints + [t]
        for u, v in zip(path, path[1:]):
            if room(u, v):
                add(u, v)
    for _ in range(rng.randint(0, 2 * n)):
        u, v = rng.randint(1, n), rng.randint(1, n)
        if room(u, v):
            add(u, v)
    return Digraph(n, tuple(edges), s, t)


def _gen_digraph4(spec: GenSpec, rng: SplitMix64) -> Digraph:
    """Digraphs with total degree <= deg_bound (default 4)."""
    n = rng.randint(1, spec.max_size)
    k = spec.deg_bound
    deg = [0] * (n + 1)
    present: set[tuple[int, int]] = set()
    edges: list[tuple[int, int]] = []
    planted = rng.chance(spec.sat_bias)
    s, t = rng.randint(1, n), rng.randint(1, n)

    def add_ok(u, v):
        return u != v and (u, v) not in present and deg[u] < k and deg[v] < k

    if planted and s != t:
        nodes = [v for v in range(1, n + 1) if v not in (s, t) and rng.chance(0.4)]
        path = [s] + nodes + [t]
        for u, v in zip(path, path[1:]):
            if add_ok(u, v):
                present.add((u, v))
                edges.append((u, v))
                deg[u] += 1
                deg[v] += 1
    for _ in range(rng.randint(0, 2 * n)):
        u, v = rng.randint(1, n), rng.randint(1, n)
        if add_ok(u, v):
            present.add((u, v))
            edges.append((u, v))
            deg[u] += 1
            deg[v] += 1
    return Digraph(n, tuple(edges), s, t)


def _gen_xce(spec: GenSpec, rng: SplitMix64) -> XceInstance:
    nx = rng.randint(1, spec.max_size)
    planted = rng.chance(spec.sat_bias)
    credits = [2] * (nx + 1)  # 2-overlapping budget per element
    sets: list[tuple[int, ...]] = []
    if planted:
        # partition the universe into sets of <= 3: an exact cover exists
        elems = list(range(1, nx + 1))
        rng.shuffle(elems)
        i = 0
        while i < len(elems):
            size = min(rng.randint(1, 3), len(elems) - i)
            sets.append(tuple(sorted(elems[i:i + size])))
            for e in elems[i:i + size]:
                credits[e] -= 1
            i += size
    extra = rng.randint(0, nx)
    for _ in range(extra):
        avail = [e for e in range(1, nx + 1) if credits[e] > 0]
        if not avail:
            break
        size = min(rng.randint(1, 3), len(avail))
        rng.shuffle(avail)
        chosen = avail[:size]
        for e in chosen:
            credits[e] -= 1
        sets.append(tuple(sorted(chosen)))
    exempt = tuple(e for e in range(1, nx + 1) if rng.chance(spec.exemption_density))
    return XceInstance(nx, exempt, tuple(sets))


def _gen_ap2dm(spec: GenSpec, rng: SplitMix64) -> Ap2dmInstance:
    nx = rng.randint(1, spec.max_size)
    k = spec.overlap_bound - 1  # non-trivial budget per side
    out_credit = [k] * (nx + 1)
    in_credit = [k] * (nx + 1)
    present: set[tuple[int, int]] = set()
    pairs: list[tuple[int, int]] = []

    def add(u, v) -> bool:
        if u == v or (u, v) in present or out_credit[u] <= 0 or in_credit[v] <= 0:
            return False
        present.add((u, v))
        pairs.append((u, v))
        out_credit[u] -= 1
        in_credit[v] -= 1
        return True

    for _ in range(rng.randint(0, 2 * nx)):
        add(rng.randint(1, nx), rng.randint(1, nx))
    # exemption set, then fix the connectivity promise; elements that cannot
    # be connected are dropped from R rather than rejected
    exempt = {e for e in range(1, nx + 1) if rng.chance(spec.exemption_density)}
    if exempt == set(range(1, nx + 1)) and nx >= 1:
        exempt.discard(rng.randint(1, nx))
    keep = []
    for v in sorted(exempt):
        non_exempt = [u for u in range(1, nx + 1) if u not in exempt]
        outs = [w for (u, w) in pairs if u == v and w not in exempt]
        ins = [u for (u, w) in pairs if w == v and u not in exempt]
        ok = True
        if not outs:
            cands = [u for u in non_exempt if add(v, u)]
            ok = bool(cands)
        if ok and not ins:
            cands = [u for u in non_exempt if add(u, v)]
            ok = bool(cands)
        if ok:
            keep.append(v)
    return Ap2dmInstance(nx, tuple(keep), tuple(pairs))


def _gen_lin(mode: str):
    def gen(spec: GenSpec, rng: SplitMix64) -> LinSystem:
        n = rng.randint(1, spec.max_size)
        m = rng.randint(0, spec.max_rows)
        k = spec.col_bound
        col_credit = [k] * (n + 1)
        entries: list[tuple[int, int, int]] = []
        rows: list[list[tuple[int, int]]] = [[] for _ in range(m + 1)]
        for r in range(1, m + 1):
            width = rng.choice((0, 1, 1, 2, 2, 2))
            avail = [c for c in range(1, n + 1) if col_credit[c] > 0]
            rng.shuffle(avail)
            for c in avail[:width]:
                v = 0
                while v == 0:
                    v = rng.randint(-3, 3)
                entries.append((r, c, v))
                rows[r].append((c, v))
                col_credit[c] -= 1
        planted = rng.chance(spec.sat_bias)
        x = [rng.randrange(2) for _ in range(n + 1)]
        lower: list[int] = []
        upper: list[int] = []
        for r in range(1, m + 1):
            val = sum(v * x[c] for c, v in rows[r])
            if planted:
                if mode == "geq":
                    lower.append(val - rng.randint(0, 2))
                elif mode == "eq":
                    lower.append(val)
                else:
                    lower.append(val - rng.randint(0, 2))
                    upper.append(val + rng.randint(0, 2))
            else:
                lo = rng.randint(-4, 4)
                if mode == "band":
                    lower.append(lo)
                    upper.append(lo + rng.randint(0, 3))
                else:
                    lower.append(lo)
        return LinSystem(mode, m, n, k, tuple(entries), tuple(lower),
                         tuple(upper) if mode == "band" else None)

    return gen


def _gen_xor(spec: GenSpec, rng: SplitMix64) -> XorSystem:
    n = rng.randint(1, spec.max_size)
    m = rng.randint(0, 2 * n)
    planted = rng.chance(spec.sat_bias)
    sigma = [rng.randrange(2) for _ in range(n + 1)]
    cons = []
    for _ in range(m):
        if n >= 2 and rng.chance(0.7):
            u = rng.randint(1, n)
            v = u
            while v == u:
                v = rng.randint(1, n)
            c = (sigma[u] ^ sigma[v]) if planted else rng.randrange(2)
            cons.append(Parity(u, v, c))
        else:
            u = rng.randint(1, n)
            c = sigma[u] if planted else rng.randrange(2)
            cons.append(Unit(u, c))
    return XorSystem(n, tuple(cons))


GENERATORS = {
    "2sat3": _gen_2sat3,
    "ugraph3": _gen_ugraph,
    "dstcon_raw": _gen_dstcon_raw,
    "digraph4": _gen_digraph4,
    "xce": _gen_xce,
    "ap2dm": _gen_ap2dm,
    "lin_geq": _gen_lin("geq"),
    "lin_band": _gen_lin("band"),
    "lin_eq": _gen_lin("eq"),
    "xor": _gen_xor,
}

# tags each generated class must validate against
GEN_TAGS = {
    "2sat3": lambda spec: {"occ_bound": spec.occ_bound},
    "ugraph3": lambda spec: {"deg_bound": spec.deg_bound},
    "dstcon_raw": lambda spec: {},
    "digraph4": lambda spec: {"deg_bound": spec.deg_bound},
    "xce": lambda spec: {},
    "ap2dm": lambda spec: {"overlap_bound": spec.overlap_bound},
    "lin_geq": lambda spec: {"col_bound": spec.col_bound},
    "lin_band": lambda spec: {"col_bound": spec.col_bound},
    "lin_eq": lambda spec: {"col_bound": spec.col_bound},
    "xor": lambda spec: {},
}


def generate(spec: GenSpec, trial: int = 0):
    """Deterministic instance for (spec, trial): the rng seed is seed+trial."""
    gen = GENERATORS.get(spec.problem)
    if gen is None:
        raise GenerationError(f"unknown problem class {spec.problem!r}")
    return gen(spec, SplitMix64(spec.seed + trial))


# ---------------------------------------------------------------------------
# Verification engine
# ---------------------------------------------------------------------------


@dataclass
class VerifyResult:
    name: str
    trials: int
    equiv_failures: list[tuple[int, str]] = field(default_factory=list)
    shortness_failures: list[tuple[int, str]] = field(default_factory=list)
    structural_failures: list[tuple[int, str]] = field(default_factory=list)
    findings: list[tuple[int, str]] = field(default_factory=list)
    max_ratio: float = 0.0
    wall_time: float = 0.0

    def to_text(self, include_timing: bool = True) -> str:
        lines = [
            f"VERIFY\t{self.name}",
            f"TRIALS\t{self.trials}",
            f"EQUIV_FAILURES\t{len(self.equiv_failures)}",
            f"SHORT_FAILURES\t{len(self.shortness_failures)}",
            f"STRUCT_FAILURES\t{len(self.structural_failures)}",
            f"FINDINGS\t{len(self.findings)}",
            f"MAX_RATIO\t{self.max_ratio:.6f}",
        ]
        for seed, _ in self.equiv_failures:
            lines.append(f"COUNTEREXAMPLE\t{seed}\t{self.name}_seed{seed}.txt")
        if include_timing:
            lines.append(f"WALLTIME\t{self.wall_time:.3f}")
        return "\n".join(lines) + "\n"


def _solve_2sat_yes(f):
    return oracles.solve_2sat(f)[0]


def _solve_2cvc_yes(g):
    return oracles.solve_2cvc(g)[0]


def _solve_xce_yes(x):
    return oracles.solve_xce(x)[0]


def _solve_lin_yes(s):
    return oracles.solve_lin(s)[0]


def _solve_ap2dm_yes(a):
    return oracles.solve_ap2dm(a)[0]


def _solve_dstcon_yes(g):
    return oracles.solve_dstcon(g)[0]


def _post_2cvc3(out: UGraph, src) -> list[str]:
    return [f"{v.rule}:{v.detail}" for v in validate(out, {"deg_bound": 3})]


def _post_3xce2(out: XceInstance, src) -> list[str]:
    bad = [f"{v.rule}:{v.detail}" for v in validate(out)]
    cost = out.overlap_costs()
    for e in range(1, out.universe_size + 1):
        if cost[e] != 2:
            bad.append(f"element {e} covered by {cost[e]} sets, expected exactly 2")
    return bad


def _post_twolp(out: LinSystem, src: LinSystem) -> list[str]:
    return [f"{v.rule}:{v.detail}" for v in validate(out, {"col_bound": src.col_bound + 2})]


def _post_valid(out, src) -> list[str]:
    """Generic postcheck: the output passes its own type invariants."""
    return [f"{v.rule}:{v.detail}" for v in validate(out)]


def _post_ap2dm(out: Ap2dmInstance, src) -> list[str]:
    return [f"{v.rule}:{v.detail}" for v in validate(out, {"overlap_bound": 4})]


@dataclass(frozen=True)
class VerifierPlan:
    """How to verify one named reduction: generator family, optional
    normalization step, the two oracles, and structural postchecks."""

    genspec: GenSpec
    prepare: object | None  # instance -> instance (e.g. normalize)
    reduce: object  # instance -> (instance, report)
    oracle_in: object
    oracle_out: object
    postcheck: object | None = None  # (out, src) -> [messages]


def _prep_sat(f):
    return reductions.normalize_2sat3(f)


def _prep_dstcon(g):
    return reductions.normalize_dstcon(g)[0]


def default_plans(seed: int = 1) -> dict[str, VerifierPlan]:
    """Default verification families, sized to keep every oracle in budget."""
    return {
        "sat2_to_2cvc3": VerifierPlan(
            GenSpec("2sat3", max_size=10, seed=seed, vc_budget=13),
            _prep_sat, reductions.sat2_to_2cvc3,
            _solve_2sat_yes, _solve_2cvc_yes, _post_2cvc3),
        "cvc3_to_sat2": VerifierPlan(
            GenSpec("ugraph3", max_size=14, seed=seed),
            None, reductions.cvc3_to_sat2,
            _solve_2cvc_yes, _solve_2sat_yes),
        "sat2_to_3xce2": VerifierPlan(
            GenSpec("2sat3", max_size=8, seed=seed, max_clauses=6),
            _prep_sat, reductions.sat2_to_3xce2,
            _solve_2sat_yes, _solve_xce_yes, _post_3xce2),
        "xce2_to_2lp": VerifierPlan(
            GenSpec("xce", max_size=9, seed=seed),
            None, reductions.xce2_to_2lp,
            _solve_xce_yes, _solve_lin_yes, _post_valid),
        "lp_to_2lp": VerifierPlan(
            GenSpec("lin_geq", max_size=10, seed=seed, max_rows=8),
            None, reductions.lp_to_2lp,
            _solve_lin_yes, _solve_lin_yes, _post_valid),
        "twolp_to_lp": VerifierPlan(
            GenSpec("lin_band", max_size=6, seed=seed, max_rows=6),
            None, reductions.twolp_to_lp,
            _solve_lin_yes, _solve_lin_yes, _post_twolp),
        "le_to_xor2sat": VerifierPlan(
            GenSpec("lin_eq", max_size=12, seed=seed, max_rows=8),
            None, reductions.le_to_xor2sat,
            _solve_lin_yes, oracles.solve_xor2sat, _post_valid),
        "normalize_2sat3": VerifierPlan(
            GenSpec("2sat3", max_size=12, seed=seed),
            None, reductions._normalize_2sat3_op,
            _solve_2sat_yes, _solve_2sat_yes),
        "normalize_dstcon": VerifierPlan(
            GenSpec("digraph4", max_size=6, seed=seed, deg_bound=3),
            None, reductions.normalize_dstcon,
            _solve_dstcon_yes, _solve_dstcon_yes),
        "dstcon_to_ap2dm": VerifierPlan(
            GenSpec("dstcon_raw", max_size=5, seed=seed),
            _prep_dstcon, reductions.dstcon_to_ap2dm,
            _solve_dstcon_yes, _solve_ap2dm_yes, _post_ap2dm),
        "reduce_degree_dstcon": VerifierPlan(
            GenSpec("digraph4", max_size=10, seed=seed, deg_bound=4),
            None, reductions.reduce_degree_dstcon,
            _solve_dstcon_yes, _solve_dstcon_yes),
    }


# Deliberately corrupted reduction variants for mutation-sensitivity checks.


def _bad_sat2_to_2cvc3(f: CnfFormula):
    """Wires the first clause slot to the vertex of the flipped literal, so
    the graph encodes a different formula than the input."""
    g, rep = reductions.sat2_to_2cvc3(f)
    if not f.clauses:
        return g, rep
    lit = f.clauses[0][0]
    n = f.num_vars
    good_vertex = 2 * abs(lit) - (1 if lit > 0 else 0)
    bad_vertex = 2 * abs(lit) - (0 if lit > 0 else 1)
    slot_vertex = 2 * n + 1  # c1[1]
    rewired = tuple(
        (min(bad_vertex, slot_vertex), max(bad_vertex, slot_vertex))
        if e == (min(good_vertex, slot_vertex), max(good_vertex, slot_vertex))
        else e
        for e in g.edges)
    return UGraph(g.num_vertices, rewired), rep


def _bad_cvc3_to_sat2(g: UGraph):
    """Drops the exclusivity clause on non-grip edges."""
    deg = g.degrees()
    for v in range(1, g.num_vertices + 1):
        if deg[v] > 3:
            raise reductions.PreconditionError("degree over 3")
    clauses = tuple((u, v) for u, v in g.edges)
    f = CnfFormula(g.num_vertices, clauses)
    rep = reductions._report("bad_cvc3_to_sat2", g, "m_ver", f, "m_vbl", 1, 0)
    return f, rep


def _bad_xce2_to_2lp(x: XceInstance):
    """Ignores the exemption set: every row is pinned to [1,1], so exact
    covers that leave an exempt element uncovered are lost."""
    out, rep = reductions.xce2_to_2lp(x)
    bad = LinSystem("band", out.num_rows, out.num_cols, out.col_bound,
                    out.entries, tuple(1 for _ in out.lower), out.upper)
    return bad, rep


def _bad_dstcon_to_ap2dm(g: Digraph):
    """Omits the per-vertex layer couplings, severing the exemption promise
    routes between the layers."""
    out, rep = reductions.dstcon_to_ap2dm(g)
    inner = [v for v in range(1, g.num_vertices + 1) if v not in (g.s, g.t)]
    n = len(inner)
    coupling_ids = set()
    for idx, v in enumerate(inner):
        lay0 = 3 + idx
        lay1 = 3 + n + idx
        lay2 = 3 + 2 * n + idx
        coupling_ids.add((lay2, lay0))
        coupling_ids.add((lay0, lay1))
    pruned = tuple(p for p in out.pairs if p not in coupling_ids)
    return Ap2dmInstance(out.universe_size, out.exempt, pruned), rep


CORRUPTED = {
    "bad_sat2_to_2cvc3": ("sat2_to_2cvc3", _bad_sat2_to_2cvc3),
    "bad_cvc3_to_sat2": ("cvc3_to_sat2", _bad_cvc3_to_sat2),
    "bad_xce2_to_2lp": ("xce2_to_2lp", _bad_xce2_to_2lp),
    "bad_dstcon_to_ap2dm": ("dstcon_to_ap2dm", _bad_dstcon_to_ap2dm),
}


def _run_trial(name: str, plan: VerifierPlan, trial: int):
    """One verification trial; returns a small result record."""
    raw = generate(plan.genspec, trial)
    src = plan.prepare(raw) if plan.prepare else raw
    out, report = plan.reduce(src)
    rec = {
        "trial": trial,
        "seed": plan.genspec.seed + trial,
        "equiv": None,
        "short_ok": True,
        "ratio": 0.0,
        "struct": [],
        "raw": raw,
        "src": src,
    }
    if report is not None:
        rec["short_ok"] = report.shortness_ok
        denom = report.k1 * report.input_param.value
        if denom > 0:
            rec["ratio"] = (report.output_param.value - report.k2) / denom
    a = plan.oracle_in(src)
    b = plan.oracle_out(out)
    rec["equiv"] = (a == b, a, b)
    if plan.postcheck:
        rec["struct"] = plan.postcheck(out, src)
    return rec


def _worker_chunk(args):
    name, plan, trials = args
    return [_run_trial(name, plan, t) for t in trials]


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("REDLAB_WORKERS", "1")))
    except ValueError:
        return 1


def verify_m_reduction(name: str, trials: int, plan: VerifierPlan | None = None,
                       seed: int | None = None) -> VerifyResult:
    """Generate / normalize / reduce / compare both oracles, `trials` times.

    Failures never abort the run; each kind is collected with a reproducing
    seed and the serialized instance. A corrupted fixture name from the
    mutation registry is accepted too.
    """
    if plan is None:
        if name in CORRUPTED:
            base, fn = CORRUPTED[name]
            plan = default_plans(seed if seed is not None else 1)[base]
            plan = replace_reduce(plan, fn)
        else:
            plans = default_plans(seed if seed is not None else 1)
            if name not in plans:
                raise GenerationError(f"unknown reduction {name!r}")
            plan = plans[name]
    elif seed is not None:
        plan = VerifierPlan(replace(plan.genspec, seed=seed), plan.prepare,
                            plan.reduce, plan.oracle_in, plan.oracle_out, plan.postcheck)
    started = time.perf_counter()
    result = VerifyResult(name=name, trials=trials)
    workers = _workers()
    if workers > 1 and trials >= 4 * workers:
        chunks = [(name, plan, list(range(i, trials, workers))) for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            recs = [r for chunk in pool.map(_worker_chunk, chunks) for r in chunk]
        recs.sort(key=lambda r: r["trial"])
    else:
        recs = [_run_trial(name, plan, t) for t in range(trials)]
    for rec in recs:
        ok, a, b = rec["equiv"]
        if not ok:
            result.equiv_failures.append((rec["seed"], serialize(rec["raw"])))
        if not rec["short_ok"]:
            result.shortness_failures.append((rec["seed"], serialize(rec["raw"])))
        for msg in rec["struct"]:
            result.structural_failures.append((rec["seed"], msg))
        result.max_ratio = max(result.max_ratio, rec["ratio"])
    result.wall_time = time.perf_counter() - started
    return result


def replace_reduce(plan: VerifierPlan, fn) -> VerifierPlan:
    return VerifierPlan(plan.genspec, plan.prepare, fn, plan.oracle_in,
                        plan.oracle_out, plan.postcheck)


def verify_T_reduction(trials: int, seed: int = 1, exploratory: bool = False,
                       max_size: int = 5) -> VerifyResult:
    """Check the oracle reduction against the matching oracle.

    Strict mode runs over gadget instances built from small normalized
    reachability graphs and counts disagreements as equivalence failures;
    exploratory mode runs over arbitrary random 4-overlapping instances and
    records disagreements as findings only. Per-query sizes are enforced
    against the |X| bound in both modes, and linkage symmetry statistics are
    recorded as findings.
    """
    started = time.perf_counter()
    name = "ap2dm_to_dstcon_queries" + ("_exploratory" if exploratory else "")
    result = VerifyResult(name=name, trials=trials)
    for t in range(trials):
        if exploratory:
            a = generate(GenSpec("ap2dm", max_size=max_size, seed=seed), t)
            raw = a
        else:
            raw = generate(GenSpec("dstcon_raw", max_size=max_size, seed=seed), t)
            g = reductions.normalize_dstcon(raw)[0]
            a, _ = reductions.dstcon_to_ap2dm(g)
        turing, report = reductions.ap2dm_to_dstcon_queries(a, _solve_dstcon_yes)
        direct = oracles.solve_ap2dm(a)[0]
        if turing != direct:
            entry = (seed + t, serialize(raw))
            if exploratory:
                result.findings.append(entry)
            else:
                result.equiv_failures.append(entry)
        if not report.shortness_ok:
            result.shortness_failures.append((seed + t, serialize(raw)))
        if report.queries:
            result.max_ratio = max(
                result.max_ratio,
                max(q.size for q in report.queries) / size_param(a, "m_set"))
        asym = _symmetry_violations(a)
        if asym:
            result.findings.append((seed + t, f"linkage symmetry violations: {asym}"))
    result.wall_time = time.perf_counter() - started
    return result


def _symmetry_violations(a: Ap2dmInstance) -> int:
    """Count ordered pairs where v links to w but w does not link to v
    within the same perfect matching (recorded, never asserted)."""
    count = 0
    for pi in oracles.perfect_matchings(a):
        for v in range(1, a.universe_size + 1):
            for w in range(1, a.universe_size + 1):
                if v != w and oracles.linked_by_chain(a, pi, v, w) != \
                        oracles.linked_by_chain(a, pi, w, v):
                    count += 1
    return count


def fit_shortness(name: str, trials: int, seed: int = 1) -> dict:
    """Observed input/output size pairs, the tightest fitting constants, and
    a ratio histogram, alongside the declared constants."""
    plans = default_plans(seed)
    if name not in plans:
        raise GenerationError(f"unknown reduction {name!r}")
    plan = plans[name]
    pairs: list[tuple[int, int]] = []
    declared = None
    for t in range(trials):
        raw = generate(plan.genspec, t)
        src = plan.prepare(raw) if plan.prepare else raw
        _, report = plan.reduce(src)
        if report is None:
            continue
        declared = (report.k1, report.k2)
        pairs.append((report.input_param.value, report.output_param.value))
    k1, k2 = declared if declared else (1, 0)
    fit_k1 = max((o / i) for i, o in pairs) if pairs else 0.0  # with k2 = 0
    fit_k2 = max((o - k1 * i) for i, o in pairs) if pairs else 0  # with declared k1
    max_ratio = max(((o - k2) / (k1 * i)) for i, o in pairs) if pairs else 0.0
    hist: dict[str, int] = {}
    for i, o in pairs:
        bucket = f"{(o - k2) / (k1 * i):.2f}"
        hist[bucket] = hist.get(bucket, 0) + 1
    return {
        "name": name,
        "declared": (k1, k2),
        "observed_pairs": len(pairs),
        "max_ratio": max_ratio,
        "fit_k1_with_k2_0": fit_k1,
        "fit_k2_with_declared_k1": fit_k2,
        "histogram": dict(sorted(hist.items())),
    }
