"""Problem instance types, size parameters, validation, and text formats.

Literals are signed 1-based integers (+i / -i), matching the text format.
All instance types are immutable after construction and safe to share
between workers; parsing, serialization, and validation are pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

SIZE_PARAM_NAMES = ("m_vbl", "m_cls", "m_ver", "m_edg", "m_set", "m_row", "m_col")

# LinSystem coefficients must fit a 63-bit signed budget so that a row sum of
# two entries stays inside int64.
MAX_LIN_ENTRY = 2 ** 62 - 1


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class SizeParamError(ValueError):
    """Invalid size-parameter name for the given instance type."""


class SizeParam(NamedTuple):
    name: str
    value: int


class Violation(NamedTuple):
    """One violated invariant with a locating witness."""

    rule: str
    witness: tuple
    detail: str


# ---------------------------------------------------------------------------
# Instance types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CnfFormula:
    """2CNF formula: clauses are tuples of 1-2 signed literals."""

    num_vars: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))


@dataclass(frozen=True)
class Digraph:
    """Directed graph with designated source s and target t."""

    num_vertices: int
    edges: tuple[tuple[int, int], ...]
    s: int
    t: int

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))


@dataclass(frozen=True)
class UGraph:
    """Undirected graph; each edge is stored as (u, v) with u < v."""

    num_vertices: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))

    def degrees(self) -> list[int]:
        deg = [0] * (self.num_vertices + 1)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def is_grip(self, edge: tuple[int, int], deg: list[int] | None = None) -> bool:
        """An edge both of whose endpoints have degree at most 2."""
        d = deg if deg is not None else self.degrees()
        u, v = edge
        return d[u] <= 2 and d[v] <= 2


@dataclass(frozen=True)
class XceInstance:
    """Exact-cover-with-exemption instance: universe 1..universe_size."""

    universe_size: int
    exempt: tuple[int, ...]
    sets: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "exempt", tuple(sorted(set(self.exempt))))
        object.__setattr__(self, "sets", tuple(tuple(sorted(s)) for s in self.sets))

    def overlap_costs(self) -> list[int]:
        cost = [0] * (self.universe_size + 1)
        for s in self.sets:
            for e in s:
                cost[e] += 1
        return cost


@dataclass(frozen=True)
class Ap2dmInstance:
    """Matching universe 1..universe_size; only non-trivial pairs are stored.

    Trivial pairs (v, v) are definitionally present for every element and are
    never materialized.
    """

    universe_size: int
    exempt: tuple[int, ...]
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "exempt", tuple(sorted(set(self.exempt))))
        object.__setattr__(self, "pairs", tuple(tuple(p) for p in self.pairs))

    def partners_out(self, v: int) -> list[int]:
        """Allowed right partners of v, trivial pair included."""
        out = [w for (u, w) in self.pairs if u == v]
        out.append(v)
        return out


@dataclass(frozen=True)
class LinSystem:
    """Sparse integer {0,1}-feasibility system.

    mode "geq":  Ax >= lower        mode "band":  upper >= Ax >= lower
    mode "eq":   Ax == lower
    Entries are (row, col, value) triplets with value != 0; each row holds at
    most 2 of them. col_bound is the declared per-column nonzero bound carried
    by the wire format.
    """

    mode: str
    num_rows: int
    num_cols: int
    col_bound: int
    entries: tuple[tuple[int, int, int], ...]
    lower: tuple[int, ...]
    upper: tuple[int, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(tuple(e) for e in self.entries))
        object.__setattr__(self, "lower", tuple(self.lower))
        if self.upper is not None:
            object.__setattr__(self, "upper", tuple(self.upper))

    def rows(self) -> list[list[tuple[int, int]]]:
        """Per-row list of (col, value) pairs."""
        out: list[list[tuple[int, int]]] = [[] for _ in range(self.num_rows + 1)]
        for r, c, v in self.entries:
            out[r].append((c, v))
        return out


class Parity(NamedTuple):
    """x_u xor x_v = c"""

    u: int
    v: int
    c: int


class Unit(NamedTuple):
    """x_u = c"""

    u: int
    c: int


@dataclass(frozen=True)
class XorSystem:
    num_vars: int
    constraints: tuple

    def __post_init__(self):
        object.__setattr__(self, "constraints", tuple(self.constraints))



# ---------------------------------------------------------------------------
# Size parameters
# ---------------------------------------------------------------------------

_SIZE_PARAMS = {
    CnfFormula: {
        "m_vbl": lambda f: f.num_vars,
        "m_cls": lambda f: len(f.clauses),
    },
    Digraph: {
        "m_ver": lambda g: g.num_vertices,
        "m_edg": lambda g: len(g.edges),
    },
    UGraph: {
        "m_ver": lambda g: g.num_vertices,
        "m_edg": lambda g: len(g.edges),
    },
    XceInstance: {
        "m_set": lambda x: len(x.sets),
    },
    Ap2dmInstance: {
        "m_set": lambda a: a.universe_size,
    },
    # Deliberately swapped-looking: m_row counts the columns (variables) of A
    # and m_col the rows. These are the established names for these problems.
    LinSystem: {
        "m_row": lambda s: s.num_cols,
        "m_col": lambda s: s.num_rows,
    },
    XorSystem: {
        "m_vbl": lambda x: x.num_vars,
        "m_cls": lambda x: len(x.constraints),
    },
}


def size_param(instance, name: str) -> int:
    """Return the named size parameter, clamped into N+ (empty instances map to 1)."""
    table = _SIZE_PARAMS.get(type(instance))
    if table is None or name not in table:
        raise SizeParamError(f"size parameter {name!r} is not defined for {type(instance).__name__}")
    return max(1, table[name](instance))


def size_param_names(instance) -> tuple[str, ...]:
    table = _SIZE_PARAMS.get(type(instance))
    if table is None:
        raise SizeParamError(f"no size parameters for {type(instance).__name__}")
    return tuple(table)


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


def _connected(num_vertices: int, und_edges: Iterable[tuple[int, int]]) -> bool:
    if num_vertices <= 1:
        return True
    parent = list(range(num_vertices + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    comps = num_vertices
    for u, v in und_edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            comps -= 1
    return comps == 1


def _check_lemma1(out: list[Violation], num_vertices: int, edges, k: int):
    """For connected graphs with >=1 edge: m_ver <= 2*m_edg and m_edg <= k*m_ver/2."""
    if not edges or not _connected(num_vertices, edges):
        return
    n, m = num_vertices, len(edges)
    if n > 2 * m:
        out.append(Violation("lemma1_vertices", (n, m), f"m_ver={n} > 2*m_edg={2 * m}"))
    if 2 * m > k * n:
        out.append(Violation("lemma1_edges", (n, m), f"m_edg={m} > {k}*m_ver/2={k * n / 2}"))


def _validate_cnf(f: CnfFormula, tags: dict, out: list[Violation]):
    counts: dict[int, int] = {}
    for j, clause in enumerate(f.clauses, 1):
        if not 1 <= len(clause) <= 2:
            out.append(Violation("clause_width", (j,), f"clause {j} has {len(clause)} literals"))
        for lit in clause:
            var = abs(lit)
            if lit == 0 or var > f.num_vars:
                out.append(Violation("literal_range", (j, lit), f"literal {lit} out of range in clause {j}"))
            else:
                counts[var] = counts.get(var, 0) + 1
        if tags.get("exact") and len(clause) != 2:
            out.append(Violation("exact", (j,), f"clause {j} has {len(clause)} literals, expected 2"))
        if tags.get("clean") and len({abs(l) for l in clause}) != len(clause):
            out.append(Violation("clean", (j,), f"clause {j} repeats a variable"))
    bound = tags.get("occ_bound")
    if bound is not None:
        for var in sorted(counts):
            if counts[var] > bound:
                out.append(Violation("occ_bound", (var, counts[var]),
                                     f"variable {var} occurs {counts[var]} times, bound {bound}"))


def _validate_digraph(g: Digraph, tags: dict, out: list[Violation]):
    seen = set()
    indeg = [0] * (g.num_vertices + 1)
    outdeg = [0] * (g.num_vertices + 1)
    for u, v in g.edges:
        if not (1 <= u <= g.num_vertices and 1 <= v <= g.num_vertices):
            out.append(Violation("vertex_range", (u, v), f"edge ({u},{v}) out of range"))
            continue
        if u == v and not tags.get("loops"):
            out.append(Violation("self_loop", (u,), f"self-loop at {u}"))
        if (u, v) in seen:
            out.append(Violation("duplicate_edge", (u, v), f"duplicate edge ({u},{v})"))
        seen.add((u, v))
        outdeg[u] += 1
        indeg[v] += 1
    for name, w in (("s", g.s), ("t", g.t)):
        if not 1 <= w <= g.num_vertices:
            out.append(Violation("endpoint_range", (name, w), f"{name}={w} out of range"))
    k = tags.get("deg_bound")
    if k is not None:
        for v in range(1, g.num_vertices + 1):
            if indeg[v] + outdeg[v] > k:
                out.append(Violation("deg_bound", (v, indeg[v] + outdeg[v]),
                                     f"vertex {v} has degree {indeg[v] + outdeg[v]}, bound {k}"))
        _check_lemma1(out, g.num_vertices, g.edges, k)


def _validate_ugraph(g: UGraph, tags: dict, out: list[Violation]):
    seen = set()
    deg = [0] * (g.num_vertices + 1)
    for u, v in g.edges:
        if not (1 <= u <= g.num_vertices and 1 <= v <= g.num_vertices):
            out.append(Violation("vertex_range", (u, v), f"edge {{{u},{v}}} out of range"))
            continue
        if u == v:
            out.append(Violation("self_loop", (u,), f"self-loop at {u}"))
            continue
        key = (min(u, v), max(u, v))
        if key in seen:
            out.append(Violation("duplicate_edge", key, f"duplicate edge {{{u},{v}}}"))
        seen.add(key)
        deg[u] += 1
        deg[v] += 1
    k = tags.get("deg_bound")
    if k is not None:
        for v in range(1, g.num_vertices + 1):
            if deg[v] > k:
                out.append(Violation("deg_bound", (v, deg[v]), f"vertex {v} has degree {deg[v]}, bound {k}"))
        _check_lemma1(out, g.num_vertices, g.edges, k)


def _validate_xce(x: XceInstance, tags: dict, out: list[Violation]):
    for e in x.exempt:
        if not 1 <= e <= x.universe_size:
            out.append(Violation("exempt_range", (e,), f"exempt element {e} out of range"))
    cost = [0] * (x.universe_size + 1)
    for i, s in enumerate(x.sets, 1):
        if len(s) > 3:
            out.append(Violation("set_size", (i, len(s)), f"set {i} has {len(s)} elements, bound 3"))
        if len(set(s)) != len(s):
            out.append(Violation("set_repeat", (i,), f"set {i} repeats an element"))
        for e in s:
            if not 1 <= e <= x.universe_size:
                out.append(Violation("element_range", (i, e), f"element {e} out of range in set {i}"))
            else:
                cost[e] += 1
    for e in range(1, x.universe_size + 1):
        if cost[e] > 2:
            out.append(Violation("overlap", (e, cost[e]), f"element {e} has overlapping cost {cost[e]}, bound 2"))


def _validate_ap2dm(a: Ap2dmInstance, tags: dict, out: list[Violation]):
    exempt = set(a.exempt)
    for e in a.exempt:
        if not 1 <= e <= a.universe_size:
            out.append(Violation("exempt_range", (e,), f"exempt element {e} out of range"))
    n_out = [0] * (a.universe_size + 1)
    n_in = [0] * (a.universe_size + 1)
    seen = set()
    for u, v in a.pairs:
        if not (1 <= u <= a.universe_size and 1 <= v <= a.universe_size):
            out.append(Violation("pair_range", (u, v), f"pair ({u},{v}) out of range"))
            continue
        if u == v:
            out.append(Violation("trivial_pair_stored", (u,), f"trivial pair ({u},{u}) must stay implicit"))
            continue
        if (u, v) in seen:
            out.append(Violation("duplicate_pair", (u, v), f"duplicate pair ({u},{v})"))
        seen.add((u, v))
        n_out[u] += 1
        n_in[v] += 1
    k = tags.get("overlap_bound")
    if k is not None:
        for v in range(1, a.universe_size + 1):
            # +1 for the implicit trivial pair on each side
            if n_out[v] + 1 > k:
                out.append(Violation("overlap_out", (v, n_out[v] + 1),
                                     f"element {v} has {n_out[v] + 1} right partners, bound {k}"))
            if n_in[v] + 1 > k:
                out.append(Violation("overlap_in", (v, n_in[v] + 1),
                                     f"element {v} has {n_in[v] + 1} left partners, bound {k}"))
    # Connectivity promise for exempt elements. Default mode requires at least
    # one partner on each side outside the exemption set; "exactly_one" is the
    # strict reading.
    strict = tags.get("uniquely_connected") == "exactly_one"
    for v in sorted(exempt):
        outs = sum(1 for (u, w) in a.pairs if u == v and w not in exempt)
        ins = sum(1 for (u, w) in a.pairs if w == v and u not in exempt)
        if outs == 0 or ins == 0:
            out.append(Violation("uniquely_connected", (v, outs, ins),
                                 f"exempt element {v} lacks a non-exempt partner (out={outs}, in={ins})"))
        elif strict and (outs != 1 or ins != 1):
            out.append(Violation("uniquely_connected_strict", (v, outs, ins),
                                 f"exempt element {v} has out={outs}, in={ins}, expected exactly one each"))


def _validate_lin(s: LinSystem, tags: dict, out: list[Violation]):
    if s.mode not in ("geq", "band", "eq"):
        out.append(Violation("mode", (s.mode,), f"unknown mode {s.mode!r}"))
    row_nnz = [0] * (s.num_rows + 1)
    col_nnz = [0] * (s.num_cols + 1)
    seen = set()
    for r, c, v in s.entries:
        if not (1 <= r <= s.num_rows and 1 <= c <= s.num_cols):
            out.append(Violation("entry_range", (r, c), f"entry ({r},{c}) out of range"))
            continue
        if v == 0:
            out.append(Violation("zero_entry", (r, c), f"explicit zero entry at ({r},{c})"))
        if abs(v) > MAX_LIN_ENTRY:
            out.append(Violation("entry_width", (r, c, v), f"entry at ({r},{c}) exceeds 63-bit budget"))
        if (r, c) in seen:
            out.append(Violation("duplicate_entry", (r, c), f"duplicate entry at ({r},{c})"))
        seen.add((r, c))
        row_nnz[r] += 1
        col_nnz[c] += 1
    for r in range(1, s.num_rows + 1):
        if row_nnz[r] > 2:
            out.append(Violation("row_nonzeros", (r, row_nnz[r]), f"row {r} has {row_nnz[r]} nonzeros, bound 2"))
    bound = tags.get("col_bound", s.col_bound)
    for c in range(1, s.num_cols + 1):
        if col_nnz[c] > bound:
            out.append(Violation("col_bound", (c, col_nnz[c]), f"column {c} has {col_nnz[c]} nonzeros, bound {bound}"))
    if len(s.lower) != s.num_rows:
        out.append(Violation("bounds_shape", (len(s.lower),), f"{len(s.lower)} lower bounds for {s.num_rows} rows"))
    if s.mode == "band":
        if s.upper is None or len(s.upper) != s.num_rows:
            out.append(Violation("bounds_shape", ("upper",), "band mode requires one upper bound per row"))
    elif s.upper is not None:
        out.append(Violation("bounds_shape", ("upper",), f"mode {s.mode!r} must not carry upper bounds"))


def _validate_xor(x: XorSystem, tags: dict, out: list[Violation]):
    for i, con in enumerate(x.constraints, 1):
        if isinstance(con, Parity):
            ok = 1 <= con.u <= x.num_vars and 1 <= con.v <= x.num_vars and con.u != con.v
        elif isinstance(con, Unit):
            ok = 1 <= con.u <= x.num_vars
        else:
            out.append(Violation("constraint_type", (i,), f"constraint {i} is not Parity or Unit"))
            continue
        if not ok:
            out.append(Violation("variable_range", (i,), f"constraint {i} references an out-of-range variable"))
        if con.c not in (0, 1):
            out.append(Violation("constant_range", (i, con.c), f"constraint {i} constant must be 0 or 1"))


_VALIDATORS = {
    CnfFormula: _validate_cnf,
    Digraph: _validate_digraph,
    UGraph: _validate_ugraph,
    XceInstance: _validate_xce,
    Ap2dmInstance: _validate_ap2dm,
    LinSystem: _validate_lin,
    XorSystem: _validate_xor,
}


def validate(instance, tags: dict | None = None) -> list[Violation]:
    """Check all type invariants plus the requested tags.

    Returns every violated invariant with a locating witness; an empty list
    means the instance is valid. Violations are data, never exceptions.
    """
    out: list[Violation] = []
    _VALIDATORS[type(instance)](instance, tags or {}, out)
    return out


# ---------------------------------------------------------------------------
# Text formats
# ---------------------------------------------------------------------------


def serialize(instance) -> str:
    lines: list[str] = []
    if isinstance(instance, CnfFormula):
        lines.append(f"p cnf2 {instance.num_vars} {len(instance.clauses)}")
        for clause in instance.clauses:
            lines.append(" ".join(str(l) for l in clause) + " 0")
    elif isinstance(instance, Digraph):
        lines.append(f"p digraph {instance.num_vertices} {len(instance.edges)}")
        for u, v in instance.edges:
            lines.append(f"e {u} {v}")
        lines.append(f"s {instance.s}")
        lines.append(f"t {instance.t}")
    elif isinstance(instance, UGraph):
        lines.append(f"p graph {instance.num_vertices} {len(instance.edges)}")
        for u, v in instance.edges:
            lines.append(f"e {u} {v}")
    elif isinstance(instance, XceInstance):
        lines.append(f"p xce {instance.universe_size} {len(instance.sets)}")
        lines.append(("r " + " ".join(str(e) for e in instance.exempt)).rstrip())
        for s in instance.sets:
            lines.append("c " + " ".join(str(e) for e in s))
    elif isinstance(instance, Ap2dmInstance):
        lines.append(f"p ap2dm {instance.universe_size}")
        lines.append(("r " + " ".join(str(e) for e in instance.exempt)).rstrip())
        for u, v in instance.pairs:
            lines.append(f"m {u} {v}")
    elif isinstance(instance, LinSystem):
        lines.append(f"p lin {instance.mode} {instance.num_rows} {instance.num_cols} {instance.col_bound}")
        for r, c, v in instance.entries:
            lines.append(f"a {r} {c} {v}")
        for r, v in enumerate(instance.lower, 1):
            lines.append(f"b {r} {v}")
        if instance.mode == "band":
            for r, v in enumerate(instance.upper, 1):
                lines.append(f"B {r} {v}")
    elif isinstance(instance, XorSystem):
        lines.append(f"p xor {instance.num_vars} {len(instance.constraints)}")
        for con in instance.constraints:
            if isinstance(con, Parity):
                lines.append(f"x {con.u} {con.v} {con.c}")
            else:
                lines.append(f"u {con.u} {con.c}")
    else:
        raise TypeError(f"cannot serialize {type(instance).__name__}")
    return "\n".join(lines) + "\n"


def _content_lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield no, line.split()


def _int(tok: str, no: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"expected integer {what}, got {tok!r}", no) from None


_HEADER_CLASSES = {
    "cnf2": CnfFormula,
    "digraph": Digraph,
    "graph": UGraph,
    "xce": XceInstance,
    "ap2dm": Ap2dmInstance,
    "lin": LinSystem,
    "xor": XorSystem,
}


def parse(text: str, expected: type | None = None):
    """Parse one instance from text; the header selects the class.

    Raises ParseError (with line number) on malformed input; if `expected`
    is given, a header of any other class is an error.
    """
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty input")
    no, toks = lines[0]
    if toks[0] != "p" or len(toks) < 2:
        raise ParseError("missing problem header", no)
    cls = _HEADER_CLASSES.get(toks[1])
    if cls is None:
        raise ParseError(f"unknown problem kind {toks[1]!r}", no)
    if expected is not None and cls is not expected:
        raise ParseError(f"expected {expected.__name__} but header says {toks[1]!r}", no)
    body = lines[1:]

    if cls is CnfFormula:
        if len(toks) != 4:
            raise ParseError("header must be 'p cnf2 <n> <m>'", no)
        n, m = _int(toks[2], no, "n"), _int(toks[3], no, "m")
        clauses = []
        for lno, t in body:
            lits = [_int(x, lno, "literal") for x in t]
            if not lits or lits[-1] != 0:
                raise ParseError("clause line must end with 0", lno)
            lits = lits[:-1]
            if not 1 <= len(lits) <= 2:
                raise ParseError(f"clause must have 1 or 2 literals, got {len(lits)}", lno)
            for l in lits:
                if l == 0 or abs(l) > n:
                    raise ParseError(f"literal {l} out of range", lno)
            clauses.append(tuple(lits))
        if len(clauses) != m:
            raise ParseError(f"header declares {m} clauses, found {len(clauses)}")
        return CnfFormula(n, tuple(clauses))

    if cls is Digraph:
        if len(toks) != 4:
            raise ParseError("header must be 'p digraph <n> <m>'", no)
        n, m = _int(toks[2], no, "n"), _int(toks[3], no, "m")
        edges, s, t = [], None, None
        seen = set()
        for lno, tks in body:
            if tks[0] == "e" and len(tks) == 3:
                u, v = _int(tks[1], lno, "u"), _int(tks[2], lno, "v")
                _check_vertex_pair(u, v, n, lno, allow_equal=False)
                if (u, v) in seen:
                    raise ParseError(f"duplicate edge ({u},{v})", lno)
                seen.add((u, v))
                edges.append((u, v))
            elif tks[0] == "s" and len(tks) == 2:
                s = _int(tks[1], lno, "s")
            elif tks[0] == "t" and len(tks) == 2:
                t = _int(tks[1], lno, "t")
            else:
                raise ParseError(f"unexpected line {' '.join(tks)!r}", lno)
        if len(edges) != m:
            raise ParseError(f"header declares {m} edges, found {len(edges)}")
        if s is None or t is None:
            raise ParseError("missing s or t line")
        if not (1 <= s <= n and 1 <= t <= n):
            raise ParseError(f"s={s} or t={t} out of range")
        return Digraph(n, tuple(edges), s, t)

    if cls is UGraph:
        if len(toks) != 4:
            raise ParseError("header must be 'p graph <n> <m>'", no)
        n, m = _int(toks[2], no, "n"), _int(toks[3], no, "m")
        edges = []
        seen = set()
        for lno, tks in body:
            if tks[0] != "e" or len(tks) != 3:
                raise ParseError(f"unexpected line {' '.join(tks)!r}", lno)
            u, v = _int(tks[1], lno, "u"), _int(tks[2], lno, "v")
            _check_vertex_pair(u, v, n, lno, allow_equal=False)
            if u >= v:
                raise ParseError(f"edge must satisfy u < v, got ({u},{v})", lno)
            if (u, v) in seen:
                raise ParseError(f"duplicate edge ({u},{v})", lno)
            seen.add((u, v))
            edges.append((u, v))
        if len(edges) != m:
            raise ParseError(f"header declares {m} edges, found {len(edges)}")
        return UGraph(n, tuple(edges))

    if cls is XceInstance:
        if len(toks) != 4:
            raise ParseError("header must be 'p xce <nx> <nc>'", no)
        nx, nc = _int(toks[2], no, "nx"), _int(toks[3], no, "nc")
        if not body or body[0][1][0] != "r":
            raise ParseError("first body line must be the exemption line 'r ...'")
        rno, rtoks = body[0]
        exempt = [_int(x, rno, "exempt id") for x in rtoks[1:]]
        for e in exempt:
            if not 1 <= e <= nx:
                raise ParseError(f"exempt element {e} out of range", rno)
        sets = []
        for lno, tks in body[1:]:
            if tks[0] != "c" or not 2 <= len(tks) <= 4:
                raise ParseError(f"set line must be 'c <id> [<id> [<id>]]', got {' '.join(tks)!r}", lno)
            elems = [_int(x, lno, "element") for x in tks[1:]]
            if len(set(elems)) != len(elems):
                raise ParseError("set repeats an element", lno)
            for e in elems:
                if not 1 <= e <= nx:
                    raise ParseError(f"element {e} out of range", lno)
            sets.append(tuple(sorted(elems)))
        if len(sets) != nc:
            raise ParseError(f"header declares {nc} sets, found {len(sets)}")
        return XceInstance(nx, tuple(exempt), tuple(sets))

    if cls is Ap2dmInstance:
        if len(toks) != 3:
            raise ParseError("header must be 'p ap2dm <nx>'", no)
        nx = _int(toks[2], no, "nx")
        if not body or body[0][1][0] != "r":
            raise ParseError("first body line must be the exemption line 'r ...'")
        rno, rtoks = body[0]
        exempt = [_int(x, rno, "exempt id") for x in rtoks[1:]]
        for e in exempt:
            if not 1 <= e <= nx:
                raise ParseError(f"exempt element {e} out of range", rno)
        pairs = []
        seen = set()
        for lno, tks in body[1:]:
            if tks[0] != "m" or len(tks) != 3:
                raise ParseError(f"pair line must be 'm <u> <v>', got {' '.join(tks)!r}", lno)
            u, v = _int(tks[1], lno, "u"), _int(tks[2], lno, "v")
            if u == v:
                raise ParseError(f"trivial pair ({u},{u}) must stay implicit", lno)
            if not (1 <= u <= nx and 1 <= v <= nx):
                raise ParseError(f"pair ({u},{v}) out of range", lno)
            if (u, v) in seen:
                raise ParseError(f"duplicate pair ({u},{v})", lno)
            seen.add((u, v))
            pairs.append((u, v))
        return Ap2dmInstance(nx, tuple(exempt), tuple(pairs))

    if cls is LinSystem:
        if len(toks) != 6 or toks[2] not in ("geq", "band", "eq"):
            raise ParseError("header must be 'p lin <geq|band|eq> <m> <n> <k>'", no)
        mode = toks[2]
        m, n, k = (_int(toks[i], no, "header field") for i in (3, 4, 5))
        entries = []
        seen = set()
        lower: dict[int, int] = {}
        upper: dict[int, int] = {}
        row_nnz = [0] * (m + 1)
        for lno, tks in body:
            if tks[0] == "a" and len(tks) == 4:
                r, c, v = (_int(x, lno, "entry") for x in tks[1:])
                if not (1 <= r <= m and 1 <= c <= n):
                    raise ParseError(f"entry ({r},{c}) out of range", lno)
                if v == 0:
                    raise ParseError("explicit zero entry", lno)
                if abs(v) > MAX_LIN_ENTRY:
                    raise ParseError("entry exceeds the 63-bit width budget", lno)
                if (r, c) in seen:
                    raise ParseError(f"duplicate entry at ({r},{c})", lno)
                seen.add((r, c))
                row_nnz[r] += 1
                if row_nnz[r] > 2:
                    raise ParseError(f"row {r} has more than 2 nonzero entries", lno)
                entries.append((r, c, v))
            elif tks[0] == "b" and len(tks) == 3:
                r, v = _int(tks[1], lno, "row"), _int(tks[2], lno, "bound")
                if not 1 <= r <= m or r in lower:
                    raise ParseError(f"bad or repeated lower bound for row {r}", lno)
                lower[r] = v
            elif tks[0] == "B" and len(tks) == 3:
                if mode != "band":
                    raise ParseError("upper bounds only allowed in band mode", lno)
                r, v = _int(tks[1], lno, "row"), _int(tks[2], lno, "bound")
                if not 1 <= r <= m or r in upper:
                    raise ParseError(f"bad or repeated upper bound for row {r}", lno)
                upper[r] = v
            else:
                raise ParseError(f"unexpected line {' '.join(tks)!r}", lno)
        if sorted(lower) != list(range(1, m + 1)):
            raise ParseError("each row needs exactly one lower bound")
        if mode == "band" and sorted(upper) != list(range(1, m + 1)):
            raise ParseError("band mode needs exactly one upper bound per row")
        return LinSystem(mode, m, n, k, tuple(entries),
                         tuple(lower[r] for r in range(1, m + 1)),
                         tuple(upper[r] for r in range(1, m + 1)) if mode == "band" else None)

    # XorSystem
    if len(toks) != 4:
        raise ParseError("header must be 'p xor <n> <m>'", no)
    n, m = _int(toks[2], no, "n"), _int(toks[3], no, "m")
    cons = []
    for lno, tks in body:
        if tks[0] == "x" and len(tks) == 4:
            u, v, c = (_int(x, lno, "field") for x in tks[1:])
            if u == v:
                raise ParseError("parity constraint needs two distinct variables", lno)
            if not (1 <= u <= n and 1 <= v <= n) or c not in (0, 1):
                raise ParseError("parity constraint out of range", lno)
            cons.append(Parity(u, v, c))
        elif tks[0] == "u" and len(tks) == 3:
            u, c = _int(tks[1], lno, "var"), _int(tks[2], lno, "const")
            if not 1 <= u <= n or c not in (0, 1):
                raise ParseError("unit constraint out of range", lno)
            cons.append(Unit(u, c))
        else:
            raise ParseError(f"unexpected line {' '.join(tks)!r}", lno)
    if len(cons) != m:
        raise ParseError(f"header declares {m} constraints, found {len(cons)}")
    return XorSystem(n, tuple(cons))


def _check_vertex_pair(u: int, v: int, n: int, lno: int, allow_equal: bool):
    if not (1 <= u <= n and 1 <= v <= n):
        raise ParseError(f"vertex index out of range in ({u},{v})", lno)
    if u == v and not allow_equal:
        raise ParseError(f"self-loop at {u}", lno)
