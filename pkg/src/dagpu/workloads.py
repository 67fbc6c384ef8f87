"""Benchmark DAG families: sparse triangular solves, sum-product circuits,
dense GEMV, and a generic edge-list text format.

All generators are deterministic for a fixed seed and return binary
(arity-normalized) DAGs ready for partitioning and compilation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .dag import Dag, DagBuilder, Op, normalize_arity, validate


class ParseError(Exception):
    def __init__(self, lineno: int, msg: str):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {msg}")


class ZeroDiagonal(Exception):
    def __init__(self, row: int):
        self.row = row
        super().__init__(f"missing or zero diagonal entry in row {row}")


class EmptyGraph(Exception):
    pass


@dataclass(frozen=True)
class SparseLowerTriangular:
    """Lower-triangular sparse matrix with a full nonzero diagonal.

    ``entries`` are (row, col, value) with col <= row, 0-indexed, sorted by
    (row, col), duplicate-free.
    """

    n: int
    entries: tuple[tuple[int, int, float], ...]

    def __post_init__(self):
        seen = set()
        diag = [False] * self.n
        prev = None
        for r, c, v in self.entries:
            if not (0 <= c <= r < self.n):
                raise ValueError(f"entry ({r}, {c}) outside the lower triangle")
            if (r, c) in seen:
                raise ValueError(f"duplicate entry ({r}, {c})")
            seen.add((r, c))
            if prev is not None and (r, c) < prev:
                raise ValueError("entries not sorted by (row, col)")
            prev = (r, c)
            if r == c:
                if v == 0:
                    raise ZeroDiagonal(r)
                diag[r] = True
        for r, present in enumerate(diag):
            if not present:
                raise ZeroDiagonal(r)

    def row_offdiag(self, row: int) -> list[tuple[int, float]]:
        return [(c, v) for r, c, v in self.entries if r == row and c != row]

    def diagonal(self) -> list[float]:
        return [v for r, c, v in self.entries if r == c]


def load_matrix_market(text: str) -> SparseLowerTriangular:
    """Parse a Matrix Market coordinate file into a lower-triangular matrix.

    Symmetric-storage files are expanded and then lower-filtered; entries
    above the diagonal are dropped. The matrix must be square with a full
    nonzero diagonal.
    """
    lines = text.splitlines()
    if not lines:
        raise ParseError(1, "empty file")
    header = lines[0].strip().lower().split()
    if len(header) < 5 or header[0] != "%%matrixmarket" or header[1] != "matrix":
        raise ParseError(1, "missing %%MatrixMarket matrix header")
    if header[2] != "coordinate":
        raise ParseError(1, f"unsupported format {header[2]!r}, need coordinate")
    if header[3] not in ("real", "integer"):
        raise ParseError(1, f"unsupported field {header[3]!r}")
    symmetry = header[4]
    if symmetry not in ("general", "symmetric"):
        raise ParseError(1, f"unsupported symmetry {symmetry!r}")

    dims = None
    raw: list[tuple[int, int, float]] = []
    for lineno, line in enumerate(lines[1:], start=2):
        s = line.strip()
        if not s or s.startswith("%"):
            continue
        parts = s.split()
        if dims is None:
            if len(parts) != 3:
                raise ParseError(lineno, "size line must be 'rows cols nnz'")
            try:
                rows, cols, nnz = (int(p) for p in parts)
            except ValueError:
                raise ParseError(lineno, "size line must hold integers") from None
            if rows != cols:
                raise ParseError(lineno, f"matrix must be square, got {rows}x{cols}")
            dims = (rows, cols, nnz)
            continue
        if len(parts) != 3:
            raise ParseError(lineno, "entry must be 'row col value'")
        try:
            r, c = int(parts[0]), int(parts[1])
            v = float(parts[2])
        except ValueError:
            raise ParseError(lineno, f"bad entry {s!r}") from None
        if not (1 <= r <= dims[0] and 1 <= c <= dims[0]):
            raise ParseError(lineno, f"index ({r}, {c}) out of range")
        raw.append((r - 1, c - 1, v))
    if dims is None:
        raise ParseError(len(lines), "no size line found")
    if len(raw) != dims[2]:
        raise ParseError(len(lines), f"expected {dims[2]} entries, read {len(raw)}")

    if symmetry == "symmetric":
        raw = raw + [(c, r, v) for r, c, v in raw if r != c]
    kept = {}
    for r, c, v in raw:
        if c > r:
            continue
        if (r, c) in kept:
            raise ParseError(0, f"duplicate entry ({r + 1}, {c + 1})")
        kept[(r, c)] = v
    n = dims[0]
    for i in range(n):
        if (i, i) not in kept or kept[(i, i)] == 0:
            raise ZeroDiagonal(i)
    entries = tuple(sorted((r, c, v) for (r, c), v in kept.items()))
    return SparseLowerTriangular(n, entries)


@dataclass(frozen=True)
class SptrsvBindings:
    """Node-id map for a forward-substitution DAG: b inputs and x outputs."""

    b_nodes: tuple[int, ...]
    x_nodes: tuple[int, ...]


def sptrsv_dag(m: SparseLowerTriangular) -> tuple[Dag, SptrsvBindings]:
    """Forward-substitution DAG for L x = b with the diagonal pre-inverted.

    x_i = (b_i + sum_j (-L_ij) * x_j) * (1 / L_ii): subtraction becomes
    negated const multipliers and the division a const reciprocal multiply,
    keeping the DAG inside the add/mul/max/min instruction set. Row
    accumulations are built wide and lowered to balanced binary trees.
    """
    by_row: list[list[tuple[int, float]]] = [[] for _ in range(m.n)]
    diag = [0.0] * m.n
    for r, c, v in m.entries:
        if r == c:
            diag[r] = v
        else:
            by_row[r].append((c, v))
    b = DagBuilder()
    b_nodes = [b.input() for _ in range(m.n)]
    x_nodes: list[int] = [-1] * m.n
    for i in range(m.n):
        terms = [b_nodes[i]]
        for j, lij in by_row[i]:
            coeff = b.const(-lij)
            terms.append(b.node(Op.MUL, coeff, x_nodes[j]))
        acc = terms[0] if len(terms) == 1 else b.node(Op.ADD, *terms)
        inv = b.const(1.0 / diag[i])
        x_nodes[i] = b.node(Op.MUL, acc, inv)
    dag = normalize_arity(b.build())
    validate(dag)
    return dag, SptrsvBindings(tuple(b_nodes), tuple(x_nodes))


def random_lower_triangular(
    n: int, nnz_per_row: float, seed: int, diag_range=(0.5, 2.0)
) -> SparseLowerTriangular:
    """Random well-conditioned lower-triangular matrix for suite generation."""
    rng = random.Random(seed)
    entries: list[tuple[int, int, float]] = []
    for i in range(n):
        lo, hi = diag_range
        d = rng.uniform(lo, hi) * (1 if rng.random() < 0.5 else -1)
        cols = set()
        want = min(i, max(0, int(rng.gauss(nnz_per_row, nnz_per_row / 2))))
        while len(cols) < want:
            cols.add(rng.randrange(i))
        row = [(i, c, rng.uniform(-1.0, 1.0)) for c in sorted(cols)]
        entries.extend(row)
        entries.append((i, i, d))
    return SparseLowerTriangular(n, tuple(sorted(entries)))


def pc_random(num_inputs: int, depth: int, fanins=(2, 3, 4), seed: int = 0) -> Dag:
    """Random sum-product-style circuit: alternating add and mul layers.

    Layer widths shrink toward a single root; each node draws its fan-in
    from ``fanins`` and connects to random nodes of the previous layer (with
    occasional deeper skip edges). Nodes that would be left unconsumed are
    attached to the next layer, so the root reaches everything.
    """
    if depth < 1 or num_inputs < 2:
        raise ValueError("need depth >= 1 and num_inputs >= 2")
    rng = random.Random(seed)
    b = DagBuilder()
    layers: list[list[int]] = [[b.input() for _ in range(num_inputs)]]
    # Root layer is ADD; alternate downward.
    def layer_op(d: int) -> Op:
        return Op.ADD if (depth - d) % 2 == 0 else Op.MUL

    width = num_inputs
    for d in range(1, depth + 1):
        width = 1 if d == depth else max(2, (width * 2) // 3)
        prev = layers[-1]
        deeper = [nid for layer in layers[:-1] for nid in layer]
        consumed: set[int] = set()
        new_nodes: list[tuple[int, list[int]]] = []  # op placeholder with source list
        for _ in range(width):
            k = min(rng.choice(fanins), len(prev))
            srcs = rng.sample(prev, k)
            if deeper and rng.random() < 0.25:
                extra = rng.choice(deeper)
                if extra not in srcs:
                    srcs.append(extra)
            consumed.update(srcs)
            new_nodes.append((0, srcs))
        orphans = [nid for nid in prev if nid not in consumed]
        for i, orphan in enumerate(orphans):
            new_nodes[i % width][1].append(orphan)
        op = layer_op(d)
        layers.append([b.node(op, *srcs) for _, srcs in new_nodes])
    dag = normalize_arity(b.build())
    validate(dag)
    return dag


def gemv_dag(n: int, seed: int = 0) -> Dag:
    """Dense matrix-vector product DAG: n*n const-coefficient multiplies and
    one balanced add-reduction tree per row.

    Matrix values are small nonzero integers drawn from ``seed``. Input nodes
    are created in x-index order and row outputs are the sinks in row order,
    so bindings are recoverable from node ids.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = random.Random(seed)
    b = DagBuilder()
    x = [b.input() for _ in range(n)]
    for i in range(n):
        prods = []
        for j in range(n):
            a = rng.choice([-4, -3, -2, -1, 1, 2, 3, 4])
            prods.append(b.node(Op.MUL, b.const(a), x[j]))
        if n > 1:
            b.node(Op.ADD, *prods)
    dag = normalize_arity(b.build())
    validate(dag)
    return dag


_EDGE_OPS = {"ADD": Op.ADD, "MUL": Op.MUL, "MAX": Op.MAX, "MIN": Op.MIN}


def load_edge_list(text: str) -> Dag:
    """Parse the line-based DAG format.

    Grammar, one statement per line::

        node <id> INPUT
        node <id> CONST <decimal>
        node <id> <ADD|MUL|MAX|MIN> <src0> <src1> [...]

    Operand order defines slots; ``#`` starts a comment; ids must be dense
    from 0 and declared before use. The DAG is returned as written (wide
    nodes are allowed); callers normalize before compiling.
    """
    b = DagBuilder()
    declared = 0
    for lineno, line in enumerate(text.splitlines(), start=1):
        s = line.split("#", 1)[0].strip()
        if not s:
            continue
        parts = s.split()
        if parts[0] != "node" or len(parts) < 3:
            raise ParseError(lineno, f"expected 'node <id> <kind> ...', got {s!r}")
        try:
            nid = int(parts[1])
        except ValueError:
            raise ParseError(lineno, f"bad node id {parts[1]!r}") from None
        if nid != declared:
            raise ParseError(lineno, f"ids must be dense and ascending; expected {declared}")
        kind = parts[2]
        if kind == "INPUT":
            if len(parts) != 3:
                raise ParseError(lineno, "INPUT takes no operands")
            b.input()
        elif kind == "CONST":
            if len(parts) != 4:
                raise ParseError(lineno, "CONST takes exactly one value")
            try:
                b.const(float(parts[3]))
            except ValueError:
                raise ParseError(lineno, f"bad const value {parts[3]!r}") from None
        elif kind in _EDGE_OPS:
            try:
                srcs = [int(p) for p in parts[3:]]
            except ValueError:
                raise ParseError(lineno, "operands must be integer node ids") from None
            if not srcs:
                raise ParseError(lineno, f"{kind} needs at least one operand")
            for sid in srcs:
                if not (0 <= sid < declared):
                    raise ParseError(lineno, f"operand {sid} not declared before use")
            b.node(_EDGE_OPS[kind], *srcs)
        else:
            raise ParseError(lineno, f"unknown node kind {kind!r}")
        declared += 1
    if declared == 0:
        raise EmptyGraph("edge-list file declares no nodes")
    dag = b.build()
    validate(dag)
    return dag


def dump_edge_list(dag: Dag) -> str:
    """Inverse of load_edge_list, for round-trips and report artifacts."""
    out = []
    for nd in dag.nodes:
        if nd.op is Op.INPUT:
            out.append(f"node {nd.id} INPUT")
        elif nd.op is Op.CONST:
            out.append(f"node {nd.id} CONST {nd.const_value!r}")
        else:
            srcs = " ".join(str(s) for s in dag.operands(nd.id))
            out.append(f"node {nd.id} {nd.op.value} {srcs}")
    return "\n".join(out) + "\n"
