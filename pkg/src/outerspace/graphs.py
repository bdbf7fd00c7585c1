"""Marked metric graphs: points of unprojectivised Outer Space.

A graph stores, per edge pair, one forward orientation with endpoints and a
positive rational length.  An oriented edge ("dart") is a pair
``(edge_id, sign)``; the reversal involution flips the sign.  The marking is
kept in both directions:

* ``marking[i]`` is the edge path traced by the i-th rose petal, a loop at the
  basepoint;
* ``labels[e]`` is the word read when crossing ``e`` forward under the
  homotopy inverse of the marking (``labels`` may be ``None`` on internal
  snapshots and can be recomputed with `derive_inverse_marking`).

Consistency means: reading the labels along ``marking[i]`` reduces to exactly
the i-th generator.  Graphs are immutable by convention; every operation
returns a new value.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .errors import InvalidInputError, InternalInvariantError, RankMismatchError
from .words import Word, free_reduce, generator, identity, AutomorphismPair, \
    validate_automorphism_pair, apply_endomorphism

Dart = tuple[str, int]
EdgePath = tuple[Dart, ...]


def rev(d: Dart) -> Dart:
    return (d[0], -d[1])


@dataclass(frozen=True, eq=True)
class MarkedMetricGraph:
    rank: int
    vertices: frozenset[str]
    edges: Mapping[str, tuple[str, str, Fraction]]  # id -> (origin, terminus, length)
    basepoint: str
    marking: tuple[EdgePath, ...]
    labels: Optional[Mapping[str, Word]] = None

    # -- structural accessors -------------------------------------------------

    def origin(self, d: Dart) -> str:
        o, t, _ = self.edges[d[0]]
        return o if d[1] > 0 else t

    def terminus(self, d: Dart) -> str:
        o, t, _ = self.edges[d[0]]
        return t if d[1] > 0 else o

    def length(self, e: str) -> Fraction:
        return self.edges[e][2]

    def darts(self) -> list[Dart]:
        out = []
        for e in sorted(self.edges):
            out.append((e, 1))
            out.append((e, -1))
        return out

    def star(self, v: str) -> list[Dart]:
        """Darts leaving ``v`` (a loop at ``v`` contributes both darts)."""
        return [d for d in self.darts() if self.origin(d) == v]

    def valence(self, v: str) -> int:
        return len(self.star(v))

    def label_of_dart(self, d: Dart) -> Word:
        if self.labels is None:
            raise InvalidInputError("graph has no inverse labels; derive them first")
        w = self.labels[d[0]]
        return w if d[1] > 0 else w.inverse()

    def with_labels(self, labels: Optional[Mapping[str, Word]]) -> "MarkedMetricGraph":
        return replace(self, labels=labels)


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    issues: tuple[str, ...]


def make_graph(rank, edges, basepoint, marking, labels=None) -> MarkedMetricGraph:
    """Build a graph from plain data. ``edges`` maps id -> (origin, terminus,
    length); lengths are coerced to Fraction."""
    norm_edges = {
        e: (o, t, Fraction(l)) for e, (o, t, l) in edges.items()
    }
    vertices = frozenset(
        v for (o, t, _) in norm_edges.values() for v in (o, t)
    )
    return MarkedMetricGraph(
        rank=rank,
        vertices=vertices,
        edges=norm_edges,
        basepoint=basepoint,
        marking=tuple(tuple(p) for p in marking),
        labels=dict(labels) if labels is not None else None,
    )


# -- paths --------------------------------------------------------------------

def check_path(G: MarkedMetricGraph, path: EdgePath) -> None:
    for d in path:
        if d[0] not in G.edges or d[1] not in (1, -1):
            raise InvalidInputError(f"unknown oriented edge {d}")
    for a, b in zip(path, path[1:]):
        if G.terminus(a) != G.origin(b):
            raise InvalidInputError(f"non-incident steps {a} -> {b}")


def is_loop(G: MarkedMetricGraph, path: EdgePath) -> bool:
    if not path:
        return True
    return G.origin(path[0]) == G.terminus(path[-1])


def tighten(G: MarkedMetricGraph, path: EdgePath, mode: str = "path") -> EdgePath:
    """Reduce a path (cancel backtracking); in ``loop`` mode also reduce
    cyclically, which may move the basepoint of the loop."""
    check_path(G, path)
    if mode not in ("path", "loop"):
        raise InvalidInputError(f"unknown tighten mode {mode!r}")
    if mode == "loop" and not is_loop(G, path):
        raise InvalidInputError("tighten(mode='loop') needs a closed path")
    out: list[Dart] = []
    for d in path:
        if out and out[-1] == rev(d):
            out.pop()
        else:
            out.append(d)
    if mode == "loop":
        while len(out) >= 2 and out[0] == rev(out[-1]):
            out = out[1:-1]
    return tuple(out)


def is_cyclically_reduced(G: MarkedMetricGraph, path: EdgePath) -> bool:
    if not path or not is_loop(G, path):
        return False
    for a, b in zip(path, path[1:]):
        if b == rev(a):
            return False
    return path[0] != rev(path[-1]) or len(path) == 1


def path_length(G: MarkedMetricGraph, path: EdgePath) -> Fraction:
    return sum((G.length(d[0]) for d in path), Fraction(0))


def loop_length(G: MarkedMetricGraph, loop: EdgePath) -> Fraction:
    """Length of a cyclically reduced loop; sum of the edges crossed."""
    if not is_cyclically_reduced(G, loop):
        raise InvalidInputError("loop is not cyclically reduced")
    return path_length(G, loop)


def counting_inner_product(G: MarkedMetricGraph, loop: EdgePath) -> Fraction:
    """<lengths, counting vector>: length as a linear function of the loop's
    unoriented edge occurrence counts.  Agrees with `loop_length`."""
    if not is_cyclically_reduced(G, loop):
        raise InvalidInputError("loop is not cyclically reduced")
    counts: dict[str, int] = {}
    for d in loop:
        counts[d[0]] = counts.get(d[0], 0) + 1
    return sum((G.length(e) * k for e, k in counts.items()), Fraction(0))


def counting_vector(G: MarkedMetricGraph, loop: EdgePath) -> dict[str, int]:
    counts = {e: 0 for e in G.edges}
    for d in loop:
        counts[d[0]] += 1
    return counts


# -- marking readouts ----------------------------------------------------------

def realize_word_as_path(G: MarkedMetricGraph, w: Word) -> EdgePath:
    """The based loop tracing ``w`` through the marking, tightened rel
    endpoints."""
    if w.rank != G.rank:
        raise RankMismatchError(f"word rank {w.rank} != graph rank {G.rank}")
    steps: list[Dart] = []
    for x in w.letters:
        petal = G.marking[abs(x) - 1]
        steps.extend(petal if x > 0 else tuple(rev(d) for d in reversed(petal)))
    return tighten(G, tuple(steps), "path")


def realize_word_as_loop(G: MarkedMetricGraph, w: Word) -> EdgePath:
    """Cyclically reduced loop representing the conjugacy class of ``w``."""
    if w.rank != G.rank:
        raise RankMismatchError(f"word rank {w.rank} != graph rank {G.rank}")
    steps: list[Dart] = []
    for x in w.letters:
        petal = G.marking[abs(x) - 1]
        steps.extend(petal if x > 0 else tuple(rev(d) for d in reversed(petal)))
    return tighten(G, tuple(steps), "loop")


def translation_length(G: MarkedMetricGraph, w: Word) -> Fraction:
    """Length of the shortest loop freely homotopic to the marking image of
    ``w``; zero iff ``w`` is the identity."""
    return path_length(G, realize_word_as_loop(G, w))


def word_of_loop(G: MarkedMetricGraph, loop: EdgePath) -> Word:
    """Freely reduced readout of the inverse labels along a loop."""
    if not is_loop(G, loop):
        raise InvalidInputError("word_of_loop needs a closed path")
    check_path(G, loop)
    letters: list[int] = []
    for d in loop:
        letters.extend(G.label_of_dart(d).letters)
    return free_reduce(letters, G.rank)


# -- volume and scaling ---------------------------------------------------------

def volume(G: MarkedMetricGraph) -> Fraction:
    return sum((l for (_, _, l) in G.edges.values()), Fraction(0))


def scale_graph(G: MarkedMetricGraph, c: Fraction) -> MarkedMetricGraph:
    c = Fraction(c)
    if c <= 0:
        raise InvalidInputError("scale factor must be positive")
    edges = {e: (o, t, l * c) for e, (o, t, l) in G.edges.items()}
    return replace(G, edges=edges)


def normalize_volume(G: MarkedMetricGraph) -> tuple[MarkedMetricGraph, Fraction]:
    """Rescale to total volume one; returns the graph and the scale used."""
    scale = Fraction(1) / volume(G)
    return scale_graph(G, scale), scale


def interpolate_in_simplex(A: MarkedMetricGraph, B: MarkedMetricGraph,
                           t: Fraction) -> MarkedMetricGraph:
    """Point (1-t)A + tB on the segment joining two graphs of the same
    simplex (identical underlying graph and marking)."""
    t = Fraction(t)
    if not (0 <= t <= 1):
        raise InvalidInputError(f"interpolation parameter {t} outside [0, 1]")
    same = (
        A.rank == B.rank
        and A.vertices == B.vertices
        and set(A.edges) == set(B.edges)
        and all(A.edges[e][:2] == B.edges[e][:2] for e in A.edges)
        and A.basepoint == B.basepoint
        and A.marking == B.marking
        and A.labels == B.labels
    )
    if not same:
        raise InvalidInputError("graphs do not lie in a common simplex")
    edges = {
        e: (o, tt, (1 - t) * l + t * B.edges[e][2])
        for e, (o, tt, l) in A.edges.items()
    }
    return replace(A, edges=edges)


# -- validation ------------------------------------------------------------------

def validate_marked_graph(G: MarkedMetricGraph) -> ValidationReport:
    """Check every invariant of a marked metric graph; the first issue listed
    is the first violated invariant."""
    issues: list[str] = []

    if G.basepoint not in G.vertices:
        issues.append(f"basepoint {G.basepoint!r} is not a vertex")
    for e, (o, t, l) in sorted(G.edges.items()):
        if o not in G.vertices or t not in G.vertices:
            issues.append(f"edge {e} has endpoint outside the vertex set")
        if l <= 0:
            issues.append(f"edge {e} has non-positive length {l}")
    if issues:
        return ValidationReport(False, tuple(issues))

    # connectivity
    if G.vertices:
        seen = {G.basepoint}
        frontier = [G.basepoint]
        while frontier:
            v = frontier.pop()
            for d in G.star(v):
                w = G.terminus(d)
                if w not in seen:
                    seen.add(w)
                    frontier.append(w)
        if seen != G.vertices:
            missing = sorted(G.vertices - seen)[0]
            issues.append(f"graph is not connected (vertex {missing} unreachable)")

    betti = len(G.edges) - len(G.vertices) + 1
    if betti != G.rank:
        issues.append(f"first Betti number {betti} != rank {G.rank}")

    for v in sorted(G.vertices):
        if G.valence(v) < 2:
            issues.append(f"vertex {v} has valence {G.valence(v)} < 2")

    if len(G.marking) != G.rank:
        issues.append(f"{len(G.marking)} marking paths for rank {G.rank}")
        return ValidationReport(False, tuple(issues))
    for i, petal in enumerate(G.marking, start=1):
        try:
            check_path(G, petal)
        except InvalidInputError as exc:
            issues.append(f"marking path {i}: {exc}")
            continue
        if not petal or G.origin(petal[0]) != G.basepoint \
                or G.terminus(petal[-1]) != G.basepoint:
            issues.append(f"marking path {i} is not a loop at the basepoint")

    if G.labels is None:
        issues.append("inverse labels are missing")
        return ValidationReport(False, tuple(issues))
    missing = sorted(set(G.edges) - set(G.labels))
    if missing:
        issues.append(f"edge {missing[0]} has no inverse label")
        return ValidationReport(False, tuple(issues))
    if not issues:
        for i, petal in enumerate(G.marking, start=1):
            readout = word_of_loop(G, petal)
            if readout != generator(i, G.rank):
                issues.append(
                    f"marking consistency fails for generator {i}: "
                    f"readout {readout.letters}"
                )
    return ValidationReport(not issues, tuple(issues))


# -- marking actions ----------------------------------------------------------------

def apply_automorphism_to_marking(G: MarkedMetricGraph,
                                  phi: AutomorphismPair) -> MarkedMetricGraph:
    """The point G . phi: same metric graph, marking precomposed with phi.

    New petal i traces the old realization of phi(a_i); labels get the inverse
    automorphism applied so that readouts still give the plain generators.
    """
    if phi.rank != G.rank:
        raise RankMismatchError(f"automorphism rank {phi.rank} != graph rank {G.rank}")
    report = validate_automorphism_pair(phi)
    if not report.ok:
        raise InvalidInputError(f"invalid automorphism pair: {report.issues[0]}")
    new_marking = tuple(
        realize_word_as_path(G, w) for w in phi.forward_images
    )
    new_labels = None
    if G.labels is not None:
        new_labels = {
            e: apply_endomorphism(w, phi.inverse_images)
            for e, w in G.labels.items()
        }
    return replace(G, marking=new_marking, labels=new_labels)


# -- subdivision -----------------------------------------------------------------------

def fresh_id(base: str, taken: Iterable[str]) -> str:
    taken = set(taken)
    if base not in taken:
        return base
    k = 1
    while f"{base}.{k}" in taken:
        k += 1
    return f"{base}.{k}"


def subdivide(G: MarkedMetricGraph, cuts: Mapping[str, Sequence[Fraction]]
              ) -> tuple[MarkedMetricGraph, dict[Dart, EdgePath]]:
    """Subdivide edges at interior offsets (measured along the forward
    orientation).

    Returns the subdivided graph together with the dart expansion map.  The
    first piece keeps the old label, later pieces get the empty word, so
    readouts along any path are unchanged.
    """
    edges = dict(G.edges)
    labels = dict(G.labels) if G.labels is not None else None
    vertices = set(G.vertices)
    expansion: dict[Dart, EdgePath] = {}

    for e in sorted(cuts):
        offs = sorted(set(Fraction(x) for x in cuts[e]))
        o, t, l = edges[e]
        if any(not (0 < x < l) for x in offs):
            raise InvalidInputError(f"cut offsets for edge {e} not interior")
        if not offs:
            continue
        bounds = [Fraction(0)] + offs + [l]
        piece_ids = []
        taken = set(edges) | {x for p in expansion.values() for (x, _) in p}
        for k in range(len(bounds) - 1):
            piece_ids.append(fresh_id(f"{e}.{k + 1}", taken))
            taken.add(piece_ids[-1])
        mids = []
        vtaken = set(vertices)
        for k in range(len(offs)):
            m = fresh_id(f"{e}:v{k + 1}", vtaken)
            vtaken.add(m)
            mids.append(m)
        vertices.update(mids)
        chain = [o] + mids + [t]
        del edges[e]
        for k, pid in enumerate(piece_ids):
            edges[pid] = (chain[k], chain[k + 1], bounds[k + 1] - bounds[k])
        if labels is not None:
            lab = labels.pop(e)
            for k, pid in enumerate(piece_ids):
                labels[pid] = lab if k == 0 else identity(G.rank)
        fwd = tuple((pid, 1) for pid in piece_ids)
        expansion[(e, 1)] = fwd
        expansion[(e, -1)] = tuple(rev(d) for d in reversed(fwd))

    for e in G.edges:
        if (e, 1) not in expansion:
            expansion[(e, 1)] = ((e, 1),)
            expansion[(e, -1)] = ((e, -1),)

    marking = tuple(
        tuple(x for d in petal for x in expansion[d]) for petal in G.marking
    )
    G2 = MarkedMetricGraph(
        rank=G.rank,
        vertices=frozenset(vertices),
        edges=edges,
        basepoint=G.basepoint,
        marking=marking,
        labels=labels,
    )
    return G2, expansion


def expand_path(expansion: Mapping[Dart, EdgePath], path: EdgePath) -> EdgePath:
    return tuple(x for d in path for x in expansion[d])


# -- rebasing and canonical form -----------------------------------------------------

def _bfs_path(G: MarkedMetricGraph, src: str, dst: str) -> EdgePath:
    """Deterministic edge path from src to dst (BFS in sorted dart order)."""
    if src == dst:
        return ()
    prev: dict[str, Dart] = {}
    seen = {src}
    frontier = [src]
    while frontier:
        nxt = []
        for v in frontier:
            for d in G.star(v):
                w = G.terminus(d)
                if w not in seen:
                    seen.add(w)
                    prev[w] = d
                    nxt.append(w)
        frontier = nxt
    if dst not in prev:
        raise InvalidInputError(f"no path from {src} to {dst}")
    out = []
    v = dst
    while v != src:
        d = prev[v]
        out.append(d)
        v = G.origin(d)
    return tuple(reversed(out))


def rebase(G: MarkedMetricGraph, new_base: str) -> MarkedMetricGraph:
    """Move the basepoint, conjugating marking paths and gauge-fixing the
    labels so consistency (readout == generator) is preserved exactly."""
    if new_base not in G.vertices:
        raise InvalidInputError(f"unknown vertex {new_base}")
    if new_base == G.basepoint:
        return G
    conn = _bfs_path(G, new_base, G.basepoint)
    conn_rev = tuple(rev(d) for d in reversed(conn))
    marking = tuple(
        tighten(G, conn + petal + conn_rev, "path") for petal in G.marking
    )
    labels = None
    if G.labels is not None:
        g = free_reduce(
            [x for d in conn for x in G.label_of_dart(d).letters], G.rank
        )
        gi = g.inverse()
        labels = {e: gi * w * g for e, w in G.labels.items()}
    return replace(G, basepoint=new_base, marking=marking, labels=labels)


def canonicalize(G: MarkedMetricGraph) -> MarkedMetricGraph:
    """Suppress valence-two vertices (subdivision artifacts).

    If the basepoint itself is bivalent it is first moved to a retained
    vertex and the marking re-tightened.  Translation lengths are unchanged.
    """
    while True:
        target = None
        for v in sorted(G.vertices):
            star = G.star(v)
            if len(star) != 2:
                continue
            d1, d2 = star
            if d1[0] == d2[0]:
                continue  # the two ends of a single loop edge; nothing to merge
            target = (v, d1, d2)
            break
        if target is None:
            return G
        v, d_out1, d_out2 = target
        if v == G.basepoint:
            # move the basepoint across the smaller-id edge
            G = rebase(G, G.terminus(d_out1))
            continue
        # merge: arrive along rev(d_out1), leave along d_out2
        d_in = rev(d_out1)
        u = G.origin(d_in)
        w = G.terminus(d_out2)
        l_new = G.length(d_in[0]) + G.length(d_out2[0])
        edges = dict(G.edges)
        del edges[d_in[0]]
        del edges[d_out2[0]]
        new_id = fresh_id(d_in[0], edges)
        edges[new_id] = (u, w, l_new)
        labels = None
        if G.labels is not None:
            labels = {e: lw for e, lw in G.labels.items()
                      if e not in (d_in[0], d_out2[0])}
            labels[new_id] = G.label_of_dart(d_in) * G.label_of_dart(d_out2)

        def transform(path: EdgePath) -> EdgePath:
            out: list[Dart] = []
            i = 0
            while i < len(path):
                d = path[i]
                if d == d_in:
                    if i + 1 >= len(path) or path[i + 1] != d_out2:
                        raise InternalInvariantError(
                            "path stops at a suppressed bivalent vertex"
                        )
                    out.append((new_id, 1))
                    i += 2
                elif d == rev(d_out2):
                    if i + 1 >= len(path) or path[i + 1] != rev(d_in):
                        raise InternalInvariantError(
                            "path stops at a suppressed bivalent vertex"
                        )
                    out.append((new_id, -1))
                    i += 2
                else:
                    out.append(d)
                    i += 1
            return tuple(out)

        G = MarkedMetricGraph(
            rank=G.rank,
            vertices=frozenset(G.vertices - {v}),
            edges=edges,
            basepoint=G.basepoint,
            marking=tuple(transform(p) for p in G.marking),
            labels=labels,
        )


# -- deriving inverse labels (folding with word tracking) ------------------------------

def derive_inverse_marking(G: MarkedMetricGraph) -> dict[str, Word]:
    """Compute inverse labels from the forward marking alone.

    A wedge of subdivided circles, one per petal and carrying the petal's
    generator on its first edge, is folded onto ``G``: edges leaving a common
    vertex with the same image are identified, after a gauge move at the
    absorbed vertex keeps all petal readouts intact.  The fold fails exactly
    when the forward marking is not a marking isomorphism on the fundamental
    group.
    """
    # mutable fold arena: vertices are ints under union-find
    parent: list[int] = []

    def new_vertex() -> int:
        parent.append(len(parent))
        return len(parent) - 1

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    base = new_vertex()
    # edge records: [origin, terminus, g_dart, word, alive]
    medges: list[list] = []
    for i, petal in enumerate(G.marking, start=1):
        path = tighten(G, petal, "path")
        if not path or not is_loop(G, path) or G.origin(path[0]) != G.basepoint:
            raise InvalidInputError(
                f"marking path {i} does not tighten to a basepoint loop"
            )
        prev = base
        for j, d in enumerate(path):
            nxt = base if j == len(path) - 1 else new_vertex()
            w = generator(i, G.rank) if j == 0 else identity(G.rank)
            medges.append([prev, nxt, d, w, True])
            prev = nxt

    def gauge(y: int, g: Word) -> None:
        """Rewrite words at vertex y: through-readings and petal words are
        unchanged as group elements."""
        for k, (o, t, _, w, alive) in enumerate(medges):
            if not alive:
                continue
            o_in = find(o) == y
            t_in = find(t) == y
            if o_in and t_in:
                medges[k][3] = g.inverse() * w * g
            elif o_in:
                medges[k][3] = g.inverse() * w
            elif t_in:
                medges[k][3] = w * g

    changed = True
    while changed:
        changed = False
        roots = sorted({find(o) for (o, t, _, _, a) in medges if a}
                       | {find(t) for (o, t, _, _, a) in medges if a}
                       | {find(base)})
        for x in roots:
            by_dart: dict[Dart, list] = {}
            for k, (o, t, d, w, alive) in enumerate(medges):
                if not alive:
                    continue
                if find(o) == x:
                    by_dart.setdefault(d, []).append((k, 1, w))
                if find(t) == x:
                    by_dart.setdefault(rev(d), []).append((k, -1, w.inverse()))
            pair = None
            for d in sorted(by_dart):
                if len(by_dart[d]) >= 2:
                    pair = by_dart[d][:2]
                    break
            if pair is None:
                continue
            (k1, s1, w1), (k2, s2, w2) = pair
            y1 = find(medges[k1][1] if s1 > 0 else medges[k1][0])
            y2 = find(medges[k2][1] if s2 > 0 else medges[k2][0])
            if y1 == y2:
                raise InvalidInputError(
                    "forward marking is not injective on the fundamental group "
                    "(fold would reduce rank)"
                )
            # absorb y2 into y1, keeping the basepoint's representative stable
            if y2 == find(base):
                k1, s1, w1, y1, k2, s2, w2, y2 = k2, s2, w2, y2, k1, s1, w1, y1
            gauge(y2, w2.inverse() * w1)
            # after the gauge the two folded edges read the same word from x
            g1 = medges[k1][3] if s1 > 0 else medges[k1][3].inverse()
            g2 = medges[k2][3] if s2 > 0 else medges[k2][3].inverse()
            if g1 != g2:
                raise InternalInvariantError("gauge did not align folded edges")
            medges[k2][4] = False
            parent[y2] = y1
            changed = True
            break

    # extract: alive edges must biject with G's edges
    label_words: dict[str, Word] = {}
    vmap: dict[int, str] = {}
    alive = [(o, t, d, w) for (o, t, d, w, a) in medges if a]
    if len(alive) != len(G.edges):
        raise InvalidInputError(
            "forward marking does not fold onto the graph "
            f"({len(alive)} folded edges for {len(G.edges)} graph edges)"
        )
    for (o, t, d, w) in alive:
        e, s = d
        word = w if s > 0 else w.inverse()
        if e in label_words:
            raise InvalidInputError(
                f"forward marking folds two edges onto edge {e}"
            )
        label_words[e] = word
        go = G.origin((e, 1))
        gt = G.terminus((e, 1))
        mo, mt = (find(o), find(t)) if s > 0 else (find(t), find(o))
        for mv, gv in ((mo, go), (mt, gt)):
            if vmap.setdefault(mv, gv) != gv:
                raise InvalidInputError(
                    "folded marking graph is not isomorphic to the graph"
                )
    if vmap.get(find(base)) != G.basepoint:
        raise InvalidInputError("folded basepoint does not match the basepoint")
    if set(label_words) != set(G.edges):
        missing = sorted(set(G.edges) - set(label_words))[0]
        raise InvalidInputError(f"marking does not cover edge {missing}")
    return label_words


def ensure_labels(G: MarkedMetricGraph) -> MarkedMetricGraph:
    """Return G with inverse labels, deriving them if absent."""
    if G.labels is not None:
        return G
    return G.with_labels(derive_inverse_marking(G))
