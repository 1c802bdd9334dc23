"""
Reduction Graphs Module

From the Schottky generators to graphs with lengths:
1. Pairing of the p+1 boundary points of the good fundamental domain
2. Stable reduction-graph of the Mumford curve (a rose with (p+1)/2 petals)
3. Quotient by the unit group: the graph with lengths of Gamma_p \\ T_p
4. Its degree-two cover, the graph of Gamma_{p,+} \\ T_p
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Tuple

import networkx as nx

from src.errors import InvariantError, NotSchottkyError
from src.norm_enumeration import GeneratorSet
from src.order_arithmetic import UnitGroup
from src.padic_embedding import ProjPoint, fixed_point_reductions, projective_line, unit_permutation
from src.quaternion_core import AlgebraData

LOOP = 'loop'
ALLER_RETOUR = 'aller-retour'
LINK = 'link'


@dataclass
class PairingTable:
    p: int
    # (attracting, repelling, generator index starting at 1)
    pairs: List[Tuple[ProjPoint, ProjPoint, int]]
    involution: Dict[ProjPoint, ProjPoint]
    radius_exponent: Fraction = Fraction(1, 2)

    def unordered_pairs(self) -> List[Tuple[ProjPoint, ProjPoint]]:
        return sorted(tuple(sorted((x, y))) for x, y, _ in self.pairs)


@dataclass(frozen=True)
class Ball:
    center: ProjPoint
    generator: int
    role: str


@dataclass
class FundamentalDomain:
    """Complement in P^1(C_p) of the open balls B(a, p^(-1/2)), a in P^1(F_p)"""
    p: int
    balls: List[Ball]
    radius: str = "p^(-1/2)"


@dataclass(frozen=True)
class GraphEdge:
    points: Tuple[ProjPoint, ...]
    length: int
    kind: str
    source: str
    target: str
    reverse: int


@dataclass
class LengthGraph:
    name: str
    vertices: Dict[str, int]
    edges: List[GraphEdge] = field(default_factory=list)

    def length_counts(self) -> Dict[int, int]:
        """c_n: oriented edges of length n"""
        return dict(sorted(Counter(e.length for e in self.edges).items()))

    def c_vector(self, upto: int = 3) -> Tuple[int, ...]:
        counts = self.length_counts()
        return tuple(counts.get(n, 0) for n in range(1, upto + 1))

    def aller_retour(self) -> List[GraphEdge]:
        return [e for e in self.edges if e.kind == ALLER_RETOUR]

    def loops(self) -> List[Tuple[Tuple[ProjPoint, ...], int]]:
        """Each loop once, labelled by the union of its two orientations"""
        result = []
        for i, e in enumerate(self.edges):
            if e.kind == LOOP and i < e.reverse:
                union = tuple(sorted(e.points + self.edges[e.reverse].points))
                result.append((union, e.length))
        return result

    def to_networkx(self) -> nx.MultiGraph:
        # aller-retour edges are half-edges and carry no cycle
        graph = nx.MultiGraph()
        graph.add_nodes_from(self.vertices)
        for i, e in enumerate(self.edges):
            if i < e.reverse:
                graph.add_edge(e.source, e.target, key=i, length=e.length, kind=e.kind)
        return graph

    def betti_number(self) -> int:
        graph = self.to_networkx()
        return graph.number_of_edges() - graph.number_of_nodes() + nx.number_connected_components(graph)

    def star_sum(self, vertex: str) -> int:
        return sum(self.vertices[vertex] // e.length for e in self.edges if e.source == vertex)

    def check(self) -> None:
        for i, e in enumerate(self.edges):
            if self.vertices[e.source] % e.length:
                raise InvariantError(f"{self.name}: edge length {e.length} does not divide vertex length {self.vertices[e.source]}")
            back = self.edges[e.reverse]
            if back.reverse != i or back.source != e.target or back.target != e.source:
                raise InvariantError(f"{self.name}: reversal map is not an involution at edge {i}")


def schottky_pairing(gs: GeneratorSet, alg: AlgebraData) -> PairingTable:
    """Pair the attracting fixed point of each generator with that of its inverse"""
    if gs.t != 0:
        raise NotSchottkyError(f"not Schottky: pure generators present (t={gs.t})")
    p = gs.p
    pairs = []
    involution = {}
    for index, gamma in enumerate(gs.impure_reps, start=1):
        attracting, repelling = fixed_point_reductions(gamma, alg, p)
        for x in (attracting, repelling):
            if x in involution:
                raise InvariantError(f"point {x} is the reduction of two fixed points")
        involution[attracting] = repelling
        involution[repelling] = attracting
        pairs.append((attracting, repelling, index))

    if len(involution) != p + 1:
        raise InvariantError(f"pairing covers {len(involution)} of {p + 1} points")
    logging.info(f"Pairing of P^1(F_{p}): {len(pairs)} pairs")
    return PairingTable(p=p, pairs=pairs, involution=involution)


def good_fundamental_domain(pt: PairingTable) -> FundamentalDomain:
    balls = []
    for attracting, repelling, index in pt.pairs:
        balls.append(Ball(center=attracting, generator=index, role='attracting'))
        balls.append(Ball(center=repelling, generator=index, role='repelling'))
    return FundamentalDomain(p=pt.p, balls=sorted(balls, key=lambda b: b.center.sort_key()))


def mumford_graph(pt: PairingTable) -> LengthGraph:
    points = projective_line(pt.p)
    position = {x: i for i, x in enumerate(points)}
    edges = [GraphEdge(points=(x,), length=1, kind=LOOP, source='v0', target='v0',
                       reverse=position[pt.involution[x]]) for x in points]
    graph = LengthGraph(name='mumford', vertices={'v0': 1}, edges=edges)
    graph.check()
    return graph


def quotient_by_units(pt: PairingTable, U: UnitGroup, alg: AlgebraData) -> LengthGraph:
    p = pt.p
    perms = [unit_permutation(u, alg, p) for u in U.elements]

    orbits = []
    seen = set()
    for x in projective_line(p):
        if x in seen:
            continue
        orbit = tuple(sorted({perm[x] for perm in perms}))
        seen.update(orbit)
        orbits.append(orbit)
    orbit_of = {x: i for i, orbit in enumerate(orbits) for x in orbit}

    edges = []
    for i, orbit in enumerate(orbits):
        if U.order % len(orbit):
            raise InvariantError(f"orbit of size {len(orbit)} in a group of order {U.order}")
        targets = sorted({orbit_of[pt.involution[x]] for x in orbit})
        if len(targets) != 1:
            logging.error(f"Pairing splits the unit orbit of {orbit[0]} across orbits {targets}")
            raise InvariantError(f"reversal is not well defined on the orbit of {orbit[0]}")
        reverse = targets[0]
        edges.append(GraphEdge(points=orbit, length=U.order // len(orbit),
                               kind=ALLER_RETOUR if reverse == i else LOOP,
                               source='v0', target='v0', reverse=reverse))

    graph = LengthGraph(name='quotient', vertices={'v0': U.order}, edges=edges)
    graph.check()
    if graph.star_sum('v0') != p + 1:
        raise InvariantError(f"star formula fails: {graph.star_sum('v0')} != {p + 1}")
    logging.info(f"Quotient graph: {len(edges)} oriented edge classes, c={graph.c_vector()}")
    return graph


def unit_classes(pt: PairingTable, U: UnitGroup, alg: AlgebraData) -> List[Tuple[ProjPoint, ...]]:
    return [e.points for e in quotient_by_units(pt, U, alg).edges]


def plus_cover(q: LengthGraph) -> LengthGraph:
    """Two vertices, one edge between them for every oriented edge class of q"""
    length = q.vertices['v0']
    edges = []
    for i, e in enumerate(q.edges):
        edges.append(GraphEdge(points=e.points, length=e.length, kind=LINK, source='v0', target='v1', reverse=2 * i + 1))
        edges.append(GraphEdge(points=e.points, length=e.length, kind=LINK, source='v1', target='v0', reverse=2 * i))
    graph = LengthGraph(name='plus', vertices={'v0': length, 'v1': length}, edges=edges)
    graph.check()
    return graph


def genus_plus(q: LengthGraph) -> int:
    """c1 + c2 + c3 - 1 read off the quotient graph"""
    return len(q.edges) - 1
