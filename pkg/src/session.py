"""
Worked-session replay for X(3p, 2) at p = 13.

Prints, in order: xi, the Schottky generators as quaternions and as
13-adic matrices (r stands for the square root of -1), the radius and
pairing of the fundamental domain, the unit-action classes and the
description of Gamma_13 \\ T_13 (aller-retour edges and loops).

Usage:
    python src/session.py
    python src/session.py --D 3 --N 1 --p 61
"""

import os
import sys

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import argparse

from src.cli import run
from src.errors import ShimuraError
from src.padic_embedding import symbolic_matrix
from src.quaternion_core import format_quaternion, order_lookup


def _point_set(points) -> str:
    return '{' + ', '.join(f"({x})" for x in points) + '}'


def replay(D: int = 3, N: int = 2, p: int = 13) -> int:
    print(f"🧪 Replaying the worked session for (D, N, p) = ({D}, {N}, {p})...")

    try:
        report = run(D, N, p, precision=1)
    except ShimuraError as e:
        print(f"❌ {type(e).__name__}: {e}")
        return e.exit_code

    alg = order_lookup(D, N).algebra
    print("\n> xi := choose_xi(O);")
    print(f"  {format_quaternion(report.xi)}")

    print(f"\n> gens_xi;  ({len(report.generators)} generators, rank {report.rank})")
    for g in report.generators:
        print(f"  [{g.index}] {format_quaternion(g.quaternion)}")

    print(f"\n> gens_Schottky;  (r = sqrt({alg.a}) = {report.sqrt_a} mod {p})")
    for g in report.generators:
        (m11, m12), (m21, m22) = symbolic_matrix(g.quaternion, alg)
        print(f"  [{g.index}] [{m11}  {m12}]   [{m21}  {m22}]")

    if report.pairing is None:
        print(f"\n⚠️ Not Schottky (status {report.status}); stopping before the fundamental domain.")
        return report.exit_code

    print(f"\n> radius;\n  {report.domain.radius}")
    print("\n> pairing;")
    for x, y in report.pairing.unordered_pairs():
        print(f"  <({x}), ({y})>")

    print("\n> classes;")
    for edge in report.quotient.edges:
        print(f"  {_point_set(edge.points)}")

    print("\n> aller_retour;")
    for edge in report.quotient.aller_retour():
        print(f"  <{_point_set(edge.points)}, {edge.length}>")
    print("\n> loops;")
    for points, length in report.quotient.loops():
        print(f"  <{_point_set(points)}, {length}>")

    cf = report.closed_form
    print(f"\n✅ c = {cf.c}, genus = {cf.genus_gamma_p}, g+ = {cf.genus_plus}, rose with {report.mumford.betti_number()} petals")
    return 0


def main():
    parser = argparse.ArgumentParser(description='Replay the worked reduction-graph session')
    parser.add_argument('--D', type=int, default=3)
    parser.add_argument('--N', type=int, default=2)
    parser.add_argument('--p', type=int, default=13)
    args = parser.parse_args()
    return replay(args.D, args.N, args.p)


if __name__ == "__main__":
    sys.exit(main())
