"""
Shimura Reduction-Graph Calculator

Runs the full pipeline for one family (D, N) and prime p, or sweeps all
families over the admissible primes up to a bound:
    order -> xi -> S~ -> Schottky generators -> pairing -> graphs -> closed formulas

Usage:
    python src/cli.py --D 3 --N 2 --p 13
    python src/cli.py --D 3 --N 1 --p 61 --format dot --out graphs.dot
    python src/cli.py --sweep 200 --workers 4

Exit codes: 0 ok, 2 prime not admissible, 3 not Schottky (t > 0),
4 unsupported family, 5 internal invariant failure.
"""

import os
import sys

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import argparse
import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from jinja2 import Environment, FileSystemLoader
from tqdm import tqdm

from src.config import load_config
from src.errors import InvariantError, ShimuraError
from src.formulas import ClosedFormReport, admissible_primes, check_admissible, closed_form_report
from src.norm_enumeration import GeneratorSet, represent_prime, schottky_rank
from src.order_arithmetic import choose_xi, right_unit_property, two_in_ideal, unit_group
from src.padic_embedding import PadicMatrix, ProjPoint, fixed_point_reductions, phi_p, sqrt_hensel
from src.quaternion_core import FAMILIES, Quaternion, format_quaternion, is_member, norm, order_lookup, parse_quaternion
from src.reduction_graphs import (
    ALLER_RETOUR,
    FundamentalDomain,
    LengthGraph,
    PairingTable,
    good_fundamental_domain,
    mumford_graph,
    plus_cover,
    quotient_by_units,
    schottky_pairing,
)

TEMPLATE_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'templates')

STATUS_OK = 'ok'
STATUS_NOT_SCHOTTKY = 'not_schottky'
STATUS_COUNTING_ONLY = 'counting_only'


@dataclass
class GeneratorRecord:
    index: int
    quaternion: Quaternion
    matrix: PadicMatrix
    attracting: ProjPoint
    repelling: ProjPoint


@dataclass
class RunReport:
    D: int
    N: int
    p: int
    precision: int
    xi: Quaternion
    sqrt_a: int
    unit_order: int
    generator_set: GeneratorSet
    generators: List[GeneratorRecord]
    status: str = STATUS_OK
    rank: Optional[int] = None
    pairing: Optional[PairingTable] = None
    domain: Optional[FundamentalDomain] = None
    mumford: Optional[LengthGraph] = None
    quotient: Optional[LengthGraph] = None
    plus: Optional[LengthGraph] = None
    closed_form: Optional[ClosedFormReport] = None
    timing: Dict[str, float] = field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        return 3 if self.status == STATUS_NOT_SCHOTTKY else 0


@dataclass(frozen=True)
class SweepRow:
    D: int
    N: int
    p: int
    status: str
    t: Optional[int] = None
    c: Optional[Tuple[int, int, int]] = None
    genus: Optional[int] = None
    genus_plus: Optional[int] = None
    exit_code: int = 0


class _Stopwatch:
    def __init__(self, timing: Dict[str, float]):
        self.timing = timing
        self.last = time.perf_counter()

    def lap(self, stage: str) -> None:
        now = time.perf_counter()
        self.timing[stage] = round(now - self.last, 6)
        self.last = now


def run(D: int, N: int, p: int, precision: int = 1, xi_override: Optional[Quaternion] = None) -> RunReport:
    if precision < 1:
        raise ValueError(f"precision must be positive, got {precision}")
    timing = {}
    watch = _Stopwatch(timing)

    O = order_lookup(D, N)
    check_admissible(D, N, p)
    alg = O.algebra

    if xi_override is not None:
        if xi_override.is_zero() or not is_member(xi_override, O):
            raise InvariantError(f"--xi {format_quaternion(xi_override)} is not a nonzero element of the order")
        if not right_unit_property(O, xi_override):
            logging.warning(f"xi = {format_quaternion(xi_override)} does not satisfy the right-unit property")
        xi = xi_override
    else:
        xi = choose_xi(O)
    watch.lap('choose_xi')

    gs = represent_prime(O, xi, p)
    watch.lap('represent_prime')

    generators = []
    for index, gamma in enumerate(gs.impure_reps, start=1):
        attracting, repelling = fixed_point_reductions(gamma, alg, p)
        generators.append(GeneratorRecord(index=index, quaternion=gamma, matrix=phi_p(gamma, alg, p, precision),
                                          attracting=attracting, repelling=repelling))
    watch.lap('embedding')

    report = RunReport(D=D, N=N, p=p, precision=precision, xi=xi, sqrt_a=sqrt_hensel(alg.a, p, precision),
                       unit_order=O.unit_group_order, generator_set=gs, generators=generators, timing=timing)

    if not two_in_ideal(O, xi):
        logging.warning("2 is not in xiO: the Schottky stage is skipped")
        report.status = STATUS_COUNTING_ONLY
        return report
    if gs.t:
        logging.warning(f"t_xi({p}) = {2 * gs.t}: pure generators present, graph stages skipped")
        report.status = STATUS_NOT_SCHOTTKY
        return report

    report.rank = schottky_rank(gs)
    report.pairing = schottky_pairing(gs, alg)
    report.domain = good_fundamental_domain(report.pairing)
    watch.lap('pairing')

    U = unit_group(O)
    report.mumford = mumford_graph(report.pairing)
    report.quotient = quotient_by_units(report.pairing, U, alg)
    report.plus = plus_cover(report.quotient)
    watch.lap('graphs')

    report.closed_form = closed_form_report(D, N, p, elements=gs.all_elements)
    watch.lap('formulas')

    check_identities(report)
    return report


def check_identities(report: RunReport) -> None:
    """Cross-module identities every complete run must satisfy"""
    cf = report.closed_form
    checks = [
        (report.mumford.betti_number() == report.rank, f"rose has {report.mumford.betti_number()} petals, rank is {report.rank}"),
        (report.quotient.c_vector() == cf.c, f"measured c = {report.quotient.c_vector()}, closed form {cf.c}"),
        (report.quotient.star_sum('v0') == report.p + 1, "star formula"),
        (report.quotient.betti_number() == cf.genus_gamma_p, f"quotient genus {report.quotient.betti_number()} != {cf.genus_gamma_p}"),
        (report.plus.betti_number() == cf.genus_plus, f"plus-cover genus {report.plus.betti_number()} != {cf.genus_plus}"),
        (report.plus.c_vector() == tuple(2 * c for c in cf.c), "plus-cover lengths are not doubled"),
    ]
    for ok, message in checks:
        if not ok:
            logging.error(f"(D,N,p)=({report.D},{report.N},{report.p}): {message}")
            raise InvariantError(message)


# --- serialisation ------------------------------------------------------------------

def _points(points: Sequence[ProjPoint]) -> List[str]:
    return [str(x) for x in points]


def _coords(q: Quaternion) -> List[str]:
    return [str(c) for c in q.coords]


def _graph_json(graph: LengthGraph) -> dict:
    return {
        'name': graph.name,
        'vertices': dict(graph.vertices),
        'edges': [
            {
                'points': _points(e.points),
                'length': e.length,
                'kind': e.kind,
                'source': e.source,
                'target': e.target,
                'reverse': e.reverse,
            }
            for e in graph.edges
        ],
        'length_counts': graph.length_counts(),
        'betti': graph.betti_number(),
        'aller_retour': [{'points': _points(e.points), 'length': e.length} for e in graph.aller_retour()],
        'loops': [{'points': _points(points), 'length': length} for points, length in graph.loops()],
    }


def report_to_dict(report: RunReport, include_timing: bool = False) -> dict:
    gs = report.generator_set
    data = {
        'inputs': {'D': report.D, 'N': report.N, 'p': report.p, 'precision': report.precision},
        'status': report.status,
        'xi': {
            'coords': _coords(report.xi),
            'text': format_quaternion(report.xi),
            'norm': str(norm(report.xi, order_lookup(report.D, report.N).algebra)),
        },
        'sqrt_a': str(report.sqrt_a),
        'unit_order': report.unit_order,
        'counts': {'representations': len(gs.all_elements), 's': gs.s, 't': gs.t, 'rank': report.rank},
        'generators': [
            {
                'index': g.index,
                'quaternion': _coords(g.quaternion),
                'text': format_quaternion(g.quaternion),
                'matrix': [[str(x) for x in row] for row in g.matrix.entries],
                'attracting': str(g.attracting),
                'repelling': str(g.repelling),
            }
            for g in report.generators
        ],
        'pure_generators': [format_quaternion(q) for q in gs.pure_reps],
        'pairing': None,
        'fundamental_domain': None,
        'unit_classes': None,
        'graphs': None,
        'closed_forms': None,
    }

    if report.status == STATUS_OK:
        data['pairing'] = [_points(pair) for pair in report.pairing.unordered_pairs()]
        data['fundamental_domain'] = {
            'radius': report.domain.radius,
            'balls': [{'center': str(b.center), 'generator': b.generator, 'role': b.role} for b in report.domain.balls],
        }
        data['unit_classes'] = [_points(e.points) for e in report.quotient.edges]
        data['graphs'] = {
            'mumford': _graph_json(report.mumford),
            'quotient': _graph_json(report.quotient),
            'plus': _graph_json(report.plus),
        }
        cf = report.closed_form
        data['closed_forms'] = {
            'c': list(cf.c),
            'genus': cf.genus_gamma_p,
            'genus_plus': cf.genus_plus,
            'delta': cf.delta,
            'w_terms': dict(sorted(cf.w_terms.items())),
        }

    if include_timing:
        data['timing'] = dict(report.timing)
    return data


def dot_edges(graph: LengthGraph) -> List[dict]:
    """One entry per unoriented edge; aller-retour edges appear once with dir=both"""
    edges = []
    for i, e in enumerate(graph.edges):
        if e.reverse < i:
            continue
        points = tuple(sorted(set(e.points) | set(graph.edges[e.reverse].points)))
        edges.append({
            'source': e.source,
            'target': e.target,
            'length': e.length,
            'kind': e.kind,
            'both': e.kind == ALLER_RETOUR,
            'label': '{' + ','.join(_points(points)) + '}',
        })
    return edges


def render_dot(report: RunReport) -> str:
    env = Environment(loader=FileSystemLoader(TEMPLATE_DIR), trim_blocks=True, lstrip_blocks=True)
    template = env.get_template('reduction_graph.dot.j2')
    graphs = []
    for graph in (report.mumford, report.quotient, report.plus):
        if graph is not None:
            graphs.append({'name': graph.name, 'vertices': graph.vertices, 'edges': dot_edges(graph)})
    return template.render(D=report.D, N=report.N, p=report.p, graphs=graphs)


def emit(report: RunReport, fmt: str = 'json', include_timing: bool = False) -> bytes:
    if fmt == 'json':
        text = json.dumps(report_to_dict(report, include_timing), indent=2) + "\n"
    elif fmt == 'dot':
        text = render_dot(report)
    else:
        raise ValueError(f"Unknown format '{fmt}' (expected json or dot)")
    return text.encode('utf-8')


# --- sweep -------------------------------------------------------------------------

def _sweep_one(task: Tuple[int, int, int]) -> SweepRow:
    D, N, p = task
    try:
        report = run(D, N, p, precision=1)
    except ShimuraError as e:
        logging.error(f"Sweep (D,N,p)=({D},{N},{p}) failed: {e}")
        return SweepRow(D=D, N=N, p=p, status=f"failed: {e}", exit_code=e.exit_code)

    if report.status != STATUS_OK:
        return SweepRow(D=D, N=N, p=p, status=report.status, t=report.generator_set.t)
    cf = report.closed_form
    return SweepRow(D=D, N=N, p=p, status=STATUS_OK, t=0, c=cf.c, genus=cf.genus_gamma_p, genus_plus=cf.genus_plus)


def sweep(pmax: int, families: Optional[Sequence[Tuple[int, int]]] = None, workers: int = 1,
          progress: bool = True) -> List[SweepRow]:
    """Full pipeline for every family and every admissible p <= pmax"""
    families = list(families or FAMILIES)
    tasks = [(D, N, p) for D, N in families for p in admissible_primes(D, N, pmax)]
    logging.info(f"Sweep: {len(tasks)} runs over {len(families)} families, pmax={pmax}, workers={workers}")

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            rows = list(tqdm(executor.map(_sweep_one, tasks), total=len(tasks), disable=not progress))
    else:
        rows = [_sweep_one(task) for task in tqdm(tasks, disable=not progress)]
    return sorted(rows, key=lambda r: (r.D, r.N, r.p))


def sweep_exit_code(rows: Sequence[SweepRow]) -> int:
    return 5 if any(r.status.startswith('failed') for r in rows) else 0


def sweep_to_bytes(rows: Sequence[SweepRow]) -> bytes:
    payload = [
        {'D': r.D, 'N': r.N, 'p': r.p, 'status': r.status, 't': r.t,
         'c': list(r.c) if r.c else None, 'genus': r.genus, 'genus_plus': r.genus_plus}
        for r in rows
    ]
    return (json.dumps(payload, indent=2) + "\n").encode('utf-8')


# --- entry point ---------------------------------------------------------------------

def _write(data: bytes, out: Optional[str]) -> None:
    if out:
        with open(out, 'wb') as f:
            f.write(data)
        print(f"✅ Saved to {out}", file=sys.stderr)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = argparse.ArgumentParser(description='Schottky generators and reduction-graphs of Shimura curves X(Dp, N)')
    parser.add_argument('--D', type=int, help='Discriminant of the definite algebra (2, 3, 5, 7 or 13)')
    parser.add_argument('--N', type=int, help='Level of the Eichler order')
    parser.add_argument('--p', type=int, help='Odd prime p not dividing DN with (a/p) = 1')
    parser.add_argument('--xi', type=str, help='Override xi as "c0,c1,c2,c3" in {1,i,j,k} coordinates')
    parser.add_argument('--precision', type=int, help='p-adic precision k for generator matrices (default from config)')
    parser.add_argument('--format', choices=['json', 'dot'], help='Output format (default from config)')
    parser.add_argument('--sweep', type=int, nargs='?', const=0, metavar='PMAX',
                        help='Run every family for all admissible p <= PMAX (default pmax from config)')
    parser.add_argument('--workers', type=int, help='Worker processes for --sweep')
    parser.add_argument('--out', type=str, help='Write output to this file instead of stdout')
    parser.add_argument('--timing', action='store_true', help='Include per-stage timings in the JSON report')
    parser.add_argument('--config', type=str, help='Path to an alternative settings.yaml')
    args = parser.parse_args(argv)

    config = load_config(args.config)
    level = config.get('logging', {}).get('level', 'WARNING')
    logging.basicConfig(level=getattr(logging, str(level).upper(), logging.WARNING),
                        format='%(asctime)s %(levelname)s %(message)s')

    if args.sweep is not None:
        sweep_config = config.get('sweep', {})
        pmax = args.sweep if args.sweep else sweep_config.get('pmax', 200)
        workers = args.workers if args.workers is not None else sweep_config.get('workers', 1)
        print(f"🚀 Sweeping all families, p <= {pmax}...", file=sys.stderr)
        rows = sweep(pmax, workers=workers)
        _write(sweep_to_bytes(rows), args.out)
        code = sweep_exit_code(rows)
        failed = sum(1 for r in rows if r.status.startswith('failed'))
        if code:
            print(f"❌ {failed} of {len(rows)} runs failed", file=sys.stderr)
        else:
            print(f"✅ {len(rows)} runs, all identities hold", file=sys.stderr)
        return code

    if args.D is None or args.N is None or args.p is None:
        parser.error('--D, --N and --p are required unless --sweep is given')

    precision = args.precision if args.precision is not None else config.get('embedding', {}).get('precision', 6)
    fmt = args.format if args.format is not None else config.get('output', {}).get('format', 'json')

    try:
        xi = parse_quaternion(args.xi) if args.xi else None
        report = run(args.D, args.N, args.p, precision=precision, xi_override=xi)
        _write(emit(report, fmt, include_timing=args.timing), args.out)
    except ShimuraError as e:
        print(f"❌ {type(e).__name__}: {e}", file=sys.stderr)
        return e.exit_code
    except ValueError as e:
        print(f"❌ Input Error: {e}", file=sys.stderr)
        return 5

    if report.status == STATUS_NOT_SCHOTTKY:
        print(f"⚠️ Not Schottky: t = {report.generator_set.t} pure generators", file=sys.stderr)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
