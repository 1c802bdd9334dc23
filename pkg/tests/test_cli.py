import json
import os
import tempfile
import unittest

from src.cli import (
    STATUS_OK,
    emit,
    main,
    report_to_dict,
    run,
    sweep,
    sweep_exit_code,
    sweep_to_bytes,
)
from src.quaternion_core import FAMILIES

SLOW = os.getenv('SHIMURA_SLOW_TESTS') == '1'

GOLDEN = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'golden', 'session_3_2_13.json')


class TestGoldenSession(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.report = run(3, 2, 13, precision=1)

    def test_golden_bytes(self):
        with open(GOLDEN, 'rb') as f:
            expected = f.read()
        self.assertEqual(emit(self.report, 'json'), expected)

    def test_deterministic(self):
        self.assertEqual(emit(run(3, 2, 13, precision=1), 'json'), emit(self.report, 'json'))

    def test_report_fields(self):
        self.assertEqual(self.report.status, STATUS_OK)
        self.assertEqual(self.report.exit_code, 0)
        self.assertEqual(self.report.rank, 7)
        self.assertEqual(self.report.sqrt_a, 5)
        self.assertEqual(len(self.report.generators), 7)

    def test_timing_only_on_request(self):
        self.assertNotIn('timing', report_to_dict(self.report))
        timing = report_to_dict(self.report, include_timing=True)['timing']
        self.assertEqual(list(timing), ['choose_xi', 'represent_prime', 'embedding', 'pairing', 'graphs', 'formulas'])

    def test_dot(self):
        text = emit(self.report, 'dot').decode('utf-8')
        for name in ('mumford', 'quotient', 'plus'):
            self.assertIn(f"digraph {name} {{", text)
        # 7 petals, 3 loops + 2 aller-retour, 8 links
        self.assertEqual(text.count('->'), 20)
        self.assertEqual(text.count('dir=both'), 2)
        self.assertIn('label="{0:1,6:1,8:1,1:0}"', text)

    def test_unknown_format(self):
        with self.assertRaises(ValueError):
            emit(self.report, 'xml')

    def test_higher_precision(self):
        report = run(3, 2, 13, precision=2)
        self.assertEqual(report.sqrt_a, 70)
        self.assertEqual(report.generators[0].matrix.reduce(), ((12, 12), (3, 3)))


class TestMain(unittest.TestCase):
    def test_exit_codes(self):
        self.assertEqual(main(['--D', '7', '--N', '1', '--p', '11']), 4)
        self.assertEqual(main(['--D', '11', '--N', '1', '--p', '13']), 4)
        self.assertEqual(main(['--D', '3', '--N', '2', '--p', '7']), 2)
        self.assertEqual(main(['--D', '3', '--N', '2', '--p', '3']), 2)

    def test_out_file_matches_golden(self):
        with tempfile.TemporaryDirectory() as tmp:
            out = os.path.join(tmp, 'report.json')
            code = main(['--D', '3', '--N', '2', '--p', '13', '--precision', '1', '--out', out])
            self.assertEqual(code, 0)
            with open(out, 'rb') as f, open(GOLDEN, 'rb') as g:
                self.assertEqual(f.read(), g.read())

    def test_dot_out(self):
        with tempfile.TemporaryDirectory() as tmp:
            out = os.path.join(tmp, 'graphs.dot')
            self.assertEqual(main(['--D', '3', '--N', '2', '--p', '13', '--format', 'dot', '--out', out]), 0)
            with open(out, 'r', encoding='utf-8') as f:
                self.assertIn('digraph quotient', f.read())

    def test_bad_xi(self):
        self.assertEqual(main(['--D', '3', '--N', '2', '--p', '13', '--xi', '1,2,3']), 5)

    def test_zero_precision_is_rejected(self):
        self.assertEqual(main(['--D', '3', '--N', '2', '--p', '13', '--precision', '0']), 5)


class TestSweep(unittest.TestCase):
    def test_small_sweep(self):
        rows = sweep(30, families=[(3, 2)], progress=False)
        self.assertEqual([r.p for r in rows], [5, 13, 17, 29])
        self.assertEqual(sweep_exit_code(rows), 0)
        row13 = rows[1]
        self.assertEqual((row13.status, row13.c, row13.genus, row13.genus_plus), (STATUS_OK, (6, 2, 0), 3, 7))

        payload = json.loads(sweep_to_bytes(rows))
        self.assertEqual(len(payload), 4)
        self.assertEqual(payload[1]['c'], [6, 2, 0])

    def test_trivial_unit_family(self):
        rows = sweep(40, families=[(2, 9)], progress=False)
        self.assertEqual(sweep_exit_code(rows), 0)
        for row in rows:
            if row.status == STATUS_OK:
                self.assertEqual(row.genus_plus, row.p)

    def test_every_family_up_to_60(self):
        rows = sweep(60, progress=False)
        self.assertEqual({(r.D, r.N) for r in rows}, set(FAMILIES))
        failed = [r for r in rows if r.status.startswith('failed')]
        self.assertEqual(failed, [])
        self.assertEqual(sweep_exit_code(rows), 0)

    @unittest.skipUnless(SLOW, "set SHIMURA_SLOW_TESTS=1")
    def test_every_family_up_to_200(self):
        rows = sweep(200, progress=False)
        failed = [r for r in rows if r.status.startswith('failed')]
        self.assertEqual(failed, [])
        self.assertEqual(sweep_exit_code(rows), 0)


if __name__ == '__main__':
    unittest.main()
