"""Acceptance criteria AC1 to AC7; each test prints one PASS/FAIL line."""

import math
import time
from collections import Counter

import numpy as np

from imagepers.algebra import InvariantError
from imagepers.oracle import image_barcode_oracle
from imagepers.pipeline import compute_image_barcode, compute_image_barcode_homology, compute_single_barcode

import helpers
from helpers import report


def test_ac1_oracle_equivalence():
    rng = np.random.default_rng(2024)
    start = time.perf_counter()
    mismatches = []
    for i in range(200):
        n = int(rng.integers(3, 8))
        p = int(rng.choice([2, 3, 5]))
        pair = helpers.dominated_pair(rng, n, max_dim=2)
        if compute_image_barcode(pair, p) != image_barcode_oracle(pair, p=p):
            mismatches.append(i)
    elapsed = time.perf_counter() - start
    ok = not mismatches and elapsed < 60
    report("AC1", ok, f"200 instances, {len(mismatches)} mismatches, {elapsed:.1f} s")
    assert not mismatches
    assert elapsed < 60


def test_ac2_identity_reduction():
    rng = np.random.default_rng(7)
    bad = 0
    for _ in range(50):
        pair = helpers.identical_pair(rng, 20, max_dim=2)
        if compute_image_barcode(pair) != compute_single_barcode(pair.dK, max_dim=2):
            bad += 1
    report("AC2", bad == 0, f"50 instances, {bad} differ")
    assert bad == 0


def test_ac3_optimization_invariance():
    rng = np.random.default_rng(11)
    differ, fired = 0, 0
    for _ in range(30):
        pair = helpers.dominated_pair(rng, 25, max_dim=2)
        results = []
        for clearing in (True, False):
            for shortcut in (True, False):
                stats = {}
                try:
                    results.append(compute_image_barcode(pair, clearing=clearing, shortcut=shortcut,
                                                         stats=stats))
                except InvariantError:
                    fired += 1
                    continue
                if clearing and any(s["S"].zero_columns for s in stats.values()):
                    fired += 1
        if any(r != results[0] for r in results):
            differ += 1
    ok = differ == 0 and fired == 0
    report("AC3", ok, f"30 instances, {differ} differ, invariant fired {fired} times")
    assert ok


def test_ac4_duality_paths():
    rng = np.random.default_rng(5)
    bad = 0
    for _ in range(30):
        n = int(rng.integers(3, 13))
        pair = helpers.dominated_pair(rng, n, max_dim=2)
        if compute_image_barcode(pair) != compute_image_barcode_homology(pair):
            bad += 1
    report("AC4", bad == 0, f"30 instances, {bad} differ")
    assert bad == 0


def test_ac5_square_on_circle():
    bc = compute_image_barcode(helpers.square_on_circle())
    one = bc.diagram(1)
    zero = sorted(bc.diagram(0))
    tol = 1e-9
    ok1 = len(one) == 1 and abs(one[0][0] - math.pi / 2) <= tol and abs(one[0][1] - 2) <= tol
    ok0 = (len(zero) == 4 and all(b == 0 for b, _ in zero) and zero[3][1] == math.inf
           and all(abs(d - math.sqrt(2)) <= tol for _, d in zero[:3]))
    report("AC5", ok1 and ok0, f"degree 1 {one}, degree 0 {zero}")
    assert ok1 and ok0


def _sub_multiset(a, b) -> bool:
    return not (Counter(a) - Counter(b))


def test_ac6_matching_structure():
    rng = np.random.default_rng(13)
    failures = []
    for i in range(50):
        n = int(rng.integers(5, 11))
        pair = helpers.dominated_pair(rng, n, max_dim=2)
        image = compute_image_barcode(pair)
        dom = compute_single_barcode(pair.dL, 2)
        cod = compute_single_barcode(pair.dK, 2)
        for d in range(3):
            ess_ok = (sorted(iv.birth for iv in image.essential(d))
                      == sorted(iv.birth for iv in dom.essential(d)))
            births_ok = _sub_multiset([iv.birth for iv in image.finite(d)],
                                      [iv.birth for iv in dom.in_degree(d)])
            deaths_ok = _sub_multiset([iv.death for iv in image.finite(d)],
                                      [iv.death for iv in cod.finite(d)])
            if not (ess_ok and births_ok and deaths_ok):
                failures.append((i, d))
    report("AC6", not failures, f"50 instances, failures {failures}")
    assert not failures


def test_ac7_sphere_runtime():
    rng = np.random.default_rng(96)
    pair = helpers.sphere_pair(rng, 96, max_dim=2)
    start = time.perf_counter()
    compute_image_barcode(pair)
    image_time = time.perf_counter() - start
    start = time.perf_counter()
    compute_single_barcode(pair.dK, max_dim=2)
    single_time = time.perf_counter() - start
    ratio = image_time / single_time
    ok = image_time < 60 and ratio <= 3
    report("AC7", ok, f"image {image_time:.1f} s, single {single_time:.1f} s, ratio {ratio:.2f}")
    assert image_time < 60
    assert ratio <= 3
