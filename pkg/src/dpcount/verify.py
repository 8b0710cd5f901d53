"""Self-verification suites: classical values, relation consistency, symmetry.

Every suite returns (ok, lines); the CLI prints the lines and turns ok into
an exit code, the acceptance tests assert on it directly.
"""

from __future__ import annotations

import random
from itertools import combinations, product

from .cusp import blowup_invariance_check, c_beta
from .gw import GWEngine
from .lattice import DivisorClass, canonical_form, cremona_image, delta

# Plane curve counts: rational degree-d curves through 3d - 1 points.
PLANE_RATIONAL_COUNTS = {
    1: 1,
    2: 1,
    3: 12,
    4: 620,
    5: 87304,
    6: 26312976,
    7: 14616808192,
}

# Plane cuspidal counts: rational degree-d curves through 3d - 2 points with a cusp.
PLANE_CUSPIDAL_COUNTS = {2: 0, 3: 24, 4: 2304, 5: 435168}


def classical_suite(engine: GWEngine) -> tuple[bool, list[str]]:
    """Plane counts for d <= 7 and plane cuspidal counts for d <= 5."""
    lines = []
    ok = True
    for d, expected in sorted(PLANE_RATIONAL_COUNTS.items()):
        got = engine.n_beta(DivisorClass(d, ()))
        good = got == expected
        ok &= good
        lines.append(f"N({d}L) = {got} expected {expected}: {'ok' if good else 'FAIL'}")
    for d, expected in sorted(PLANE_CUSPIDAL_COUNTS.items()):
        got = c_beta(engine, DivisorClass(d, ())).value
        good = got == expected
        ok &= good
        lines.append(f"C({d}L) = {got} expected {expected}: {'ok' if good else 'FAIL'}")
    return ok, lines


def random_classes(
    rng: random.Random,
    count: int,
    k_max: int = 4,
    delta_max: int = 10,
    require_nonvanishing: bool = True,
    engine: GWEngine | None = None,
) -> list[DivisorClass]:
    """Deterministic sample of admissible classes (m_i >= 0, 1 <= delta <= delta_max)."""
    probe = engine or GWEngine()
    out: list[DivisorClass] = []
    attempts = 0
    while len(out) < count and attempts < 100000:
        attempts += 1
        k = rng.randint(0, k_max)
        d = rng.randint(1, 6)
        m = tuple(rng.randint(0, d) for _ in range(k))
        beta = DivisorClass(d, m)
        if not 1 <= delta(beta) <= delta_max:
            continue
        if require_nonvanishing and probe.quick_vanishing(canonical_form(beta)):
            continue
        out.append(beta)
    if len(out) < count:
        raise RuntimeError("random class sampler exhausted its attempt budget")
    return out


def consistency_suite(
    engine: GWEngine,
    samples: int = 200,
    seed: int = 0,
    k_max: int = 4,
    delta_max: int = 10,
    pool_size: int | None = None,
) -> tuple[bool, list[str]]:
    """All nondegenerate pool relations must imply the same count, class by class."""
    rng = random.Random(seed)
    classes = random_classes(rng, samples, k_max=k_max, delta_max=delta_max, engine=engine)
    lines = []
    ok = True
    for beta in classes:
        report = engine.consistency_check(beta, pool_size=pool_size)
        if report.consistent:
            continue
        ok = False
        for bad in report.disagreements()[:3]:
            lines.append(
                f"FAIL {beta}: {bad.name}{tuple(str(x) for x in bad.divisors)} implies "
                f"{bad.implied_value}, engine value {report.value}"
            )
    lines.append(
        f"consistency: {samples} classes, "
        f"{'all relations agree' if ok else 'DISAGREEMENTS FOUND'}"
    )
    return ok, lines


def symmetry_suite(
    engine: GWEngine, samples: int = 100, seed: int = 1, shuffles: int = 4
) -> tuple[bool, list[str]]:
    """Counts are invariant under permutations of the multiplicity entries."""
    rng = random.Random(seed)
    classes = random_classes(rng, samples, engine=engine)
    lines = []
    ok = True
    for beta in classes:
        n_ref = engine.n_beta(beta)
        c_ref = c_beta(engine, beta).value
        for _ in range(shuffles):
            perm = list(beta.m)
            rng.shuffle(perm)
            shuffled = DivisorClass(beta.d, tuple(perm))
            if engine.n_beta(shuffled) != n_ref or c_beta(engine, shuffled).value != c_ref:
                ok = False
                lines.append(f"FAIL {beta} vs {shuffled}: counts differ under permutation")
    lines.append(f"symmetry: {samples} classes x {shuffles} shuffles, {'ok' if ok else 'FAIL'}")
    return ok, lines


def blowup_suite(
    engine: GWEngine, d_max: int = 5, k_max: int = 3, max_ones: int = 3
) -> tuple[bool, list[str]]:
    """Counts with 0/1 multiplicities match the plane count of the same degree."""
    lines = []
    ok = True
    checked = 0
    for d in range(2, d_max + 1):
        for k in range(1, k_max + 1):
            for ones in range(0, min(max_ones, k) + 1):
                for positions in combinations(range(k), ones):
                    pattern = tuple(1 if i in positions else 0 for i in range(k))
                    checked += 1
                    if not blowup_invariance_check(engine, d, pattern):
                        ok = False
                        lines.append(f"FAIL d={d} pattern={pattern}")
    lines.append(f"blow-up invariance: {checked} cases, {'ok' if ok else 'FAIL'}")
    return ok, lines


def cremona_suite(engine: GWEngine, ks: tuple[int, ...] = (3, 4), d_max: int = 4) -> tuple[bool, list[str]]:
    """Extended check: counts are preserved by the quadratic transform.

    Mismatches are reported for investigation; callers decide whether they gate.
    """
    lines = []
    ok = True
    checked = 0
    for k in ks:
        for d in range(1, d_max + 1):
            for m in product(range(0, d + 1), repeat=k):
                beta = DivisorClass(d, m)
                image = cremona_image(beta)
                if engine.quick_vanishing(canonical_form(beta)):
                    continue
                if engine.quick_vanishing(canonical_form(image)):
                    continue
                checked += 1
                if engine.n_beta(beta) != engine.n_beta(image):
                    ok = False
                    lines.append(
                        f"FLAG {beta} -> {image}: "
                        f"{engine.n_beta(beta)} != {engine.n_beta(image)}"
                    )
    lines.append(f"cremona invariance: {checked} cases, {'ok' if ok else 'MISMATCHES FLAGGED'}")
    return ok, lines


SUITES = {
    "classical": classical_suite,
    "consistency": consistency_suite,
    "symmetry": symmetry_suite,
    "blowup": blowup_suite,
    "cremona": cremona_suite,
}
