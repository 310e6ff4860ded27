"""Regression harness: every verification bundled into one reproducible report.

Sections are keyed by the number of the property they establish; each returns
plain check lists so they can run in worker processes and be merged by id.
"""

from __future__ import annotations

import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from pathlib import Path

from .affine import affine_diagram
from .chars import ClassFunction
from .elliptic import (
    O2_CLASSES,
    O2_FLIP,
    compact_pair_classes_typeA,
    affine_finite_order_classes,
    affine_elliptic_count,
    ell_basis_checks,
    elliptic_classes_wreath,
    elliptic_pairing,
    gram_rank_check,
    linear_delta,
    mackey_comparison_cases,
    mackey_elliptic_checks,
    o2_oracle,
    permutation_delta,
    pgl_rotation_oracle,
    pgl_unipotent_strata,
    rectangular_shape,
    reflection_delta,
    signed_permutation_delta,
    trivial_delta,
    wreath_checks,
    wreath_group,
    wreath_sum_zero_delta,
    y_ell,
)
from .errors import SizeLimitExceeded
from .exactnum import CycNum, euler_phi, root_of_unity
from .fourier import ft_matrix, verify_flip_group
from .groups import cyclic, elementary_abelian_2, signed_permutation, symmetric, trivial_group
from .padic import classes_by_twist, oracle_checks, smax, verify_pgl, verify_sl, verify_sp4
from .report import SKIPPED, Check, Report, make_check


@dataclass(frozen=True)
class Caps:
    """Size limits; the defaults cover the full acceptance range."""

    ft_cyclic: int = 12
    ft_2rank: int = 4
    ft_symmetric: int = 5
    pgl_count: int = 12
    affine: int = 12
    sl: int = 10
    sl_oracle: int = 6
    steinberg: int = 6
    brute_limit: int = 10**5

    def __post_init__(self) -> None:
        for f in fields(self):
            if getattr(self, f.name) < 1:
                raise ValueError(f"cap {f.name} must be positive")


DEFAULT_CAPS = Caps()


def skipped(check_id: str, description: str, topic: str, reason: str) -> Check:
    return Check(check_id, description, topic, SKIPPED, scalar=reason)


def _range(default: int, cap: int, start: int = 1) -> list[tuple[int, bool]]:
    """Values start..max(default, cap) paired with whether they are within the cap."""
    return [(n, n <= cap) for n in range(start, max(default, cap) + 1)]


def _ft_groups(caps: Caps) -> list[tuple[str, object]]:
    out = []
    for n, ok in _range(DEFAULT_CAPS.ft_cyclic, caps.ft_cyclic):
        out.append((f"Z{n}", cyclic(n) if ok else None))
    for k, ok in _range(DEFAULT_CAPS.ft_2rank, caps.ft_2rank):
        out.append((f"Z2^{k}", elementary_abelian_2(k) if ok else None))
    for n, ok in _range(DEFAULT_CAPS.ft_symmetric, caps.ft_symmetric, 3):
        out.append((f"S{n}", symmetric(n) if ok else None))
    return out


def section_ft(caps: Caps, seed: int) -> list[Check]:
    checks = []
    for name, g in _ft_groups(caps):
        tag = f"c01.ft.{name}"
        if g is None:
            checks.append(skipped(tag, "FT square and unitarity", "Fourier matrix", "size cap"))
            continue
        ft = ft_matrix(g)
        checks.append(make_check(f"{tag}.square", "FT squared is the identity", "Fourier matrix", ft.squared_is_identity()))
        checks.append(make_check(f"{tag}.unitary", "FT rows are orthonormal", "Fourier matrix", ft.is_unitary()))
    return checks


def section_flip(caps: Caps, seed: int) -> list[Check]:
    checks = []
    for name, g in _ft_groups(caps):
        tag = f"c02.flip.{name}"
        if g is None:
            checks.append(skipped(tag, "FT swaps the pair combinations", "flip", "size cap"))
        else:
            checks.extend(verify_flip_group(g, prefix=tag))
    return checks


def section_pairs(caps: Caps, seed: int) -> list[Check]:
    topic = "elliptic pairs"
    checks = []
    for n, ok in _range(DEFAULT_CAPS.pgl_count, caps.pgl_count):
        tag = f"c03.pgl.n{n:02d}"
        if not ok:
            checks.append(skipped(tag, "elliptic pair counts for PGL_n", topic, "size cap"))
            continue
        total = 0
        for lam, pairs in pgl_unipotent_strata(n).items():
            shape = rectangular_shape(lam)
            want = euler_phi(shape[0]) if shape else 0
            got = len(pairs.classes)
            total += got
            name = "-".join(map(str, lam))
            checks.append(make_check(f"{tag}.u{name}", "phi(d) classes on a d x m stratum, none otherwise", topic, got == want, got, want))
            checks.append(make_check(f"{tag}.u{name}.flip", "flip is an involution", topic, pairs.flip_is_involution()))
        checks.append(make_check(f"{tag}.total", "strata counts sum to n", topic, total == n, total, n))
        regular = len(y_ell(f"PGL({n})").classes)
        oracle = pgl_rotation_oracle(n)
        checks.append(make_check(f"{tag}.regular", "regular-s classes match rotation determinants", topic, regular == oracle, regular, oracle))
        for d in range(1, n + 1):
            if n % d:
                continue
            m = n // d
            checks.extend(_prefix("c03.", wreath_checks(m, d, caps.brute_limit)))
            size = math.factorial(m) ** d * d
            if caps.brute_limit < size <= DEFAULT_CAPS.brute_limit:
                checks.append(skipped(f"c03.wreath.m{m}.d{d}.bruteforce", "element-level determinant scan", "wreath elliptic classes", "size cap"))
    o2 = y_ell("O2")
    got = sorted((c.s_label, c.h_label) for c in o2.classes)
    checks.append(make_check("c03.o2.classes", "O_2 has the six listed classes", topic, got == sorted(O2_CLASSES), got, sorted(O2_CLASSES)))
    flip = {(a.s_label, a.h_label): (b.s_label, b.h_label) for a, b in o2.flip.items()}
    checks.append(make_check("c03.o2.flip", "O_2 flip matches the listed pairing", topic, flip == O2_FLIP))
    for c in o2_oracle():
        c.check_id = "c03." + c.check_id
        checks.append(c)
    return checks


def section_affine(caps: Caps, seed: int) -> list[Check]:
    topic = "affine elliptic classes"
    checks = []
    for n, ok in _range(DEFAULT_CAPS.affine, caps.affine, 2):
        tag = f"c04.affine.n{n:02d}"
        if not ok:
            checks.append(skipped(tag, "affine elliptic count", topic, "size cap"))
            continue
        diagram = affine_diagram("A", n - 1)
        total, _ = affine_elliptic_count(diagram)
        checks.append(make_check(f"{tag}.count", "elliptic classes of the affine Weyl group number n", topic, total == n, total, n))
        if n <= 5:
            brute, _ = affine_elliptic_count(diagram, brute_force=True)
            checks.append(make_check(f"{tag}.bruteforce", "matrix enumeration of each parahoric agrees", topic, brute == n, brute, n))
        phis = sum(euler_phi(d) for d in range(1, n + 1) if n % d == 0)
        checks.append(make_check(f"{tag}.phi", "sum of phi(d) over divisors is n", topic, phis == n, phis, n))
        ws = sum(len(elliptic_classes_wreath(n // d, d)) for d in range(1, n + 1) if n % d == 0)
        checks.append(make_check(f"{tag}.ws", "wreath-side elliptic classes total n", topic, ws == n, ws, n))
    for n in range(1, 5):
        got = len(compact_pair_classes_typeA(n))
        for box in (2, 3):
            oracle = affine_finite_order_classes(n, box)
            checks.append(
                make_check(f"c04.compact.n{n}.box{box}", "compact pair classes match finite-order affine classes", topic, got == oracle, got, oracle)
            )
    return checks


def section_sl(caps: Caps, seed: int) -> list[Check]:
    checks = []
    for n, ok in _range(DEFAULT_CAPS.sl, caps.sl):
        if ok:
            checks.extend(_prefix("c05.", verify_sl(n).checks))
        else:
            checks.append(skipped(f"c05.sl.n{n:02d}", "restriction identity for SL_n", "SL_n restriction", "size cap"))
    for n, ok in _range(DEFAULT_CAPS.sl_oracle, caps.sl_oracle, 2):
        if ok:
            checks.extend(_prefix("c05.", oracle_checks(n)))
        else:
            checks.append(skipped(f"c05.sl-oracle.n{n}", "affine induction oracle", "SL_n restriction", "size cap"))
    return checks


def section_steinberg(caps: Caps, seed: int) -> list[Check]:
    checks = []
    for n, ok in _range(DEFAULT_CAPS.steinberg, caps.steinberg, 2):
        if ok:
            checks.extend(_prefix("c06.", verify_pgl(n).checks))
        else:
            checks.append(skipped(f"c06.pgl.n{n}", "Steinberg restriction identity", "Steinberg family", "size cap"))
    return checks


def section_sp4(caps: Caps, seed: int, golden: str | None = None) -> list[Check]:
    return _prefix("c07.", verify_sp4(directory=Path(golden) if golden else None).checks)


# (type, rank, isogeny) -> sorted (|A|, quotient type) pairs
SMAX_REGRESSION: dict[tuple[str, int, str], list[tuple[int, tuple[str, ...]]]] = {
    ("B", 2, "adjoint"): [(1, ("B2",)), (2, ("A1",)), (2, ("A1", "A1"))],
    ("C", 2, "sc"): [(1, ("C1", "C1")), (1, ("C2",)), (1, ("C2",))],
    ("C", 2, "adjoint"): [(1, ("C2",)), (2, ("A1",)), (2, ("C1", "C1"))],
}


def _type_a_regression(n: int) -> list[tuple[int, tuple[str, ...]]]:
    out = []
    for m in range(1, n + 1):
        if n % m == 0:
            k = n // m
            out.append((m, (f"A{k - 1}",) * m if k > 1 else ()))
    return sorted(out)


def section_smax(caps: Caps, seed: int) -> list[Check]:
    topic = "maximal compact classes"
    checks = []
    cases = {("A", n - 1, "adjoint"): _type_a_regression(n) for n in range(2, 7)}
    cases.update(SMAX_REGRESSION)
    for (kind, rank_, iso), want in cases.items():
        diagram = affine_diagram(kind, rank_, iso)
        got = sorted((c.a_order, c.quotient_type) for c in smax(diagram))
        checks.append(
            make_check(f"c08.smax.{kind}{rank_}.{iso}", "classes and quotient types match the encoded list", topic, got == want, got, want)
        )
    by_twist = classes_by_twist(affine_diagram("A", 1))
    counts = sorted(len(v) for v in by_twist.values())
    checks.append(make_check("c08.smax.pgl2.twists", "PGL_2 twists see two and one classes", topic, counts == [1, 2], counts, [1, 2]))
    return checks


def _deltas(caps: Caps) -> list[tuple[str, object]]:
    out: list[tuple[str, object]] = [("trivial-group", trivial_delta(trivial_group()))]
    for n in range(2, 7):
        out.append((f"S{n}.reflection", reflection_delta(symmetric(n))))
        out.append((f"S{n}.trivial", trivial_delta(symmetric(n))))
    for n in range(2, 4):
        out.append((f"B{n}.signed", signed_permutation_delta(signed_permutation(n))))
    for n in range(1, max(DEFAULT_CAPS.pgl_count, caps.pgl_count) + 1):
        g = cyclic(n)
        out.append((f"Z{n}.rotation", permutation_delta(g, lambda x, g=g, n=n: tuple((i + x[0]) % n for i in range(n)))))
    z2 = cyclic(2)
    out.append(("Z2.sign", linear_delta(lambda x: CycNum(-1) ** x[0], z2)))
    e2 = elementary_abelian_2(2)
    out.append(("Z2^2.sign1", linear_delta(lambda x: CycNum(-1) ** x[0], e2)))
    for m in range(1, 5):
        for d in range(1, 5):
            if math.factorial(m) ** d * d <= min(caps.brute_limit, 2000):
                out.append((f"wreath.m{m}.d{d}", wreath_sum_zero_delta(wreath_group(m, d))))
    for name, _, _, delta in mackey_comparison_cases():
        out.append((f"mackey.{name}", delta))
    return out


def section_gram(caps: Caps, seed: int) -> list[Check]:
    checks = []
    for name, delta in _deltas(caps):
        try:
            checks.append(gram_rank_check(delta, f"c09.gram.{name}"))
        except SizeLimitExceeded:
            checks.append(skipped(f"c09.gram.{name}", "Gram rank", "elliptic quotient", "size cap"))
    z2 = cyclic(2)
    checks.extend(ell_basis_checks(z2, linear_delta(lambda x: CycNum(-1) ** x[0], z2), "c09.basis.Z2"))
    e2 = elementary_abelian_2(2)
    checks.extend(ell_basis_checks(e2, linear_delta(lambda x: CycNum(-1) ** (x[0] + x[1]), e2), "c09.basis.Z2^2"))
    # hermitian symmetry on random class functions, reproducible from the seed
    rng = random.Random(seed)
    s4 = symmetric(4)
    delta = reflection_delta(s4)
    for trial in range(5):
        f = ClassFunction(s4, tuple(root_of_unity(4, rng.randrange(4)) * rng.randint(-3, 3) for _ in range(s4.num_classes)))
        g = ClassFunction(s4, tuple(root_of_unity(3, rng.randrange(3)) * rng.randint(-3, 3) for _ in range(s4.num_classes)))
        a, b = elliptic_pairing(f, g, delta), elliptic_pairing(g, f, delta).conjugate()
        checks.append(make_check(f"c09.hermitian.{trial}", "elliptic pairing is hermitian", "elliptic quotient", a == b, a, b))
    return checks


def section_mackey(caps: Caps, seed: int) -> list[Check]:
    checks = []
    for name, group, normal, delta in mackey_comparison_cases():
        checks.extend(mackey_elliptic_checks(group, normal, delta, prefix=f"c10.mackey.{name}"))
    return checks


def _prefix(prefix: str, checks: list[Check]) -> list[Check]:
    for c in checks:
        c.check_id = prefix + c.check_id
    return checks


SECTIONS = {
    "c01-ft": section_ft,
    "c02-flip": section_flip,
    "c03-pairs": section_pairs,
    "c04-affine": section_affine,
    "c05-sl": section_sl,
    "c06-steinberg": section_steinberg,
    "c07-sp4": section_sp4,
    "c08-smax": section_smax,
    "c09-gram": section_gram,
    "c10-mackey": section_mackey,
}


def run_section(name: str, caps: Caps, seed: int, golden: str | None = None) -> tuple[str, list[Check], float]:
    start = time.perf_counter()
    fn = SECTIONS[name]
    checks = fn(caps, seed, golden) if name == "c07-sp4" else fn(caps, seed)
    return name, checks, time.perf_counter() - start


def regression_suite(
    caps: Caps = DEFAULT_CAPS,
    seed: int = 0,
    workers: int = 1,
    golden: str | None = None,
    timing: bool = False,
    sections: list[str] | None = None,
) -> Report:
    """Run the selected sections (all by default) and merge the checks in id order.

    Per-section timing goes to ``extra`` only on request, since it would make
    otherwise identical reports differ.
    """
    names = sections or list(SECTIONS)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_section, names, [caps] * len(names), [seed] * len(names), [golden] * len(names)))
    else:
        results = [run_section(n, caps, seed, golden) for n in names]
    report = Report()
    for _, checks, _ in results:
        report.add(checks)
    report.checks = report.sorted_checks()
    report.extra["caps"] = asdict(caps)
    report.extra["seed"] = seed
    if timing:
        report.extra["timing_seconds"] = {name: round(t, 3) for name, _, t in results}
    return report
