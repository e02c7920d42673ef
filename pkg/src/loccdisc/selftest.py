"""Acceptance checks runnable from pytest and from the CLI ``selftest`` command.

Each criterion is a function returning a CriterionResult; tolerances are
stated inline and are part of the contract.
"""

import itertools
import math
import time
from dataclasses import dataclass

import numpy as np

from . import bounds, locc, synth
from .ensembles import (
    bell_basis,
    bell_subset,
    mub_prime,
    random_orthogonal_me_triple,
    uniform_ensemble,
)
from .library import build_library
from .qstate import BipartiteState, transpose_identity_check


@dataclass(frozen=True)
class CriterionResult:
    name: str
    passed: bool
    detail: str
    elapsed_s: float


def _result(name, start, passed, detail) -> CriterionResult:
    return CriterionResult(name, passed, detail, time.perf_counter() - start)


def criterion_three_qutrit_end_to_end() -> CriterionResult:
    """200 seeded random orthogonal ME qutrit triples: synthesized success >= 1 - 1e-9."""
    start = time.perf_counter()
    worst = 1.0
    for seed in range(200):
        ens = random_orthogonal_me_triple(3, seed)
        spec = synth.synthesize_three_qutrit_protocol(ens)
        res = locc.evaluate(spec.as_protocol(), ens)
        worst = min(worst, res.success_probability)
    return _result(
        "three-qutrit-end-to-end",
        start,
        worst >= 1.0 - 1e-9,
        f"min success over 200 seeds = {worst:.12f}",
    )


def criterion_unbiased_bell_subsets() -> CriterionResult:
    """Bell subsets with k(k-1)/2 <= n for prime n in {3,5,7}: CUB synthesis succeeds.

    50 sampled subsets per dimension, every evaluated success >= 1 - 1e-9.
    """
    start = time.perf_counter()
    rng = np.random.default_rng(7)
    worst = 1.0
    count = 0
    for n in (3, 5, 7):
        k_max = max(k for k in range(2, n + 2) if k * (k - 1) // 2 <= n)
        labels_all = [(m, l) for m in range(n) for l in range(n)]
        for _ in range(50):
            k = int(rng.integers(2, k_max + 1))
            pick = rng.choice(len(labels_all), size=k, replace=False)
            ens = bell_subset(n, [labels_all[i] for i in pick])
            _, family = synth.pairwise_product_eigenbases(ens)
            cand = synth.find_cub(family, list(mub_prime(n).bases))
            if cand is None:
                return _result(
                    "unbiased-bell-subsets", start, False,
                    f"no common unbiased basis for n={n}, subset={pick}",
                )
            res = locc.evaluate(synth.synthesize_cub_protocol(ens, cand).as_protocol(), ens)
            worst = min(worst, res.success_probability)
            count += 1
    return _result(
        "unbiased-bell-subsets",
        start,
        worst >= 1.0 - 1e-9,
        f"min success over {count} subsets = {worst:.12f}",
    )


def criterion_bell_saturation() -> CriterionResult:
    """Standard measurement on the full Bell basis: success n/n^2 (1e-12), info log2 n (1e-10)."""
    start = time.perf_counter()
    worst_p = 0.0
    worst_i = 0.0
    for n in (2, 3, 4, 5):
        res = locc.evaluate(locc.standard_bell_protocol(n), bell_basis(n))
        worst_p = max(worst_p, abs(res.success_probability - 1.0 / n))
        worst_i = max(worst_i, abs(res.mutual_information_bits - math.log2(n)))
    return _result(
        "bell-saturation",
        start,
        worst_p <= 1e-12 and worst_i <= 1e-10,
        f"max |success - n/n^2| = {worst_p:.2e}, max |I - log2 n| = {worst_i:.2e}",
    )


def criterion_exact_discard_values() -> CriterionResult:
    """Discard constructions achieve the exact worst-case values to 1e-12.

    2/3 on three and 1/2 on four Bell states of C^2 (x) C^2; 3/k on k Bell
    states of C^3 (x) C^3 for k = 4..9.
    """
    start = time.perf_counter()
    deviations = []

    ens3 = bell_subset(2, [(0, 0), (1, 0), (1, 1)])
    inner = locc.two_state_protocol(ens3.states[0], ens3.states[1])
    res = locc.evaluate(locc.discard_protocol(inner, [0, 1], 3), ens3)
    deviations.append(abs(res.success_probability - 2.0 / 3.0))

    ens4 = bell_subset(2, [(0, 0), (0, 1), (1, 0), (1, 1)])
    inner = locc.two_state_protocol(ens4.states[0], ens4.states[1])
    res = locc.evaluate(locc.discard_protocol(inner, [0, 1], 4), ens4)
    deviations.append(abs(res.success_probability - 0.5))

    labels9 = [(m, l) for m in range(3) for l in range(3)]
    for k in range(4, 10):
        ens = bell_subset(3, labels9[:k])
        triple = uniform_ensemble(ens.states[:3])
        inner = synth.synthesize_three_qutrit_protocol(triple).as_protocol()
        res = locc.evaluate(locc.discard_protocol(inner, [0, 1, 2], k), ens)
        deviations.append(abs(res.success_probability - 3.0 / k))

    worst = max(deviations)
    return _result(
        "exact-discard-values", start, worst <= 1e-12, f"max deviation = {worst:.2e}"
    )


def criterion_bound_consistency() -> CriterionResult:
    """Library sweep: no evaluated success beats an applicable cap by > 1e-9.

    Also checks every transcript mutual information against the entropy cap.
    """
    start = time.perf_counter()
    entries = build_library()
    if len(entries) < 30:
        return _result("bound-consistency", start, False, f"library too small: {len(entries)}")
    worst = -1.0
    for entry in entries:
        res = locc.evaluate(entry.protocol, entry.ensemble)
        for witness in bounds.success_upper_bounds(entry.ensemble):
            worst = max(worst, res.success_probability - witness.value)
        cap = bounds.entropy_bound_bits(entry.ensemble)
        worst = max(worst, res.mutual_information_bits - cap)
    return _result(
        "bound-consistency",
        start,
        worst <= 1e-9,
        f"{len(entries)} pairs, max excess over any cap = {worst:.2e}",
    )


def criterion_transpose_identity() -> CriterionResult:
    """1000 random matrices (dims <= 5): transpose-identity residual <= 1e-12."""
    start = time.perf_counter()
    rng = np.random.default_rng(0)
    worst = 0.0
    for _ in range(1000):
        m = int(rng.integers(1, 6))
        n = int(rng.integers(1, 6))
        a = rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))
        worst = max(worst, transpose_identity_check(a))
    return _result(
        "transpose-identity", start, worst <= 1e-12, f"max residual = {worst:.2e}"
    )


def criterion_mub_unbiasedness() -> CriterionResult:
    """Brute-force unbiasedness of the prime-dimension MUB sets for n in {2,3,5,7}."""
    start = time.perf_counter()
    worst = 0.0
    for n in (2, 3, 5, 7):
        family = mub_prime(n)
        for b1, b2 in itertools.combinations(family.bases, 2):
            overlaps = np.abs(b1.conj().T @ b2) ** 2
            worst = max(worst, float(np.max(np.abs(overlaps - 1.0 / n))))
    return _result(
        "mub-unbiasedness", start, worst <= 1e-10, f"max | |<b|a>|^2 - 1/n | = {worst:.2e}"
    )


def criterion_verdicts() -> CriterionResult:
    """Verdicts: full Bell basis impossible, product basis and ME triples possible."""
    start = time.perf_counter()
    checks = []

    rep = bounds.verdict(bell_basis(2))
    checks.append(("bell2-full", rep.verdict == bounds.VERDICT_IMPOSSIBLE))

    prod = uniform_ensemble(
        [
            BipartiteState(2, 2, np.eye(4, dtype=complex)[i])
            for i in range(4)
        ]
    )
    rep = bounds.verdict(prod)
    checks.append(("product-basis", rep.verdict == bounds.VERDICT_POSSIBLE))

    rep = bounds.verdict(random_orthogonal_me_triple(3, 42))
    checks.append(("me-triple", rep.verdict == bounds.VERDICT_POSSIBLE))

    four_me = bell_subset(3, [(0, 0), (0, 1), (1, 0), (2, 2)])
    rep = bounds.verdict(four_me)
    checks.append(("four-me-qutrits", rep.verdict == bounds.VERDICT_IMPOSSIBLE))

    bad = [name for name, ok in checks if not ok]
    return _result(
        "verdict-cases", start, not bad, "all four cases correct" if not bad else f"wrong: {bad}"
    )


def criterion_monte_carlo() -> CriterionResult:
    """simulate vs evaluate within 5 sigma at 1e5 trials for every library pair."""
    start = time.perf_counter()
    trials = 100_000
    worst_ratio = 0.0
    for idx, entry in enumerate(build_library()):
        res = locc.evaluate(entry.protocol, entry.ensemble)
        rate = locc.simulate(entry.protocol, entry.ensemble, trials, seed=1000 + idx)
        p = res.success_probability
        sigma = math.sqrt(max(p * (1.0 - p), 0.0) / trials)
        dev = abs(rate - p)
        allowed = 5.0 * sigma if sigma > 0 else 0.0
        if sigma > 0:
            worst_ratio = max(worst_ratio, dev / sigma)
            if dev > allowed:
                return _result(
                    "monte-carlo-agreement", start, False,
                    f"{entry.name}: |{rate} - {p}| = {dev:.3e} > 5 sigma = {allowed:.3e}",
                )
        elif dev > 0:
            return _result(
                "monte-carlo-agreement", start, False,
                f"{entry.name}: deterministic protocol missed ({rate} vs {p})",
            )
    return _result(
        "monte-carlo-agreement",
        start,
        True,
        f"max deviation = {worst_ratio:.2f} sigma at {trials} trials",
    )


CRITERIA = (
    criterion_three_qutrit_end_to_end,
    criterion_unbiased_bell_subsets,
    criterion_bell_saturation,
    criterion_exact_discard_values,
    criterion_bound_consistency,
    criterion_transpose_identity,
    criterion_mub_unbiasedness,
    criterion_verdicts,
    criterion_monte_carlo,
)


def run_all(stream=None) -> list[CriterionResult]:
    """Run every criterion, printing one PASS/FAIL line each to ``stream``."""
    results = []
    for fn in CRITERIA:
        res = fn()
        results.append(res)
        if stream is not None:
            tag = "PASS" if res.passed else "FAIL"
            print(f"[{tag}] {res.name}: {res.detail} ({res.elapsed_s:.2f}s)", file=stream)
    return results
