"""Shipped library of (ensemble, protocol) pairs used for consistency sweeps.

Every entry couples one ensemble with one concrete protocol; the collection
spans the constructions in this package (standard Bell measurements,
three-qutrit and common-unbiased-basis synthesis, discard wrappers,
two-state separations, product-basis measurements, and blind guessing) so
bound-consistency and Monte-Carlo checks exercise the whole surface.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import locc, synth
from .ensembles import (
    StateEnsemble,
    bell_basis,
    bell_subset,
    fourier_matrix,
    haar_unitary,
    random_orthogonal_me_triple,
    simultaneously_diagonal_ensemble,
    uniform_ensemble,
)
from .qstate import BipartiteState, me_state


@dataclass(frozen=True, eq=False)
class LibraryEntry:
    name: str
    ensemble: StateEnsemble
    protocol: locc.LoccProtocol


def _product_state(dim_a, dim_b, a_idx, b_idx) -> BipartiteState:
    amps = np.zeros(dim_a * dim_b, dtype=complex)
    amps[a_idx * dim_b + b_idx] = 1.0
    return BipartiteState(dim_a, dim_b, amps)


def _product_basis_ensemble(dim_a, dim_b) -> StateEnsemble:
    return uniform_ensemble(
        [_product_state(dim_a, dim_b, a, b) for a in range(dim_a) for b in range(dim_b)]
    )


def _random_orthogonal_pair(dim_a, dim_b, seed) -> StateEnsemble:
    rng = np.random.default_rng(seed)
    v1 = rng.standard_normal(dim_a * dim_b) + 1j * rng.standard_normal(dim_a * dim_b)
    v1 /= np.linalg.norm(v1)
    v2 = rng.standard_normal(dim_a * dim_b) + 1j * rng.standard_normal(dim_a * dim_b)
    v2 -= np.vdot(v1, v2) * v1
    v2 /= np.linalg.norm(v2)
    return uniform_ensemble(
        [BipartiteState(dim_a, dim_b, v1), BipartiteState(dim_a, dim_b, v2)]
    )


def _cub_entry(name, n, labels) -> LibraryEntry:
    ens = bell_subset(n, labels)
    _, family = synth.pairwise_product_eigenbases(ens)
    cand = synth.find_cub(family)
    if cand is None:
        raise RuntimeError(f"library entry {name}: no common unbiased basis found")
    return LibraryEntry(name, ens, synth.synthesize_cub_protocol(ens, cand).as_protocol())


def _discard_bell2_entry(name, keep_labels, all_labels) -> LibraryEntry:
    ens = bell_subset(2, all_labels)
    kept_idx = [all_labels.index(lab) for lab in keep_labels]
    inner_states = [ens.states[i] for i in kept_idx]
    inner = locc.two_state_protocol(*inner_states)
    return LibraryEntry(name, ens, locc.discard_protocol(inner, kept_idx, ens.k))


def _discard_bell3_entry(name, k) -> LibraryEntry:
    labels = [(m, l) for m in range(3) for l in range(3)][:k]
    ens = bell_subset(3, labels)
    triple = uniform_ensemble(ens.states[:3])
    inner = synth.synthesize_three_qutrit_protocol(triple).as_protocol()
    return LibraryEntry(name, ens, locc.discard_protocol(inner, [0, 1, 2], ens.k))


@lru_cache(maxsize=1)
def build_library() -> tuple:
    """Construct the full library (cached; everything is deterministic)."""
    entries: list[LibraryEntry] = []

    for n in (2, 3, 4, 5):
        entries.append(
            LibraryEntry(f"bell-standard-full-{n}", bell_basis(n), locc.standard_bell_protocol(n))
        )

    for name, n, labels in (
        ("bell-standard-sub-3-k4", 3, [(0, 0), (1, 0), (2, 0), (0, 1)]),
        ("bell-standard-sub-3-k6", 3, [(0, 0), (0, 1), (1, 0), (1, 1), (2, 0), (2, 1)]),
        ("bell-standard-sub-4-k5", 4, [(0, 0), (1, 0), (2, 0), (3, 0), (0, 1)]),
    ):
        entries.append(
            LibraryEntry(name, bell_subset(n, labels), locc.standard_bell_protocol(n, labels))
        )

    for seed in range(5):
        ens = random_orthogonal_me_triple(3, seed)
        entries.append(
            LibraryEntry(
                f"three-qutrit-seed{seed}",
                ens,
                synth.synthesize_three_qutrit_protocol(ens).as_protocol(),
            )
        )
    bell_triple = bell_subset(3, [(0, 0), (1, 0), (1, 1)])
    entries.append(
        LibraryEntry(
            "three-qutrit-bell-triple",
            bell_triple,
            synth.synthesize_three_qutrit_protocol(bell_triple).as_protocol(),
        )
    )

    entries.append(_cub_entry("cub-3-k3", 3, [(0, 0), (1, 0), (1, 1)]))
    entries.append(_cub_entry("cub-3-k2", 3, [(0, 0), (2, 1)]))
    entries.append(_cub_entry("cub-5-k3", 5, [(0, 0), (1, 0), (0, 1)]))
    entries.append(_cub_entry("cub-5-k2", 5, [(1, 2), (3, 4)]))
    entries.append(_cub_entry("cub-7-k4", 7, [(0, 0), (1, 0), (0, 1), (1, 1)]))
    entries.append(_cub_entry("cub-7-k3", 7, [(2, 1), (4, 0), (6, 5)]))

    entries.append(
        _discard_bell2_entry(
            "discard-bell2-keep2of3", [(0, 0), (1, 0)], [(0, 0), (1, 0), (1, 1)]
        )
    )
    entries.append(
        _discard_bell2_entry(
            "discard-bell2-keep2of4",
            [(0, 0), (0, 1)],
            [(0, 0), (0, 1), (1, 0), (1, 1)],
        )
    )
    for k in (4, 5, 7, 9):
        entries.append(_discard_bell3_entry(f"discard-bell3-keep3of{k}", k))

    bell2_pair = bell_subset(2, [(0, 0), (1, 1)])
    entries.append(
        LibraryEntry("two-state-bell2", bell2_pair, locc.two_state_protocol(*bell2_pair.states))
    )
    prod_pair = uniform_ensemble([_product_state(2, 2, 0, 0), _product_state(2, 2, 1, 1)])
    entries.append(
        LibraryEntry("two-state-product", prod_pair, locc.two_state_protocol(*prod_pair.states))
    )
    rand_pair = _random_orthogonal_pair(2, 3, seed=11)
    entries.append(
        LibraryEntry("two-state-random-2x3", rand_pair, locc.two_state_protocol(*rand_pair.states))
    )

    bb2 = bell_basis(2)
    entries.append(LibraryEntry("blind-guess-bell2", bb2, locc.blind_guess_protocol(2, 2, 0)))
    prod23 = _product_basis_ensemble(2, 3)
    entries.append(LibraryEntry("blind-guess-prod23", prod23, locc.blind_guess_protocol(2, 3, 0)))

    entries.append(
        LibraryEntry(
            "product-basis-2x2",
            _product_basis_ensemble(2, 2),
            locc.product_basis_protocol(_product_basis_ensemble(2, 2)),
        )
    )
    entries.append(
        LibraryEntry("product-basis-2x3", prod23, locc.product_basis_protocol(prod23))
    )

    simdiag_f = simultaneously_diagonal_ensemble(fourier_matrix(3))
    entries.append(
        LibraryEntry(
            "simdiag-fourier3",
            simdiag_f,
            synth.synthesize_cub_protocol(simdiag_f, fourier_matrix(3)).as_protocol(),
        )
    )
    simdiag_h = simultaneously_diagonal_ensemble(haar_unitary(4, np.random.default_rng(5)))
    entries.append(
        LibraryEntry(
            "simdiag-haar4",
            simdiag_h,
            synth.synthesize_cub_protocol(simdiag_h, fourier_matrix(4)).as_protocol(),
        )
    )

    single = uniform_ensemble([me_state(2)])
    entries.append(LibraryEntry("single-state", single, locc.blind_guess_protocol(2, 2, 0)))

    return tuple(entries)
