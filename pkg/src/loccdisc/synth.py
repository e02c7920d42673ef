"""One-way protocol synthesis for maximally entangled ensembles.

Two constructions are provided.  For any three orthogonal maximally
entangled states of C^3 (x) C^3 the pairwise matrices B2^dag B1 and
B3^dag B2 are traceless unitaries; after aligning eigenvector phases so the
eigenbasis overlap matrix is circulant, Alice measuring the conjugated
Fourier mix of that eigenbasis leaves Bob three orthogonal states on every
outcome.  For k orthogonal states whose pairwise products share a common
unbiased basis, Alice measuring that (conjugated) basis does the same,
because <b|B_i^dag B_j|b> = Tr(B_i^dag B_j)/n = 0 for every unbiased |b>.

Synthesis outputs are validated at 1e-8 (they sit downstream of eigensolves,
looser than the 1e-12 used for plain algebraic identities).
"""

from dataclasses import dataclass

import numpy as np

from . import locc
from .ensembles import BasisFamily, StateEnsemble, common_unbiased_basis_check, fourier_matrix, is_prime, mub_prime
from .errors import DomainError, ToleranceError
from .qstate import as_matrix, frozen_array, is_unitary, normal_eigensystem, unitary_eigensystem

OMEGA = np.exp(2j * np.pi / 3)

SYNTH_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class OneWayProtocolSpec:
    """Alice's measurement basis plus, per outcome, Bob's labeled discriminators.

    ``alice_basis`` columns are the vectors Alice projects onto;
    ``bob_discriminators[x]`` holds (label, unit vector) pairs that are
    pairwise orthogonal within the synthesis tolerance.
    """

    alice_basis: np.ndarray
    bob_discriminators: tuple

    def __post_init__(self):
        ab = frozen_array(as_matrix(self.alice_basis))
        if not is_unitary(ab, 1e-10):
            raise DomainError("Alice basis is not orthonormal")
        if len(self.bob_discriminators) != ab.shape[1]:
            raise DomainError("need one Bob group per Alice outcome")
        groups = tuple(
            tuple((int(lab), frozen_array(np.asarray(v, dtype=complex).reshape(-1))) for lab, v in group)
            for group in self.bob_discriminators
        )
        object.__setattr__(self, "alice_basis", ab)
        object.__setattr__(self, "bob_discriminators", groups)

    @property
    def dim_a(self) -> int:
        return self.alice_basis.shape[0]

    @property
    def dim_b(self) -> int:
        for group in self.bob_discriminators:
            for _, v in group:
                return v.size
        return self.dim_a

    def max_bob_overlap(self) -> float:
        """Largest |<v_i|v_j>| over distinct labeled vectors of one outcome."""
        worst = 0.0
        for group in self.bob_discriminators:
            for i in range(len(group)):
                for j in range(i + 1, len(group)):
                    worst = max(worst, abs(np.vdot(group[i][1], group[j][1])))
        return worst

    def as_protocol(self, fallback: int = 0) -> "locc.LoccProtocol":
        """Expand into an explicit two-round protocol tree."""
        return locc.one_way_protocol(
            self.alice_basis, self.bob_discriminators, self.dim_b, fallback=fallback
        )


@dataclass(frozen=True, eq=False)
class PhaseSolution:
    """Diagonal phase adjustments turning an eigenbasis overlap matrix circulant.

    U1 = diag(1, e^{i alpha}, e^{i beta}) multiplies from the left,
    U2 = diag(1, e^{i gamma}, e^{i delta}) conjugate-transposed from the
    right; ``adjusted_overlap_matrix`` is the resulting circulant unitary.
    """

    gamma: float
    alpha: float
    beta: float
    delta: float
    adjusted_overlap_matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "adjusted_overlap_matrix", frozen_array(as_matrix(self.adjusted_overlap_matrix))
        )

    def u1(self) -> np.ndarray:
        return np.diag([1.0, np.exp(1j * self.alpha), np.exp(1j * self.beta)])

    def u2(self) -> np.ndarray:
        return np.diag([1.0, np.exp(1j * self.gamma), np.exp(1j * self.delta)])


def _circulant_defect(v: np.ndarray) -> float:
    worst = 0.0
    for s in range(3):
        vals = [v[i, (i + s) % 3] for i in range(3)]
        for i in range(3):
            worst = max(worst, abs(vals[i] - vals[(i + 1) % 3]))
    return worst


def traceless_unitary_eigensystem(matrix) -> tuple[complex, np.ndarray]:
    """Orthonormal eigenvectors of a traceless 3x3 unitary, labeled by phase.

    A traceless 3x3 unitary has spectrum c * {1, w, w^2} for some unit c
    (w = exp(2 pi i/3)); c is only determined up to a factor of w, so the
    eigenvalue closest to the positive real axis is chosen.  Returns (c, E)
    with E's column i the eigenvector for c w^i, satisfying
    ``M = c sum_i w^i |e_i><e_i|`` to 1e-9.
    """
    m = as_matrix(matrix)
    if m.shape != (3, 3):
        raise DomainError("expected a 3x3 matrix")
    if abs(np.trace(m)) > 1e-8:
        raise DomainError(f"matrix is not traceless (|tr| = {abs(np.trace(m)):.3e})")
    vals, vecs = unitary_eigensystem(m, tol=1e-10)

    angles = np.angle(vals)
    for i in range(3):
        for j in range(i + 1, 3):
            gap = abs((angles[i] - angles[j] + np.pi) % (2 * np.pi) - np.pi)
            if gap < 1e-6:
                raise ToleranceError("near-degenerate eigenvalues; input is not a valid traceless unitary")

    c_idx = max(range(3), key=lambda i: (vals[i].real, vals[i].imag))
    c = vals[c_idx]
    labels = np.round(3.0 * np.angle(vals / c) / (2.0 * np.pi)).astype(int) % 3
    if sorted(labels.tolist()) != [0, 1, 2]:
        raise ToleranceError("eigenvalues are not in equilateral configuration")
    order = np.argsort(labels)
    vecs = vecs[:, order]

    recon = c * sum(OMEGA**i * np.outer(vecs[:, i], vecs[:, i].conj()) for i in range(3))
    if float(np.max(np.abs(m - recon))) > 1e-9:
        raise ToleranceError("eigensystem reconstruction missed 1e-9")
    return complex(c), vecs


def overlap_phase_normalize(e_basis, f_basis) -> PhaseSolution:
    """Phase-align two labeled eigenbases so their overlap matrix is circulant.

    The overlap V[i, j] = <e_i|f_j> of valid inputs has |V[i, j]| depending
    only on (j - i) mod 3.  Phases are then fixed by a linear solve on the
    first two columns (with the remaining entries forced by unitarity); the
    column-difference average determining gamma is only meaningful mod
    2 pi/3, so all three branches are tried and the one yielding a circulant
    result is kept.  Overlap patterns concentrated on a single cyclic
    diagonal (commuting pairwise products) are aligned directly.
    """
    e = as_matrix(e_basis)
    f = as_matrix(f_basis)
    if e.shape != (3, 3) or f.shape != (3, 3):
        raise DomainError("expected 3x3 bases")
    if not (is_unitary(e, 1e-10) and is_unitary(f, 1e-10)):
        raise DomainError("bases must be orthonormal")
    v = e.conj().T @ f

    mods = np.abs(v)
    radii = []
    for s in range(3):
        vals = [mods[i, (i + s) % 3] for i in range(3)]
        if max(vals) - min(vals) > SYNTH_TOL:
            raise DomainError(
                "overlap magnitudes are not circulant; upstream states are not a valid orthogonal triple"
            )
        radii.append(float(np.mean(vals)))

    m = np.angle(v)
    nonzero = [s for s in range(3) if radii[s] > 1e-6]
    if len(nonzero) == 1:
        s = nonzero[0]
        if s == 0:
            alpha, beta = 0.0, 0.0
            gamma = m[1, 1] - m[0, 0]
            delta = m[2, 2] - m[0, 0]
        elif s == 1:
            alpha, gamma = 0.0, 0.0
            delta = m[1, 2] - m[0, 1]
            beta = m[0, 1] - m[2, 0]
        else:
            alpha, gamma = 0.0, 0.0
            delta = m[0, 2] - m[1, 0]
            beta = m[1, 0] - m[2, 1]
        candidates = [(gamma, alpha, beta, delta)]
    else:
        gamma_base = float(np.sum(m[:, 1] - m[:, 0]) / 3.0)
        candidates = []
        for branch in (0.0, 2 * np.pi / 3, -2 * np.pi / 3):
            gamma = gamma_base + branch
            alpha = m[0, 0] - m[1, 1] + gamma
            beta = m[0, 1] - m[2, 0] - gamma
            delta = m[0, 2] - alpha - m[1, 0]
            candidates.append((gamma, alpha, beta, delta))

    best = None
    for gamma, alpha, beta, delta in candidates:
        u1 = np.diag([1.0, np.exp(1j * alpha), np.exp(1j * beta)])
        u2 = np.diag([1.0, np.exp(1j * gamma), np.exp(1j * delta)])
        vp = u1 @ v @ u2.conj().T
        defect = _circulant_defect(vp)
        if best is None or defect < best[0]:
            best = (defect, gamma, alpha, beta, delta, vp)

    defect, gamma, alpha, beta, delta, vp = best
    if defect > 1e-9:
        raise ToleranceError(f"phase solve left a circulant defect of {defect:.3e}")
    if not is_unitary(vp, 1e-9):
        raise ToleranceError("adjusted overlap matrix is not unitary within 1e-9")
    return PhaseSolution(
        gamma=float(gamma), alpha=float(alpha), beta=float(beta), delta=float(delta),
        adjusted_overlap_matrix=vp,
    )


def synthesize_three_qutrit_protocol(ensemble: StateEnsemble) -> OneWayProtocolSpec:
    """Perfect one-way protocol for three orthogonal ME states of C^3 (x) C^3.

    Alice measures the conjugated basis U|x> = (1/sqrt(3)) sum_i w^{ix}|e_i>
    built from the phase-aligned eigenbasis of B2^dag B1; conditioned on any
    outcome, Bob's three states B_i U|x> are pairwise orthogonal and a
    projective measurement finishes the job.
    """
    if ensemble.k != 3:
        raise DomainError(f"need exactly 3 states, got {ensemble.k}")
    if (ensemble.dim_a, ensemble.dim_b) != (3, 3):
        raise DomainError("states must live in C^3 (x) C^3")
    if not ensemble.is_maximally_entangled(1e-10):
        raise DomainError("states must be maximally entangled")
    if not ensemble.is_orthogonal(1e-10):
        raise DomainError("states must be pairwise orthogonal")

    b = ensemble.b_matrices()
    _, e_vecs = traceless_unitary_eigensystem(b[1].conj().T @ b[0])
    _, f_vecs = traceless_unitary_eigensystem(b[2].conj().T @ b[1])
    solution = overlap_phase_normalize(e_vecs, f_vecs)
    e_hat = e_vecs @ solution.u1().conj()

    fourier = np.array([[OMEGA ** (i * x) for x in range(3)] for i in range(3)]) / np.sqrt(3)
    u = e_hat @ fourier
    groups = []
    for x in range(3):
        vecs = [bi @ u[:, x] for bi in b]
        vecs = [w / np.linalg.norm(w) for w in vecs]
        groups.append(tuple((i, w) for i, w in enumerate(vecs)))
    spec = OneWayProtocolSpec(u.conj(), tuple(groups))
    worst = spec.max_bob_overlap()
    if worst > SYNTH_TOL:
        raise ToleranceError(f"Bob discriminators not orthogonal (max overlap {worst:.3e})")
    return spec


def pairwise_product_eigenbases(ensemble: StateEnsemble, tol: float = 1e-8):
    """Orthonormal eigenbases of every pairwise product B_i^dag B_j, i < j.

    Returns (pairs, family): the index pairs and the matching basis family.
    Products must be normal (orthogonally diagonalizable); this holds for
    maximally entangled ensembles (the products are unitary) and for
    simultaneously diagonal ones.
    """
    b = ensemble.b_matrices()
    pairs = []
    bases = []
    for i in range(ensemble.k):
        for j in range(i + 1, ensemble.k):
            prod = b[i].conj().T @ b[j]
            try:
                _, vecs = normal_eigensystem(prod, tol=tol)
            except DomainError as exc:
                raise DomainError(
                    f"pairwise product ({i}, {j}) is not orthogonally diagonalizable: {exc}"
                ) from exc
            pairs.append((i, j))
            bases.append(vecs)
    return pairs, BasisFamily(tuple(bases))


def synthesize_cub_protocol(ensemble: StateEnsemble, cub) -> OneWayProtocolSpec:
    """One-way protocol from a common unbiased basis for the pairwise eigenbases.

    Alice measures the conjugated columns of ``cub``; for every outcome the
    conditional Bob states are pairwise orthogonal because each |b> is
    unbiased to an eigenbasis of every pairwise product.
    """
    if ensemble.dim_a != ensemble.dim_b:
        raise DomainError("construction needs equal local dimensions")
    if not ensemble.is_orthogonal(1e-10):
        raise DomainError("states must be pairwise orthogonal")
    cub_mat = as_matrix(cub)
    if cub_mat.shape != (ensemble.dim_a, ensemble.dim_a):
        raise DomainError("basis dimension does not match the ensemble")
    if not is_unitary(cub_mat, 1e-10):
        raise DomainError("candidate basis is not orthonormal")

    pairs, family = pairwise_product_eigenbases(ensemble)
    for (i, j), basis in zip(pairs, family.bases):
        if not common_unbiased_basis_check(cub_mat, BasisFamily((basis,)), tol=SYNTH_TOL):
            raise DomainError(
                f"basis is not unbiased to the eigenbasis of pair ({i}, {j})"
            )

    b = ensemble.b_matrices()
    groups = []
    for x in range(ensemble.dim_a):
        col = cub_mat[:, x]
        vecs = []
        for label, bi in enumerate(b):
            w = bi @ col
            nrm = float(np.linalg.norm(w))
            if nrm > 1e-12:
                vecs.append((label, w / nrm))
        groups.append(tuple(vecs))
    spec = OneWayProtocolSpec(cub_mat.conj(), tuple(groups))
    worst = spec.max_bob_overlap()
    if worst > SYNTH_TOL:
        raise ToleranceError(f"Bob discriminators not orthogonal (max overlap {worst:.3e})")
    return spec


def default_cub_candidates(n: int) -> list[np.ndarray]:
    """Candidate bases tried by :func:`find_cub`: the MUB set for prime n, else Fourier."""
    if is_prime(n):
        return list(mub_prime(n).bases)
    return [fourier_matrix(n)]


def find_cub(family: BasisFamily, candidates=None):
    """First candidate basis unbiased to the whole family, or None.

    No general search is attempted; existence of a common unbiased basis for
    an arbitrary family is an open problem, so only the supplied (or
    default) candidate list is scanned.
    """
    if candidates is None:
        if len(family) == 0:
            raise DomainError("cannot infer candidates for an empty family")
        candidates = default_cub_candidates(family.dim)
    for cand in candidates:
        if len(family) == 0 or common_unbiased_basis_check(cand, family, tol=SYNTH_TOL):
            return as_matrix(cand)
    return None
