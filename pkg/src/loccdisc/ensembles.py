"""Named state families: generalized Bell bases, MUBs, and seeded test ensembles."""

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .qstate import (
    STRUCTURAL_TOL,
    as_matrix,
    frozen_array,
    generalized_pauli,
    is_unitary,
    state_from_matrix,
    unitary_eigensystem,
)


@dataclass(frozen=True, eq=False)
class StateEnsemble:
    """States with prior probabilities, all sharing the same bipartite space."""

    states: tuple
    priors: np.ndarray = field(default=None)

    def __post_init__(self):
        states = tuple(self.states)
        if not states:
            raise DomainError("ensemble needs at least one state")
        dims = {(s.dim_a, s.dim_b) for s in states}
        if len(dims) != 1:
            raise DomainError(f"states live in different spaces: {sorted(dims)}")
        if self.priors is None:
            priors = np.full(len(states), 1.0 / len(states))
        else:
            priors = np.asarray(self.priors, dtype=float).reshape(-1)
        if priors.size != len(states):
            raise DomainError("priors length must match number of states")
        if np.any(priors < -1e-15):
            raise DomainError("priors must be nonnegative")
        if abs(float(priors.sum()) - 1.0) > 1e-12:
            raise DomainError("priors must sum to 1 within 1e-12")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "priors", frozen_array(np.clip(priors, 0.0, None), dtype=float))

    @property
    def k(self) -> int:
        return len(self.states)

    @property
    def dim_a(self) -> int:
        return self.states[0].dim_a

    @property
    def dim_b(self) -> int:
        return self.states[0].dim_b

    def b_matrices(self) -> list[np.ndarray]:
        return [s.b_matrix for s in self.states]

    def gram(self) -> np.ndarray:
        """Gram matrix of amplitude inner products <psi_i|psi_j>."""
        amps = np.array([s.amplitudes for s in self.states])
        return amps.conj() @ amps.T

    def is_orthogonal(self, tol: float = STRUCTURAL_TOL) -> bool:
        g = self.gram()
        off = g - np.diag(np.diag(g))
        return float(np.max(np.abs(off))) <= tol if self.k > 1 else True

    def is_maximally_entangled(self, tol: float = STRUCTURAL_TOL) -> bool:
        if self.dim_a != self.dim_b:
            return False
        return all(is_unitary(b, tol) for b in self.b_matrices())

    def is_uniform(self, tol: float = 1e-12) -> bool:
        return bool(np.max(np.abs(self.priors - 1.0 / self.k)) <= tol)


def uniform_ensemble(states) -> StateEnsemble:
    return StateEnsemble(tuple(states), None)


@dataclass(frozen=True, eq=False)
class BasisFamily:
    """A finite family of orthonormal bases of C^n, each stored column-wise."""

    bases: tuple

    def __post_init__(self):
        bases = tuple(frozen_array(as_matrix(b)) for b in self.bases)
        dims = {b.shape for b in bases}
        if len(dims) > 1:
            raise DomainError(f"bases have mixed shapes: {sorted(dims)}")
        for idx, b in enumerate(bases):
            if not is_unitary(b, STRUCTURAL_TOL):
                raise DomainError(f"family member {idx} is not orthonormal")
        object.__setattr__(self, "bases", bases)

    @property
    def dim(self) -> int:
        return self.bases[0].shape[0] if self.bases else 0

    def __len__(self) -> int:
        return len(self.bases)


def fourier_matrix(n: int) -> np.ndarray:
    """Unitary Fourier matrix F[j, k] = w^{jk}/sqrt(n), w = exp(2 pi i/n)."""
    j = np.arange(n)
    return np.exp(2j * np.pi * np.outer(j, j) / n) / np.sqrt(n)


def bell_unitary(n: int, m: int, l: int) -> np.ndarray:
    """X^m Z^l, the unitary labelling the (m, l) generalized Bell state."""
    x, z = generalized_pauli(n)
    return np.linalg.matrix_power(x, m % n) @ np.linalg.matrix_power(z, l % n)


def bell_basis(n: int) -> StateEnsemble:
    """All n^2 generalized Bell states (I (x) X^m Z^l)|ME_n>, uniform priors.

    States are ordered with m major, l minor, so label m*n + l is the (m, l)
    state.  Pairwise orthogonal and maximally entangled by construction.
    """
    if n < 2:
        raise DomainError("Bell basis needs dimension >= 2")
    states = [
        state_from_matrix(bell_unitary(n, m, l), n)
        for m in range(n)
        for l in range(n)
    ]
    return uniform_ensemble(states)


def bell_subset(n: int, labels) -> StateEnsemble:
    """Uniform ensemble of the generalized Bell states with the given (m, l) labels."""
    labels = [(int(m), int(l)) for m, l in labels]
    if not labels:
        raise DomainError("empty Bell subset")
    if len(set(labels)) != len(labels):
        raise DomainError("duplicate Bell labels")
    for m, l in labels:
        if not (0 <= m < n and 0 <= l < n):
            raise DomainError(f"Bell label {(m, l)} out of range for n = {n}")
    return uniform_ensemble([state_from_matrix(bell_unitary(n, m, l), n) for m, l in labels])


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def mub_prime(n: int) -> BasisFamily:
    """Maximum set of n+1 mutually unbiased bases of C^n for prime n.

    Uses the cyclic construction: the computational basis together with the
    eigenbases of X Z^t for t = 0, ..., n-1.  Every cross-basis overlap
    satisfies |<b|a>|^2 = 1/n.
    """
    if not is_prime(n):
        raise DomainError(f"{n} is not prime; this construction needs a prime dimension")
    x, z = generalized_pauli(n)
    bases = [np.eye(n, dtype=complex)]
    zt = np.eye(n, dtype=complex)
    for _ in range(n):
        _, vecs = unitary_eigensystem(x @ zt)
        bases.append(vecs)
        zt = zt @ z
    return BasisFamily(tuple(bases))


def common_unbiased_basis_check(candidate, family: BasisFamily, tol: float = 1e-8) -> bool:
    """True iff every candidate column is unbiased to every vector of every member.

    Unbiased means |<b|a>|^2 = 1/n within ``tol``.
    """
    cand = as_matrix(candidate)
    if not is_unitary(cand, STRUCTURAL_TOL):
        raise DomainError("candidate basis is not orthonormal")
    n = cand.shape[0]
    for member in family.bases:
        if member.shape[0] != n:
            raise DomainError("family member dimension does not match candidate")
        overlaps = np.abs(cand.conj().T @ member) ** 2
        if float(np.max(np.abs(overlaps - 1.0 / n))) > tol:
            return False
    return True


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary: QR of a complex Ginibre matrix, R-diagonal phases absorbed."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_orthogonal_me_triple(n: int, seed: int) -> StateEnsemble:
    """Three orthogonal maximally entangled states of C^n (x) C^n, seeded.

    Built as B_i = U A_i W with Haar-random U, W and three distinct Bell
    unitaries A_i, so trace orthogonality Tr(B_i^dag B_j) = n delta_ij holds
    by construction while the pairwise products B_i^dag B_j stay generic.
    """
    if n < 2:
        raise DomainError("need dimension >= 2")
    rng = np.random.default_rng(seed)
    labels = rng.choice(n * n, size=3, replace=False)
    u = haar_unitary(n, rng)
    w = haar_unitary(n, rng)
    states = [
        state_from_matrix(u @ bell_unitary(n, lab // n, lab % n) @ w, n)
        for lab in labels
    ]
    return uniform_ensemble(states)


def simultaneously_diagonal_ensemble(u) -> StateEnsemble:
    """The n orthogonal states phi_i = sum_j u[i, j] |j>|j> for a unitary u.

    Their matrices are B_i = sqrt(n) diag(u[i, :]), all diagonal in the same
    basis, hence every pairwise product is diagonal too.
    """
    mat = as_matrix(u)
    if mat.shape[0] != mat.shape[1]:
        raise DomainError("coefficient matrix must be square")
    if not is_unitary(mat, STRUCTURAL_TOL):
        raise DomainError("coefficient matrix must be unitary within 1e-10")
    n = mat.shape[0]
    states = [state_from_matrix(np.sqrt(n) * np.diag(mat[i, :]), n) for i in range(n)]
    return uniform_ensemble(states)


def from_descriptor(descriptor: dict) -> StateEnsemble:
    """Build an ensemble from a JSON-style descriptor.

    Supported kinds:
      {"kind": "bell", "n": 3}
      {"kind": "bell_subset", "n": 3, "labels": [[0, 0], [1, 0]]}
      {"kind": "random_me_triple", "n": 3, "seed": 7}
      {"kind": "simdiag", "u": <matrix>}
      {"kind": "explicit", "states": [<state>...], "priors": [...]}
    Matrix/state payload encodings live in :mod:`loccdisc.serial`.
    """
    from . import serial  # deferred: serial imports this module's types

    if not isinstance(descriptor, dict):
        raise DomainError("ensemble descriptor must be a JSON object")
    kind = descriptor.get("kind")
    try:
        if kind == "bell":
            return bell_basis(int(descriptor["n"]))
        if kind == "bell_subset":
            return bell_subset(int(descriptor["n"]), descriptor["labels"])
        if kind == "random_me_triple":
            return random_orthogonal_me_triple(int(descriptor["n"]), int(descriptor["seed"]))
        if kind == "simdiag":
            return simultaneously_diagonal_ensemble(serial.matrix_from_json(descriptor["u"]))
        if kind == "explicit":
            states = [serial.state_from_json(s) for s in descriptor["states"]]
            priors = descriptor.get("priors")
            return StateEnsemble(tuple(states), None if priors is None else np.asarray(priors, float))
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed ensemble descriptor: {exc}") from exc
    raise DomainError(f"unknown ensemble kind: {kind!r}")
