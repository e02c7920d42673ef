"""Complex linear algebra core and the bipartite state <-> matrix correspondence.

A pure state |psi> in C^m (x) C^n (Alice m, Bob n, Alice index major) is
identified with the n x m matrix B through

    |psi> = (I (x) B) |ME_m>,        |ME_m> = (1/sqrt(m)) sum_j |j>|j>,

normalized so that Tr B^dag B = m.  Under this convention the amplitude
matrix S (shape m x n, S[a, b] = amplitude of |a>|b>) is S = B^T / sqrt(m),
inner products become <psi1|psi2> = Tr(B1^dag B2)/m, and |psi> is maximally
entangled iff B is unitary (requires m = n).
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import schur

from .errors import DomainError, ToleranceError

# Default tolerances: algebraic identities should hold to 1e-12, structural
# predicates (unitarity, orthogonality, ...) to 1e-10.  Quantities sitting
# downstream of an eigensolve use looser synthesis tolerances (see synth).
ALGEBRAIC_TOL = 1e-12
STRUCTURAL_TOL = 1e-10


def frozen_array(values, dtype=complex) -> np.ndarray:
    """Copy ``values`` into a read-only C-ordered array."""
    out = np.array(values, dtype=dtype, order="C", copy=True)
    out.setflags(write=False)
    return out


def as_matrix(values) -> np.ndarray:
    """Coerce to a 2-D complex array, rejecting non-finite entries."""
    m = np.asarray(values, dtype=complex)
    if m.ndim != 2 or m.shape[0] == 0 or m.shape[1] == 0:
        raise DomainError(f"expected a nonempty 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise DomainError("matrix contains non-finite entries")
    return m


def is_unitary(matrix, tol: float = STRUCTURAL_TOL) -> bool:
    """True when ``M^dag M = I`` entrywise within ``tol`` (square input only)."""
    m = as_matrix(matrix)
    if m.shape[0] != m.shape[1]:
        return False
    dev = m.conj().T @ m - np.eye(m.shape[0])
    return float(np.max(np.abs(dev))) <= tol


def is_psd(matrix, tol: float = STRUCTURAL_TOL) -> bool:
    """True when the matrix is Hermitian within ``tol`` with spectrum >= -tol."""
    m = as_matrix(matrix)
    if m.shape[0] != m.shape[1]:
        return False
    if float(np.max(np.abs(m - m.conj().T))) > tol:
        return False
    herm = (m + m.conj().T) / 2.0
    return float(np.linalg.eigvalsh(herm)[0]) >= -tol


@dataclass(frozen=True, eq=False)
class BipartiteState:
    """Normalized pure state of C^dim_a (x) C^dim_b, amplitudes Alice-major."""

    dim_a: int
    dim_b: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.dim_a < 1 or self.dim_b < 1:
            raise DomainError("dimensions must be positive")
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != self.dim_a * self.dim_b:
            raise DomainError(
                f"amplitude count {amps.size} != dim_a*dim_b = {self.dim_a * self.dim_b}"
            )
        if not np.all(np.isfinite(amps)):
            raise DomainError("amplitudes contain non-finite entries")
        nrm = float(np.linalg.norm(amps))
        if abs(nrm - 1.0) > 1e-12:
            raise DomainError(f"state norm {nrm} deviates from 1 by more than 1e-12")
        object.__setattr__(self, "amplitudes", frozen_array(amps))

    @property
    def amplitude_matrix(self) -> np.ndarray:
        """Amplitudes reshaped to (dim_a, dim_b)."""
        return self.amplitudes.reshape(self.dim_a, self.dim_b)

    @property
    def b_matrix(self) -> np.ndarray:
        """The dim_b x dim_a matrix B with |psi> = (I (x) B)|ME_dim_a>."""
        return np.sqrt(self.dim_a) * self.amplitude_matrix.T


def me_state(n: int) -> BipartiteState:
    """Canonical maximally entangled state (1/sqrt(n)) sum_j |j>|j> of C^n (x) C^n."""
    if n < 1:
        raise DomainError("dimension must be >= 1")
    amps = (np.eye(n, dtype=complex) / np.sqrt(n)).reshape(-1)
    return BipartiteState(n, n, amps)


def state_from_matrix(b, dim_a: int) -> BipartiteState:
    """Build the normalized state (I (x) B)|ME_dim_a> from a matrix with dim_a columns."""
    mat = as_matrix(b)
    if dim_a < 1:
        raise DomainError("dim_a must be positive")
    if mat.shape[1] != dim_a:
        raise DomainError(f"matrix has {mat.shape[1]} columns, expected dim_a = {dim_a}")
    nrm = float(np.linalg.norm(mat))
    if nrm <= 1e-15:
        raise DomainError("zero matrix does not correspond to a state")
    amps = (mat.T / nrm).reshape(-1)
    return BipartiteState(dim_a, mat.shape[0], amps)


def matrix_from_state(psi: BipartiteState) -> np.ndarray:
    """Inverse of :func:`state_from_matrix` (up to normalization)."""
    return psi.b_matrix


def transpose_identity_check(a) -> float:
    """Max-abs deviation between sqrt(n)(I (x) A)|ME_n> and sqrt(m)(A^T (x) I)|ME_m>.

    The two vectors agree identically for every m x n matrix A; the returned
    value is therefore a pure floating-point residual (1e-12 scale).
    """
    mat = as_matrix(a)
    m, n = mat.shape
    lhs = np.sqrt(n) * (np.kron(np.eye(n), mat) @ me_state(n).amplitudes)
    rhs = np.sqrt(m) * (np.kron(mat.T, np.eye(m)) @ me_state(m).amplitudes)
    return float(np.max(np.abs(lhs - rhs)))


def inner_product_via_trace(psi1: BipartiteState, psi2: BipartiteState) -> complex:
    """<psi1|psi2> computed as Tr(B1^dag B2)/dim_a through the matrix picture."""
    if (psi1.dim_a, psi1.dim_b) != (psi2.dim_a, psi2.dim_b):
        raise DomainError("states live in different spaces")
    return complex(np.trace(psi1.b_matrix.conj().T @ psi2.b_matrix) / psi1.dim_a)


@dataclass(frozen=True, eq=False)
class SchmidtDecomposition:
    """Schmidt data: |psi> = sum_i sqrt(coefficients[i]) left[:,i] (x) right[:,i].

    Coefficients are probability weights (squared singular values), sorted
    nonincreasing and summing to one.  Column vectors are orthonormal.
    """

    coefficients: np.ndarray
    left_vectors: np.ndarray
    right_vectors: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coefficients, dtype=float)
        if np.any(coeffs < -1e-14):
            raise DomainError("negative Schmidt coefficient")
        if abs(float(coeffs.sum()) - 1.0) > 1e-12:
            raise DomainError("Schmidt coefficients must sum to 1")
        if np.any(np.diff(coeffs) > 1e-14):
            raise DomainError("Schmidt coefficients must be nonincreasing")
        object.__setattr__(self, "coefficients", frozen_array(coeffs, dtype=float))
        object.__setattr__(self, "left_vectors", frozen_array(self.left_vectors))
        object.__setattr__(self, "right_vectors", frozen_array(self.right_vectors))

    @property
    def lambda_max(self) -> float:
        return float(self.coefficients[0])

    def reconstruct(self) -> np.ndarray:
        """Amplitude matrix rebuilt from the decomposition."""
        s = np.sqrt(self.coefficients)
        return np.einsum("i,ai,bi->ab", s, self.left_vectors, self.right_vectors)


def schmidt(psi: BipartiteState) -> SchmidtDecomposition:
    """Schmidt decomposition via SVD of the amplitude matrix.

    Cross-checks the identity ||B^dag B||_inf = dim_a * lambda_max to 1e-10
    before returning.
    """
    u, s, vh = np.linalg.svd(psi.amplitude_matrix, full_matrices=False)
    coeffs = s * s
    b = psi.b_matrix
    opnorm = float(np.linalg.eigvalsh(b.conj().T @ b)[-1])
    if abs(opnorm / psi.dim_a - float(coeffs[0])) > 1e-10:
        raise ToleranceError(
            "operator-norm identity violated: "
            f"|{opnorm / psi.dim_a} - {coeffs[0]}| > 1e-10"
        )
    return SchmidtDecomposition(coeffs, u, vh.T)


def generalized_pauli(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Shift and clock matrices X = sum_j |j><j+1| and Z = sum_j w^j |j><j|.

    Both are unitary, X^n = Z^n = I, and X Z = w Z X with w = exp(2 pi i/n).
    """
    if n < 2:
        raise DomainError("generalized Pauli matrices need dimension >= 2")
    x = np.zeros((n, n), dtype=complex)
    for j in range(n):
        x[j, (j + 1) % n] = 1.0
    z = np.diag(np.exp(2j * np.pi * np.arange(n) / n))
    return x, z


def normal_eigensystem(matrix, tol: float = 1e-8) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues and orthonormal eigenvectors of a normal matrix via Schur.

    The complex Schur form of a normal matrix is diagonal; a significant
    off-diagonal part therefore signals a non-normal input and raises.
    Returns ``(eigenvalues, vectors)`` with eigenvectors as columns.
    """
    m = as_matrix(matrix)
    if m.shape[0] != m.shape[1]:
        raise DomainError("eigensystem requires a square matrix")
    t, q = schur(m, output="complex")
    off = t - np.diag(np.diag(t))
    if float(np.max(np.abs(off))) > tol:
        raise DomainError(
            "matrix is not normal within tolerance; no orthonormal eigenbasis"
        )
    return np.diag(t).copy(), q


def unitary_eigensystem(matrix, tol: float = STRUCTURAL_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigensystem of a unitary matrix, eigenvalues projected onto the unit circle."""
    m = as_matrix(matrix)
    if not is_unitary(m, tol):
        raise DomainError("matrix is not unitary within tolerance")
    vals, vecs = normal_eigensystem(m, tol=max(tol, 1e-8))
    vals = vals / np.abs(vals)
    return vals, vecs
