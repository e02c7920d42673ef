"""Finite LOCC protocol trees: exact evaluation, Monte-Carlo runs, constructions.

A protocol is a finite tree of alternating local POVM rounds.  Node operators
are Kraus-style matrices acting on one party's current space; rectangular
operators are allowed so ancilla enlargement and collapse are carried by the
shapes themselves.  Every leaf holds a guess label into the ensemble.

Exact evaluation pushes all operators onto the matrix side of the state
correspondence: with accumulated Alice product X and Bob product E along a
root-to-leaf path, the branch weight for state B is ||E B X^T||_F^2 / dim_a.
The Monte-Carlo sampler is an independent route: it propagates amplitude
matrices directly and samples outcomes branch by branch with Born weights.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import null_space, schur

from .ensembles import StateEnsemble
from .errors import DomainError, ToleranceError
from .qstate import BipartiteState, as_matrix, frozen_array

ALICE = "alice"
BOB = "bob"

# Branches lighter than this are dropped from joint tables (keeps entropy
# sums away from log(0); the discarded mass bounds the induced error).
PRUNE_TOL = 1e-14


@dataclass(frozen=True, eq=False)
class Povm:
    """One measurement round: operators M_i with sum_i M_i^dag M_i = I."""

    elements: tuple

    def __post_init__(self):
        elements = tuple(frozen_array(as_matrix(m)) for m in self.elements)
        if not elements:
            raise DomainError("POVM needs at least one element")
        in_dims = {m.shape[1] for m in elements}
        if len(in_dims) != 1:
            raise DomainError("POVM elements disagree on input dimension")
        object.__setattr__(self, "elements", elements)

    @property
    def input_dim(self) -> int:
        return self.elements[0].shape[1]

    def completeness_defect(self) -> float:
        d = self.input_dim
        acc = np.zeros((d, d), dtype=complex)
        for m in self.elements:
            acc += m.conj().T @ m
        return float(np.max(np.abs(acc - np.eye(d))))


@dataclass(frozen=True)
class Leaf:
    guess: int


@dataclass(frozen=True, eq=False)
class ProtocolNode:
    actor: str
    povm: Povm
    children: tuple

    def __post_init__(self):
        if self.actor not in (ALICE, BOB):
            raise DomainError(f"unknown actor {self.actor!r}")
        children = tuple(self.children)
        if len(children) != len(self.povm.elements):
            raise DomainError("one child per POVM outcome required")
        object.__setattr__(self, "children", children)


@dataclass(frozen=True, eq=False)
class LoccProtocol:
    """Finite tree of alternating Alice/Bob rounds with guess labels at leaves."""

    dim_a: int
    dim_b: int
    root: ProtocolNode

    def validate(self, k: int | None = None, tol: float = 1e-10) -> None:
        """Check alternation, operator shape chaining, completeness, leaf labels."""

        def walk(node, da, db, prev_actor):
            if isinstance(node, Leaf):
                if node.guess < 0 or (k is not None and node.guess >= k):
                    raise DomainError(f"leaf guess {node.guess} out of range")
                return
            if node.actor == prev_actor:
                raise DomainError("actors must alternate along every path")
            cur = da if node.actor == ALICE else db
            if node.povm.input_dim != cur:
                raise DomainError(
                    f"{node.actor} POVM input dim {node.povm.input_dim} != current dim {cur}"
                )
            defect = node.povm.completeness_defect()
            if defect > tol:
                raise DomainError(f"incomplete POVM (defect {defect:.3e} > {tol:g})")
            for m, child in zip(node.povm.elements, node.children):
                out = m.shape[0]
                if node.actor == ALICE:
                    walk(child, out, db, node.actor)
                else:
                    walk(child, da, out, node.actor)

        walk(self.root, self.dim_a, self.dim_b, None)

    def map_leaves(self, fn) -> "LoccProtocol":
        """New protocol with every Leaf replaced by fn(leaf)."""

        def walk(node):
            if isinstance(node, Leaf):
                return fn(node)
            return ProtocolNode(node.actor, node.povm, tuple(walk(c) for c in node.children))

        return LoccProtocol(self.dim_a, self.dim_b, walk(self.root))


@dataclass(frozen=True, eq=False)
class ProtocolEvaluation:
    """Exact outcome statistics for one protocol on one ensemble.

    ``joint`` rows are (state v, outcome path, guess, probability); mutual
    information between the state label and the full transcript is reported
    in bits.
    """

    success_probability: float
    mutual_information_bits: float
    joint: tuple
    per_state_success: tuple

    @property
    def mutual_information_nats(self) -> float:
        return self.mutual_information_bits * math.log(2.0)


def projective_povm(basis) -> Povm:
    """Rank-1 row-vector POVM measuring in the columns of ``basis``."""
    b = as_matrix(basis)
    return Povm(tuple(b[:, i].conj().reshape(1, -1) for i in range(b.shape[1])))


def identity_round(dim: int) -> Povm:
    return Povm((np.eye(dim, dtype=complex),))


def orthonormal_completion(vectors, dim: int) -> np.ndarray:
    """Extend near-orthonormal vectors to an exactly orthonormal basis of C^dim.

    The given vectors are tightened by QR (phases fixed so columns track the
    inputs); the complement comes from an SVD null space, so the assembled
    basis is orthonormal to machine precision.
    """
    vecs = [np.asarray(v, dtype=complex).reshape(-1) for v in vectors]
    if not vecs:
        return np.eye(dim, dtype=complex)
    v = np.column_stack(vecs)
    if v.shape[0] != dim:
        raise DomainError("vector length does not match dimension")
    if v.shape[1] > dim:
        raise DomainError("more vectors than the dimension allows")
    q, r = np.linalg.qr(v)
    d = np.diag(r)
    if np.any(np.abs(d) < 1e-6):
        raise DomainError("vectors are numerically dependent")
    q = q * (d / np.abs(d))
    if v.shape[1] == dim:
        return q
    comp = null_space(v.conj().T)
    return np.column_stack([q, comp])


def one_way_protocol(alice_basis, bob_groups, dim_b: int, fallback: int = 0) -> LoccProtocol:
    """Two-round protocol: Alice measures a basis, Bob a per-outcome labeled basis.

    ``bob_groups[x]`` is a sequence of (label, vector) pairs for Alice
    outcome x; Bob's vectors are completed to a full basis and completion
    outcomes guess ``fallback``.
    """
    ab = as_matrix(alice_basis)
    dim_a = ab.shape[0]
    if ab.shape[1] != dim_a:
        raise DomainError("Alice basis must be square")
    children = []
    for group in bob_groups:
        labels = [int(lab) for lab, _ in group]
        basis = orthonormal_completion([v for _, v in group], dim_b)
        leaves = tuple(
            Leaf(labels[i]) if i < len(labels) else Leaf(fallback)
            for i in range(dim_b)
        )
        children.append(ProtocolNode(BOB, projective_povm(basis), leaves))
    root = ProtocolNode(ALICE, projective_povm(ab), tuple(children))
    return LoccProtocol(dim_a, dim_b, root)


def _leaf_weights(protocol: LoccProtocol, b_matrices) -> list:
    """Per-leaf (path, guess, weights-per-state) via the matrix-side push-through."""
    m = protocol.dim_a
    records = []

    def walk(node, x_acc, e_acc, path):
        if isinstance(node, Leaf):
            w = np.array(
                [np.linalg.norm(e_acc @ b @ x_acc.T) ** 2 / m for b in b_matrices]
            )
            records.append((path, node.guess, w))
            return
        for idx, (op, child) in enumerate(zip(node.povm.elements, node.children)):
            if node.actor == ALICE:
                walk(child, op @ x_acc, e_acc, path + (idx,))
            else:
                walk(child, x_acc, op @ e_acc, path + (idx,))

    walk(protocol.root, np.eye(m, dtype=complex), np.eye(protocol.dim_b, dtype=complex), ())
    return records


def evaluate(
    protocol: LoccProtocol,
    ensemble: StateEnsemble,
    tol: float = 1e-10,
    prune_tol: float = PRUNE_TOL,
) -> ProtocolEvaluation:
    """Exact branch-sum evaluation of a protocol on an ensemble.

    Computes the full joint distribution over (state, outcome path), the
    success probability P(guess = state), and the mutual information between
    state label and transcript in bits.
    """
    if (protocol.dim_a, protocol.dim_b) != (ensemble.dim_a, ensemble.dim_b):
        raise DomainError("protocol and ensemble dimensions disagree")
    protocol.validate(k=ensemble.k, tol=tol)
    records = _leaf_weights(protocol, ensemble.b_matrices())

    totals = np.zeros(ensemble.k)
    for _, _, w in records:
        totals += w
    if float(np.max(np.abs(totals - 1.0))) > 1e-9:
        raise ToleranceError(
            f"branch weights do not conserve probability (max dev {np.max(np.abs(totals - 1.0)):.3e})"
        )

    joint = []
    per_state = np.zeros(ensemble.k)
    for path, guess, w in records:
        for i in range(ensemble.k):
            p = float(ensemble.priors[i] * w[i])
            if p < prune_tol:
                continue
            joint.append((i, path, guess, p))
            if guess == i:
                per_state[i] += float(w[i])

    # rounding can push pure-probability sums a few ulp past 1
    success = float(min(1.0, sum(p for i, _, g, p in joint if g == i)))
    per_state = np.clip(per_state, 0.0, 1.0)

    pv: dict = {}
    py: dict = {}
    for i, path, _, p in joint:
        pv[i] = pv.get(i, 0.0) + p
        py[path] = py.get(path, 0.0) + p
    mi = 0.0
    for i, path, _, p in joint:
        mi += p * math.log2(p / (pv[i] * py[path]))
    mi = max(mi, 0.0)

    return ProtocolEvaluation(
        success_probability=success,
        mutual_information_bits=float(mi),
        joint=tuple(joint),
        per_state_success=tuple(float(x) for x in per_state),
    )


def simulate(protocol: LoccProtocol, ensemble: StateEnsemble, trials: int, seed: int) -> float:
    """Empirical success rate over seeded Monte-Carlo runs.

    Independent of :func:`evaluate`: the state is drawn from the priors and
    then propagated as an amplitude matrix, sampling each round's outcome
    with Born weights.  Trials sharing a tree node are advanced together via
    multinomial counts, which is distribution-identical to per-trial
    sampling.
    """
    if trials < 1:
        raise DomainError("trials must be >= 1")
    if (protocol.dim_a, protocol.dim_b) != (ensemble.dim_a, ensemble.dim_b):
        raise DomainError("protocol and ensemble dimensions disagree")
    protocol.validate(k=ensemble.k)
    rng = np.random.default_rng(seed)
    per_state = rng.multinomial(trials, ensemble.priors)
    correct = 0

    def walk(node, s_mat, count, target):
        nonlocal correct
        if isinstance(node, Leaf):
            if node.guess == target:
                correct += count
            return
        branch_states = []
        probs = []
        for op in node.povm.elements:
            nxt = op @ s_mat if node.actor == ALICE else s_mat @ op.T
            branch_states.append(nxt)
            probs.append(max(float(np.linalg.norm(nxt) ** 2), 0.0))
        probs = np.array(probs)
        probs /= probs.sum()
        counts = rng.multinomial(count, probs)
        for nxt, child, c, p in zip(branch_states, node.children, counts, probs):
            if c == 0:
                continue
            walk(child, nxt / np.sqrt(p), int(c), target)

    for i, cnt in enumerate(per_state):
        if cnt:
            walk(protocol.root, ensemble.states[i].amplitude_matrix, int(cnt), i)
    return correct / trials


def standard_bell_protocol(n: int, subset=None) -> LoccProtocol:
    """Both parties measure the computational basis; guess from the shift.

    For a Bell state labelled (m, l) the outcome pair (a, b) always satisfies
    a - b = m (mod n), so the shift m is learned exactly and l not at all.
    The guess is the subset member with that shift and the smallest l; ties
    and shift misses fall back to the lowest label.  ``subset`` lists (m, l)
    pairs and defaults to the full n^2 Bell basis, matching the state order
    of the corresponding ensemble.
    """
    if n < 2:
        raise DomainError("need dimension >= 2")
    if subset is None:
        subset = [(m, l) for m in range(n) for l in range(n)]
    subset = [(int(m), int(l)) for m, l in subset]
    if not subset:
        raise DomainError("subset must be nonempty")
    if len(set(subset)) != len(subset):
        raise DomainError("duplicate subset labels")
    for m, l in subset:
        if not (0 <= m < n and 0 <= l < n):
            raise DomainError(f"label {(m, l)} out of range")

    comp = projective_povm(np.eye(n, dtype=complex))
    children = []
    for a in range(n):
        leaves = []
        for b in range(n):
            shift = (a - b) % n
            matches = [idx for idx, (m, _) in enumerate(subset) if m == shift]
            if matches:
                guess = min(matches, key=lambda idx: subset[idx][1])
            else:
                guess = 0
            leaves.append(Leaf(guess))
        children.append(ProtocolNode(BOB, comp, tuple(leaves)))
    root = ProtocolNode(ALICE, comp, tuple(children))
    return LoccProtocol(n, n, root)


def discard_protocol(inner: LoccProtocol, kept, k: int) -> LoccProtocol:
    """Lift a protocol for the ``kept`` sub-ensemble to a k-state label space.

    The inner tree is reused unchanged; leaf guesses (indices into ``kept``)
    are relabelled to the enclosing ensemble.  States outside ``kept`` are
    never guessed, so on a uniform ensemble the overall success is
    (len(kept)/k) times the inner success on the kept states.
    """
    kept = [int(x) for x in kept]
    if not kept:
        raise DomainError("kept labels must be nonempty")
    if len(set(kept)) != len(kept):
        raise DomainError("duplicate kept labels")
    if any(x < 0 or x >= k for x in kept):
        raise DomainError("kept labels out of range")

    def remap(leaf: Leaf) -> Leaf:
        if leaf.guess >= len(kept):
            raise DomainError("inner protocol guesses outside the kept set")
        return Leaf(kept[leaf.guess])

    return inner.map_leaves(remap)


def _solve_compression(b2, target):
    """Unit coefficients (c0, c1) with [c0,c1]^dag B [c0,c1] = target.

    Requires ``target`` to lie on the segment between the diagonal entries of
    the 2x2 compression ``b2`` (then a closed-form solution exists).
    """
    bs = b2 - target * np.eye(2)
    z = bs[1, 1] - bs[0, 0]
    if abs(z) < 1e-14:
        return np.array([1.0, 0.0], dtype=complex)
    mu = float(np.clip(-np.real(bs[0, 0] / z), 0.0, 1.0))
    argz = np.angle(z)
    xp = bs[0, 1] * np.exp(-1j * argz)
    yp = bs[1, 0] * np.exp(-1j * argz)
    phi = np.arctan2(-(xp.imag + yp.imag), xp.real - yp.real)
    rho = float(np.real((bs[0, 1] * np.exp(1j * phi) + bs[1, 0] * np.exp(-1j * phi)) * np.exp(-1j * argz)))
    az = abs(z)
    quad = (1.0 - mu) * az
    if quad < 1e-14:
        x = 0.0 if abs(rho) < 1e-14 else max(mu * az / rho, 0.0)
    else:
        x = (-rho + np.sqrt(rho * rho + 4.0 * quad * mu * az)) / (2.0 * quad)
    t = np.arctan(x)
    return np.array([np.cos(t), np.sin(t) * np.exp(1j * phi)], dtype=complex)


def _vector_with_zero_value(mat, tol=1e-9):
    """Unit w with <w|M|w> = 0, given 0 in the convex hull of the spectrum."""
    m = mat.shape[0]
    if m == 1:
        return np.array([1.0], dtype=complex)
    t, q = schur(mat, output="complex")
    d = np.diag(t)
    j = int(np.argmin(np.abs(d)))
    if abs(d[j]) <= tol:
        return q[:, j]
    for i in range(m):
        for j2 in range(i + 1, m):
            seg = d[j2] - d[i]
            if abs(seg) < 1e-14:
                continue
            s = float(np.clip(np.real((0.0 - d[i]) / seg), 0.0, 1.0))
            if abs(d[i] + s * seg) <= tol:
                b2 = np.array([[d[i], t[i, j2]], [0.0, d[j2]]], dtype=complex)
                c = _solve_compression(b2, 0.0)
                return c[0] * q[:, i] + c[1] * q[:, j2]
    # no single segment hits zero: combine three eigen-directions
    for i in range(m):
        for j2 in range(i + 1, m):
            for k in range(j2 + 1, m):
                a = np.array(
                    [
                        [d[i].real, d[j2].real, d[k].real],
                        [d[i].imag, d[j2].imag, d[k].imag],
                        [1.0, 1.0, 1.0],
                    ]
                )
                try:
                    lam = np.linalg.solve(a, np.array([0.0, 0.0, 1.0]))
                except np.linalg.LinAlgError:
                    continue
                if np.all(lam > -1e-9):
                    lam = np.clip(lam, 0.0, None)
                    ab = lam[0] + lam[1]
                    if ab < 1e-14:
                        continue
                    tau = (lam[0] * d[i] + lam[1] * d[j2]) / ab
                    b2 = np.array([[d[i], t[i, j2]], [0.0, d[j2]]], dtype=complex)
                    c = _solve_compression(b2, tau)
                    w1 = c[0] * q[:, i] + c[1] * q[:, j2]
                    qc = q[:, k]
                    b2b = np.array(
                        [
                            [np.vdot(w1, mat @ w1), np.vdot(w1, mat @ qc)],
                            [np.vdot(qc, mat @ w1), np.vdot(qc, mat @ qc)],
                        ],
                        dtype=complex,
                    )
                    c2 = _solve_compression(b2b, 0.0)
                    return c2[0] * w1 + c2[1] * qc
    raise ToleranceError("could not locate a zero of the numerical range")


def _zero_diagonal_basis(mat, tol=1e-9) -> np.ndarray:
    """Orthonormal basis in which the traceless matrix ``mat`` has zero diagonal.

    Deflation: find one unit vector with vanishing quadratic form (it exists
    because the numerical range of a traceless matrix contains zero), peel it
    off, and recurse on the orthogonal complement, whose compression is
    traceless again.
    """
    m = mat.shape[0]
    if abs(np.trace(mat)) > 1e-9:
        raise DomainError("matrix must be traceless")
    cols = []
    iso = np.eye(m, dtype=complex)
    mk = mat.astype(complex)
    for _ in range(m - 1):
        wk = _vector_with_zero_value(mk)
        wk = wk / np.linalg.norm(wk)
        cols.append(iso @ wk)
        comp = null_space(wk.conj().reshape(1, -1))
        mk = comp.conj().T @ mk @ comp
        iso = iso @ comp
    cols.append(iso[:, 0])
    w = np.column_stack(cols)
    diag = np.abs(np.diag(w.conj().T @ mat @ w))
    if float(np.max(diag)) > tol or float(np.max(np.abs(w.conj().T @ w - np.eye(m)))) > tol:
        raise ToleranceError("zero-diagonal basis construction failed tolerance")
    return w


def two_state_protocol(psi1: BipartiteState, psi2: BipartiteState) -> LoccProtocol:
    """Perfect one-way protocol for any two orthogonal bipartite pure states.

    Alice measures in a basis chosen so Bob's conditional states are
    orthogonal for every outcome: with amplitude matrices S1, S2 the matrix
    M = conj(S1) S2^T is traceless, and any basis giving M a zero diagonal
    works.  Bob then separates his two conditional states projectively.
    """
    if (psi1.dim_a, psi1.dim_b) != (psi2.dim_a, psi2.dim_b):
        raise DomainError("states live in different spaces")
    overlap = abs(np.vdot(psi1.amplitudes, psi2.amplitudes))
    if overlap > 1e-10:
        raise DomainError(f"states are not orthogonal (|<1|2>| = {overlap:.3e})")
    s1 = psi1.amplitude_matrix
    s2 = psi2.amplitude_matrix
    w = _zero_diagonal_basis(s1.conj() @ s2.T)
    alice_basis = w.conj()
    groups = []
    for a in range(psi1.dim_a):
        pairs = []
        for label, s in ((0, s1), (1, s2)):
            r = s.T @ w[:, a]
            nrm = float(np.linalg.norm(r))
            if nrm > 1e-12:
                pairs.append((label, r / nrm))
        groups.append(tuple(pairs))
    return one_way_protocol(alice_basis, groups, psi1.dim_b, fallback=0)


def blind_guess_protocol(dim_a: int, dim_b: int, guess: int = 0) -> LoccProtocol:
    """Measure nothing (trivial rounds) and always output ``guess``."""
    root = ProtocolNode(
        ALICE,
        identity_round(dim_a),
        (ProtocolNode(BOB, identity_round(dim_b), (Leaf(guess),)),),
    )
    return LoccProtocol(dim_a, dim_b, root)


def product_basis_protocol(ensemble: StateEnsemble) -> LoccProtocol:
    """Perfect local protocol for a locally clustered orthogonal product set.

    Requires every state to be a product a_i (x) b_i whose Alice factors form
    groups of pairwise-equal rays, distinct groups orthogonal, with the Bob
    factors orthogonal inside each group (true for any basis of the form
    {|a> (x) |b>}).  Alice measures the group rays, Bob the group's local
    vectors.
    """
    states = ensemble.states
    factors = []
    for idx, psi in enumerate(states):
        u, s, vh = np.linalg.svd(psi.amplitude_matrix, full_matrices=False)
        if s[0] ** 2 < 1.0 - 1e-10:
            raise DomainError(f"state {idx} is not a product state")
        factors.append((u[:, 0], vh[0, :]))

    groups: list[list[int]] = []
    reps: list[np.ndarray] = []
    for idx, (a_vec, _) in enumerate(factors):
        placed = False
        for g, rep in enumerate(reps):
            ov = abs(np.vdot(rep, a_vec))
            if ov > 1.0 - 1e-8:
                groups[g].append(idx)
                placed = True
                break
            if ov > 1e-8:
                raise DomainError("Alice factors are neither equal nor orthogonal")
        if not placed:
            groups.append([idx])
            reps.append(a_vec)

    bob_groups = []
    for g, members in enumerate(groups):
        vecs = []
        for idx in members:
            vecs.append((idx, factors[idx][1]))
        for i in range(len(vecs)):
            for j in range(i + 1, len(vecs)):
                if abs(np.vdot(vecs[i][1], vecs[j][1])) > 1e-8:
                    raise DomainError("Bob factors within a group are not orthogonal")
        bob_groups.append(tuple(vecs))

    alice_basis = orthonormal_completion(reps, ensemble.dim_a)
    for extra in range(len(reps), ensemble.dim_a):
        bob_groups.append(tuple())
    return one_way_protocol(alice_basis, bob_groups, ensemble.dim_b, fallback=0)
