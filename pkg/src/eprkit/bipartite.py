"""Bipartite state vectors, their induced antilinear maps, and the identities relating them.

A vector psi in H_a ⊗ H_b is stored by its coefficient matrix C, with
psi = sum_ij C[i, j] e_i ⊗ e_j (row index = a-system, column index = b-system).
The two canonical antilinear maps of psi are then

    s_ba : H_a -> H_b   with matrix C.T      (v -> C.T @ conj(v))
    s_ab : H_b -> H_a   with matrix C

so that s_ab is exactly the adjoint (transpose) of s_ba at the representation
level, and the reduced operators are the two compositions C @ C† and
C.T @ conj(C).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .antilinear import AntilinearMap, PolarParts, adjoint, apply, compose_aa, compose_mixed, polar
from .errors import DimMismatch, NotIsometry, NotUnit
from .linalg import as_matrix, frozen, psd_eigh, psd_sqrt, support_projection

UNIT_TOL = 1e-10
HERMITICITY_TOL = 1e-9
ISOMETRY_TOL = 1e-9


@dataclass(frozen=True)
class BipartiteVector:
    """Vector in H_a ⊗ H_b held as its (dim_a x dim_b) coefficient matrix.

    Unit norm is not required; subnormalized vectors carry event
    probabilities in their norm squared.
    """

    coeff: np.ndarray

    def __post_init__(self):
        c = as_matrix(self.coeff, "coeff")
        if c.shape[0] < 1 or c.shape[1] < 1:
            raise DimMismatch(f"dimensions must be positive, got {c.shape}")
        object.__setattr__(self, "coeff", frozen(c))

    @property
    def dim_a(self) -> int:
        return self.coeff.shape[0]

    @property
    def dim_b(self) -> int:
        return self.coeff.shape[1]

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeff))

    def to_vector(self) -> np.ndarray:
        """Flatten to the a-major Kronecker basis: index (i, j) -> i*dim_b + j."""
        return self.coeff.reshape(-1).copy()

    @classmethod
    def from_vector(cls, vec, dim_a: int, dim_b: int) -> "BipartiteVector":
        v = np.asarray(vec, dtype=np.complex128).reshape(-1)
        if v.shape[0] != dim_a * dim_b:
            raise DimMismatch(f"vector length {v.shape[0]} != {dim_a}*{dim_b}")
        return cls(v.reshape(dim_a, dim_b))


@dataclass(frozen=True)
class EprPair:
    """The two antilinear maps of one bipartite vector; s_ab = adjoint(s_ba) exactly."""

    s_ba: AntilinearMap  # H_a -> H_b
    s_ab: AntilinearMap  # H_b -> H_a


def epr_maps(psi: BipartiteVector) -> EprPair:
    """Build both maps from the coefficient matrix; see the module docstring."""
    return EprPair(s_ba=AntilinearMap(psi.coeff.T), s_ab=AntilinearMap(psi.coeff))


def _check_same_dims(x: BipartiteVector, y: BipartiteVector):
    if (x.dim_a, x.dim_b) != (y.dim_a, y.dim_b):
        raise DimMismatch(
            f"bipartite dimensions differ: {(x.dim_a, x.dim_b)} vs {(y.dim_a, y.dim_b)}"
        )


def _check_unit(v: np.ndarray, what: str, tol: float = UNIT_TOL):
    n = float(np.linalg.norm(v))
    if abs(n - 1.0) > tol:
        raise NotUnit(f"{what} has norm {n!r}, expected 1 within {tol:.0e}")


def project_rank1(psi: BipartiteVector, phi_a) -> BipartiteVector:
    """Apply (|phi_a><phi_a| ⊗ 1) to psi for a unit vector phi_a.

    The result equals phi_a ⊗ (s_ba phi_a); this is the identity that makes
    the induced maps independent of how psi is decomposed into product terms.
    """
    v = np.asarray(phi_a, dtype=np.complex128).reshape(-1)
    if v.shape[0] != psi.dim_a:
        raise DimMismatch(f"phi_a length {v.shape[0]} != dim_a {psi.dim_a}")
    _check_unit(v, "phi_a")
    return BipartiteVector(np.outer(v, np.conj(v)) @ psi.coeff)


def inner_via_trace(phi: BipartiteVector, psi: BipartiteVector) -> complex:
    """Scalar product <phi, psi> computed as Tr_a (s_psi_ab ∘ s_phi_ba)."""
    _check_same_dims(phi, psi)
    return complex(np.trace(psi.coeff @ np.conj(phi.coeff.T)))


def reconstruct(s_ba: AntilinearMap, a_op) -> BipartiteVector:
    """Return (A ⊗ 1) psi from the map s_ba of psi and a PSD operator A.

    Uses the spectral rank-one decomposition of A: with A = sum_k l_k |v_k><v_k|
    the result is sum_k phi_k ⊗ (s_ba phi_k) for phi_k = sqrt(l_k) v_k.
    With A = 1 this returns psi itself.
    """
    a = as_matrix(a_op, "A")
    if a.shape != (s_ba.dim_domain, s_ba.dim_domain):
        raise DimMismatch(f"A must be {s_ba.dim_domain} square, got {a.shape}")
    w, vecs = psd_eigh(a, "A")
    coeff = np.zeros((s_ba.dim_domain, s_ba.dim_codomain), dtype=np.complex128)
    for lam, v in zip(w, vecs.T):
        if lam == 0.0:
            continue
        phi_k = np.sqrt(lam) * v
        coeff += np.outer(phi_k, apply(s_ba, phi_k))
    return BipartiteVector(coeff)


def reduced(psi: BipartiteVector, side: str) -> np.ndarray:
    """Reduced operator of psi on one factor, via the map compositions.

    side="a": C @ C†, side="b": C.T @ conj(C).  Both agree with the partial
    trace of |psi><psi| and share the trace ||psi||^2.
    """
    c = psi.coeff
    if side == "a":
        return c @ c.conj().T
    if side == "b":
        return c.T @ np.conj(c)
    raise DimMismatch(f"side must be 'a' or 'b', got {side!r}")


def local_transform(psi: BipartiteVector, a_op, b_op) -> BipartiteVector:
    """Apply A ⊗ B; on coefficients this is A @ C @ B.T.

    The maps transform covariantly: the new s_ba is B ∘ s_ba ∘ A* and the new
    s_ab is A ∘ s_ab ∘ B*.
    """
    a = as_matrix(a_op, "A")
    b = as_matrix(b_op, "B")
    if a.shape != (psi.dim_a, psi.dim_a):
        raise DimMismatch(f"A must be {psi.dim_a} square, got {a.shape}")
    if b.shape != (psi.dim_b, psi.dim_b):
        raise DimMismatch(f"B must be {psi.dim_b} square, got {b.shape}")
    return BipartiteVector(a @ psi.coeff @ b.T)


def partner_operator(a_op, polar_of_psi: PolarParts) -> np.ndarray:
    """Transfer an operator A on H_a to its partner B on H_b across a state.

    B = (j_ba ∘ A ∘ j_ab)* with j the polar phase of s_ba.  B intertwines
    B* j_ba = j_ba A on the support of the a-reduction and reproduces the
    expectation: Tr omega_a A = Tr omega_b B.  Off the support of omega_b,
    B is zero.
    """
    j_ba = polar_of_psi.phase
    a = as_matrix(a_op, "A")
    if a.shape != (j_ba.dim_domain, j_ba.dim_domain):
        raise DimMismatch(f"A must be {j_ba.dim_domain} square, got {a.shape}")
    inner = compose_aa(j_ba, compose_mixed(a, adjoint(j_ba), "left"))
    return inner.conj().T


def purification_from_isometry(omega_a, w: AntilinearMap) -> BipartiteVector:
    """Purify a PSD operator with a chosen antilinear isometry w: H_a -> H_b.

    The returned psi has s_ba = w ∘ sqrt(omega_a), hence a-reduction omega_a.
    w must be isometric on the support of omega_a (its behavior off the
    support never enters).
    """
    om = as_matrix(omega_a, "omega_a")
    if om.shape != (w.dim_domain, w.dim_domain):
        raise DimMismatch(f"omega_a must be {w.dim_domain} square, got {om.shape}")
    q = support_projection(om)
    gram = compose_aa(adjoint(w), w)
    if np.abs(q @ gram @ q - q).max() > ISOMETRY_TOL:
        raise NotIsometry("w is not isometric on the support of omega_a")
    s_ba = compose_mixed(psd_sqrt(om), w, "right")
    return BipartiteVector(s_ba.mat.T)


def cross_gram(phi: BipartiteVector, psi: BipartiteVector) -> np.ndarray:
    """The linear map s_phi_ba ∘ s_psi_ab on H_b.

    Its singular values coincide with the eigenvalues of
    (sqrt(rho_a) omega_a sqrt(rho_a))^(1/2) built from the two a-reductions,
    and Tr (s_phi_ba ∘ s_psi_ab) B = <psi, (1 ⊗ B) phi> for every B on H_b.
    """
    _check_same_dims(phi, psi)
    return phi.coeff.T @ np.conj(psi.coeff)


def cloning_check(phi: BipartiteVector, psi: BipartiteVector) -> tuple[bool, float]:
    """Hermiticity of the two cross products, and the reduction commutator norm.

    Returns (hermitian, commutator_norm) where hermitian says whether both
    s_phi_ba ∘ s_psi_ab and s_phi_ab ∘ s_psi_ba are Hermitian within 1e-9,
    and commutator_norm is the Frobenius norm of
    [omega_psi_a, omega_phi_a].  Hermiticity forces the reductions to
    commute; the converse is not claimed.
    """
    _check_same_dims(phi, psi)
    x_b = phi.coeff.T @ np.conj(psi.coeff)
    x_a = phi.coeff @ np.conj(psi.coeff.T)
    hermitian = bool(
        np.abs(x_b - x_b.conj().T).max() <= HERMITICITY_TOL
        and np.abs(x_a - x_a.conj().T).max() <= HERMITICITY_TOL
    )
    om_psi = reduced(psi, "a")
    om_phi = reduced(phi, "a")
    commutator_norm = float(np.linalg.norm(om_psi @ om_phi - om_phi @ om_psi))
    return hermitian, commutator_norm


def polar_of_state(psi: BipartiteVector) -> PolarParts:
    """Polar parts of s_ba: positive factors are the square roots of the reductions."""
    return polar(epr_maps(psi).s_ba)
