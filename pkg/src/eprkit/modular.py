"""Twisted direct products of maps and finite-dimensional modular operators.

The twisted product of eta: H_b -> H_a and xi: H_a -> H_b acts on product
vectors by crossing the factors,

    (eta ⊗̃ xi)(u ⊗ v) = (eta v) ⊗ (xi u),

extended linearly when both factors are linear and antilinearly when both are
antilinear; one of each is ill defined and rejected.  On the a-major Kronecker
basis the matrix of the twisted product is kron(eta, xi) followed by the
permutation that swaps the two slots, for either parity.

Applying this to the maps induced by two bipartite vectors lifts them to
operators on the full product space; the lifted family reproduces, in finite
dimensions, the modular operators S, Delta, J defined by
S (A ⊗ 1) psi = (A* ⊗ 1) phi for a completely entangled psi.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .antilinear import AntilinearMap, adjoint
from .bipartite import BipartiteVector, epr_maps, polar_of_state, reduced
from .errors import DimMismatch, MixedParity, NotSeparating
from .linalg import as_matrix, frozen, herm_eigh, numerical_rank


def twist_permutation(dim_a: int, dim_b: int) -> np.ndarray:
    """Permutation sending a-major index (k, l) of H_a ⊗ H_b to b-major (l, k)."""
    cols = np.arange(dim_a * dim_b)
    rows = (cols % dim_b) * dim_a + cols // dim_b
    s = np.zeros((dim_a * dim_b, dim_a * dim_b))
    s[rows, cols] = 1.0
    return s


@dataclass(frozen=True)
class TwistedOperator:
    """Operator on H_a ⊗ H_b built as a twisted product of two factor maps.

    ``parity`` is the common parity of the factors; the matrix acts on the
    conjugated vector when antilinear.  ``factors`` records the two factor
    matrices (eta, xi) the operator came from.
    """

    mat: np.ndarray
    parity: str                               # "linear" | "antilinear"
    factors: tuple[np.ndarray, np.ndarray]    # (eta matrix, xi matrix)
    dim_a: int
    dim_b: int

    def __post_init__(self):
        object.__setattr__(self, "mat", frozen(self.mat))
        object.__setattr__(self, "factors", tuple(frozen(f) for f in self.factors))

    def __call__(self, v) -> np.ndarray:
        vec = np.asarray(v, dtype=np.complex128).reshape(-1)
        if vec.shape[0] != self.mat.shape[1]:
            raise DimMismatch(f"vector length {vec.shape[0]} != {self.mat.shape[1]}")
        return self.mat @ (np.conj(vec) if self.parity == "antilinear" else vec)

    def as_antilinear(self) -> AntilinearMap:
        if self.parity != "antilinear":
            raise MixedParity("operator is linear, not antilinear")
        return AntilinearMap(self.mat)


def twisted_product(eta_ab, xi_ba) -> TwistedOperator:
    """Twisted product of eta: H_b -> H_a and xi: H_a -> H_b of equal parity.

    Pass both factors as AntilinearMap for the antilinear case or both as
    plain matrices for the linear case.
    """
    eta_anti = isinstance(eta_ab, AntilinearMap)
    xi_anti = isinstance(xi_ba, AntilinearMap)
    if eta_anti != xi_anti:
        raise MixedParity("twisted product of a linear and an antilinear factor is ill defined")
    eta = eta_ab.mat if eta_anti else as_matrix(eta_ab, "eta")
    xi = xi_ba.mat if xi_anti else as_matrix(xi_ba, "xi")
    dim_a, dim_b = eta.shape
    if xi.shape != (dim_b, dim_a):
        raise DimMismatch(f"xi must map H_a({dim_a}) into H_b({dim_b}), got shape {xi.shape}")
    mat = np.kron(eta, xi) @ twist_permutation(dim_a, dim_b)
    return TwistedOperator(
        mat=mat,
        parity="antilinear" if eta_anti else "linear",
        factors=(eta, xi),
        dim_a=dim_a,
        dim_b=dim_b,
    )


def twisted_adjoint(p: TwistedOperator) -> TwistedOperator:
    """Hermitian adjoint: exchange and adjoin the factors, xi* ⊗̃ eta*."""
    eta, xi = p.factors
    if p.parity == "antilinear":
        return twisted_product(AntilinearMap(xi.T), AntilinearMap(eta.T))
    return twisted_product(xi.conj().T, eta.conj().T)


def twisted_compose(p1: TwistedOperator, p2: TwistedOperator) -> np.ndarray:
    """Composition of two twisted operators of equal parity, as a plain matrix.

    For antilinear factors the composite is the ordinary (untwisted) Kronecker
    product (eta1 ∘ xi2) ⊗ (xi1 ∘ eta2) of linear maps.
    """
    if p1.parity != p2.parity:
        raise MixedParity("cannot compose twisted operators of different parity")
    if (p1.dim_a, p1.dim_b) != (p2.dim_a, p2.dim_b):
        raise DimMismatch("twisted operators live on different product spaces")
    if p1.parity == "antilinear":
        return p1.mat @ np.conj(p2.mat)
    return p1.mat @ p2.mat


@dataclass(frozen=True)
class LiftedOperators:
    """The four twisted products of the maps induced by an ordered state pair."""

    s_tilde: TwistedOperator      # j_phi ⊗̃ s_psi
    f_tilde: TwistedOperator      # s_phi ⊗̃ j_psi
    delta_tilde: TwistedOperator  # s_phi ⊗̃ s_psi
    j: TwistedOperator            # j_phi ⊗̃ j_psi


def lift_operators(phi: BipartiteVector, psi: BipartiteVector) -> LiftedOperators:
    """Lift the induced maps of (phi, psi) to the product space.

    The first argument supplies the H_b -> H_a factors (the maps written with
    superscript ab), the second the H_a -> H_b factors.  Hermitian adjoints
    exchange the two arguments.
    """
    if (phi.dim_a, phi.dim_b) != (psi.dim_a, psi.dim_b):
        raise DimMismatch(
            f"state dimensions differ: {(phi.dim_a, phi.dim_b)} vs {(psi.dim_a, psi.dim_b)}"
        )
    s_phi_ab = epr_maps(phi).s_ab
    s_psi_ba = epr_maps(psi).s_ba
    j_phi_ab = adjoint(polar_of_state(phi).phase)
    j_psi_ba = polar_of_state(psi).phase
    return LiftedOperators(
        s_tilde=twisted_product(j_phi_ab, s_psi_ba),
        f_tilde=twisted_product(s_phi_ab, j_psi_ba),
        delta_tilde=twisted_product(s_phi_ab, s_psi_ba),
        j=twisted_product(j_phi_ab, j_psi_ba),
    )


def gns_check(psi: BipartiteVector) -> bool:
    """Whether both reductions of psi have full rank (complete entanglement).

    True also certifies cyclicity: the vectors (E_ij ⊗ 1) psi then span the
    whole product space.  Requires square dimensions to be attainable at all.
    """
    if psi.dim_a != psi.dim_b:
        return False
    s = np.linalg.svd(psi.coeff, compute_uv=False)
    return numerical_rank(s) == psi.dim_a


@dataclass(frozen=True)
class ModularTriple:
    """Closed operators S = J Delta^(1/2) of the finite-dimensional modular setup.

    S is antilinear with S (A ⊗ 1) psi = (A* ⊗ 1) phi; Delta is the positive
    operator omega_a(phi) ⊗ inverse(omega_b(psi)); J is the antilinear phase
    of S, antiunitary whenever phi has full-rank reductions too.
    """

    s: AntilinearMap
    delta: np.ndarray
    j: AntilinearMap

    def __post_init__(self):
        object.__setattr__(self, "delta", frozen(self.delta))


def tomita_S(phi: BipartiteVector, psi: BipartiteVector) -> ModularTriple:
    """Modular operators of the pair (phi, psi) with psi completely entangled.

    S is solved directly from its defining relation on the basis
    {(E_ij ⊗ 1) psi}; no closure machinery is needed in finite dimensions.
    Delta = omega_a(phi) ⊗ inverse(omega_b(psi)) with the inverse taken by
    eigendecomposition; rank-deficient reductions of psi are rejected rather
    than pseudo-inverted.  J is the polar phase of S and coincides with the
    twisted product of the phase maps of (psi, phi), in that order.
    """
    if (phi.dim_a, phi.dim_b) != (psi.dim_a, psi.dim_b):
        raise DimMismatch(
            f"state dimensions differ: {(phi.dim_a, phi.dim_b)} vs {(psi.dim_a, psi.dim_b)}"
        )
    if not gns_check(psi):
        raise NotSeparating("psi must be completely entangled (square, full-rank reductions)")
    d = psi.dim_a
    n = d * d
    basis = np.empty((n, n), dtype=np.complex128)   # columns conj((E_ij ⊗ 1) psi)
    target = np.empty((n, n), dtype=np.complex128)  # columns (E_ij* ⊗ 1) phi
    col = 0
    for i in range(d):
        for j in range(d):
            e_ij = np.zeros((d, d), dtype=np.complex128)
            e_ij[i, j] = 1.0
            basis[:, col] = np.conj((e_ij @ psi.coeff).reshape(-1))
            target[:, col] = (e_ij.conj().T @ phi.coeff).reshape(-1)
            col += 1
    s_mat = np.linalg.solve(basis.T, target.T).T

    w, v = herm_eigh(reduced(psi, "b"), "omega_b")
    if w.min() <= 0.0:
        raise NotSeparating("omega_b of psi is numerically singular")
    omega_b_inv = (v / w) @ v.conj().T
    delta = np.kron(reduced(phi, "a"), omega_b_inv)

    u, sv, vh = np.linalg.svd(s_mat)
    r = numerical_rank(sv)
    j_mat = u[:, :r] @ vh[:r, :]
    return ModularTriple(s=AntilinearMap(s_mat), delta=delta, j=AntilinearMap(j_mat))
