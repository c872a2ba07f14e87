"""First-class antilinear maps between finite-dimensional Hilbert spaces.

An antilinear map t: H_x -> H_y satisfies t(au + bv) = conj(a) t(u) + conj(b) t(v).
In the fixed standard basis every such map is stored as a matrix M acting by

    t(v) = M @ conj(v)

This single convention drives the whole package, and it is worth spelling out
its consequences because each one is a classic source of sign-of-conjugation
bugs:

  * the Hermitian adjoint of t is the plain transpose of M (no conjugation),
  * composing two antilinear maps gives the linear map  M1 @ conj(M2),
  * composing with a linear operator L gives  L @ M  (L after t) and
    M @ conj(L)  (t after L).

Parity is encoded in the type: antilinear maps are AntilinearMap instances,
linear maps are bare ndarrays.  Sums and compositions across parities are
rejected; mixing them silently is how conjugations get lost.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimMismatch
from .linalg import as_matrix, frozen, numerical_rank


@dataclass(frozen=True)
class AntilinearMap:
    """Antilinear map represented by its matrix in the standard basis.

    ``mat`` has shape (dim_codomain, dim_domain) and the action is
    ``v -> mat @ conj(v)``.
    """

    mat: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "mat", frozen(as_matrix(self.mat, "mat")))

    @property
    def dim_domain(self) -> int:
        return self.mat.shape[1]

    @property
    def dim_codomain(self) -> int:
        return self.mat.shape[0]

    def __call__(self, v) -> np.ndarray:
        return apply(self, v)


def apply(t: AntilinearMap, v) -> np.ndarray:
    """Apply t to a vector: mat @ conj(v)."""
    vec = np.asarray(v, dtype=np.complex128).reshape(-1)
    if vec.shape[0] != t.dim_domain:
        raise DimMismatch(f"vector length {vec.shape[0]} != domain dimension {t.dim_domain}")
    return t.mat @ np.conj(vec)


def adjoint(t: AntilinearMap) -> AntilinearMap:
    """Hermitian adjoint; under the matrix convention this is the transpose.

    The defining relation is <y, t x> = <x, t* y> (both sides antilinear in
    nothing: the pairing itself supplies the conjugations).  adjoint is an
    involution, exactly.
    """
    return AntilinearMap(t.mat.T)


def compose_aa(t1: AntilinearMap, t2: AntilinearMap) -> np.ndarray:
    """Compose two antilinear maps; the result t1 ∘ t2 is linear: M1 @ conj(M2)."""
    if t1.dim_domain != t2.dim_codomain:
        raise DimMismatch(
            f"cannot compose: domain {t1.dim_domain} != codomain {t2.dim_codomain}"
        )
    return t1.mat @ np.conj(t2.mat)


def compose_mixed(linear, t: AntilinearMap, order: str) -> AntilinearMap:
    """Compose a linear matrix with an antilinear map; the result stays antilinear.

    order="left"  : linear ∘ t, matrix  L @ M
    order="right" : t ∘ linear, matrix  M @ conj(L)
    """
    lin = as_matrix(linear, "linear factor")
    if order == "left":
        if lin.shape[1] != t.dim_codomain:
            raise DimMismatch(f"linear factor wants {lin.shape[1]}, map produces {t.dim_codomain}")
        return AntilinearMap(lin @ t.mat)
    if order == "right":
        if t.dim_domain != lin.shape[0]:
            raise DimMismatch(f"map wants {t.dim_domain}, linear factor produces {lin.shape[0]}")
        return AntilinearMap(t.mat @ np.conj(lin))
    raise DimMismatch(f"order must be 'left' or 'right', got {order!r}")


def trace_product(t1: AntilinearMap, t2: AntilinearMap) -> complex:
    """Trace of t1 ∘ t2 for maps composable both ways.

    Swapping the factors conjugates the value: Tr(t1 t2) = conj(Tr(t2 t1)).
    """
    if t1.dim_domain != t2.dim_codomain or t2.dim_domain != t1.dim_codomain:
        raise DimMismatch("trace_product needs maps composable in both orders")
    return complex(np.trace(compose_aa(t1, t2)))


@dataclass(frozen=True)
class PolarParts:
    """Polar decomposition t = positive ∘ phase = phase ∘ positive_dom.

    ``positive`` lives on the codomain, ``positive_dom`` on the domain;
    ``phase`` is an antilinear partial isometry vanishing off the supports.
    The phase is unique only on the support: with degenerate singular values
    the off-support extension is a free choice, fixed here as zero.
    """

    positive: np.ndarray        # Hermitian PSD on the codomain
    phase: AntilinearMap
    support_dom: np.ndarray     # projection onto the domain-side support
    support_cod: np.ndarray     # projection onto the codomain-side support
    positive_dom: np.ndarray    # Hermitian PSD on the domain


def polar(t: AntilinearMap) -> PolarParts:
    """Polar-decompose an antilinear map via the SVD of its matrix.

    With mat = U diag(s) V† and r the numerical rank:

        phase        = U_r V_r†          (antilinear partial isometry)
        positive     = U_r diag(s_r) U_r†
        positive_dom = conj(V_r) diag(s_r) V_r^T
        support_cod  = U_r U_r†
        support_dom  = conj(V_r) V_r^T

    phase* ∘ phase and phase ∘ phase* are the two support projections, and
    the adjoint of the phase is again its transpose, by construction.
    """
    u, s, vh = np.linalg.svd(t.mat, full_matrices=False)
    r = numerical_rank(s)
    ur, sr, vhr = u[:, :r], s[:r], vh[:r, :]
    vr = vhr.conj().T
    phase = AntilinearMap(ur @ vhr)
    positive = (ur * sr) @ ur.conj().T
    positive_dom = (np.conj(vr) * sr) @ vr.T
    return PolarParts(
        positive=frozen((positive + positive.conj().T) / 2),
        phase=phase,
        support_dom=frozen(np.conj(vr) @ vr.T),
        support_cod=frozen(ur @ ur.conj().T),
        positive_dom=frozen((positive_dom + positive_dom.conj().T) / 2),
    )


def chain(maps) -> AntilinearMap | np.ndarray:
    """Fold a sequence of antilinear maps t_n ∘ ... ∘ t_1 (first applied first).

    An even count yields a linear matrix, an odd count an AntilinearMap.
    """
    ts = list(maps)
    if not ts:
        raise DimMismatch("chain needs at least one map")
    mat = ts[0].mat
    for t in ts[1:]:
        if t.dim_domain != mat.shape[0]:
            raise DimMismatch(f"chain break: map wants {t.dim_domain}, has {mat.shape[0]}")
        mat = t.mat @ np.conj(mat)
    return mat if len(ts) % 2 == 0 else AntilinearMap(mat)
