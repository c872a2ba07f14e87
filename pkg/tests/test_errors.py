"""Error-path coverage: every named failure mode raises its declared exception."""

import numpy as np
import pytest

from eprkit import errors
from eprkit.antilinear import AntilinearMap, chain, compose_mixed
from eprkit.bipartite import (
    cross_gram,
    inner_via_trace,
    local_transform,
    partner_operator,
    polar_of_state,
    project_rank1,
    purification_from_isometry,
    reconstruct,
    reduced,
    epr_maps,
)
from eprkit.linalg import partial_trace, psd_sqrt, svd
from eprkit.modular import twisted_compose, twisted_product
from eprkit.teleport import (
    chain_oracle,
    chain_teleport,
    luders_apply,
    luders_channel,
    projection_decomposition,
    teleport_oracle,
)

from util import basis_state, bell, random_unit_state, seeded_rng


def test_partial_trace_bad_keep():
    with pytest.raises(errors.DimMismatch):
        partial_trace(np.eye(4), 2, 2, "c")


def test_svd_rank_threshold_is_relative():
    assert svd(np.diag([1.0, 1e-13])).rank == 1
    assert svd(np.diag([1e-13, 1e-25])).rank == 1


def test_psd_sqrt_rejects_non_square():
    with pytest.raises(errors.DimMismatch):
        psd_sqrt(np.ones((2, 3)))


def test_compose_mixed_bad_order():
    with pytest.raises(errors.DimMismatch):
        compose_mixed(np.eye(2), AntilinearMap(np.eye(2)), "sideways")


def test_compose_mixed_dim_breaks():
    t = AntilinearMap(np.ones((2, 3)))
    with pytest.raises(errors.DimMismatch):
        compose_mixed(np.eye(3), t, "left")
    with pytest.raises(errors.DimMismatch):
        compose_mixed(np.eye(2), t, "right")


def test_chain_empty():
    with pytest.raises(errors.DimMismatch):
        chain([])


def test_antilinear_map_needs_matrix():
    with pytest.raises(errors.DimMismatch):
        AntilinearMap(np.ones(3))


def test_reduced_bad_side():
    with pytest.raises(errors.DimMismatch):
        reduced(bell(2), "c")


def test_project_rank1_wrong_length():
    with pytest.raises(errors.DimMismatch):
        project_rank1(bell(2), [1.0, 0.0, 0.0])


def test_inner_via_trace_dim_mismatch():
    with pytest.raises(errors.DimMismatch):
        inner_via_trace(bell(2), bell(3))


def test_reconstruct_wrong_operator_size():
    with pytest.raises(errors.DimMismatch):
        reconstruct(epr_maps(bell(2)).s_ba, np.eye(3))


def test_local_transform_wrong_sizes():
    with pytest.raises(errors.DimMismatch):
        local_transform(bell(2), np.eye(3), np.eye(2))
    with pytest.raises(errors.DimMismatch):
        local_transform(bell(2), np.eye(2), np.eye(3))


def test_partner_operator_wrong_size():
    with pytest.raises(errors.DimMismatch):
        partner_operator(np.eye(3), polar_of_state(bell(2)))


def test_purification_wrong_size():
    with pytest.raises(errors.DimMismatch):
        purification_from_isometry(np.eye(3) / 3, AntilinearMap(np.eye(2)))


def test_purification_rejects_non_psd():
    with pytest.raises(errors.NotPositive):
        purification_from_isometry(np.diag([1.0, -1.0]), AntilinearMap(np.eye(2)))


def test_cross_gram_dim_mismatch():
    with pytest.raises(errors.DimMismatch):
        cross_gram(bell(2), bell(3))


def test_teleport_oracle_wrong_input_length():
    with pytest.raises(errors.DimMismatch):
        teleport_oracle(bell(2), bell(2), [1.0, 0.0, 0.0])


def test_luders_channel_empty():
    with pytest.raises(errors.DimMismatch):
        luders_channel([], bell(2))


def test_luders_channel_mixed_spaces():
    with pytest.raises(errors.DimMismatch):
        luders_channel([bell(2), bell(3)], bell(2))


def test_luders_channel_ancilla_mismatch():
    with pytest.raises(errors.DimMismatch):
        luders_channel([bell(2)], bell(3))


def test_luders_apply_wrong_size():
    ch = luders_channel([bell(2)], bell(2))
    with pytest.raises(errors.DimMismatch):
        luders_apply(ch, np.eye(3))


def test_projection_decomposition_wrong_shape():
    with pytest.raises(errors.DimMismatch):
        projection_decomposition(np.eye(3), 2, 2)


def test_chain_teleport_broken_dims():
    rng = seeded_rng(200)
    stages = [bell(2), random_unit_state(rng, 3, 2), bell(2), bell(2)]
    with pytest.raises(errors.DimMismatch):
        chain_teleport(stages)


def test_chain_teleport_wrong_even_count():
    with pytest.raises(errors.DimMismatch):
        chain_teleport([bell(2)] * 6)


def test_chain_oracle_wrong_counts():
    with pytest.raises(errors.DimMismatch):
        chain_oracle([1.0, 0.0], [bell(2)], [bell(2), bell(2)])


def test_chain_oracle_nonunit_measured():
    unnorm = basis_state(0, 0, 2, 2)
    doubled = type(unnorm)(2.0 * unnorm.coeff)
    with pytest.raises(errors.NotUnit):
        chain_oracle([1.0, 0.0], [bell(2), bell(2)], [doubled, bell(2)])


def test_twisted_compose_mixed_parity():
    anti = twisted_product(AntilinearMap(np.eye(2)), AntilinearMap(np.eye(2)))
    lin = twisted_product(np.eye(2), np.eye(2))
    with pytest.raises(errors.MixedParity):
        twisted_compose(anti, lin)


def test_twisted_compose_dim_mismatch():
    p2 = twisted_product(np.eye(2), np.eye(2))
    p3 = twisted_product(np.eye(3), np.eye(3))
    with pytest.raises(errors.DimMismatch):
        twisted_compose(p2, p3)


def test_lift_operators_dim_mismatch():
    from eprkit.modular import lift_operators

    with pytest.raises(errors.DimMismatch):
        lift_operators(bell(2), bell(3))


def test_twisted_operator_call_wrong_length():
    p = twisted_product(np.eye(2), np.eye(2))
    with pytest.raises(errors.DimMismatch):
        p(np.ones(3))


def test_twisted_as_antilinear_guard():
    lin = twisted_product(np.eye(2), np.eye(2))
    with pytest.raises(errors.MixedParity):
        lin.as_antilinear()


def test_exception_hierarchy():
    assert issubclass(errors.DimMismatch, errors.EprkitError)
    assert issubclass(errors.DimMismatch, ValueError)
    assert issubclass(errors.ToleranceExceeded, ArithmeticError)
    assert issubclass(errors.ParseError, errors.EprkitError)
