import numpy as np
import pytest

from junta_lab.errors import CalibrationError
from junta_lab.instances import InstanceSpec, embed, gen_exact_junta, gen_haar, gen_perturbed_junta
from junta_lab.metric import dist_to_k_juntas, nearest_junta_distance
from junta_lab.pauli import decompose, influence_exact


def test_empty_junta_is_identity_up_to_phase():
    U = gen_exact_junta(3, set(), 5).matrix
    assert np.allclose(U, U[0, 0] * np.eye(8), atol=1e-12)
    assert abs(abs(U[0, 0]) - 1) < 1e-12
    spec = decompose(gen_exact_junta(3, set(), 5))
    for S in ({1}, {2, 3}, {1, 2, 3}):
        assert influence_exact(spec, S) < 1e-12


def test_exact_junta_has_no_influence_outside_T():
    for seed in range(5):
        spec = decompose(gen_exact_junta(4, {2}, seed))
        assert influence_exact(spec, {1, 3, 4}) < 1e-9


def test_exact_junta_seed7_distance_zero():
    U = gen_exact_junta(4, {2}, 7)
    assert nearest_junta_distance(U, {2}).distance < 1e-9
    assert dist_to_k_juntas(U, 1)[0] < 1e-9


def test_exact_junta_spectrum_support_inside_T():
    T = {1, 3}
    spec = decompose(gen_exact_junta(4, T, 2))
    for x, c in spec.items(min_mag=0.0):
        if not x.support <= T:
            assert abs(c) < 1e-12


def test_embed_places_core_on_T():
    V = np.array([[0, 1], [1, 0]], dtype=complex)
    assert np.array_equal(embed(V, {1}, 2), np.kron(V, np.eye(2)))
    assert np.array_equal(embed(V, {2}, 2), np.kron(np.eye(2), V))


def test_perturbed_zero_target_matches_exact():
    assert np.array_equal(gen_perturbed_junta(4, {1}, 0.0, 3).matrix, gen_exact_junta(4, {1}, 3).matrix)


def test_perturbed_calibration():
    d = dist_to_k_juntas(gen_perturbed_junta(4, {1}, 0.2, 3), 1)[0]
    assert 0.195 <= d <= 0.205


def test_perturbed_monotone_in_target():
    lo = dist_to_k_juntas(gen_perturbed_junta(4, {1}, 0.1, 3), 1)[0]
    hi = dist_to_k_juntas(gen_perturbed_junta(4, {1}, 0.4, 3), 1)[0]
    assert hi > lo


def test_perturbed_rejects_bad_target():
    with pytest.raises(ValueError):
        gen_perturbed_junta(3, {1}, 0.95, 0)
    with pytest.raises(ValueError):
        gen_perturbed_junta(2, {1, 2}, 0.1, 0)


def test_haar_unitary_and_distinct():
    U = gen_haar(1, 4).matrix
    assert np.abs(U.conj().T @ U - np.eye(2)).max() < 1e-12
    A, B = gen_haar(3, 1).matrix, gen_haar(3, 2).matrix
    assert np.abs(A - B).max() > 1e-3


def test_haar_farness_label():
    d, w = dist_to_k_juntas(gen_haar(4, 11), 1)
    assert 0.5 < d <= 1.0
    assert len(w.T) == 1


def test_instance_spec_determinism_and_roundtrip():
    spec = InstanceSpec("perturbed_junta", 3, T=(2,), target_distance=0.3, seed=9)
    assert spec.build().matrix.tobytes() == spec.build().matrix.tobytes()
    again = InstanceSpec.from_dict(spec.to_dict())
    assert again == spec
    assert again.k == 1


def test_instance_spec_validation():
    with pytest.raises(ValueError):
        InstanceSpec("nope", 2)
    with pytest.raises(ValueError):
        InstanceSpec("haar_random", 2, target_distance=1.0)
    with pytest.raises(ValueError):
        InstanceSpec("labeled_file", 2).build()


def test_calibration_error_is_generation_error():
    assert issubclass(CalibrationError, Exception)
