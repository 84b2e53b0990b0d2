import numpy as np
import pytest

from history_check.environment.pauli import (PauliString, apply_word, decompose_operator, hermitian_product_terms,
                                             local_kron, merge_terms, string_to_matrix, terms_to_sparse)

P0 = np.diag([1, 0]).astype(complex)
P1 = np.diag([0, 1]).astype(complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def as_dict(terms):
    return {s.axes: s.coeff for s in terms}


def reconstruct(terms, m):
    return terms_to_sparse(terms, m).toarray()


def random_hermitian(rng, k):
    a = rng.normal(size=(2 ** k, 2 ** k)) + 1j * rng.normal(size=(2 ** k, 2 ** k))
    return (a + a.conj().T) / 2


def test_projector_on_one_qubit():
    terms = decompose_operator(P1, [0], 1)
    assert as_dict(terms) == pytest.approx({'I': 0.5, 'Z': -0.5})


def test_two_qubit_projector_expansion():
    # |0><0| on qubit 0, |1><1| on qubit 1
    terms = decompose_operator(local_kron([P0, P1]), [0, 1], 2)
    assert as_dict(terms) == pytest.approx({'II': 0.25, 'ZI': 0.25, 'IZ': -0.25, 'ZZ': -0.25})


def test_hadamard_cross_term_matches_trace_oracle():
    raise_ = np.array([[0, 0], [1, 0]], dtype=complex)
    cross = -0.5 * (np.kron(raise_, H) + np.kron(raise_, H).conj().T)
    terms = decompose_operator(cross, [0, 1], 2)
    for s in terms:
        local = string_to_matrix(PauliString(s.axes, 1.0), [0, 1])
        assert s.coeff == pytest.approx(np.trace(local.conj().T @ cross).real / 4, abs=1e-12)
    np.testing.assert_allclose(reconstruct(terms, 2), cross, atol=1e-12)


@pytest.mark.parametrize('k', [1, 2, 3])
def test_random_hermitian_reconstruction(rng, k):
    for _ in range(5):
        matrix = random_hermitian(rng, k)
        terms = decompose_operator(matrix, list(range(k)), k)
        np.testing.assert_allclose(reconstruct(terms, k), matrix, atol=1e-10)
        assert len({s.axes for s in terms}) == len(terms)


def test_embedding_acts_as_identity_outside_support(rng):
    matrix = random_hermitian(rng, 1)
    terms = decompose_operator(matrix, [2], 3)
    assert all(s.support() in ((), (2,)) for s in terms)
    np.testing.assert_allclose(reconstruct(terms, 3), np.kron(matrix, np.eye(4)), atol=1e-12)


def test_rejects_non_hermitian_input():
    with pytest.raises(ValueError, match='not Hermitian'):
        decompose_operator(np.array([[0, 1], [0, 0]], dtype=complex), [0], 1)


@pytest.mark.parametrize('support, m', [([1], 1), ([0, 0], 2), ([0, 1, 2, 3], 4)])
def test_rejects_bad_support(support, m):
    matrix = np.eye(2 ** len(support), dtype=complex)
    with pytest.raises(ValueError):
        decompose_operator(matrix, support, m)


def test_string_to_matrix_examples():
    np.testing.assert_allclose(string_to_matrix(PauliString('Z', 1.0), [0]), np.diag([1, -1]))
    np.testing.assert_allclose(string_to_matrix(PauliString('XX', -0.5), [0, 1]), -0.5 * np.fliplr(np.eye(4)))


def test_string_to_matrix_rejects_axis_outside_restriction():
    with pytest.raises(ValueError, match='outside'):
        string_to_matrix(PauliString('IZX', 1.0), [0, 1])


def test_text_form():
    s = PauliString.from_text('-0.25 * IZZI')
    assert s == PauliString('IZZI', -0.25)
    assert s.to_text() == '-0.25 * IZZI'
    assert s.support() == (1, 2)
    assert s.weight() == 2
    assert s.sign() == -1
    with pytest.raises(ValueError):
        PauliString.from_text('IZZI')
    with pytest.raises(ValueError):
        PauliString('IQ', 1.0)


def test_apply_word_matches_dense_matrix(rng):
    amps = rng.normal(size=8) + 1j * rng.normal(size=8)
    for word in ('XYZ', 'YIY', 'IZX', 'YYY'):
        s = PauliString(word, 1.0)
        dense = string_to_matrix(s, [0, 1, 2])
        np.testing.assert_allclose(apply_word(amps, s), dense @ amps, atol=1e-12)


def test_hermitian_product_terms_match_dense_construction(rng):
    a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    b = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    terms = hermitian_product_terms(a, [0], b, [1, 2], 3, scale=-0.5)
    expected = -0.5 * (np.kron(b, a) + np.kron(b, a).conj().T)
    np.testing.assert_allclose(reconstruct(terms, 3), expected, atol=1e-10)


def test_hermitian_product_terms_reject_overlap():
    with pytest.raises(ValueError, match='overlap'):
        hermitian_product_terms(np.eye(2), [0], np.eye(2), [0], 2)


def test_merge_terms_sums_and_drops_cancelled_words():
    merged = merge_terms([PauliString('ZI', 0.5), PauliString('IZ', 1.0), PauliString('ZI', -0.5), PauliString('IZ', 0.25)])
    assert merged == [PauliString('IZ', 1.25)]
