import numpy as np
import pytest

from heraldic import FockState, InvalidStateError, enumerate_fock_states
from heraldic.schemes import (
    BELL_LABELS,
    bell_state,
    bell_targets,
    ghz_canonical_targets,
    ghz_targets,
)


def test_ghz_targets():
    targets = ghz_targets()
    assert len(targets) == 20
    assert len({t.label for t in targets}) == 20
    assert all(t.n_photons == 3 and t.n_modes == 6 for t in targets)


def test_canonical_targets_are_part_of_the_family():
    labels = {t.label for t in ghz_targets()}
    assert [t.label for t in ghz_canonical_targets()] == ["+101010", "-101010"]
    assert {"+101010", "-101010"} <= labels


def test_bell_states_are_orthonormal():
    basis = enumerate_fock_states(4, 2)
    vectors = np.array([b.state.vector(basis) for b in bell_targets()])
    assert np.allclose(vectors.conj() @ vectors.T, np.eye(len(BELL_LABELS)))


def test_bell_state_terms():
    basis = enumerate_fock_states(4, 2)
    vector = bell_state("psi-").vector(basis)
    assert vector[basis.index(FockState((1, 0, 0, 1)))] == pytest.approx(1 / np.sqrt(2))
    assert vector[basis.index(FockState((0, 1, 1, 0)))] == pytest.approx(-1 / np.sqrt(2))


def test_unknown_bell_state():
    with pytest.raises(InvalidStateError):
        bell_state("omega+")
