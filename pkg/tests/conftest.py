"""Shared fixtures: filter pairs and cascaded wavelets are expensive
enough to build once per session."""

import pytest

from wavesat import (
    check_property_R,
    compute_scaling,
    compute_wavelet,
    daubechies_filters,
    sine_squared_bump,
)


@pytest.fixture(scope="session")
def db1():
    return daubechies_filters(1)


@pytest.fixture(scope="session")
def db2():
    return daubechies_filters(2)


@pytest.fixture(scope="session")
def db3():
    return daubechies_filters(3)


@pytest.fixture(scope="session")
def db7():
    return daubechies_filters(7)


@pytest.fixture(scope="session")
def db3_phi15(db3):
    return compute_scaling(db3, 15)


@pytest.fixture(scope="session")
def db3_psi15(db3, db3_phi15):
    return compute_wavelet(db3_phi15, db3.g)


@pytest.fixture(scope="session")
def db3_report(db3):
    return check_property_R(db3, n_iters=15)


@pytest.fixture(scope="session")
def db2_psi15(db2):
    return compute_wavelet(compute_scaling(db2, 15), db2.g)


@pytest.fixture(scope="session")
def haar_psi12(db1):
    return compute_wavelet(compute_scaling(db1, 12), db1.g)


@pytest.fixture(scope="session")
def toy12():
    return sine_squared_bump(12)
