import pytest

from cavdet import MHZ, UM, US, AtomParams, CavityParams, DriveParams


@pytest.fixture
def atom():
    return AtomParams()


@pytest.fixture
def main_cavity():
    # the workhorse parameter set most closed-form checks were done against
    return CavityParams(g_max=12 * MHZ, kappa_t=3 * MHZ, kappa_loss=6 * MHZ)


@pytest.fixture
def narrow_cavity():
    # symmetric low-loss mirrors; strongly coupled (C ~ 41), bistable at high pump
    return CavityParams(g_max=12 * MHZ, kappa_t=0.59 * MHZ, kappa_loss=0.59 * MHZ)


@pytest.fixture
def high_loss_cavity():
    return CavityParams(g_max=12 * MHZ, kappa_t=43 * MHZ, kappa_loss=86 * MHZ)


@pytest.fixture
def transit_cavity():
    return CavityParams(g_max=12 * MHZ, kappa_t=14 * MHZ, kappa_loss=14 * MHZ, waist=3 * UM)


@pytest.fixture
def drive2():
    return DriveParams(j_in=2e6, tau=10 * US)
