"""Shared fixtures and reference configurations.

Frozen reference numbers in the test modules were computed with
60-digit arithmetic (mpmath) from the CODATA-2018 constants; they pin
the implementation independently of its own arithmetic.
"""

import pytest

from cyclores import FieldConfig, ParticleState, derived_scales

# Reference field strength used throughout: 1 T in Gaussian units.
H0_REF = 1.0e4


@pytest.fixture
def electron_rest():
    return ParticleState.electron()


def resonant_field(H0=H0_REF, A_bar=0.0, T=0.0, g=1):
    """Vacuum field exactly resonant with an electron at rest:
    omega' = omega = Omega, so the g = +1 detuning vanishes."""
    probe = FieldConfig(H0=H0, n=1.0, omega=1.0, g=g)
    scales = derived_scales(ParticleState.electron(), probe)
    return FieldConfig(H0=H0, n=1.0, omega=scales.Omega, g=g, A_bar=A_bar, T=T)
