from fractions import Fraction

import pytest

from semifix.algebra import GroundRegime, SetupParams, validate_params
from semifix.scalars import LoopMonomial, root_of_unity


@pytest.fixture(autouse=True)
def semifix_home(monkeypatch, tmp_path):
    """Keep logs, stored configs and the verification history inside tmp_path."""
    home = tmp_path / "semifix-home"
    monkeypatch.setenv('SEMIFIX_HOME', str(home))
    for name in ('SEMIFIX_LOG_LEVEL', 'SEMIFIX_EXACT_LIMIT', 'SEMIFIX_PRIME_BITS'):
        monkeypatch.delenv(name, raising=False)
    return home


@pytest.fixture
def nf_params():
    """Factory for validated number-field setups; scalars are root-of-unity exponents."""
    def make(M, m, beta="0", xi="0", c="0", epsilon=1, n=1, sigma="identity",
             presentation="trivial", d=None, mode="polarized"):
        regime = GroundRegime("numberfield", M, n, sigma, presentation, d)
        alg = regime.field
        p = SetupParams(
            regime=regime,
            m=m,
            beta=root_of_unity(M, Fraction(beta)),
            xi=alg.from_k(root_of_unity(M, Fraction(xi))),
            epsilon=epsilon,
            mode=mode,
            c=alg.from_k(root_of_unity(M, Fraction(c))) if mode == "polarized" else None,
        )
        return validate_params(p)
    return make


@pytest.fixture
def loop_params():
    """Factory for validated loop setups"""
    def make(n, m, beta, xi, gamma=None, epsilon=1, sigma="identity", mode="polarized"):
        regime = GroundRegime("loop", M=m, n=n, sigma_kind=sigma)
        p = SetupParams(regime=regime, m=m, beta=beta, xi=xi, epsilon=epsilon, mode=mode, gamma=gamma)
        return validate_params(p)
    return make


@pytest.fixture
def ve1_params(nf_params):
    """Q(zeta_3), theta^3 = 1, xi = zeta_3: one fixed vertex and a swapped pair"""
    return nf_params(3, 3, xi="1/3")


@pytest.fixture
def cc1_params(nf_params):
    return nf_params(2, 2, c="1/2")


@pytest.fixture
def ee1_params(nf_params):
    return nf_params(4, 2, beta="1/2", xi="1/2", epsilon=-1)


@pytest.fixture
def outer_gl_params(nf_params):
    return nf_params(1, 2, n=2, sigma="zeta_half", presentation="split")


@pytest.fixture
def linear_params(nf_params):
    return nf_params(3, 3, xi="1/3", mode="linear")


@pytest.fixture
def loop_odd_params(loop_params):
    """n = m = 1, beta = tau, gamma = tau^2"""
    return loop_params(1, 1, beta=LoopMonomial.of(0, 1), xi=LoopMonomial.one(), gamma=LoopMonomial.of(0, 2))
