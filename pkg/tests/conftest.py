import pytest

from bringcert import jmap
from bringcert.series import cuspform_basis


@pytest.fixture(scope="session")
def f_series():
    """Cusp forms known to q^260."""
    return cuspform_basis(260)


@pytest.fixture(scope="session")
def derived_jmap():
    data, attempts, prec = jmap.derive_with_escalation(200)
    return data, attempts, prec
