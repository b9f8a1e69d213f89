import pytest

from eil.furedi import build_furedi
from eil.incidence import build_incidence

# the acceptance battery: 50 seeded constructions per parameter pair
ACCEPTANCE_COMBOS = [
    (7, 3, 100_000),
    (11, 3, 200_000),
    (13, 3, 300_000),
    (11, 4, 400_000),
]

FUREDI_PAIRS = [(2, 5), (3, 7), (3, 13), (4, 13)]


@pytest.fixture(scope="session")
def acceptance_constructions():
    out = []
    for q, t, base in ACCEPTANCE_COMBOS:
        for i in range(50):
            out.append(build_incidence(q, t, base + i))
    return out


@pytest.fixture(scope="session")
def furedi_suite():
    return {(t, q): build_furedi(q, t) for t, q in FUREDI_PAIRS}
