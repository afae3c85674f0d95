import pytest

from isoptic import SOLID_NAMES, canonical_solid


@pytest.fixture(scope="session")
def solids():
    """All canonical solids, built once per session."""
    return {name: canonical_solid(name) for name in SOLID_NAMES}
