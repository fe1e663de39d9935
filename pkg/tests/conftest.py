import warnings

import pytest
from hypothesis import settings

with warnings.catch_warnings():
    warnings.simplefilter("ignore")  # starlette/httpx version-shim noise
    from starlette.testclient import TestClient

from pairfdr.service.app import app

settings.register_profile("pairfdr", deadline=None, max_examples=200)
settings.load_profile("pairfdr")


@pytest.fixture()
def client():
    with TestClient(app) as test_client:
        yield test_client
