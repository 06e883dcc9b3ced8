import pathlib

import pytest

DATA_DIR = pathlib.Path(__file__).parent / "data"


@pytest.fixture
def fixture_wav() -> pathlib.Path:
    return DATA_DIR / "call_1s_22050.wav"
