import io
import json
import random
from pathlib import Path

import pytest

from main import run_command
from services.simplicial import barycentric_subdivide, standard_sphere

FIXTURES = Path(__file__).resolve().parent.parent / "data" / "fixtures"


@pytest.fixture
def rng():
    return random.Random(20240601)


@pytest.fixture(scope="session")
def subdivided_spheres():
    """Once-subdivided boundary spheres for n = 1, 2"""
    return {n: barycentric_subdivide(standard_sphere(n), 1) for n in (1, 2)}


@pytest.fixture
def fixture_file():
    def path(name: str) -> str:
        return str(FIXTURES / name)
    return path


@pytest.fixture
def cli():
    def run(*argv: str):
        out = io.StringIO()
        status = run_command(list(argv), out=out)
        text = out.getvalue()
        return status, json.loads(text), text
    return run
