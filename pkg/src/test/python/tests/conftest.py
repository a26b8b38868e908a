import os
import tempfile

import numpy as np
import pytest

os.environ["PROFILE"] = "test"
os.environ["ISOBASIS_OUTPUT_DIR"] = tempfile.mkdtemp(prefix="isobasis-test-")

from isobasis.app import main
from isobasis.config.settings import SearchConfig, Settings
from isobasis.services import construction_service, tensor_service
from isobasis.services.search_service import SearchService


@pytest.fixture
def settings(tmp_path):
    return Settings(output_dir=str(tmp_path))


@pytest.fixture
def searcher():
    return SearchService(SearchConfig(restarts=5, max_iters=2000), workers=1, quiet=True)


@pytest.fixture
def bell_state():
    return construction_service.ghz_state(2, 2)


@pytest.fixture
def random_three_qubit():
    return tensor_service.random_state(3, 2, seed=11)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def cli(tmp_path, capsys):
    """Run the command line against a fresh output directory; returns (exit_code, stdout)."""

    def run(*args):
        code = main(["--output-dir", str(tmp_path), "--log-level", "WARNING", *map(str, args)])
        return code, capsys.readouterr().out

    run.output_dir = tmp_path
    return run
