import os
import shutil
from pathlib import Path

import pytest


@pytest.fixture(scope="session")
def sim_binary() -> str:
    env = os.environ.get("TRUSTNET_SIM")
    if env:
        return env
    from trustnet.cli import binary

    if binary().exists():
        return str(binary())
    found = shutil.which("trustnet-sim")
    if not found:
        pytest.skip("trustnet-sim binary not found")
    return found


@pytest.fixture(scope="session")
def configs_dir() -> Path:
    env = os.environ.get("TRUSTNET_CONFIGS")
    return Path(env) if env else Path(__file__).resolve().parents[2] / "configs"
