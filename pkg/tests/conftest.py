from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ratefm import build_master_region, eliminate_all, shannon_context


@pytest.fixture(scope="session")
def k3_ctx():
    return shannon_context(build_master_region(3).ground)


@pytest.fixture(scope="session")
def k3_run(k3_ctx):
    """One shared pruned K=3 elimination: (master, final, trace)."""
    master = build_master_region(3)
    final, trace = eliminate_all(master, prune_steps=True, ctx=k3_ctx)
    return master, final, trace
