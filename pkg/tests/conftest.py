import numpy as np
import pytest

import synth
from tripmd import DtwConfig, compute_breakpoints, dtw, estimate_radius


@pytest.fixture(scope="session", autouse=True)
def warm_dtw_kernel():
    # first call may trigger jit compilation; keep it out of timed tests
    a = np.zeros((4, 2))
    b = np.ones((3, 2))
    dtw(a, b, DtwConfig(window=None))


@pytest.fixture(scope="session")
def pulse_trip():
    return synth.make_pulse_trip()


@pytest.fixture(scope="session")
def pulse_breakpoints(pulse_trip):
    return compute_breakpoints([pulse_trip])


@pytest.fixture(scope="session")
def pulse_radius(pulse_trip):
    return estimate_radius([pulse_trip], 0.5, 3.0, DtwConfig(window=5))


@pytest.fixture(scope="session")
def fleet():
    return synth.make_fleet()


@pytest.fixture(scope="session")
def fleet_corpus(tmp_path_factory, fleet):
    base = tmp_path_factory.mktemp("fleet")
    trips_dir, meta_path = synth.write_corpus(base, fleet)
    return {"trips_dir": trips_dir, "metadata_path": meta_path}
