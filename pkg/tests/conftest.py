import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conjlab import DefiningGraph


@pytest.fixture(scope="session")
def f2():
    return DefiningGraph(["a", "b"])


@pytest.fixture(scope="session")
def z2():
    return DefiningGraph(["a", "b"], [["a", "b"]])


@pytest.fixture(scope="session")
def path3():
    return DefiningGraph(["a", "b", "c"], [["a", "b"], ["b", "c"]])


@pytest.fixture(scope="session")
def pentagon():
    vs = ["a", "b", "c", "d", "e"]
    es = [["a", "b"], ["b", "c"], ["c", "d"], ["d", "e"], ["e", "a"]]
    return DefiningGraph(vs, es)
