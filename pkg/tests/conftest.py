import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from lspack.circuit import BoxSet  # noqa: E402

_ACCEPTANCE_KEY = pytest.StashKey[list]()


def random_boxset(rng: random.Random, max_boxes=8, max_size=6, max_shared=3) -> BoxSet:
    """Fresh-qubit boxes of size 2..max_size, then up to ``max_shared`` qubits
    spliced into 2-3 boxes each (replacing or appending a member)."""
    n = rng.randint(1, max_boxes)
    members = []
    q = 0
    for _ in range(n):
        size = rng.randint(2, max_size)
        members.append(list(range(q, q + size)))
        q += size
    if n >= 2:
        for _ in range(rng.randint(0, max_shared)):
            for bi in rng.sample(range(n), rng.randint(2, min(3, n))):
                if len(members[bi]) < max_size and rng.random() < 0.5:
                    members[bi].append(q)
                else:
                    members[bi][rng.randrange(len(members[bi]))] = q
            q += 1
    members = [list(dict.fromkeys(m)) for m in members]
    return BoxSet.from_members(members)


def single_box(size: int) -> BoxSet:
    return BoxSet.from_members([tuple(range(size))])


def pytest_configure(config):
    config.stash[_ACCEPTANCE_KEY] = []


@pytest.fixture(scope="session")
def acceptance_log(request):
    return request.config.stash[_ACCEPTANCE_KEY]


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE_KEY, [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in lines:
        terminalreporter.write_line(line)
