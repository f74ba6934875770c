import random
from pathlib import Path

import pytest

from roomrot.core import RoommateInstance, parse_instance

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def appendix1():
    return parse_instance((DATA / "appendix1.sr").read_text())


@pytest.fixture(scope="session")
def knuth4():
    return parse_instance((DATA / "knuth4.sr").read_text())


def random_instance(num_people, rng):
    prefs = []
    for p in range(num_people):
        row = [q for q in range(num_people) if q != p]
        rng.shuffle(row)
        prefs.append(row)
    return RoommateInstance(prefs)


def rng_for(seed):
    return random.Random(seed)
