import random

import pytest

from quarticlab.quartic import QuarticPoly, classify_galois, is_irreducible_quartic

# the six reference quartics: three cyclic, three dihedral
SIX_NAMED = {
    "Phi5": (1, 1, 1, 1),
    "X4-5X2+5": (5, 0, -5, 0),
    "X4+13X+39": (39, 13, 0, 0),
    "X4+2": (2, 0, 0, 0),
    "X4+3X+3": (3, 3, 0, 0),
    "X4-5X2+3": (3, 0, -5, 0),
}
SIX_LABELS = {
    "Phi5": "C4",
    "X4-5X2+5": "C4",
    "X4+13X+39": "C4",
    "X4+2": "D4",
    "X4+3X+3": "D4",
    "X4-5X2+3": "D4",
}

_analyzed = {}


def analyzed(cs):
    if cs not in _analyzed:
        _analyzed[cs] = QuarticPoly.analyze(*cs)
    return _analyzed[cs]


@pytest.fixture(scope="session")
def six_polys():
    return {name: analyzed(cs) for name, cs in SIX_NAMED.items()}


def random_irreducible_quartics(count, seed, bound=20):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        cs = tuple(rng.randint(-bound, bound) for _ in range(4))
        if is_irreducible_quartic(*cs):
            out.append(cs)
    return out


def find_c4d4_quartics(count, seed, bound=12):
    """Rejection-sample irreducible quartics with Galois class C4 or D4
    (biquadratic and trinomial shapes keep the hit rate workable)."""
    rng = random.Random(seed)
    found, seen = [], set()
    while len(found) < count:
        if rng.random() < 0.7:
            cs = (rng.randint(-bound, bound), 0, rng.randint(-bound, bound), 0)
        else:
            cs = (rng.randint(-bound, bound), rng.randint(-bound, bound), 0, 0)
        if cs in seen:
            continue
        seen.add(cs)
        if not is_irreducible_quartic(*cs):
            continue
        if classify_galois(*cs).label in ("C4", "D4"):
            found.append(cs)
    return found
