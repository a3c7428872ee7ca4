from fractions import Fraction

from hypothesis import strategies as st

from ordbase.domains import MajorizationPoint
from ordbase.poset import validate_poset


@st.composite
def posets(draw, max_size: int = 6):
    size = draw(st.integers(min_value=1, max_value=max_size))
    labels = [f"e{i}" for i in range(size)]
    pairs = [(i, j) for i in range(size) for j in range(i + 1, size)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return validate_poset(labels, [(labels[i], labels[j]) for i, j in chosen])


@st.composite
def conditionally_connected_posets(draw, max_size: int = 6):
    """Forests: every element has at most one lower cover."""
    size = draw(st.integers(min_value=1, max_value=max_size))
    labels = [f"e{i}" for i in range(size)]
    covers = []
    for i in range(1, size):
        parent = draw(st.integers(min_value=-1, max_value=i - 1))
        if parent >= 0:
            covers.append((labels[parent], labels[i]))
    return validate_poset(labels, covers)


@st.composite
def majorization_points(draw, dimensions=(2, 3, 4, 5, 7)):
    n = draw(st.sampled_from(dimensions))
    weights = sorted(draw(st.lists(st.integers(min_value=0, max_value=30), min_size=n, max_size=n)), reverse=True)
    total = sum(weights)
    if total == 0:
        return MajorizationPoint.bottom(n)
    return MajorizationPoint(tuple(Fraction(w, total) for w in weights))


def non_bottom_points(dimensions=(2, 3, 4, 5, 7)):
    return majorization_points(dimensions).filter(lambda x: not x.is_bottom)


tolerances = st.sampled_from([Fraction(1, 2), Fraction(1, 10), Fraction(1, 100), Fraction(1, 10**6)])
