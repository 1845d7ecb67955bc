"""Hand-checked reference data shared between the unit and acceptance tests."""

import numpy as np

# --- three-letter substitution: the four degree-one/two matrices --------------

TRIBO_M1_STAR = np.array([[1, 1, 0], [1, 0, 1], [1, 0, 0]])
TRIBO_M2_GEOM = np.array([[1, -1, 0], [-1, 0, -1], [1, 0, 0]])
TRIBO_M2_STAR = np.array([[-1, 1, 1], [-1, 0, 0], [0, -1, 0]])
TRIBO_M1_GEOM = np.array([[-1, -1, 1], [1, 0, 0], [0, 1, 0]])


def family_m_geom(t):
    """Geometric 2-face matrix of the five-letter family member t, rows and
    columns indexed by the transverse three-letter wedge in lexicographic
    order."""
    return np.array(
        [
            [0, 0, 0, t + 1, 0, 0, -1, 0, 0, 0],
            [-t, 0, 0, 0, t + 1, 0, 0, -1, 0, 0],
            [1, 0, 0, 0, 0, 0, 0, 0, 0, 0],
            [0, -t, 0, 0, 0, t + 1, 0, 0, -1, 0],
            [0, 1, 0, 0, 0, 0, 0, 0, 0, 0],
            [0, 0, 1, 0, 0, 0, 0, 0, 0, 0],
            [0, 0, 0, -t, 0, 0, 0, 0, 0, -1],
            [0, 0, 0, 1, 0, 0, 0, 0, 0, 0],
            [0, 0, 0, 0, 1, 0, 0, 0, 0, 0],
            [0, 0, 0, 0, 0, 1, 0, 0, 0, 0],
        ],
        dtype=np.int64,
    )


# --- the five-face aperiodic seed patch ---------------------------------------

FIVE_PATCH = [(1, 3), (1, 4), (2, 4), (2, 5), (3, 5)]

# --- minimal strong-coincidence depths for the first family member ------------

SCC_DEPTHS = {
    ((1, 2, 3), (1, 2, 4)): 7,
    ((1, 2, 3), (1, 2, 5)): 7,
    ((1, 2, 3), (2, 3, 4)): 11,
    ((1, 2, 3), (2, 3, 5)): 10,
    ((1, 2, 3), (2, 4, 5)): 12,
    ((1, 2, 4), (1, 2, 5)): 6,
    ((1, 2, 4), (1, 3, 4)): 8,
    ((1, 2, 4), (1, 3, 5)): 8,
    ((1, 2, 4), (2, 3, 5)): 10,
    ((1, 2, 4), (2, 4, 5)): 10,
    ((1, 2, 4), (3, 4, 5)): 10,
    ((1, 2, 5), (1, 3, 4)): 8,
    ((1, 2, 5), (1, 3, 5)): 8,
    ((1, 2, 5), (1, 4, 5)): 8,
    ((1, 3, 4), (1, 3, 5)): 6,
    ((1, 3, 4), (2, 3, 4)): 9,
    ((1, 3, 4), (2, 3, 5)): 9,
    ((1, 3, 4), (2, 4, 5)): 10,
    ((1, 3, 4), (3, 4, 5)): 10,
    ((1, 3, 5), (1, 4, 5)): 7,
    ((1, 3, 5), (2, 3, 4)): 11,
    ((1, 3, 5), (2, 3, 5)): 9,
    ((1, 3, 5), (2, 4, 5)): 9,
    ((1, 4, 5), (2, 3, 5)): 9,
    ((1, 4, 5), (2, 4, 5)): 9,
    ((1, 4, 5), (3, 4, 5)): 9,
    ((2, 3, 4), (2, 3, 5)): 11,
    ((2, 3, 4), (3, 4, 5)): 10,
    ((2, 3, 5), (2, 4, 5)): 7,
    ((2, 4, 5), (3, 4, 5)): 8,
}
