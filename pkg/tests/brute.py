"""Independent reference computations used by the tests.

Pure Python, no numpy and nothing from ghzgame.qsim: kets are written out from
their definitions and every amplitude is expanded by explicit summation.
"""
import itertools
from math import sqrt

R = 1 / sqrt(2)

# basis -> sign -> single-qubit ket (amplitude on |up>, amplitude on |down>)
KETS = {
    "X": {+1: (R, R), -1: (R, -R)},
    "Y": {+1: (R, 1j * R), -1: (R, -1j * R)},
}

GHZ = [R, 0, 0, 0, 0, 0, 0, -R]


def product_ket(a, b, c):
    return [a[i] * b[j] * c[k] for i, j, k in itertools.product(range(2), repeat=3)]


def amplitude(state, kets):
    """<kA kB kC | state> by summing over all eight basis labels."""
    total = 0
    for i, j, k in itertools.product(range(2), repeat=3):
        bra = kets[0][i].conjugate() * kets[1][j].conjugate() * kets[2][k].conjugate()
        total += bra * state[4 * i + 2 * j + k]
    return total


def joint_distribution(state, bases):
    """(sA, sB, sC) -> probability, bases given as a 3-string like 'XYY'."""
    out = {}
    for signs in itertools.product((1, -1), repeat=3):
        kets = [KETS[b][s] for b, s in zip(bases, signs)]
        out[signs] = abs(amplitude(state, kets)) ** 2
    return out


def overlap(a, b):
    return sum(x.conjugate() * y for x, y in zip(a, b))
