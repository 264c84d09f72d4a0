import functools
import itertools

import math

import numpy as np
import pytest


@functools.lru_cache(maxsize=None)
def _all_part_counts(m):
    # counts of parts 1..m, each bounded by m // k
    return [counts for counts in itertools.product(*(range(m // k + 1) for k in range(1, m + 1)))
            if sum(k * c for k, c in zip(range(1, m + 1), counts)) == m]


def brute_force_states(n, m):
    """Every occupation vector of block (n, m), by nested enumeration."""
    if m == 0:
        return [(n,)]
    return [(n - sum(c),) + c for c in _all_part_counts(m) if sum(c) <= n]


@pytest.fixture
def brute_states():
    return brute_force_states


def brute_force_matrix(n, m, coupling):
    """<v_i|H|v_j> by expanding H over every ordered resonant quartet.

    Independent of the package: its own state enumeration and its own
    ladder-operator arithmetic.  Returns ``(H, states)``.
    """
    states = brute_force_states(n, m)
    index = {s: i for i, s in enumerate(states)}
    H = np.zeros((len(states), len(states)))
    for j, s in enumerate(states):
        for k in range(m + 1):
            for l in range(m + 1):
                v = list(s)
                if v[l] == 0:
                    continue
                amp = math.sqrt(v[l])
                v[l] -= 1
                if v[k] == 0:
                    continue
                amp *= math.sqrt(v[k])
                v[k] -= 1
                for a in range(m + 1):
                    b = k + l - a
                    if not 0 <= b <= m:
                        continue
                    w = list(v)
                    w[b] += 1
                    amp2 = amp * math.sqrt(w[b])
                    w[a] += 1
                    amp2 *= math.sqrt(w[a])
                    H[index[tuple(w)], j] += 0.5 * coupling(a, b, k, l) * amp2
    return H, states


def align(matrix, states):
    """Permute ``matrix`` (ordered like ``states``) into the canonical basis order."""
    from resonant.partitions import enumerate_basis

    n = sum(states[0])
    m = len(states[0]) - 1
    basis = enumerate_basis((n, m))
    perm = [states.index(s) for s in basis.states]
    return matrix[np.ix_(perm, perm)]


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
