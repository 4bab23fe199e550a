"""Coset actions of classical congruence subgroups, built from matrices mod N."""

from __future__ import annotations

import math

from gsa.congruence import coset_action_mod


def units(N):
    return [a for a in range(1, N) if math.gcd(a, N) == 1]


def gamma0_action(N):
    gens = [((1, 1), (0, 1))] + [((a, 0), (0, pow(a, -1, N))) for a in units(N)]
    return coset_action_mod(gens, N)


def gamma1_action(N):
    return coset_action_mod([((1, 1), (0, 1))], N)


def sanov_action():
    # <[[1,2],[0,1]], [[1,0],[2,1]]>: free, index 12, cusp widths all 2, contains Gamma(4)
    return coset_action_mod([((1, 2), (0, 1)), ((1, 0), (2, 1))], 4)
