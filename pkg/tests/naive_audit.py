"""Deliberately independent re-implementation of the fairness verdicts.

Nothing here imports the library under test.  Instance documents are
re-parsed with Fraction's own string parsing and every verdict is computed
with plain loops, so a comparison against the audit module is a genuine
two-route check.
"""

import json
from fractions import Fraction


def naive_load(instance_text):
    doc = json.loads(instance_text)
    values = []
    for row in doc["values"]:
        values.append([Fraction(str(cell)) for cell in row])
    return doc["n"], doc["k"], values


def bundle_sum(values, agent, bundle):
    total = Fraction(0)
    for item in bundle:
        total = total + values[agent][item]
    return total


def naive_pair(values, bundles, i, j):
    """All verdicts for the ordered pair (i, j) as a dict."""
    mine = bundle_sum(values, i, bundles[i])
    theirs = bundle_sum(values, i, bundles[j])
    envies = mine < theirs

    if not envies:
        gamma_ef = Fraction(1)
    else:
        gamma_ef = mine / theirs

    flips = []
    for a in bundles[i]:
        for b in bundles[j]:
            if values[i][b] > values[i][a]:
                flips.append((a, b))

    if not envies:
        gamma_eff1 = Fraction(1)
        gamma_effx = Fraction(1)
    else:
        satisfied = []
        for (a, b) in flips:
            after_mine = mine - values[i][a] + values[i][b]
            after_theirs = theirs - values[i][b] + values[i][a]
            if after_theirs == 0:
                satisfied.append(Fraction(1))
            else:
                satisfied.append(after_mine / after_theirs)
        gamma_eff1 = max(satisfied)
        gamma_effx = min(satisfied)
        if gamma_eff1 > 1:
            gamma_eff1 = Fraction(1)
        if gamma_effx > 1:
            gamma_effx = Fraction(1)

    if not envies:
        ef1 = True
        efx = True
    else:
        ef1 = False
        efx = True
        for g in bundles[j]:
            reduced = theirs - values[i][g]
            if mine >= reduced:
                ef1 = True
            else:
                efx = False

    return {
        "envies": envies,
        "ef": gamma_ef,
        "eff1": gamma_eff1,
        "effx": gamma_effx,
        "ef1_removal": ef1,
        "efx_removal": efx,
    }
