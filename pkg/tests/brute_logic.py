"""Window-scanning implementations of the script predicates.

Each function computes the documented meaning of the correspondingly named
predicate by direct string operations on an explicit prefix: the
independent oracle the compiled automata are checked against.  Quantified
positions are bounded by the window, which is ample for the argument
ranges exercised in the tests.
"""

from tmprover.core import generate_prefix

WINDOW = 1 << 10
PREFIX = generate_prefix(WINDOW).bits
_COMP = str.maketrans("01", "10")


def feq(i, j, n):
    return PREFIX[i:i + n] == PREFIX[j:j + n]


def feqc(i, j, n):
    return PREFIX[i:i + n] == PREFIX[j:j + n].translate(_COMP)


def either(i, j, n):
    return feq(i, j, n) or feqc(i, j, n)


def consec(i, j, k, n):
    return (j < k and either(i, j, n) and either(i, k, n)
            and all(not either(i, p, n) for p in range(j + 1, k)))


def ab(i, j, k, n):
    return feq(i, j, n) and feqc(i, k, n)


def abb(i, j, k, l, n):
    return feq(i, j, n) and feqc(i, k, n) and feqc(i, l, n)


def bba(i, j, k, l, n):
    return feqc(i, j, n) and feqc(i, k, n) and feq(i, l, n)


def baa(i, j, k, l, n):
    return feqc(i, j, n) and feq(i, k, n) and feq(i, l, n)


def aab(i, j, k, l, n):
    return feq(i, j, n) and feq(i, k, n) and feqc(i, l, n)


def first(i, j, n):
    return feq(i, j, n) and all(not feq(i, p, n) for p in range(j))


def firstc(i, j, n):
    return feqc(i, j, n) and all(not feqc(i, p, n) for p in range(j))


def first_pos(i, n):
    return next(p for p in range(WINDOW - n + 1) if feq(i, p, n))


def firstc_pos(i, n):
    return next(p for p in range(WINDOW - n + 1) if feqc(i, p, n))


def afirst(i, n):
    return first_pos(i, n) < firstc_pos(i, n)


def abfirst(i, n):
    fa, fc = first_pos(i, n), firstc_pos(i, n)
    return fa < fc and all(not either(i, p, n) for p in range(fa + 1, fc))


def firstocc(i, n):
    return all(not feq(i, p, n) for p in range(i))


def _labels(i, n, limit=64):
    out = []
    for p in range(WINDOW - n + 1):
        if feq(i, p, n):
            out.append("A")
        elif feqc(i, p, n):
            out.append("B")
        if len(out) >= limit:
            break
    return "".join(out)


def abpat(i, n):
    if n < 1:
        return False
    labels = _labels(i, n)
    alternating = all(x != y for x, y in zip(labels, labels[1:]))
    return afirst(i, n) and alternating


def bapat(i, n):
    if n < 1:
        return False
    labels = _labels(i, n)
    alternating = all(x != y for x, y in zip(labels, labels[1:]))
    return (not afirst(i, n)) and alternating


def _triples_ok(labels):
    allowed = {"ABB", "BBA", "BAA", "AAB"}
    return all(labels[t:t + 3] in allowed for t in range(len(labels) - 2))


def abbapat(i, n):
    if n < 1:
        return False
    return abfirst(i, n) and _triples_ok(_labels(i, n))


def baabpat(i, n):
    if n < 1:
        return False
    return (not abfirst(i, n)) and _triples_ok(_labels(i, n))
