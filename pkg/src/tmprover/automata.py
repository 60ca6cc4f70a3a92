"""Multi-track binary automata and the boolean/quantifier algebra over them.

An automaton reads tuples of binary digits, one digit per track per step,
least-significant digit first.  A track corresponds to a free variable; a
word over the tuple alphabet encodes a tuple of natural numbers, and every
canonical automaton here is *zero-closed*: acceptance depends only on the
encoded values, never on how many trailing all-zero tuples pad the word.

Symbols are packed into integers: bit ``i`` of a symbol is the digit on
track ``i`` (tracks are kept sorted by name).  All public operations return
canonical machines: deterministic, complete, minimized, BFS-numbered (so
equal languages over equal tracks yield structurally identical automata).
"""

from __future__ import annotations

from dataclasses import dataclass

DEFAULT_STATE_CAP = 1 << 20


class StateLimitError(Exception):
    """Construction would exceed the configured state cap."""


class TrackMismatchError(Exception):
    """Operands disagree on track names where agreement is required."""


@dataclass(frozen=True)
class TrackId:
    name: str
    index: int


class MultiTrackAutomaton:
    """Deterministic complete acceptor over tuples of binary digits."""

    __slots__ = ("tracks", "transitions", "initial", "accepting", "zero_closed")

    def __init__(self, tracks, transitions, initial, accepting, zero_closed=True):
        self.tracks = tuple(tracks)
        self.transitions = tuple(tuple(row) for row in transitions)
        self.initial = initial
        self.accepting = frozenset(accepting)
        self.zero_closed = zero_closed
        if list(self.tracks) != sorted(self.tracks):
            raise TrackMismatchError(f"tracks must be sorted: {self.tracks}")

    @property
    def arity(self) -> int:
        return len(self.tracks)

    @property
    def num_states(self) -> int:
        return len(self.transitions)

    @property
    def num_symbols(self) -> int:
        return 1 << len(self.tracks)

    @property
    def deterministic(self) -> bool:
        return True

    def track_index(self, name: str) -> int:
        try:
            return self.tracks.index(name)
        except ValueError:
            raise TrackMismatchError(f"no track named {name!r} in {self.tracks}")

    def __repr__(self):
        return (f"MultiTrackAutomaton(tracks={self.tracks}, "
                f"states={self.num_states}, accepting={len(self.accepting)})")


def _bfs_canonical(tracks, transitions, initial, accepting, zero_closed=True):
    """Renumber states in BFS discovery order (symbols in increasing order).

    Unreachable states are dropped; the result is the canonical presentation
    of the machine, identical for isomorphic inputs.
    """
    order = {initial: 0}
    queue = [initial]
    while queue:
        nxt = []
        for q in queue:
            for s in transitions[q]:
                if s not in order:
                    order[s] = len(order)
                    nxt.append(s)
        queue = nxt
    new_trans = [None] * len(order)
    for old, new in order.items():
        new_trans[new] = tuple(order[t] for t in transitions[old])
    new_accepting = frozenset(order[q] for q in accepting if q in order)
    return MultiTrackAutomaton(tracks, new_trans, 0, new_accepting, zero_closed)


def minimize(a: MultiTrackAutomaton) -> MultiTrackAutomaton:
    """Canonical minimal DFA via Moore partition refinement."""
    trimmed = _bfs_canonical(a.tracks, a.transitions, a.initial, a.accepting,
                             a.zero_closed)
    n = trimmed.num_states
    trans = trimmed.transitions
    block = [1 if q in trimmed.accepting else 0 for q in range(n)]
    n_blocks = 2 if trimmed.accepting and len(trimmed.accepting) < n else 1
    while True:
        sig_ids: dict[tuple, int] = {}
        new_block = [0] * n
        for q in range(n):
            sig = (block[q],) + tuple(block[t] for t in trans[q])
            new_block[q] = sig_ids.setdefault(sig, len(sig_ids))
        stable = len(sig_ids) == n_blocks
        block = new_block
        n_blocks = len(sig_ids)
        if stable:
            break
    rep_trans = [None] * n_blocks
    for q in range(n):
        b = block[q]
        if rep_trans[b] is None:
            rep_trans[b] = tuple(block[t] for t in trans[q])
    accepting = frozenset(block[q] for q in trimmed.accepting)
    return _bfs_canonical(trimmed.tracks, rep_trans, block[trimmed.initial],
                          accepting, trimmed.zero_closed)


def is_zero_closed(a: MultiTrackAutomaton) -> bool:
    """Structural check: acceptance is invariant under the all-zero symbol."""
    return all((q in a.accepting) == (row[0] in a.accepting)
               for q, row in enumerate(a.transitions))


def zero_close(a: MultiTrackAutomaton) -> MultiTrackAutomaton:
    """Closure of the language under the value semantics.

    Accepts a word iff some encoding of the same value tuple was accepted.
    Pairs the running state with the state reached after the last nonzero
    symbol; acceptance asks whether that anchor state can reach acceptance
    by all-zero symbols alone.
    """
    saturated = set(a.accepting)
    changed = True
    while changed:
        changed = False
        for q, row in enumerate(a.transitions):
            if q not in saturated and row[0] in saturated:
                saturated.add(q)
                changed = True
    pairs = {(a.initial, a.initial): 0}
    trans = []
    accepting = set()
    queue = [(a.initial, a.initial)]
    trans.append(None)
    while queue:
        cur, anchor = queue.pop()
        idx = pairs[(cur, anchor)]
        row = []
        for sym in range(a.num_symbols):
            nxt = a.transitions[cur][sym]
            nanchor = anchor if sym == 0 else nxt
            key = (nxt, nanchor)
            if key not in pairs:
                pairs[key] = len(pairs)
                trans.append(None)
                queue.append(key)
            row.append(pairs[key])
        trans[idx] = row
        if anchor in saturated:
            accepting.add(idx)
    result = minimize(MultiTrackAutomaton(a.tracks, trans, 0, accepting, True))
    assert is_zero_closed(result)
    return result


def product(a: MultiTrackAutomaton, b: MultiTrackAutomaton,
            op: str, state_cap: int = DEFAULT_STATE_CAP) -> MultiTrackAutomaton:
    """Pointwise boolean combination of two automata on identical tracks."""
    if a.tracks != b.tracks:
        raise TrackMismatchError(f"track mismatch: {a.tracks} vs {b.tracks}")
    combine = {
        "and": lambda x, y: x and y,
        "or": lambda x, y: x or y,
        "xor": lambda x, y: x != y,
        "iff": lambda x, y: x == y,
        "implies": lambda x, y: (not x) or y,
    }[op]
    pairs = {(a.initial, b.initial): 0}
    trans = [None]
    accepting = set()
    queue = [(a.initial, b.initial)]
    while queue:
        qa, qb = queue.pop()
        idx = pairs[(qa, qb)]
        row = []
        for sym in range(a.num_symbols):
            key = (a.transitions[qa][sym], b.transitions[qb][sym])
            if key not in pairs:
                if len(pairs) >= state_cap:
                    raise StateLimitError(f"product exceeds cap {state_cap}")
                pairs[key] = len(pairs)
                trans.append(None)
                queue.append(key)
            row.append(pairs[key])
        trans[idx] = row
        if combine(qa in a.accepting, qb in b.accepting):
            accepting.add(idx)
    closed = a.zero_closed and b.zero_closed
    return minimize(MultiTrackAutomaton(a.tracks, trans, 0, accepting, closed))


def complement(a: MultiTrackAutomaton) -> MultiTrackAutomaton:
    """Language complement; zero-closure is re-established if absent."""
    if not a.zero_closed:
        a = zero_close(a)
    flipped = MultiTrackAutomaton(
        a.tracks, a.transitions, a.initial,
        frozenset(range(a.num_states)) - a.accepting, True)
    result = minimize(flipped)
    assert is_zero_closed(result)
    return result


def _determinize_sets(tracks, nfa_trans, initial_set, accepting,
                      state_cap) -> MultiTrackAutomaton:
    """Subset construction; the empty set acts as the (complete) sink."""
    n_sym = 1 << len(tracks)
    start = frozenset(initial_set)
    ids = {start: 0}
    trans = [None]
    acc = set()
    queue = [start]
    while queue:
        cur = queue.pop()
        idx = ids[cur]
        row = []
        for sym in range(n_sym):
            nxt = frozenset(t for q in cur for t in nfa_trans[q][sym])
            if nxt not in ids:
                if len(ids) >= state_cap:
                    raise StateLimitError(f"determinization exceeds cap {state_cap}")
                ids[nxt] = len(ids)
                trans.append(None)
                queue.append(nxt)
            row.append(ids[nxt])
        trans[idx] = row
        if cur & accepting:
            acc.add(idx)
    return MultiTrackAutomaton(tracks, trans, 0, acc, False)


def project(a: MultiTrackAutomaton, track: str,
            state_cap: int = DEFAULT_STATE_CAP) -> MultiTrackAutomaton:
    """Existential quantification of one track.

    The track's digit component is erased (yielding a nondeterministic
    machine), acceptance is saturated backward along symbols whose remaining
    digits are all zero (the witness may need more digits than the other
    tracks), and the result is determinized and minimized.
    """
    pos = a.track_index(track)
    rest = tuple(t for t in a.tracks if t != track)
    low_mask = (1 << pos) - 1
    n_sym_new = 1 << len(rest)
    nfa_trans = []
    for row in a.transitions:
        new_row = []
        for sym in range(n_sym_new):
            expanded = ((sym & low_mask) | ((sym & ~low_mask) << 1))
            new_row.append((row[expanded], row[expanded | (1 << pos)]))
        nfa_trans.append(new_row)
    # Saturation: accept any state that reaches acceptance while the
    # remaining tracks read only zeros.
    saturated = set(a.accepting)
    changed = True
    while changed:
        changed = False
        for q, row in enumerate(nfa_trans):
            if q not in saturated and (row[0][0] in saturated
                                       or row[0][1] in saturated):
                saturated.add(q)
                changed = True
    dfa = _determinize_sets(rest, nfa_trans, {a.initial}, saturated, state_cap)
    result = minimize(MultiTrackAutomaton(dfa.tracks, dfa.transitions,
                                          dfa.initial, dfa.accepting, True))
    assert is_zero_closed(result)
    return result


def determinize(a: MultiTrackAutomaton,
                state_cap: int = DEFAULT_STATE_CAP) -> MultiTrackAutomaton:
    """Subset construction; language-preserving canonicalization."""
    singleton = [[(t,) for t in row] for row in a.transitions]
    dfa = _determinize_sets(a.tracks, singleton, {a.initial}, set(a.accepting),
                            state_cap)
    return minimize(MultiTrackAutomaton(dfa.tracks, dfa.transitions, dfa.initial,
                                        dfa.accepting, a.zero_closed))


def rename_tracks(a: MultiTrackAutomaton, mapping: dict) -> MultiTrackAutomaton:
    """Rename tracks; the symbol bits are permuted to restore sorted order."""
    new_names = [mapping.get(t, t) for t in a.tracks]
    if len(set(new_names)) != len(new_names):
        raise TrackMismatchError(f"rename collides: {new_names}")
    order = sorted(range(len(new_names)), key=lambda i: new_names[i])
    new_pos = {old: new for new, old in enumerate(order)}
    n_sym = a.num_symbols
    perm = [0] * n_sym
    for sym in range(n_sym):
        out = 0
        for i in range(len(new_names)):
            if sym >> i & 1:
                out |= 1 << new_pos[i]
        perm[sym] = out
    trans = []
    for row in a.transitions:
        new_row = [0] * n_sym
        for sym in range(n_sym):
            new_row[perm[sym]] = row[sym]
        trans.append(new_row)
    return MultiTrackAutomaton(sorted(new_names), trans, a.initial, a.accepting,
                               a.zero_closed)


def align_tracks(a: MultiTrackAutomaton, schema) -> MultiTrackAutomaton:
    """Embed into a larger sorted track schema; new tracks are unconstrained."""
    schema = tuple(sorted(schema))
    missing = set(a.tracks) - set(schema)
    if missing:
        raise TrackMismatchError(f"schema {schema} lacks tracks {missing}")
    if schema == a.tracks:
        return a
    positions = [schema.index(t) for t in a.tracks]
    n_sym_new = 1 << len(schema)
    extract = [0] * n_sym_new
    for sym in range(n_sym_new):
        out = 0
        for i, p in enumerate(positions):
            if sym >> p & 1:
                out |= 1 << i
        extract[sym] = out
    trans = [tuple(row[extract[sym]] for sym in range(n_sym_new))
             for row in a.transitions]
    return MultiTrackAutomaton(schema, trans, a.initial, a.accepting,
                               a.zero_closed)


def is_empty(a: MultiTrackAutomaton) -> bool:
    seen = {a.initial}
    queue = [a.initial]
    while queue:
        q = queue.pop()
        if q in a.accepting:
            return False
        for t in a.transitions[q]:
            if t not in seen:
                seen.add(t)
                queue.append(t)
    return True


def is_universal(a: MultiTrackAutomaton) -> bool:
    return is_empty(complement(a))


def equivalent(a: MultiTrackAutomaton, b: MultiTrackAutomaton) -> bool:
    schema = sorted(set(a.tracks) | set(b.tracks))
    return is_empty(product(align_tracks(a, schema), align_tracks(b, schema),
                            "xor"))


def encode_values(values, length=None) -> list[int]:
    """Pack naturals into LSD-first tuple symbols, zero-padded to a length."""
    if any(v < 0 for v in values):
        raise ValueError("values must be nonnegative")
    width = max([v.bit_length() for v in values] + [0])
    if length is not None:
        if length < width:
            raise ValueError("length too short for the given values")
        width = length
    symbols = []
    for k in range(width):
        sym = 0
        for i, v in enumerate(values):
            if v >> k & 1:
                sym |= 1 << i
        symbols.append(sym)
    return symbols


def accepts(a: MultiTrackAutomaton, values) -> bool:
    """Membership of a value tuple (one natural per track)."""
    values = list(values)
    if len(values) != a.arity:
        raise TrackMismatchError(
            f"need {a.arity} values for tracks {a.tracks}, got {len(values)}")
    q = a.initial
    for sym in encode_values(values):
        q = a.transitions[q][sym]
    return q in a.accepting


def run_reversed(a: MultiTrackAutomaton,
                 state_cap: int = DEFAULT_STATE_CAP) -> MultiTrackAutomaton:
    """Machine for the reversed language (MSD-first reading), canonical."""
    n = a.num_states
    nfa_trans = [[[] for _ in range(a.num_symbols)] for _ in range(n)]
    for q, row in enumerate(a.transitions):
        for sym, t in enumerate(row):
            nfa_trans[t][sym].append(q)
    dfa = _determinize_sets(a.tracks, nfa_trans, set(a.accepting), {a.initial},
                            state_cap)
    return minimize(MultiTrackAutomaton(dfa.tracks, dfa.transitions, dfa.initial,
                                        dfa.accepting, False))


# ---------------------------------------------------------------------------
# Base relation machines


def _build(tracks: dict, n_states: int, initial: int, accepting, step):
    """Small-machine helper: ``step(state, digits_by_role) -> state``.

    ``tracks`` maps role name -> track name; the resulting machine has its
    tracks sorted by name as required.
    """
    names = sorted(tracks.values())
    if len(set(names)) != len(names):
        raise TrackMismatchError(f"duplicate track names: {names}")
    positions = {role: names.index(track) for role, track in tracks.items()}
    n_sym = 1 << len(names)
    trans = []
    for q in range(n_states):
        row = []
        for sym in range(n_sym):
            digits = {role: (sym >> pos) & 1 for role, pos in positions.items()}
            row.append(step(q, digits))
        trans.append(row)
    return minimize(MultiTrackAutomaton(names, trans, initial, accepting, True))


_CMP_ACCEPT = {
    "=": {0}, "!=": {1, 2}, "<": {1}, "<=": {0, 1}, ">": {2}, ">=": {0, 2},
}


def comparison(left: str, right: str, op: str) -> MultiTrackAutomaton:
    """x op y over tracks (left, right); LSD-first status machine.

    State 0: equal so far, 1: left < right, 2: left > right; later (more
    significant) digits override, so the status at end of word is decided by
    the most significant differing digit, as required.
    """
    if op not in _CMP_ACCEPT:
        raise ValueError(f"unknown comparison {op!r}")
    if left == right:
        raise TrackMismatchError("comparison needs distinct tracks")

    def step(q, d):
        if d["l"] == d["r"]:
            return q
        return 1 if d["l"] < d["r"] else 2

    return _build({"l": left, "r": right}, 3, 0, _CMP_ACCEPT[op], step)


def adder(x: str, y: str, z: str) -> MultiTrackAutomaton:
    """x + y = z; the classic 2-state LSD carry machine (plus sink)."""
    if len({x, y, z}) != 3:
        raise TrackMismatchError("adder needs three distinct tracks")

    def step(q, d):
        if q == 2:
            return 2
        total = d["x"] + d["y"] + q
        return total // 2 if total % 2 == d["z"] else 2

    return _build({"x": x, "y": y, "z": z}, 3, 0, {0}, step)


def constant(value: int, track: str) -> MultiTrackAutomaton:
    """Single-track machine accepting exactly the encodings of ``value``."""
    if value < 0:
        raise ValueError("constants are nonnegative")
    digits = [(value >> k) & 1 for k in range(value.bit_length())]
    n = len(digits)
    dead = n + 1

    def step(q, d):
        if q == dead:
            return dead
        if q < n:
            return q + 1 if d["v"] == digits[q] else dead
        return n if d["v"] == 0 else dead

    return _build({"v": track}, n + 2, 0, {n}, step)


def universal(tracks=()) -> MultiTrackAutomaton:
    names = tuple(sorted(tracks))
    n_sym = 1 << len(names)
    return MultiTrackAutomaton(names, [tuple([0] * n_sym)], 0, {0}, True)


def empty(tracks=()) -> MultiTrackAutomaton:
    names = tuple(sorted(tracks))
    n_sym = 1 << len(names)
    return MultiTrackAutomaton(names, [tuple([0] * n_sym)], 0, set(), True)


def base_eq() -> MultiTrackAutomaton:
    return comparison("x", "y", "=")


def base_lt() -> MultiTrackAutomaton:
    return comparison("x", "y", "<")


def base_add() -> MultiTrackAutomaton:
    return adder("x", "y", "z")


# ---------------------------------------------------------------------------
# DFAO: automaton with output, used for sequence indexing


@dataclass(frozen=True)
class Dfao:
    """Single-track automaton with a binary output on every state."""

    transitions: tuple[tuple[int, int], ...]
    initial: int
    output: tuple[int, ...]

    def value(self, k: int) -> int:
        """Output after reading the LSD-first digits of k."""
        q = self.initial
        while k:
            q = self.transitions[q][k & 1]
            k >>= 1
        return self.output[q]


def tm_dfao() -> Dfao:
    """Two-state parity machine computing the Thue-Morse sequence.

    Popcount parity is digit-order invariant, so the same machine serves
    both reading conventions.
    """
    return Dfao(((0, 1), (1, 0)), 0, (0, 1))


def seq_pair(dfao: Dfao, u: str, v: str, op: str) -> MultiTrackAutomaton:
    """Machine for  seq[u] op seq[v]  with op in {=, !=}."""
    if op not in ("=", "!="):
        raise ValueError("sequence comparison supports = and != only")
    if u == v:
        return universal((u,)) if op == "=" else empty((u,))
    n = len(dfao.output)
    states = [(a, b) for a in range(n) for b in range(n)]
    index = {s: i for i, s in enumerate(states)}

    def step(q, d):
        a, b = states[q]
        return index[(dfao.transitions[a][d["u"]], dfao.transitions[b][d["v"]])]

    want = (lambda a, b: a == b) if op == "=" else (lambda a, b: a != b)
    accepting = {index[(a, b)] for a in range(n) for b in range(n)
                 if want(dfao.output[a], dfao.output[b])}
    return _build({"u": u, "v": v}, len(states), index[(dfao.initial,) * 2],
                  accepting, step)


def seq_const(dfao: Dfao, u: str, bit: int, op: str) -> MultiTrackAutomaton:
    """Machine for  seq[u] op bit  with op in {=, !=}."""
    if op not in ("=", "!="):
        raise ValueError("sequence comparison supports = and != only")
    if bit not in (0, 1):
        raise ValueError("sequence values are binary")

    def step(q, d):
        return dfao.transitions[q][d["u"]]

    want = (lambda o: o == bit) if op == "=" else (lambda o: o != bit)
    accepting = {q for q, o in enumerate(dfao.output) if want(o)}
    return _build({"u": u}, len(dfao.output), dfao.initial, accepting, step)


# ---------------------------------------------------------------------------
# Export


def export_dot(a: MultiTrackAutomaton, digit_order: str = "lsd") -> str:
    """GraphViz rendering; ``msd`` reverses the machine first so the picture
    reads most-significant digit first."""
    if digit_order == "msd":
        a = run_reversed(a)
    elif digit_order != "lsd":
        raise ValueError("digit_order must be 'msd' or 'lsd'")
    lines = ["digraph {", "  rankdir=LR;",
             f"  // tracks: {', '.join(a.tracks) if a.tracks else '(none)'}"
             f" ({digit_order} first)",
             "  init [shape=point];", f"  init -> s{a.initial};"]
    for q in range(a.num_states):
        shape = "doublecircle" if q in a.accepting else "circle"
        lines.append(f"  s{q} [shape={shape}, label=\"{q}\"];")
    for q, row in enumerate(a.transitions):
        by_target: dict[int, list[str]] = {}
        for sym, t in enumerate(row):
            digits = ",".join(str((sym >> i) & 1) for i in range(a.arity))
            by_target.setdefault(t, []).append(f"[{digits}]")
        for t in sorted(by_target):
            lines.append(
                f"  s{q} -> s{t} [label=\"{' '.join(by_target[t])}\"];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_compact_text(a: MultiTrackAutomaton) -> str:
    """Line-oriented snapshot format with deterministic ordering."""
    lines = [f"tracks {' '.join(a.tracks)}".rstrip(),
             f"states {a.num_states}",
             f"initial {a.initial}",
             "accepting " + " ".join(str(q) for q in sorted(a.accepting))]
    for q, row in enumerate(a.transitions):
        for sym, t in enumerate(row):
            digits = "".join(str((sym >> i) & 1) for i in range(a.arity))
            lines.append(f"{q} {digits or '-'} {t}")
    return "\n".join(lines) + "\n"
