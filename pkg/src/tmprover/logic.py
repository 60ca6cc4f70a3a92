"""Parser and compiler for the first-order script language.

The surface language is the little scripting dialect used to define and
decide predicates over natural numbers with Thue-Morse indexing:

    def NAME "FORMULA":
    eval NAME "FORMULA":
    eval NAME VAR "FORMULA":      (counting form: VAR is the parameter)
    # comment

Formulas:  quantifiers ``A``/``E`` with comma-separated variables, the
connectives ``~ & | => <=>``, comparisons ``= != < <= > >=``, addition,
decimal constants, sequence indexing ``T[term]`` compared with ``=``/``!=``
against another ``T[term]`` or a binary constant, and ``$name(args)`` calls
of previously defined predicates.

Scope rule: a quantifier extends maximally, to the end of the enclosing
parenthesis or formula.  ``Ak (k<n) => p`` therefore means
``forall k ((k<n) => p)``, never ``(forall k (k<n)) => p``.

Predicates are stored on their free variables in alphabetical order, and
``$name(...)`` binds arguments positionally to that order.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from tmprover import automata as au

DEFAULT_STATE_CAP = au.DEFAULT_STATE_CAP

_FRESH_PREFIX = "_t"


class ParseError(Exception):
    def __init__(self, message, line, col):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col


class CompileError(Exception):
    pass


class ScriptError(Exception):
    pass


# ---------------------------------------------------------------------------
# Terms and formulas


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    value: int


@dataclass(frozen=True)
class Sum:
    left: object
    right: object


@dataclass(frozen=True)
class Compare:
    left: object
    op: str
    right: object


@dataclass(frozen=True)
class SeqCompare:
    """T[left] op right, where right is a term (T-indexed) or a 0/1 int."""

    left: object
    op: str
    right: object


@dataclass(frozen=True)
class Not:
    body: object


@dataclass(frozen=True)
class And:
    left: object
    right: object


@dataclass(frozen=True)
class Or:
    left: object
    right: object


@dataclass(frozen=True)
class Implies:
    left: object
    right: object


@dataclass(frozen=True)
class Iff:
    left: object
    right: object


@dataclass(frozen=True)
class Forall:
    var: str
    body: object


@dataclass(frozen=True)
class Exists:
    var: str
    body: object


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple


def term_vars(term) -> set[str]:
    if isinstance(term, Var):
        return {term.name}
    if isinstance(term, Const):
        return set()
    return term_vars(term.left) | term_vars(term.right)


def free_vars(f) -> set[str]:
    if isinstance(f, Compare):
        return term_vars(f.left) | term_vars(f.right)
    if isinstance(f, SeqCompare):
        right = term_vars(f.right) if not isinstance(f.right, int) else set()
        return term_vars(f.left) | right
    if isinstance(f, Not):
        return free_vars(f.body)
    if isinstance(f, (And, Or, Implies, Iff)):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, (Forall, Exists)):
        return free_vars(f.body) - {f.var}
    if isinstance(f, Call):
        out = set()
        for t in f.args:
            out |= term_vars(t)
        return out
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# Lexer


_TWO_CHAR = {"=>": "IMPLIES", "<=": "LE", ">=": "GE", "!=": "NE"}
_ONE_CHAR = {"&": "AND", "|": "OR", "~": "NOT", "=": "EQ", "<": "LT",
             ">": "GT", "+": "PLUS", "(": "LPAREN", ")": "RPAREN",
             "[": "LBRACK", "]": "RBRACK", ",": "COMMA", "$": "DOLLAR"}


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        start_col = col
        if text.startswith("<=>", i):
            tokens.append(Token("IFF", "<=>", line, start_col))
            i += 3
            col += 3
            continue
        if text[i:i + 2] in _TWO_CHAR:
            tokens.append(Token(_TWO_CHAR[text[i:i + 2]], text[i:i + 2],
                                line, start_col))
            i += 2
            col += 2
            continue
        if ch in _ONE_CHAR:
            tokens.append(Token(_ONE_CHAR[ch], ch, line, start_col))
            i += 1
            col += 1
            continue
        if ch in "AET":
            tokens.append(Token(ch, ch, line, start_col))
            i += 1
            col += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token("INT", text[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if ch.isalpha() and ch.islower():
            j = i
            while j < n and (text[j].isalnum() and not text[j].isupper()
                             or text[j] == "_"):
                j += 1
            tokens.append(Token("NAME", text[i:j], line, start_col))
            col += j - i
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", line, start_col)
    tokens.append(Token("EOF", "", line, col))
    return tokens


# ---------------------------------------------------------------------------
# Formula parser (recursive descent)


_RELOPS = {"EQ": "=", "NE": "!=", "LT": "<", "LE": "<=", "GT": ">", "GE": ">="}


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(f"expected {kind}, found {tok.value!r}",
                             tok.line, tok.col)
        return self.next()

    def fail(self, message):
        tok = self.peek()
        raise ParseError(message, tok.line, tok.col)

    def parse_formula(self):
        f = self.parse_or()
        while self.peek().kind in ("IMPLIES", "IFF"):
            op = self.next().kind
            rhs = self.parse_or()
            f = Implies(f, rhs) if op == "IMPLIES" else Iff(f, rhs)
        return f

    def parse_or(self):
        f = self.parse_and()
        while self.peek().kind == "OR":
            self.next()
            f = Or(f, self.parse_and())
        return f

    def parse_and(self):
        f = self.parse_unary()
        while self.peek().kind == "AND":
            self.next()
            f = And(f, self.parse_unary())
        return f

    def parse_unary(self):
        tok = self.peek()
        if tok.kind == "NOT":
            self.next()
            return Not(self.parse_unary())
        if tok.kind in ("A", "E"):
            self.next()
            names = [self.expect("NAME").value]
            while self.peek().kind == "COMMA":
                self.next()
                names.append(self.expect("NAME").value)
            body = self.parse_formula()  # maximal scope
            node = Forall if tok.kind == "A" else Exists
            for name in reversed(names):
                body = node(name, body)
            return body
        return self.parse_atom()

    def parse_atom(self):
        tok = self.peek()
        if tok.kind == "LPAREN":
            self.next()
            f = self.parse_formula()
            self.expect("RPAREN")
            return f
        if tok.kind == "DOLLAR":
            self.next()
            name = self.expect("NAME").value
            self.expect("LPAREN")
            args = [self.parse_term()]
            while self.peek().kind == "COMMA":
                self.next()
                args.append(self.parse_term())
            self.expect("RPAREN")
            return Call(name, tuple(args))
        return self.parse_comparison()

    def parse_comparison(self):
        if self.peek().kind == "T":
            left = self.parse_seq_index()
            op = self.parse_relop()
            if op not in ("=", "!="):
                self.fail("sequence comparison supports = and != only")
            if self.peek().kind == "T":
                return SeqCompare(left, op, self.parse_seq_index())
            tok = self.expect("INT")
            if tok.value not in ("0", "1"):
                raise ParseError("sequence values are 0 or 1",
                                 tok.line, tok.col)
            return SeqCompare(left, op, int(tok.value))
        left = self.parse_term()
        op = self.parse_relop()
        if self.peek().kind == "T":
            self.fail("sequence term cannot appear on the right of an "
                      "arithmetic comparison")
        return Compare(left, op, self.parse_term())

    def parse_relop(self) -> str:
        tok = self.peek()
        if tok.kind not in _RELOPS:
            self.fail(f"expected a relational operator, found {tok.value!r}")
        self.next()
        return _RELOPS[tok.kind]

    def parse_seq_index(self):
        self.expect("T")
        self.expect("LBRACK")
        term = self.parse_term()
        self.expect("RBRACK")
        return term

    def parse_term(self):
        left = self.parse_primary()
        if self.peek().kind == "PLUS":
            self.next()
            return Sum(left, self.parse_term())  # right-nested
        return left

    def parse_primary(self):
        tok = self.peek()
        if tok.kind == "NAME":
            if tok.value.startswith(_FRESH_PREFIX):
                self.fail(f"identifiers may not start with {_FRESH_PREFIX!r}")
            self.next()
            return Var(tok.value)
        if tok.kind == "INT":
            self.next()
            return Const(int(tok.value))
        self.fail(f"expected a variable or constant, found {tok.value!r}")


def parse_formula(text: str):
    parser = _Parser(tokenize(text))
    f = parser.parse_formula()
    tok = parser.peek()
    if tok.kind != "EOF":
        raise ParseError(f"trailing input {tok.value!r}", tok.line, tok.col)
    return f


# ---------------------------------------------------------------------------
# Script parser


@dataclass(frozen=True)
class Command:
    kind: str  # "def" | "eval" | "eval_count"
    name: str
    formula_source: str
    count_var: str | None = None
    line: int = 0


def parse_script(source: str) -> list[Command]:
    """Split a script into commands: ``def``/``eval`` with quoted formulas,
    each terminated by a colon.  ``#`` comments run to end of line."""
    commands = []
    i = 0
    n = len(source)
    line = 1

    def skip_blank(i, line):
        while i < n:
            if source[i] == "\n":
                line += 1
                i += 1
            elif source[i].isspace():
                i += 1
            elif source[i] == "#":
                while i < n and source[i] != "\n":
                    i += 1
            else:
                break
        return i, line

    def read_word(i):
        j = i
        while j < n and (source[j].isalnum() or source[j] == "_"):
            j += 1
        return source[i:j], j

    while True:
        i, line = skip_blank(i, line)
        if i >= n:
            break
        cmd_line = line
        keyword, i = read_word(i)
        if keyword not in ("def", "eval"):
            raise ParseError(f"expected 'def' or 'eval', found {keyword!r}",
                             line, 1)
        i, line = skip_blank(i, line)
        name, i = read_word(i)
        if not name:
            raise ParseError("missing command name", line, 1)
        i, line = skip_blank(i, line)
        count_var = None
        if keyword == "eval" and i < n and source[i] != '"':
            count_var, i = read_word(i)
            i, line = skip_blank(i, line)
        if i >= n or source[i] != '"':
            raise ParseError("expected a quoted formula", line, 1)
        end = source.find('"', i + 1)
        if end == -1:
            raise ParseError("unterminated formula quote", line, 1)
        body = source[i + 1:end]
        line += body.count("\n")
        i = end + 1
        i, line = skip_blank(i, line)
        if i >= n or source[i] != ":":
            raise ParseError("expected ':' after command", line, 1)
        i += 1
        kind = "eval_count" if count_var else keyword
        commands.append(Command(kind, name, " ".join(body.split()),
                                count_var, cmd_line))
    return commands


# ---------------------------------------------------------------------------
# Compiler


class PredicateEnv:
    """Named predicates: free variables in alphabetical order + automaton."""

    def __init__(self):
        self._defs: dict[str, tuple[tuple[str, ...], au.MultiTrackAutomaton]] = {}

    def bind(self, name, params, machine):
        if name in self._defs:
            raise CompileError(f"predicate {name!r} is already defined")
        self._defs[name] = (tuple(params), machine)

    def lookup(self, name):
        if name not in self._defs:
            raise CompileError(f"unknown predicate {name!r}")
        return self._defs[name]

    def __contains__(self, name):
        return name in self._defs

    def names(self):
        return list(self._defs)


class Compiler:
    def __init__(self, env: PredicateEnv | None = None, dfao: au.Dfao | None = None,
                 state_cap: int = DEFAULT_STATE_CAP):
        self.env = env if env is not None else PredicateEnv()
        self.dfao = dfao if dfao is not None else au.tm_dfao()
        self.state_cap = state_cap
        self._fresh_counter = 0

    def _fresh(self) -> str:
        self._fresh_counter += 1
        return f"{_FRESH_PREFIX}{self._fresh_counter}"

    def _conjoin(self, machines):
        schema = sorted(set().union(*(m.tracks for m in machines)))
        result = au.align_tracks(machines[0], schema)
        for m in machines[1:]:
            result = au.product(result, au.align_tracks(m, schema), "and",
                                self.state_cap)
        return result

    def _project_all(self, machine, names):
        for name in sorted(names, reverse=True):
            if name in machine.tracks:
                machine = au.project(machine, name, self.state_cap)
        return machine

    def _flatten(self, term, constraints, fresh):
        """Reduce a term to a single variable, emitting adder/constant
        constraints on fresh tracks for sums and numerals."""
        if isinstance(term, Var):
            return term.name
        if isinstance(term, Const):
            v = self._fresh()
            fresh.add(v)
            constraints.append(au.constant(term.value, v))
            return v
        if isinstance(term, Sum):
            a = self._flatten(term.left, constraints, fresh)
            b = self._flatten(term.right, constraints, fresh)
            if a == b:
                dup = self._fresh()
                fresh.add(dup)
                constraints.append(au.comparison(a, dup, "="))
                b = dup
            out = self._fresh()
            fresh.add(out)
            constraints.append(au.adder(a, b, out))
            return out
        raise CompileError(f"not a term: {term!r}")

    def _finish(self, core_machine, constraints, fresh):
        machine = self._conjoin([core_machine] + constraints) if constraints \
            else core_machine
        return self._project_all(machine, fresh)

    def compile(self, f) -> au.MultiTrackAutomaton:
        """Compile to a canonical automaton on the formula's free variables
        (tracks sorted by name)."""
        if isinstance(f, Compare):
            constraints, fresh = [], set()
            a = self._flatten(f.left, constraints, fresh)
            b = self._flatten(f.right, constraints, fresh)
            if a == b:
                core = (au.universal((a,)) if f.op in ("=", "<=", ">=")
                        else au.empty((a,)))
            else:
                core = au.comparison(a, b, f.op)
            return self._finish(core, constraints, fresh)
        if isinstance(f, SeqCompare):
            constraints, fresh = [], set()
            u = self._flatten(f.left, constraints, fresh)
            if isinstance(f.right, int):
                core = au.seq_const(self.dfao, u, f.right, f.op)
            else:
                v = self._flatten(f.right, constraints, fresh)
                core = au.seq_pair(self.dfao, u, v, f.op)
            return self._finish(core, constraints, fresh)
        if isinstance(f, Not):
            return au.complement(self.compile(f.body))
        if isinstance(f, (And, Or, Implies, Iff)):
            op = {And: "and", Or: "or", Implies: "implies", Iff: "iff"}[type(f)]
            left = self.compile(f.left)
            right = self.compile(f.right)
            schema = sorted(set(left.tracks) | set(right.tracks))
            return au.product(au.align_tracks(left, schema),
                              au.align_tracks(right, schema), op,
                              self.state_cap)
        if isinstance(f, Exists):
            body = self.compile(f.body)
            if f.var not in body.tracks:
                return body
            return au.project(body, f.var, self.state_cap)
        if isinstance(f, Forall):
            body = self.compile(f.body)
            if f.var not in body.tracks:
                return body
            return au.complement(
                au.project(au.complement(body), f.var, self.state_cap))
        if isinstance(f, Call):
            return self._compile_call(f)
        raise CompileError(f"not a formula: {f!r}")

    def _compile_call(self, call: Call) -> au.MultiTrackAutomaton:
        params, stored = self.env.lookup(call.name)
        if len(call.args) != len(params):
            raise CompileError(
                f"{call.name!r} takes {len(params)} arguments "
                f"({', '.join(params)}), got {len(call.args)}")
        constraints, fresh = [], set()
        mapping = {}
        used_targets = set()
        for param, arg in zip(params, call.args):
            if isinstance(arg, Var) and arg.name not in used_targets:
                target = arg.name
            else:
                value = self._flatten(arg, constraints, fresh)
                if value in fresh:
                    target = value
                else:  # duplicated plain variable: tie a fresh copy to it
                    target = self._fresh()
                    fresh.add(target)
                    constraints.append(au.comparison(target, value, "="))
            mapping[param] = target
            used_targets.add(target)
        machine = au.rename_tracks(stored, mapping)
        return self._finish(machine, constraints, fresh)


def compile_formula(f, env=None, dfao=None,
                    state_cap=DEFAULT_STATE_CAP) -> au.MultiTrackAutomaton:
    if isinstance(f, str):
        f = parse_formula(f)
    unbound = free_vars(f)
    compiler = Compiler(env, dfao, state_cap)
    machine = compiler.compile(f)
    if set(machine.tracks) != unbound:
        # Degenerate subformulas (x = x, quantified unused variables) can
        # drop tracks; re-embed so tracks always equal the free variables.
        machine = au.align_tracks(machine, sorted(unbound))
    return machine


def decide(f, env=None, dfao=None, state_cap=DEFAULT_STATE_CAP) -> bool:
    """Truth value of a sentence (a formula with no free variables)."""
    if isinstance(f, str):
        f = parse_formula(f)
    unbound = free_vars(f)
    if unbound:
        raise CompileError(f"sentence has free variables: {sorted(unbound)}")
    return not au.is_empty(compile_formula(f, env, dfao, state_cap))


# ---------------------------------------------------------------------------
# Script execution


@dataclass
class CommandResult:
    source: str
    kind: str
    name: str
    verdict: str  # "TRUE" | "FALSE" | "n/a"
    states: int
    elapsed_ms: float
    count_var: str | None = None
    automaton: au.MultiTrackAutomaton | None = None


@dataclass
class ProofReport:
    commands: list[CommandResult] = field(default_factory=list)
    overall: str = "n/a"

    def verdicts(self) -> dict[str, str]:
        return {c.name: c.verdict for c in self.commands if c.kind != "def"}

    def result(self, name: str) -> CommandResult:
        for c in self.commands:
            if c.name == name:
                return c
        raise KeyError(name)


def run_script(source: str, dfao=None,
               state_cap: int = DEFAULT_STATE_CAP) -> ProofReport:
    """Execute a script: defs populate the environment in order, evals are
    decided (or compiled, for the counting/free-variable forms)."""
    env = PredicateEnv()
    compiler = Compiler(env, dfao, state_cap)
    report = ProofReport()
    for cmd in parse_script(source):
        start = time.perf_counter()
        try:
            formula = parse_formula(cmd.formula_source)
            params = tuple(sorted(free_vars(formula)))
            machine = compiler.compile(formula)
            if set(machine.tracks) != set(params):
                machine = au.align_tracks(machine, params)
            if cmd.kind == "def":
                env.bind(cmd.name, params, machine)
                verdict = "n/a"
            elif cmd.kind == "eval_count":
                if cmd.count_var not in params:
                    raise CompileError(
                        f"counting variable {cmd.count_var!r} is not free in "
                        f"{cmd.name!r} (free: {params})")
                if len(params) != 2:
                    raise CompileError(
                        "counting eval needs exactly two free variables, "
                        f"got {params}")
                verdict = "n/a"
            elif params:
                verdict = "n/a"
            else:
                verdict = "TRUE" if not au.is_empty(machine) else "FALSE"
        except (ParseError, CompileError, au.StateLimitError,
                au.TrackMismatchError) as exc:
            raise ScriptError(
                f"{cmd.kind} {cmd.name} (line {cmd.line}): {exc}") from exc
        elapsed = (time.perf_counter() - start) * 1000.0
        report.commands.append(CommandResult(
            source=cmd.formula_source, kind=cmd.kind, name=cmd.name,
            verdict=verdict, states=machine.num_states, elapsed_ms=elapsed,
            count_var=cmd.count_var, automaton=machine))
    return report
