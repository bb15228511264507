"""Terms, formulas and Gödel codes for the object language extended by ``T``.

Every node is interned by a :class:`Store`, so structurally equal nodes are
the same Python object and compare by identity.  Closed quotations are
canonicalised to numerals at construction time, which makes ``T([P(a)])``
and ``T(#<code of P(a)>)`` one and the same atom.

Codes come in two flavours.  A *structural* code is twice the bijective
base-256 reading of the canonical serialization of a sentence, so it is
always even.  A *designated* code is an odd number handed out by
:meth:`Store.register_designated`; it is how self-referential sentences
such as the liar get a code that occurs inside themselves.
"""

from __future__ import annotations

import re
import sys
from typing import Iterable, NamedTuple

if hasattr(sys, "set_int_max_str_digits"):
    # numerals of reflected sentences run to hundreds of digits
    sys.set_int_max_str_digits(0)

OR, AND, IMP, IFF = "or", "and", "imp", "iff"
BINARY_OPS = (OR, AND, IMP, IFF)
FORALL, EXISTS = "forall", "exists"
QUANTIFIERS = (FORALL, EXISTS)


class Term:
    __slots__ = ("id", "free", "holes")


class Numeral(Term):
    __slots__ = ("value",)


class Name(Term):
    __slots__ = ("ident",)


class Var(Term):
    __slots__ = ("ident",)


class Quote(Term):
    """Quotation of a formula that still has free variables or a hole."""

    __slots__ = ("body",)


class Hole(Term):
    """Placeholder for the numeral of a designated sentence."""

    __slots__ = ()


class Formula:
    __slots__ = ("id", "free", "holes")

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {to_text(self)}>"

    def __str__(self) -> str:
        return to_text(self)

    @property
    def closed(self) -> bool:
        return not self.free and not self.holes


class Atom(Formula):
    __slots__ = ("pred", "args")


class Truth(Formula):
    __slots__ = ("arg",)


class Not(Formula):
    __slots__ = ("body",)


class Binary(Formula):
    __slots__ = ("op", "left", "right")


class Quant(Formula):
    __slots__ = ("q", "var", "body")


class Vocabulary(NamedTuple):
    """Names and predicate arities a parser is allowed to use."""

    names: frozenset
    predicates: dict


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_RESERVED = {"T", FORALL, EXISTS}


def _check_ident(ident: str, what: str) -> None:
    if not isinstance(ident, str) or not _IDENT.match(ident):
        raise ValueError(f"bad {what} identifier {ident!r}")


class Store:
    """Interning table for terms and formulas plus the Gödel codec."""

    def __init__(self):
        self._table: dict[tuple, object] = {}
        self._count = 0
        self._ser: dict[int, bytes] = {}
        self._codes: dict[int, int] = {}
        self._designated: dict[int, int] = {}
        self._by_designated: dict[int, Formula] = {}
        self._next_odd = 1

    def __len__(self) -> int:
        return self._count

    def _intern(self, key: tuple, cls, free, holes, **fields):
        node = self._table.get(key)
        if node is None:
            node = cls.__new__(cls)
            node.id = self._count
            node.free = free
            node.holes = holes
            for k, v in fields.items():
                setattr(node, k, v)
            self._count += 1
            self._table[key] = node
        return node

    # terms

    def numeral(self, value: int) -> Numeral:
        if not isinstance(value, int) or isinstance(value, bool) or value < 0:
            raise ValueError(f"numeral must be a natural number, got {value!r}")
        return self._intern(("num", value), Numeral, frozenset(), 0, value=value)

    def name(self, ident: str) -> Name:
        _check_ident(ident, "name")
        return self._intern(("name", ident), Name, frozenset(), 0, ident=ident)

    def var(self, ident: str) -> Var:
        _check_ident(ident, "variable")
        return self._intern(("var", ident), Var, frozenset((ident,)), 0, ident=ident)

    def hole(self) -> Hole:
        return self._intern(("hole",), Hole, frozenset(), 1)

    def quote(self, body: Formula) -> Term:
        """Quotation; a closed quotation becomes the numeral of its code."""
        if body.closed:
            return self.numeral(self.encode(body))
        return self._intern(("quote", body.id), Quote, body.free, body.holes, body=body)

    # formulas

    def atom(self, pred: str, args: Iterable[Term]) -> Atom:
        _check_ident(pred, "predicate")
        if pred in _RESERVED:
            raise ValueError(f"{pred!r} is reserved")
        args = tuple(args)
        for a in args:
            if not isinstance(a, (Name, Var)):
                raise ValueError("object predicates take names and variables only")
        free = frozenset(a.ident for a in args if isinstance(a, Var))
        key = ("atom", pred, tuple(a.id for a in args))
        return self._intern(key, Atom, free, 0, pred=pred, args=args)

    def truth(self, arg: Term) -> Truth:
        if isinstance(arg, Name):
            raise ValueError("the argument of T is a numeral, variable or quotation, never a name")
        if not isinstance(arg, Term):
            raise TypeError("T expects a term")
        return self._intern(("T", arg.id), Truth, arg.free, arg.holes, arg=arg)

    def neg(self, body: Formula) -> Not:
        return self._intern(("not", body.id), Not, body.free, body.holes, body=body)

    def binary(self, op: str, left: Formula, right: Formula) -> Binary:
        if op not in BINARY_OPS:
            raise ValueError(f"unknown connective {op!r}")
        key = (op, left.id, right.id)
        return self._intern(key, Binary, left.free | right.free, left.holes + right.holes,
                            op=op, left=left, right=right)

    def disj(self, a, b):
        return self.binary(OR, a, b)

    def conj(self, a, b):
        return self.binary(AND, a, b)

    def imp(self, a, b):
        return self.binary(IMP, a, b)

    def iff(self, a, b):
        return self.binary(IFF, a, b)

    def quant(self, q: str, var: str, body: Formula) -> Quant:
        if q not in QUANTIFIERS:
            raise ValueError(f"unknown quantifier {q!r}")
        _check_ident(var, "variable")
        key = (q, var, body.id)
        return self._intern(key, Quant, body.free - {var}, body.holes, q=q, var=var, body=body)

    def forall(self, var, body):
        return self.quant(FORALL, var, body)

    def exists(self, var, body):
        return self.quant(EXISTS, var, body)

    def true_of(self, sentence: Formula) -> Truth:
        """``T(⌈sentence⌉)``."""
        return self.truth(self.quote(sentence))

    # substitution

    def substitute(self, f, var: str, term: Term):
        """Replace free occurrences of ``var`` by ``term``, avoiding capture.

        Quotations are substituted into as well, which is how ``T(⌈P(ẋ)⌉)``
        instantiates to ``T(⌈P(b)⌉)``.
        """
        if var not in f.free:
            return f
        if isinstance(f, Var):
            return term
        if isinstance(f, Quote):
            return self.quote(self.substitute(f.body, var, term))
        if isinstance(f, Atom):
            return self.atom(f.pred, [self.substitute(a, var, term) for a in f.args])
        if isinstance(f, Truth):
            return self.truth(self.substitute(f.arg, var, term))
        if isinstance(f, Not):
            return self.neg(self.substitute(f.body, var, term))
        if isinstance(f, Binary):
            return self.binary(f.op, self.substitute(f.left, var, term),
                               self.substitute(f.right, var, term))
        if isinstance(f, Quant):
            bound, body = f.var, f.body
            if bound in term.free:
                fresh = _fresh(bound, term.free | body.free)
                body = self.substitute(body, bound, self.var(fresh))
                bound = fresh
            return self.quant(f.q, bound, self.substitute(body, var, term))
        raise TypeError(f"cannot substitute into {f!r}")

    def fill_hole(self, f, term: Term):
        if not f.holes:
            return f
        if isinstance(f, Hole):
            return term
        if isinstance(f, Quote):
            return self.quote(self.fill_hole(f.body, term))
        if isinstance(f, Truth):
            return self.truth(self.fill_hole(f.arg, term))
        if isinstance(f, Not):
            return self.neg(self.fill_hole(f.body, term))
        if isinstance(f, Binary):
            return self.binary(f.op, self.fill_hole(f.left, term), self.fill_hole(f.right, term))
        if isinstance(f, Quant):
            return self.quant(f.q, f.var, self.fill_hole(f.body, term))
        raise TypeError(f"cannot fill a hole in {f!r}")

    # codes

    def serialize(self, node) -> bytes:
        """Canonical prefix-free byte serialization of a term or formula."""
        cached = self._ser.get(node.id)
        if cached is None:
            cached = self._ser[node.id] = self._serialize(node)
        return cached

    def _serialize(self, node) -> bytes:
        s = self.serialize
        if isinstance(node, Numeral):
            raw = node.value.to_bytes((node.value.bit_length() + 7) // 8, "big")
            return b"#%d:" % len(raw) + raw
        if isinstance(node, Name):
            return b"n" + node.ident.encode() + b";"
        if isinstance(node, Var):
            return b"v" + node.ident.encode() + b";"
        if isinstance(node, Quote):
            return b"[" + s(node.body) + b"]"
        if isinstance(node, Hole):
            return b"_"
        if isinstance(node, Atom):
            return (b"A" + node.pred.encode() + b";%d;" % len(node.args)
                    + b"".join(s(a) for a in node.args))
        if isinstance(node, Truth):
            return b"T" + s(node.arg)
        if isinstance(node, Not):
            return b"~" + s(node.body)
        if isinstance(node, Binary):
            return _OP_BYTE[node.op] + s(node.left) + s(node.right)
        if isinstance(node, Quant):
            return _Q_BYTE[node.q] + node.var.encode() + b";" + s(node.body)
        raise TypeError(node)

    def structural_code(self, sentence: Formula) -> int:
        return 2 * _bijective_value(self.serialize(sentence))

    def encode(self, sentence: Formula) -> int:
        """Gödel code of a sentence (designated code if it has one)."""
        code = self._codes.get(sentence.id)
        if code is not None:
            return code
        if not isinstance(sentence, Formula) or not sentence.closed:
            raise ValueError(f"only sentences have codes: {sentence!r}")
        code = self._designated.get(sentence.id)
        if code is None:
            code = self.structural_code(sentence)
        self._codes[sentence.id] = code
        return code

    def decode(self, code: int) -> Formula | None:
        """Sentence with the given code, or ``None`` if no interned sentence has it."""
        if not isinstance(code, int) or code <= 0:
            return None
        if code % 2:
            return self._by_designated.get(code)
        node = self._lookup_serialized(_bijective_bytes(code // 2))
        if not isinstance(node, Formula) or not node.closed or node.id in self._designated:
            return None
        return node

    def is_designated(self, sentence: Formula) -> bool:
        return sentence.id in self._designated

    def designated(self) -> dict[int, Formula]:
        return dict(self._by_designated)

    def register_designated(self, template: Formula) -> tuple[Formula, int]:
        """Turn a template with one ``#_`` into a sentence containing its own code.

        The fresh code is odd and skips any candidate whose sentence is
        already interned, so earlier sentences keep their codes.
        """
        if template.holes != 1:
            raise ValueError("a designated template needs exactly one #_ placeholder")
        if template.free:
            raise ValueError("a designated template must not have free variables")
        _check_hole_position(template)
        while True:
            code = self._next_odd
            self._next_odd += 2
            if code in self._by_designated:
                continue
            before = self._count
            sentence = self.fill_hole(template, self.numeral(code))
            if sentence.id < before:
                # already interned, so it may already be in use under another code
                continue
            self._bind(sentence, code)
            return sentence, code

    def bind_designated(self, sentence: Formula, code: int) -> None:
        """Re-establish a designated code, used when loading a saved fragment."""
        if code % 2 == 0 or code <= 0:
            raise ValueError("designated codes are odd")
        if code in self._by_designated:
            if self._by_designated[code] is sentence:
                return
            raise ValueError(f"code {code} is already designated")
        if sentence.id in self._codes:
            raise ValueError(f"{to_text(sentence)} already has a structural code")
        self._bind(sentence, code)
        self._next_odd = max(self._next_odd, code + 2)

    def _bind(self, sentence, code):
        self._designated[sentence.id] = code
        self._by_designated[code] = sentence
        self._codes[sentence.id] = code

    def lookup(self, key: tuple):
        return self._table.get(key)

    def _lookup_serialized(self, data: bytes):
        try:
            node, end = _Reader(self, data).read(0)
        except (_Miss, IndexError, ValueError):
            return None
        return node if end == len(data) else None


def _fresh(base: str, avoid) -> str:
    i = 1
    while f"{base}{i}" in avoid:
        i += 1
    return f"{base}{i}"


def _check_hole_position(f) -> None:
    if isinstance(f, Truth):
        if isinstance(f.arg, Quote):
            _check_hole_position(f.arg.body)
        return
    if isinstance(f, Not):
        _check_hole_position(f.body)
    elif isinstance(f, Binary):
        _check_hole_position(f.left)
        _check_hole_position(f.right)
    elif isinstance(f, Quant):
        _check_hole_position(f.body)
    elif isinstance(f, Atom) and f.holes:
        raise ValueError("#_ may only stand as the argument of T")


_OP_BYTE = {OR: b"|", AND: b"&", IMP: b">", IFF: b"="}
_BYTE_OP = {v[0]: k for k, v in _OP_BYTE.items()}
_Q_BYTE = {FORALL: b"!", EXISTS: b"?"}
_BYTE_Q = {v[0]: k for k, v in _Q_BYTE.items()}


def _bijective_value(data: bytes) -> int:
    # digits 1..256 in base 256: shift every byte by one
    k = len(data)
    return int.from_bytes(data, "big") + (256 ** k - 1) // 255


def _bijective_bytes(value: int) -> bytes:
    k = 0
    while (256 ** (k + 1) - 1) // 255 <= value:
        k += 1
    rest = value - (256 ** k - 1) // 255
    return rest.to_bytes(k, "big")


class _Miss(Exception):
    pass


class _Reader:
    """Reads a serialization back, looking nodes up without creating any."""

    def __init__(self, store: Store, data: bytes):
        self.store = store
        self.data = data

    def _get(self, key):
        node = self.store.lookup(key)
        if node is None:
            raise _Miss
        return node

    def _until(self, i, stop):
        j = self.data.index(stop, i)
        return self.data[i:j].decode(), j + 1

    def read(self, i):
        d = self.data
        tag = d[i]
        i += 1
        if tag == ord("#"):
            length, i = self._until(i, b":")
            n = int(length)
            raw = d[i:i + n]
            if len(raw) != n or (n and raw[0] == 0):
                raise _Miss
            return self._get(("num", int.from_bytes(raw, "big"))), i + n
        if tag == ord("n"):
            ident, i = self._until(i, b";")
            return self._get(("name", ident)), i
        if tag == ord("v"):
            ident, i = self._until(i, b";")
            return self._get(("var", ident)), i
        if tag == ord("["):
            body, i = self.read(i)
            if d[i] != ord("]"):
                raise _Miss
            return self._get(("quote", body.id)), i + 1
        if tag == ord("_"):
            return self._get(("hole",)), i
        if tag == ord("A"):
            pred, i = self._until(i, b";")
            count, i = self._until(i, b";")
            args = []
            for _ in range(int(count)):
                a, i = self.read(i)
                args.append(a.id)
            return self._get(("atom", pred, tuple(args))), i
        if tag == ord("T"):
            arg, i = self.read(i)
            return self._get(("T", arg.id)), i
        if tag == ord("~"):
            body, i = self.read(i)
            return self._get(("not", body.id)), i
        if tag in _BYTE_OP:
            left, i = self.read(i)
            right, i = self.read(i)
            return self._get((_BYTE_OP[tag], left.id, right.id)), i
        if tag in _BYTE_Q:
            var, i = self._until(i, b";")
            body, i = self.read(i)
            return self._get((_BYTE_Q[tag], var, body.id)), i
        raise _Miss


# printing

_PREC = {IFF: 1, IMP: 2, OR: 3, AND: 4}
_SYM = {IFF: "<->", IMP: "->", OR: "|", AND: "&"}
_RIGHT_ASSOC = {IFF, IMP}


def term_text(t: Term) -> str:
    if isinstance(t, Numeral):
        return f"#{t.value}"
    if isinstance(t, (Name, Var)):
        return t.ident
    if isinstance(t, Quote):
        return f"[{to_text(t.body)}]"
    if isinstance(t, Hole):
        return "#_"
    raise TypeError(t)


def _prec(f) -> int:
    if isinstance(f, Quant):
        return 0
    if isinstance(f, Binary):
        return _PREC[f.op]
    if isinstance(f, Not):
        return 5
    return 6


def _wrap(f, need_parens: bool) -> str:
    text = to_text(f)
    return f"({text})" if need_parens else text


def to_text(f: Formula) -> str:
    """Surface syntax; ``parse(to_text(f))`` gives back ``f``."""
    if isinstance(f, Atom):
        return f"{f.pred}({', '.join(term_text(a) for a in f.args)})"
    if isinstance(f, Truth):
        return f"T({term_text(f.arg)})"
    if isinstance(f, Not):
        return "~" + _wrap(f.body, _prec(f.body) < 5)
    if isinstance(f, Binary):
        p = _PREC[f.op]
        if f.op in _RIGHT_ASSOC:
            left = _wrap(f.left, _prec(f.left) <= p)
            right = _wrap(f.right, _prec(f.right) < p)
        else:
            left = _wrap(f.left, _prec(f.left) < p)
            right = _wrap(f.right, _prec(f.right) <= p)
        return f"{left} {_SYM[f.op]} {right}"
    if isinstance(f, Quant):
        return f"{f.q} {f.var}. {to_text(f.body)}"
    raise TypeError(f)


# parsing

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<iff><->|↔)
  | (?P<imp>->|→)
  | (?P<hole>\#_)
  | (?P<num>\#\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<sym>[~¬&∧|∨().,\[\]⌈⌉∀∃])
""", re.VERBOSE)

_SYM_ALIASES = {"¬": "~", "∧": "&", "∨": "|", "⌈": "[", "⌉": "]", "∀": FORALL, "∃": EXISTS}


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        value = m.group()
        if kind == "ident" and value in QUANTIFIERS:
            kind = "quant"
        elif kind == "sym":
            value = _SYM_ALIASES.get(value, value)
            if value in QUANTIFIERS:
                kind = "quant"
        elif kind in ("iff", "imp"):
            kind, value = "sym", ("<->" if kind == "iff" else "->")
        if kind != "ws":
            tokens.append((kind, value, pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, store, vocabulary):
        self.tokens = _tokenize(text)
        self.i = 0
        self.store = store
        self.vocab = vocabulary
        self.bound: list[str] = []

    def at(self, value) -> bool:
        kind, v, _ = self.tokens[self.i]
        return kind == "sym" and v == value

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, v, pos = self.take()
        if kind != "sym" or v != value:
            raise ParseError(f"expected {value!r}, found {v or 'end of input'!r}", pos)

    def fail(self, message):
        raise ParseError(message, self.tokens[self.i][2])

    def formula(self):
        left = self.implication()
        if self.at("<->"):
            self.take()
            return self.store.iff(left, self.formula())
        return left

    def implication(self):
        left = self.disjunction()
        if self.at("->"):
            self.take()
            return self.store.imp(left, self.implication())
        return left

    def disjunction(self):
        left = self.conjunction()
        while self.at("|"):
            self.take()
            left = self.store.disj(left, self.conjunction())
        return left

    def conjunction(self):
        left = self.unary()
        while self.at("&"):
            self.take()
            left = self.store.conj(left, self.unary())
        return left

    def unary(self):
        kind, value, pos = self.tokens[self.i]
        if kind == "sym" and value == "~":
            self.take()
            return self.store.neg(self.unary())
        if kind == "quant":
            self.take()
            vkind, var, vpos = self.take()
            if vkind != "ident" or var in _RESERVED:
                raise ParseError("expected a variable after the quantifier", vpos)
            self.expect(".")
            self.bound.append(var)
            try:
                body = self.formula()
            finally:
                self.bound.pop()
            return self.store.quant(value, var, body)
        return self.primary()

    def primary(self):
        kind, value, pos = self.take()
        if kind == "sym" and value == "(":
            f = self.formula()
            self.expect(")")
            return f
        if kind == "ident" and value == "T":
            self.expect("(")
            arg = self.truth_arg()
            self.expect(")")
            return self.store.truth(arg)
        if kind == "ident":
            return self.atom(value, pos)
        raise ParseError(f"unexpected {value or 'end of input'!r}", pos)

    def truth_arg(self):
        kind, value, pos = self.take()
        if kind == "num":
            return self.store.numeral(int(value[1:]))
        if kind == "hole":
            return self.store.hole()
        if kind == "sym" and value == "[":
            body = self.formula()
            self.expect("]")
            return self.store.quote(body)
        if kind == "ident" and value in self.bound:
            return self.store.var(value)
        if kind == "ident":
            raise ParseError(f"{value!r} is not a bound variable; T takes numerals, variables or quotations", pos)
        raise ParseError(f"bad argument to T: {value or 'end of input'!r}", pos)

    def atom(self, pred, pos):
        if pred in _RESERVED:
            raise ParseError(f"{pred!r} is reserved", pos)
        if self.vocab is not None and pred not in self.vocab.predicates:
            raise ParseError(f"unknown predicate {pred!r}", pos)
        self.expect("(")
        args = []
        if not self.at(")"):
            while True:
                args.append(self.object_term())
                if not self.at(","):
                    break
                self.take()
        self.expect(")")
        if self.vocab is not None and self.vocab.predicates[pred] != len(args):
            raise ParseError(f"{pred} takes {self.vocab.predicates[pred]} arguments, got {len(args)}", pos)
        return self.store.atom(pred, args)

    def object_term(self):
        kind, value, pos = self.take()
        if kind != "ident" or value in _RESERVED:
            raise ParseError(f"expected a name or variable, found {value!r}", pos)
        if value in self.bound:
            return self.store.var(value)
        if self.vocab is not None and value not in self.vocab.names:
            raise ParseError(f"unknown name {value!r}", pos)
        return self.store.name(value)


def parse(text: str, store: Store, vocabulary: Vocabulary | None = None, *, allow_hole=False) -> Formula:
    """Parse a sentence.

    Without a vocabulary any identifier outside a binder is taken as a name.
    Templates containing ``#_`` are only accepted with ``allow_hole=True``.
    """
    p = _Parser(text, store, vocabulary)
    f = p.formula()
    kind, value, pos = p.tokens[p.i]
    if kind != "end":
        raise ParseError(f"unexpected {value!r} after the formula", pos)
    if f.free:
        raise ParseError(f"free variables {sorted(f.free)} in a sentence", 0)
    if f.holes and not allow_hole:
        raise ParseError("#_ is only allowed in designated templates", 0)
    return f
