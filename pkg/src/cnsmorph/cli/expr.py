"""Expression language for user-supplied fields and maps.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := unary ('*' unary)*
    unary  := '-' unary | factor
    factor := atom ('^' uint)?
    atom   := number ['i'] | 'i' | var | func '(' args ')' | '(' expr ')'
    var    := ('z' | 'w') uint
    func   := conj | re | im | abs2 | norm | G

Whitespace is insignificant and there is no implicit multiplication.
``G(k)`` is the fundamental solution ``G_k`` evaluated at the whole point.
"""

import re
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from ..cxcalc import G_EXCLUSION_RADIUS, MapField, ScalarField, gk
from ..errors import DomainError, ExpressionError, NumericalError

FUNCTIONS = {"conj": 1, "re": 1, "im": 1, "abs2": 1, "norm": 1, "G": 1}
IMAG_RESIDUE = 1e-9

_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?i?(?![A-Za-z0-9_]))"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*^(),])"
    r")"
)


@dataclass(frozen=True)
class Num:
    value: float
    imaginary: bool = False
    offset: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Var:
    letter: str
    index: int
    offset: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple
    offset: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Neg:
    operand: "Node"
    offset: int = field(default=0, compare=False)


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"
    offset: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: int
    offset: int = field(default=0, compare=False)


Node = Union[Num, Var, Call, Neg, BinOp, Pow]


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ExpressionError(f"unexpected character {text[start]!r}", start)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, dims):
        self.text = text
        self.dims = dims
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def take(self):
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, value):
        kind, text, off = self.tok
        if text != value or kind == "end":
            found = "end of input" if kind == "end" else repr(text)
            raise ExpressionError(f"expected {value!r}, found {found}", off)
        return self.take()

    def parse(self):
        if not self.text.strip():
            raise ExpressionError("empty expression", 0)
        node = self.expr()
        kind, text, off = self.tok
        if kind != "end":
            raise ExpressionError(f"unexpected {text!r}", off)
        return node

    def expr(self):
        node = self.term()
        while self.tok[0] == "op" and self.tok[1] in "+-":
            _, op, off = self.take()
            node = BinOp(op, node, self.term(), off)
        return node

    def term(self):
        node = self.unary()
        while self.tok[0] == "op" and self.tok[1] == "*":
            _, op, off = self.take()
            node = BinOp(op, node, self.unary(), off)
        return node

    def unary(self):
        if self.tok[0] == "op" and self.tok[1] == "-":
            off = self.take()[2]
            return Neg(self.unary(), off)
        return self.factor()

    def factor(self):
        node = self.atom()
        if self.tok[0] == "op" and self.tok[1] == "^":
            off = self.take()[2]
            kind, text, eoff = self.tok
            if kind != "num" or not text.isdigit():
                found = "end of input" if kind == "end" else repr(text)
                raise ExpressionError(f"exponent must be a non-negative integer, found {found}", eoff)
            self.take()
            node = Pow(node, int(text), off)
        return node

    def atom(self):
        kind, text, off = self.tok
        if kind == "num":
            self.take()
            imag = text.endswith("i")
            return Num(float(text[:-1] if imag else text), imag, off)
        if kind == "name":
            self.take()
            if text == "i":
                return Num(1.0, True, off)
            m = re.fullmatch(r"([zw])(\d+)", text)
            if m:
                letter, index = m.group(1), int(m.group(2))
                limit = self.dims.get(letter, 0)
                if not 1 <= index <= limit:
                    raise ExpressionError(f"unknown variable {text} (declared {letter}1..{letter}{limit})", off)
                return Var(letter, index, off)
            if text in FUNCTIONS:
                return self.call(text, off)
            raise ExpressionError(f"unknown name {text!r}", off)
        if kind == "op" and text == "(":
            self.take()
            node = self.expr()
            self.expect(")")
            return node
        found = "end of input" if kind == "end" else repr(text)
        raise ExpressionError(f"expected a value, found {found}", off)

    def call(self, name, off):
        self.expect("(")
        args = []
        if not (self.tok[0] == "op" and self.tok[1] == ")"):
            args.append(self.expr())
            while self.tok[0] == "op" and self.tok[1] == ",":
                self.take()
                args.append(self.expr())
        self.expect(")")
        if len(args) != FUNCTIONS[name]:
            raise ExpressionError(f"{name} takes {FUNCTIONS[name]} argument(s), got {len(args)}", off)
        if name == "G":
            a = args[0]
            n = self.dims.get("z", 0) or self.dims.get("w", 0)
            if not (isinstance(a, Num) and not a.imaginary and a.value.is_integer() and 1 <= a.value <= n):
                raise ExpressionError(f"G needs an integer order between 1 and {n}", off)
        return Call(name, tuple(args), off)


def _dims(dims):
    if isinstance(dims, int):
        return {"z": dims}
    return dict(dims)


def parse(text, dims):
    """Parse ``text``; ``dims`` is ``N`` (variables ``z1..zN``) or a mapping such as ``{"z": N, "w": M}``."""
    return _Parser(text, _dims(dims)).parse()


# --- printing ----------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2}


def _prec(node):
    if isinstance(node, BinOp):
        return _PREC[node.op]
    if isinstance(node, Neg):
        return 3
    if isinstance(node, Pow):
        return 4
    return 5


def _wrap(node, minimum):
    s = to_text(node)
    return s if _prec(node) >= minimum else f"({s})"


def _num_text(value):
    if value.is_integer() and abs(value) < 1e16:
        return str(int(value))
    return repr(value)


def to_text(node):
    """Render an AST with the fewest parentheses that preserve its shape."""
    if isinstance(node, Num):
        return _num_text(node.value) + ("i" if node.imaginary else "")
    if isinstance(node, Var):
        return f"{node.letter}{node.index}"
    if isinstance(node, Call):
        if node.name == "G":
            return f"G({_num_text(node.args[0].value)})"
        return f"{node.name}({', '.join(to_text(a) for a in node.args)})"
    if isinstance(node, Neg):
        return "-" + _wrap(node.operand, 3)
    if isinstance(node, Pow):
        return f"{_wrap(node.base, 5)}^{node.exponent}"
    p = _PREC[node.op]
    return f"{_wrap(node.left, p)}{node.op}{_wrap(node.right, p + 1)}"


# --- evaluation --------------------------------------------------------------


def variables(node):
    """Set of ``(letter, index)`` pairs used."""
    if isinstance(node, Var):
        return {(node.letter, node.index)}
    if isinstance(node, Num):
        return set()
    if isinstance(node, Call):
        out = set().union(*(variables(a) for a in node.args))
        return out | ({("G", 0)} if node.name == "G" else set())
    if isinstance(node, Neg):
        return variables(node.operand)
    if isinstance(node, Pow):
        return variables(node.base)
    return variables(node.left) | variables(node.right)


def compile_expr(node, letter="z"):
    """Closure ``f(point) -> complex`` with ``letter{j}`` bound to ``point[j - 1]``."""

    def ev(n, p):
        if isinstance(n, Num):
            return complex(0.0, n.value) if n.imaginary else complex(n.value)
        if isinstance(n, Var):
            if n.letter != letter:
                raise DomainError(f"variable {n.letter}{n.index} is not bound here (only {letter})")
            return complex(p[n.index - 1])
        if isinstance(n, Neg):
            return -ev(n.operand, p)
        if isinstance(n, Pow):
            return ev(n.base, p) ** n.exponent
        if isinstance(n, BinOp):
            a, b = ev(n.left, p), ev(n.right, p)
            return a + b if n.op == "+" else a - b if n.op == "-" else a * b
        if n.name == "G":
            return complex(gk(int(n.args[0].value), len(p)).evaluator(p))
        v = ev(n.args[0], p)
        if n.name == "conj":
            return v.conjugate()
        if n.name == "re":
            return complex(v.real)
        if n.name == "im":
            return complex(v.imag)
        if n.name == "abs2":
            return complex(v.real**2 + v.imag**2)
        return complex(abs(v))

    def run(p):
        try:
            return ev(node, np.asarray(p, dtype=complex))
        except (OverflowError, ZeroDivisionError) as exc:
            raise NumericalError(f"expression overflowed: {exc}") from exc

    return run


def scalar_field(text, N, letter="z"):
    """A real :class:`ScalarField` on ``C^N`` from an expression.

    The value's imaginary part must stay below ``1e-9 (1 + |value|)``;
    anything larger raises :class:`DomainError` at evaluation time.
    """
    node = parse(text, {letter: N})
    fn = compile_expr(node, letter)

    def value(z):
        v = fn(z)
        if abs(v.imag) > IMAG_RESIDUE * (1.0 + abs(v)):
            raise DomainError(f"expression {text!r} is not real-valued (imaginary part {v.imag:.3g})")
        return v.real

    domain = None
    if ("G", 0) in variables(node):
        domain = lambda z: np.linalg.norm(z) >= G_EXCLUSION_RADIUS  # noqa: E731
    return ScalarField(N, value, domain, name=to_text(node))


def map_field(texts, N, letter="z"):
    """A :class:`MapField` ``C^N -> C^M`` with one expression per component."""
    if isinstance(texts, str):
        texts = [t for t in texts.split(";") if t.strip()]
    if not texts:
        raise ExpressionError("no component expressions", 0)
    fns = [compile_expr(parse(t, {letter: N}), letter) for t in texts]
    return MapField(N, len(fns), lambda z: np.array([f(z) for f in fns]), name="F")
