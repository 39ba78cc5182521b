"""Parsing and evaluation of the nonlinearity f(t, x).

Grammar (whitespace is ignored between tokens)::

    expression := term { ("+" | "-") term }
    term       := unary { ("*" | "/") unary }
    unary      := "-" unary | power
    power      := primary [ "^" unary ]          (right-associative)
    primary    := number | "t" | "x" | function "(" expression ")" | "(" expression ")"
    function   := "exp" | "log" | "sqrt" | "sin" | "cos" | "abs"
    number     := digits [ "." [digits] ] [ ("e" | "E") ["+" | "-"] digits ]
                | "." digits [ ("e" | "E") ["+" | "-"] digits ]

There is no implicit multiplication: write ``2*x``, not ``2x``.

The same tree can be evaluated three ways: with ``math`` on floats
(``evaluate``), with numpy on arrays (``evaluate_array``) and with mpmath
(``evaluate_mp``), the last one for sampling growth limits at magnitudes
where doubles overflow.
"""

import math
import re
from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, List

import mpmath
import numpy as np

from .errors import ExpressionDomainError, ExpressionSyntaxError, UnknownIdentifierError

VARIABLES = frozenset({"t", "x"})
FUNCTIONS = ("exp", "log", "sqrt", "sin", "cos", "abs")

# Operator groups in increasing binding power. Unary minus sits between the
# multiplicative group and "^", so -x^2 is -(x^2) and 2^-1 is allowed.
OPERATORS = [
    [("+", "left"), ("-", "left")],
    [("*", "left"), ("/", "left")],
    [("^", "right")],
]
OPERATOR_PREC = {name: idx for idx, group in enumerate(OPERATORS) for name, _ in group}
OPERATOR_ASSOC = {name: assoc for group in OPERATORS for name, assoc in group}
UNARY_PREC = OPERATOR_PREC["^"]
ATOM_PREC = len(OPERATORS)

_NUMBER = re.compile(r"(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?", re.ASCII)
DIGITS = frozenset("0123456789")
_IDENTIFIER = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


class Expression:
    """Base class of the immutable expression tree."""

    def variables(self) -> FrozenSet[str]:
        """Names of the variables that occur in the expression."""
        raise NotImplementedError

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class Literal(Expression):
    value: float

    def variables(self) -> FrozenSet[str]:
        return frozenset()


@dataclass(frozen=True)
class Variable(Expression):
    name: str

    def variables(self) -> FrozenSet[str]:
        return frozenset({self.name})


@dataclass(frozen=True)
class Negate(Expression):
    operand: Expression

    def variables(self) -> FrozenSet[str]:
        return self.operand.variables()


@dataclass(frozen=True)
class BinaryOp(Expression):
    op: str
    left: Expression
    right: Expression

    def variables(self) -> FrozenSet[str]:
        return self.left.variables() | self.right.variables()


@dataclass(frozen=True)
class Call(Expression):
    function: str
    argument: Expression

    def variables(self) -> FrozenSet[str]:
        return self.argument.variables()


@dataclass(frozen=True)
class Token:
    kind: str  # "number", "name", "op" or "end"
    text: str
    offset: int


def _byte_offset(text: str, index: int) -> int:
    return len(text[:index].encode("utf-8"))


def tokenize(text: str) -> List[Token]:
    """Split expression text into tokens, ending with an ``end`` token.

    Raises:
        ExpressionSyntaxError: On a character that cannot start a token.
    """
    tokens: List[Token] = []
    idx = 0
    while idx < len(text):
        c = text[idx]
        if c.isspace():
            idx += 1
            continue
        if c in DIGITS or (c == "." and idx + 1 < len(text) and text[idx + 1] in DIGITS):
            match = _NUMBER.match(text, idx)
            tokens.append(Token("number", match.group(0), _byte_offset(text, idx)))
            idx = match.end()
            continue
        if c.isascii() and (c.isalpha() or c == "_"):
            match = _IDENTIFIER.match(text, idx)
            tokens.append(Token("name", match.group(0), _byte_offset(text, idx)))
            idx = match.end()
            continue
        if c in OPERATOR_PREC or c in "()":
            tokens.append(Token("op", c, _byte_offset(text, idx)))
            idx += 1
            continue
        raise ExpressionSyntaxError(f"unexpected character {c!r}", _byte_offset(text, idx))
    tokens.append(Token("end", "", _byte_offset(text, len(text))))
    return tokens


class _Parser:
    """Precedence-climbing parser over a token list."""

    def __init__(self, tokens: List[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token:
        """The next token, without consuming it."""
        return self.tokens[self.pos]

    def advance(self) -> Token:
        """Consume and return the next token."""
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def expect(self, text: str) -> Token:
        """Consume the operator `text` or raise ExpressionSyntaxError at the offending token."""
        token = self.advance()
        if token.text != text or token.kind != "op":
            found = "end of input" if token.kind == "end" else repr(token.text)
            raise ExpressionSyntaxError(f"expected {text!r}, found {found}", token.offset)
        return token

    def atom(self) -> Expression:
        """Parse a number, name, unary minus or parenthesised group."""
        token = self.advance()
        if token.kind == "end":
            raise ExpressionSyntaxError("unexpected end of input", token.offset)
        if token.kind == "number":
            value = float(token.text)
            if not math.isfinite(value):
                raise ExpressionSyntaxError(f"number {token.text} is out of range", token.offset)
            return Literal(value)
        if token.kind == "name":
            return self.name(token)
        if token.text == "-":
            return Negate(self.climb(UNARY_PREC))
        if token.text == "(":
            inner = self.climb(0)
            self.expect(")")
            return inner
        raise ExpressionSyntaxError(f"unexpected operator {token.text!r}", token.offset)

    def name(self, token: Token) -> Expression:
        """A variable, or a call when the name is followed by '('."""
        following = self.peek()
        is_call = following.kind == "op" and following.text == "("
        if token.text in VARIABLES and not is_call:
            return Variable(token.text)
        if not is_call:
            if token.text in FUNCTIONS:
                raise ExpressionSyntaxError(f"function {token.text!r} needs a parenthesised argument", token.offset)
            raise UnknownIdentifierError(token.text, token.offset)
        if token.text not in FUNCTIONS:
            raise UnknownIdentifierError(token.text, token.offset, kind="function")
        self.advance()
        argument = self.climb(0)
        self.expect(")")
        return Call(token.text, argument)

    def climb(self, min_prec: int) -> Expression:
        lhs = self.atom()
        while True:
            token = self.peek()
            if token.kind != "op" or token.text not in OPERATOR_PREC:
                return lhs
            op_prec = OPERATOR_PREC[token.text]
            if op_prec < min_prec:
                return lhs
            self.advance()
            next_prec = op_prec + 1 if OPERATOR_ASSOC[token.text] == "left" else op_prec
            rhs = self.climb(next_prec)
            lhs = BinaryOp(token.text, lhs, rhs)


def parse(text: str) -> Expression:
    """Parse expression text in the variables t and x.

    Args:
        text: Non-empty expression source.

    Returns:
        The expression tree.

    Raises:
        ExpressionSyntaxError: Malformed input; ``offset`` points at the failure.
        UnknownIdentifierError: A variable other than t, x or an unsupported function.
    """
    if not text or not text.strip():
        raise ExpressionSyntaxError("empty expression", 0)
    parser = _Parser(tokenize(text))
    tree = parser.climb(0)
    trailing = parser.peek()
    if trailing.kind != "end":
        raise ExpressionSyntaxError(f"unexpected {trailing.text!r}", trailing.offset)
    return tree


def _precedence(e: Expression) -> int:
    if isinstance(e, BinaryOp):
        return OPERATOR_PREC[e.op]
    if isinstance(e, Negate):
        return UNARY_PREC
    return ATOM_PREC


def _format_number(value: float) -> str:
    if value.is_integer() and abs(value) < 1e15:
        return str(int(value))
    return repr(value)


def to_text(e: Expression) -> str:
    """Render an expression with the fewest parentheses that re-parse to the same tree."""
    if isinstance(e, Literal):
        text = _format_number(e.value)
        return f"({text})" if e.value < 0 else text
    if isinstance(e, Variable):
        return e.name
    if isinstance(e, Call):
        return f"{e.function}({to_text(e.argument)})"
    if isinstance(e, Negate):
        inner = to_text(e.operand)
        if _precedence(e.operand) < UNARY_PREC:
            inner = f"({inner})"
        return f"-{inner}"
    if isinstance(e, BinaryOp):
        prec = OPERATOR_PREC[e.op]
        left, right = to_text(e.left), to_text(e.right)
        left_prec, right_prec = _precedence(e.left), _precedence(e.right)
        if OPERATOR_ASSOC[e.op] == "left":
            wrap_left = left_prec < prec
            wrap_right = right_prec <= prec
        else:
            # (-a)^b and (a^b)^c both need parentheses on the left
            wrap_left = left_prec <= prec
            wrap_right = right_prec < UNARY_PREC
        if wrap_left:
            left = f"({left})"
        if wrap_right:
            right = f"({right})"
        return f"{left}{e.op}{right}" if e.op == "^" else f"{left} {e.op} {right}"
    raise TypeError(f"not an expression node: {e!r}")


class _Backend:
    """Arithmetic primitives for one number type."""

    def __init__(self, name: str, functions: Dict[str, Callable], power: Callable, divide: Callable):
        self.name = name
        self.functions = functions
        self.power = power
        self.divide = divide


def _scalar_guard(operation: str, func: Callable) -> Callable:
    def guarded(*args):
        try:
            value = func(*args)
        except (ValueError, ZeroDivisionError, OverflowError):
            raise ExpressionDomainError(operation, ", ".join(f"{a:.12g}" for a in args))
        if isinstance(value, complex) or not math.isfinite(value):
            raise ExpressionDomainError(operation, ", ".join(f"{a:.12g}" for a in args))
        return value

    return guarded


_FLOAT = _Backend(
    "float",
    {
        "exp": _scalar_guard("exp", math.exp),
        "log": _scalar_guard("log", math.log),
        "sqrt": _scalar_guard("sqrt", math.sqrt),
        "sin": _scalar_guard("sin", math.sin),
        "cos": _scalar_guard("cos", math.cos),
        "abs": abs,
    },
    power=_scalar_guard("^", math.pow),
    divide=_scalar_guard("/", lambda a, b: a / b),
)


def _mp_checked(operation: str, func: Callable, domain: Callable[..., bool]) -> Callable:
    def checked(*args):
        if not domain(*args):
            raise ExpressionDomainError(operation, ", ".join(mpmath.nstr(a, 12) for a in args))
        return func(*args)

    return checked


def _mp_power_domain(a, b) -> bool:
    if a < 0 and b != mpmath.floor(b):
        return False
    return not (a == 0 and b < 0)


_MP = _Backend(
    "mpmath",
    {
        "exp": mpmath.exp,
        "log": _mp_checked("log", mpmath.log, lambda a: a > 0),
        "sqrt": _mp_checked("sqrt", mpmath.sqrt, lambda a: a >= 0),
        "sin": mpmath.sin,
        "cos": mpmath.cos,
        "abs": abs,
    },
    power=_mp_checked("^", mpmath.power, _mp_power_domain),
    divide=_mp_checked("/", lambda a, b: a / b, lambda a, b: b != 0),
)

_ARRAY = _Backend(
    "numpy",
    {
        "exp": np.exp,
        "log": np.log,
        "sqrt": np.sqrt,
        "sin": np.sin,
        "cos": np.cos,
        "abs": np.abs,
    },
    power=np.power,
    divide=np.divide,
)


def _walk(e: Expression, t, x, backend: _Backend):
    if isinstance(e, Literal):
        return e.value
    if isinstance(e, Variable):
        return t if e.name == "t" else x
    if isinstance(e, Negate):
        return -_walk(e.operand, t, x, backend)
    if isinstance(e, Call):
        return backend.functions[e.function](_walk(e.argument, t, x, backend))
    if isinstance(e, BinaryOp):
        left = _walk(e.left, t, x, backend)
        right = _walk(e.right, t, x, backend)
        if e.op == "+":
            return left + right
        if e.op == "-":
            return left - right
        if e.op == "*":
            return left * right
        if e.op == "/":
            return backend.divide(left, right)
        return backend.power(left, right)
    raise TypeError(f"not an expression node: {e!r}")


def evaluate(e: Expression, t: float, x: float) -> float:
    """Evaluate at a single point with IEEE doubles.

    Raises:
        ExpressionDomainError: Division by zero, log/sqrt/power out of domain or overflow.
    """
    try:
        value = _walk(e, float(t), float(x), _FLOAT)
    except ExpressionDomainError as exc:
        raise ExpressionDomainError(exc.operation, exc.operand, (t, x)) from None
    if not math.isfinite(value):
        raise ExpressionDomainError("evaluation", None, (t, x))
    return float(value)


def evaluate_array(e: Expression, t, x) -> np.ndarray:
    """Evaluate on broadcast numpy arrays.

    Raises:
        ExpressionDomainError: If any sample is non-finite; the first offending point is reported.
    """
    t_arr = np.asarray(t, dtype=float)
    x_arr = np.asarray(x, dtype=float)
    with np.errstate(all="ignore"):
        values = np.asarray(_walk(e, t_arr, x_arr, _ARRAY), dtype=float)
    values = np.broadcast_to(values, np.broadcast(t_arr, x_arr).shape)
    bad = ~np.isfinite(values)
    if bad.any():
        index = np.unravel_index(np.argmax(bad), bad.shape)
        t_b, x_b = np.broadcast_arrays(t_arr, x_arr)
        operation = "overflow" if np.isinf(values[index]) else "evaluation"
        raise ExpressionDomainError(operation, None, (float(t_b[index]), float(x_b[index])))
    return np.array(values)


def evaluate_mp(e: Expression, t, x):
    """Evaluate with mpmath numbers; exponents far beyond double range stay finite."""
    try:
        return _walk(e, mpmath.mpf(t), mpmath.mpf(x), _MP)
    except ExpressionDomainError as exc:
        raise ExpressionDomainError(exc.operation, exc.operand, (float(t), float(x))) from None


def as_function(e: Expression) -> Callable[[float, float], float]:
    """Bind an expression to a plain two-argument callable."""

    def f(t: float, x: float) -> float:
        return evaluate(e, t, x)

    return f

