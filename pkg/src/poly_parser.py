"""
Разбор многочленов в грамматике CLI (рекурсивный спуск)

    expr     := ['+'|'-'] term (('+'|'-') term)*
    term     := factor ('*' factor)*
    factor   := base ('^' natural)?
    base     := rational | var | '(' expr ')'
    rational := integer ('/' positive-integer)?

Неявное умножение запрещено; столбцы в сообщениях об ошибках считаются с 1.
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Union

from src.polynomial import Polynomial, Ring
from utils.errors import PolynomialSyntaxError, UnknownVariableError, ZeroDenominatorError

NUMBER = "number"
NAME = "name"
OPERATOR = "operator"
END = "end"

_OPERATORS = set("+-*/^()")
# только ASCII: int() не должен видеть надстрочные и прочие цифры Юникода
_NUMBER_RE = re.compile(r"[0-9]+")
_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    column: int


@dataclass(frozen=True)
class PolyExpr:
    source: str
    parsed: Polynomial
    ring: Ring


def tokenize(source: str) -> List[Token]:
    tokens = []
    pos = 0
    while pos < len(source):
        ch = source[pos]
        if ch in " \t\r\n":
            pos += 1
            continue
        number = _NUMBER_RE.match(source, pos)
        name = _NAME_RE.match(source, pos)
        if number:
            tokens.append(Token(NUMBER, number.group(), pos + 1))
            pos = number.end()
        elif name:
            tokens.append(Token(NAME, name.group(), pos + 1))
            pos = name.end()
        elif ch in _OPERATORS:
            tokens.append(Token(OPERATOR, ch, pos + 1))
            pos += 1
        else:
            raise PolynomialSyntaxError(f"Недопустимый символ {ch!r}", pos + 1)
    tokens.append(Token(END, "", len(source) + 1))
    return tokens


class _Parser:
    def __init__(self, tokens: List[Token], ring: Ring):
        self.tokens = tokens
        self.pos = 0
        self.ring = ring

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def accept(self, text: str) -> bool:
        token = self.peek()
        if token.kind == OPERATOR and token.text == text:
            self.pos += 1
            return True
        return False

    def fail(self, message: str) -> PolynomialSyntaxError:
        token = self.peek()
        found = "конец строки" if token.kind == END else repr(token.text)
        return PolynomialSyntaxError(f"{message}, найдено {found}", token.column)

    def parse(self) -> Polynomial:
        result = self.expr()
        if self.peek().kind != END:
            raise self.fail("Ожидался оператор или конец выражения")
        return result

    def expr(self) -> Polynomial:
        negate = False
        if self.accept("-"):
            negate = True
        else:
            self.accept("+")
        result = self.term()
        if negate:
            result = -result
        while True:
            if self.accept("+"):
                result = result + self.term()
            elif self.accept("-"):
                result = result - self.term()
            else:
                return result

    def term(self) -> Polynomial:
        result = self.factor()
        while self.accept("*"):
            result = result * self.factor()
        return result

    def factor(self) -> Polynomial:
        base = self.base()
        if self.accept("^"):
            token = self.peek()
            if token.kind != NUMBER:
                raise self.fail("После '^' ожидалась натуральная степень")
            self.advance()
            base = base ** int(token.text)
        return base

    def base(self) -> Polynomial:
        token = self.peek()
        if token.kind == NUMBER:
            self.advance()
            value = Fraction(int(token.text))
            if self.accept("/"):
                denominator = self.peek()
                if denominator.kind != NUMBER:
                    raise self.fail("После '/' ожидался целый знаменатель")
                self.advance()
                if int(denominator.text) == 0:
                    raise ZeroDenominatorError("Нулевой знаменатель", denominator.column)
                value = value / int(denominator.text)
            return self.ring.const(value)
        if token.kind == NAME:
            self.advance()
            if token.text not in self.ring.names:
                raise UnknownVariableError(
                    f"Неизвестная переменная {token.text!r} (объявлены: {', '.join(self.ring.names)})",
                    token.column,
                )
            return self.ring.gen(token.text)
        if self.accept("("):
            inner = self.expr()
            if not self.accept(")"):
                raise self.fail("Ожидалась ')'")
            return inner
        raise self.fail("Ожидалось число, переменная или '('")


def parse_variables(names_text: Union[str, Sequence[str]]) -> Ring:
    """'x,y,z' -> Ring(('x', 'y', 'z'))"""
    if isinstance(names_text, str):
        names = [n.strip() for n in names_text.split(",") if n.strip()]
    else:
        names = list(names_text)
    return Ring(tuple(names))


def parse_polynomial(source: str, variables: Union[Ring, str, Sequence[str]]) -> PolyExpr:
    ring = variables if isinstance(variables, Ring) else parse_variables(variables)
    parsed = _Parser(tokenize(source), ring).parse()
    return PolyExpr(source, parsed, ring)
