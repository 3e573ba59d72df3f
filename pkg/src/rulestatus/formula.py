"""LTL rule parsing into addressed formula trees.

Grammar, weakest binding first::

    implication := junction ( '->' implication )?          right-assoc
    junction    := temporal ( ('&' temporal)+ | ('|' temporal)+ )?
    temporal    := unary ( ('U' | 'W' | 'R' | 'M') temporal )?   right-assoc
    unary       := ('!' | 'X' | 'F' | 'G') unary | primary
    primary     := LABEL | '(' implication ')'

Chains of ``&`` (or ``|``) are nested to the right, ``a & b & c`` being
``a & (b & c)``.  Mixing ``&`` and ``|`` at one level without parentheses
is rejected.  The Unicode forms ``¬ ∧ ∨ →`` are accepted as aliases.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Sequence, Union

__all__ = [
    "OperatorKind",
    "FormulaNode",
    "FormulaTree",
    "FormulaSyntaxError",
    "UnknownAddressError",
    "TOP",
    "parse_formula",
    "parse_address",
    "format_address",
    "node_at",
    "precondition",
    "serialize",
    "as_tree",
    "load_rules",
    "parse_rules",
    "LABEL_PATTERN",
]


class OperatorKind(enum.Enum):
    AP = "AP"
    NOT = "!"
    AND = "&"
    OR = "|"
    IMPLIES = "->"
    NEXT = "X"
    EVENTUAL = "F"
    GLOBAL = "G"
    UNTIL = "U"
    WEAK_UNTIL = "W"
    RELEASE = "R"
    STRONG_RELEASE = "M"

    @property
    def arity(self) -> int:
        if self is OperatorKind.AP:
            return 0
        if self in _UNARY:
            return 1
        return 2

    @property
    def symbol(self) -> str:
        return self.value


_UNARY = frozenset(
    {OperatorKind.NOT, OperatorKind.NEXT, OperatorKind.EVENTUAL, OperatorKind.GLOBAL}
)
_TEMPORAL_BINARY = {
    "U": OperatorKind.UNTIL,
    "W": OperatorKind.WEAK_UNTIL,
    "R": OperatorKind.RELEASE,
    "M": OperatorKind.STRONG_RELEASE,
}
_UNARY_TOKENS = {
    "!": OperatorKind.NOT,
    "X": OperatorKind.NEXT,
    "F": OperatorKind.EVENTUAL,
    "G": OperatorKind.GLOBAL,
}
_KEYWORDS = frozenset("XFGUWRM")

# A hyphen must sit between two word characters, so ``a->b`` lexes as a, ->, b.
LABEL_PATTERN = re.compile(r"[A-Za-z_][A-Za-z0-9_]*(?:-[A-Za-z0-9_]+)*")

Address = tuple[int, ...]


class FormulaSyntaxError(ValueError):
    """Raised for malformed rule text; carries the offending offset."""

    def __init__(self, message: str, text: str, position: int, expected: Sequence[str] = ()):
        self.text = text
        self.position = position
        self.expected = tuple(expected)
        detail = message
        if self.expected:
            detail += " (expected " + ", ".join(self.expected) + ")"
        detail += f" at position {position}"
        super().__init__(f"{detail}\n  {text}\n  {' ' * position}^")


class UnknownAddressError(KeyError):
    def __str__(self) -> str:
        return f"no node at address {self.args[0]!r}"


class _Top:
    """The trivially true precondition."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "TOP"


TOP = _Top()


@dataclass(frozen=True)
class FormulaNode:
    address: Address
    kind: OperatorKind
    children: tuple["FormulaNode", ...] = ()
    label: str | None = None

    def __post_init__(self):
        if len(self.children) != self.kind.arity:
            raise ValueError(
                f"{self.kind.name} takes {self.kind.arity} argument(s), got {len(self.children)}"
            )
        if (self.label is not None) != (self.kind is OperatorKind.AP):
            raise ValueError("a label is required exactly on AP nodes")

    @property
    def path(self) -> str:
        return format_address(self.address)

    @property
    def depth(self) -> int:
        """Height of the subtree rooted here (a leaf has depth 0)."""
        if not self.children:
            return 0
        return 1 + max(child.depth for child in self.children)

    def walk(self) -> Iterator["FormulaNode"]:
        """Pre-order traversal."""
        yield self
        for child in self.children:
            yield from child.walk()

    def postorder(self) -> Iterator["FormulaNode"]:
        for child in self.children:
            yield from child.postorder()
        yield self

    def labels(self) -> frozenset[str]:
        return frozenset(n.label for n in self.walk() if n.label is not None)

    def __str__(self) -> str:
        return serialize(self)


@dataclass(frozen=True)
class FormulaTree:
    root: FormulaNode
    source_text: str = field(default="", compare=False)
    node_index: dict[str, FormulaNode] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if not self.node_index:
            index = {}
            for node in self.root.walk():
                index[node.path] = node
            object.__setattr__(self, "node_index", index)

    @property
    def depth(self) -> int:
        return self.root.depth

    @property
    def labels(self) -> frozenset[str]:
        return self.root.labels()

    def nodes(self) -> Iterator[FormulaNode]:
        return self.root.walk()

    def node_at(self, address: str | Address) -> FormulaNode:
        return node_at(self, address)

    def __len__(self) -> int:
        return len(self.node_index)

    def __str__(self) -> str:
        return serialize(self.root)


def format_address(address: Address) -> str:
    return ".".join(str(i) for i in address)


def parse_address(text: str | Address) -> Address:
    """``"1.2"`` -> ``(1, 2)``; the empty string is the root."""
    if isinstance(text, tuple):
        return text
    text = text.strip()
    if text in ("", "root"):
        return ()
    try:
        address = tuple(int(part) for part in text.split("."))
    except ValueError:
        raise UnknownAddressError(text) from None
    if any(i < 1 for i in address):
        raise UnknownAddressError(text)
    return address


def node_at(tree: FormulaTree, address: str | Address) -> FormulaNode:
    key = format_address(parse_address(address))
    try:
        return tree.node_index[key]
    except KeyError:
        raise UnknownAddressError(key) from None


def precondition(node: FormulaNode) -> Union[FormulaNode, _Top]:
    """Antecedent of an implication, otherwise :data:`TOP`."""
    if node.kind is OperatorKind.IMPLIES:
        return node.children[0]
    return TOP


# -- serialization --------------------------------------------------------


def serialize(node: FormulaNode | FormulaTree) -> str:
    """Render a node as rule text.  Every binary operator is parenthesized."""
    if isinstance(node, FormulaTree):
        node = node.root
    kind = node.kind
    if kind is OperatorKind.AP:
        return node.label
    if kind.arity == 1:
        operand = serialize(node.children[0])
        if kind is OperatorKind.NOT:
            return "!" + operand
        return f"{kind.symbol} {operand}"
    left, right = (serialize(c) for c in node.children)
    return f"({left} {kind.symbol} {right})"


# -- lexing ---------------------------------------------------------------

# Unicode aliases normalise to the ASCII operator token.
_SYMBOLS = {
    "->": "->",
    "→": "->",
    "!": "!",
    "¬": "!",
    "&": "&",
    "∧": "&",
    "|": "|",
    "∨": "|",
    "(": "(",
    ")": ")",
}


@dataclass(frozen=True)
class _Token:
    kind: str  # "label", "op" or "end"
    text: str
    position: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if text.startswith("->", i):
            tokens.append(_Token("op", "->", i))
            i += 2
            continue
        if ch in _SYMBOLS:
            tokens.append(_Token("op", _SYMBOLS[ch], i))
            i += 1
            continue
        match = LABEL_PATTERN.match(text, i)
        if match:
            word = match.group()
            tokens.append(_Token("op" if word in _KEYWORDS else "label", word, i))
            i = match.end()
            continue
        raise FormulaSyntaxError(f"unknown operator token {ch!r}", text, i)
    tokens.append(_Token("end", "", n))
    return tokens


# -- parsing --------------------------------------------------------------

# Parsed shape before addresses are assigned: (kind, label, children).
_Raw = tuple


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def error(self, message: str, expected: Sequence[str] = ()) -> FormulaSyntaxError:
        return FormulaSyntaxError(message, self.text, self.peek().position, expected)

    def parse(self) -> _Raw:
        if self.peek().kind == "end":
            raise self.error("empty formula", ["label", "'('", "unary operator"])
        tree = self.implication()
        token = self.peek()
        if token.kind != "end":
            if token.text == ")":
                raise self.error("unbalanced ')'")
            raise self.error(f"unexpected {token.text!r}", ["'->'", "'&'", "'|'", "end of input"])
        return tree

    def implication(self) -> _Raw:
        left = self.junction()
        if self.peek().text == "->":
            self.advance()
            right = self.implication()
            return (OperatorKind.IMPLIES, None, (left, right))
        return left

    def junction(self) -> _Raw:
        operands = [self.temporal()]
        joiner = None
        while self.peek().kind == "op" and self.peek().text in ("&", "|"):
            token = self.peek()
            if joiner is not None and token.text != joiner:
                raise self.error(
                    "'&' and '|' mixed without parentheses", [f"{joiner!r}", "'->'", "')'"]
                )
            joiner = token.text
            self.advance()
            operands.append(self.temporal())
        if joiner is None:
            return operands[0]
        kind = OperatorKind.AND if joiner == "&" else OperatorKind.OR
        tree = operands[-1]
        for operand in reversed(operands[:-1]):
            tree = (kind, None, (operand, tree))
        return tree

    def temporal(self) -> _Raw:
        left = self.unary()
        token = self.peek()
        if token.kind == "op" and token.text in _TEMPORAL_BINARY:
            self.advance()
            right = self.temporal()
            return (_TEMPORAL_BINARY[token.text], None, (left, right))
        return left

    def unary(self) -> _Raw:
        token = self.peek()
        if token.kind == "op" and token.text in _UNARY_TOKENS:
            self.advance()
            return (_UNARY_TOKENS[token.text], None, (self.unary(),))
        return self.primary()

    def primary(self) -> _Raw:
        token = self.peek()
        if token.kind == "label":
            self.advance()
            return (OperatorKind.AP, token.text, ())
        if token.text == "(":
            self.advance()
            inner = self.implication()
            if self.peek().text != ")":
                if self.peek().kind == "end":
                    raise self.error("unbalanced '('", ["')'"])
                raise self.error(f"unexpected {self.peek().text!r}", ["')'"])
            self.advance()
            return inner
        if token.kind == "end":
            raise self.error("unexpected end of input", ["label", "'('", "unary operator"])
        raise self.error(f"unexpected {token.text!r}", ["label", "'('", "unary operator"])


def _build(raw: _Raw, address: Address) -> FormulaNode:
    kind, label, children = raw
    built = tuple(_build(child, address + (i,)) for i, child in enumerate(children, 1))
    return FormulaNode(address, kind, built, label)


def _unbuild(node: FormulaNode) -> _Raw:
    return (node.kind, node.label, tuple(_unbuild(c) for c in node.children))


def as_tree(node: FormulaNode, source_text: str = "") -> FormulaTree:
    """Re-root ``node`` as a tree of its own, re-addressing every descendant."""
    return FormulaTree(_build(_unbuild(node), ()), source_text or serialize(node))


def parse_formula(text: str) -> FormulaTree:
    """Parse rule text into a :class:`FormulaTree`.

    >>> tree = parse_formula("a1 U (G a2)")
    >>> tree.root.kind, tree.node_at("2.1").label
    (<OperatorKind.UNTIL: 'U'>, 'a2')
    """
    if not text or not text.strip():
        raise FormulaSyntaxError("empty formula", text or "", 0)
    raw = _Parser(text).parse()
    return FormulaTree(_build(raw, ()), source_text=text)


# -- rule files -----------------------------------------------------------


class RuleFileError(ValueError):
    def __init__(self, path: str, line: int, cause: Exception):
        self.path = path
        self.line = line
        self.cause = cause
        super().__init__(f"{path}:{line}: {cause}")


__all__.append("RuleFileError")


def parse_rules(text: str, source: str = "<rules>") -> list[FormulaTree]:
    """One rule per line; ``#`` comment lines and blank lines are skipped."""
    rules = []
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            rules.append(parse_formula(stripped))
        except FormulaSyntaxError as exc:
            raise RuleFileError(source, lineno, exc) from exc
    return rules


def load_rules(path: str | Path) -> list[FormulaTree]:
    path = Path(path)
    return parse_rules(path.read_text(encoding="utf-8"), str(path))
