"""A small language for multilinear identities.

Source looks like ``"x,y,z: x>(y>z) = 0-(x>y + x<y)>z"``: a variable
header, then expressions joined by ``=``.  Binary ops are written infix;
an op is one of the symbols ``> < . *``, a bare identifier that is not a
declared variable (``o``, ``mul``, ...), or a quoted name such as
``'[,]'``.  Products never chain without parentheses: ``x>y>z`` is an
error, write ``(x>y)>z``.  A rational prefix ``2/3*`` scales the factor
that follows it, and ``0`` is the zero vector.

Every identity is stored as a single expression asserted to vanish.  A
chain ``a = b = c`` becomes ``a - b`` and ``a - c``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from .algebra import bilinear, basis_vector, freeze_tensor
from .rational import format_rational


class IdentityError(ValueError):
    pass


class IdentitySyntaxError(IdentityError):
    def __init__(self, message: str, source: str, pos: int):
        self.source = source
        self.pos = pos
        self.message = message
        caret = " " * pos + "^"
        super().__init__(f"{message} at column {pos + 1}\n  {source}\n  {caret}")


class MultilinearityError(IdentitySyntaxError):
    pass


class UnknownOpError(IdentityError):
    pass


# AST ----------------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Apply:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Scale:
    coef: Fraction
    child: "Node"


@dataclass(frozen=True)
class Sum:
    children: Tuple["Node", ...] = ()


@dataclass(frozen=True)
class Neg:
    child: "Node"


Node = Union[Var, Apply, Scale, Sum, Neg]
ZERO = Sum(())

# expanded product monomial: a variable name or (op, left, right)
Tree = Union[str, Tuple[str, "Tree", "Tree"]]


# lexer ----------------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>\d+(?:/\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<quoted>'[^']*')
  | (?P<sym>[><.*+\-()=:,])
    """,
    re.VERBOSE,
)

OP_SYMBOLS = {">", "<", ".", "*"}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


def tokenize(src: str) -> List[Token]:
    out = []
    pos = 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if not m:
            raise IdentitySyntaxError(f"unexpected character {src[pos]!r}", src, pos)
        kind = m.lastgroup
        if kind != "ws":
            text = m.group()
            if kind == "quoted":
                if len(text) == 2:
                    raise IdentitySyntaxError("empty quoted op name", src, pos)
                text = text[1:-1]
            out.append(Token(kind, text, pos))
        pos = m.end()
    out.append(Token("end", "", len(src)))
    return out


# parser ---------------------------------------------------------------------

class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.tokens = tokenize(src)
        self.i = 0
        self.variables: Tuple[str, ...] = ()

    def peek(self) -> Token:
        return self.tokens[self.i]

    def next(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message: str, tok: Optional[Token] = None):
        tok = tok or self.peek()
        raise IdentitySyntaxError(message, self.src, tok.pos)

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if tok.kind != "sym" or tok.text != text:
            self.error(f"expected {text!r}, found {tok.text or 'end of input'!r}")
        return self.next()

    def header(self) -> None:
        names = []
        while True:
            tok = self.next()
            if tok.kind != "ident":
                self.error("expected a variable name in the header 'x,y,z:'", tok)
            if tok.text in names:
                self.error(f"variable {tok.text!r} declared twice", tok)
            names.append(tok.text)
            sep = self.next()
            if sep.kind == "sym" and sep.text == ":":
                break
            if not (sep.kind == "sym" and sep.text == ","):
                self.error("expected ',' or ':' in the variable header", sep)
        self.variables = tuple(names)

    def chain(self) -> List[Tuple[Node, int]]:
        sides = [(self.expr(), self.peek().pos)]
        while self.peek().kind == "sym" and self.peek().text == "=":
            self.next()
            pos = self.peek().pos
            sides.append((self.expr(), pos))
        tok = self.peek()
        if tok.kind != "end":
            self.error(f"unexpected {tok.text!r}")
        return sides

    def expr(self) -> Node:
        children = [self.term()]
        while self.peek().kind == "sym" and self.peek().text in "+-":
            op = self.next().text
            t = self.term()
            children.append(Neg(t) if op == "-" else t)
        if len(children) == 1:
            return children[0]
        return Sum(tuple(children))

    def term(self) -> Node:
        tok = self.peek()
        if tok.kind == "sym" and tok.text == "-":
            self.next()
            return Neg(self.factor())
        if tok.kind == "sym" and tok.text == "+":
            self.next()
        return self.factor()

    def factor(self) -> Node:
        tok = self.peek()
        if tok.kind == "num":
            self.next()
            value = Fraction(tok.text)
            nxt = self.peek()
            if nxt.kind == "sym" and nxt.text == "*":
                self.next()
                return Scale(value, self.factor())
            if value != 0:
                self.error("a bare scalar is not a vector; write 'c*expr'", tok)
            return ZERO
        return self.product()

    def is_op_token(self, tok: Token) -> bool:
        if tok.kind == "quoted":
            return True
        if tok.kind == "sym" and tok.text in OP_SYMBOLS:
            return True
        return tok.kind == "ident" and tok.text not in self.variables

    def product(self) -> Node:
        left = self.atom()
        if self.is_op_token(self.peek()):
            op = self.next().text
            right = self.atom()
            if self.is_op_token(self.peek()):
                self.error("chained products need parentheses, e.g. (x>y)>z")
            return Apply(op, left, right)
        tok = self.peek()
        if tok.kind == "ident" and tok.text in self.variables:
            self.error(f"variable {tok.text!r} cannot be used as an op")
        return left

    def atom(self) -> Node:
        tok = self.next()
        if tok.kind == "ident":
            if tok.text not in self.variables:
                self.error(f"unknown variable {tok.text!r}", tok)
            return Var(tok.text)
        if tok.kind == "sym" and tok.text == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        if tok.kind == "num":
            if Fraction(tok.text) == 0:
                return ZERO
            self.error("scalars must prefix a factor as 'c*expr'", tok)
        self.error(f"expected a variable or '(', found {tok.text or 'end of input'!r}", tok)


# expansion ------------------------------------------------------------------

def _expand_raw(node: Node) -> List[Tuple[Fraction, Tree]]:
    if isinstance(node, Var):
        return [(Fraction(1), node.name)]
    if isinstance(node, Apply):
        left = _expand_raw(node.left)
        right = _expand_raw(node.right)
        return [(a * b, (node.op, tl, tr)) for a, tl in left for b, tr in right]
    if isinstance(node, Scale):
        return [(node.coef * c, t) for c, t in _expand_raw(node.child)]
    if isinstance(node, Neg):
        return [(-c, t) for c, t in _expand_raw(node.child)]
    if isinstance(node, Sum):
        out = []
        for ch in node.children:
            out.extend(_expand_raw(ch))
        return out
    raise TypeError(f"not an AST node: {node!r}")


def tree_leaves(tree: Tree) -> List[str]:
    if isinstance(tree, str):
        return [tree]
    return tree_leaves(tree[1]) + tree_leaves(tree[2])


def tree_ops(tree: Tree) -> set:
    if isinstance(tree, str):
        return set()
    return {tree[0]} | tree_ops(tree[1]) | tree_ops(tree[2])


def tree_str(tree: Tree) -> str:
    if isinstance(tree, str):
        return tree
    op = tree[0]
    shown = op if (op in OP_SYMBOLS or re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", op)) else f"'{op}'"
    def side(t):
        return t if isinstance(t, str) else f"({tree_str(t)})"
    sep = "" if op in OP_SYMBOLS else " "
    return f"{side(tree[1])}{sep}{shown}{sep}{side(tree[2])}"


def combine_terms(raw: Sequence[Tuple[Fraction, Tree]]) -> Dict[Tree, Fraction]:
    out: Dict[Tree, Fraction] = {}
    for c, t in raw:
        s = out.get(t, 0) + c
        if s:
            out[t] = s
        else:
            out.pop(t, None)
    return out


@dataclass(frozen=True)
class IdentityExpr:
    """``ast = 0`` over the declared variables; multilinear by construction."""

    variables: Tuple[str, ...]
    ast: Node
    source: str = ""
    terms: Mapping[Tree, Fraction] = field(default_factory=dict, compare=False, repr=False)

    def ops(self) -> set:
        out = set()
        for t in self.terms:
            out |= tree_ops(t)
        return out

    def is_trivial(self) -> bool:
        return not self.terms

    def to_source(self) -> str:
        return f"{','.join(self.variables)}: {print_node(self.ast)} = 0"

    def expanded_str(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for t, c in self.terms.items():
            body = tree_str(t)
            if c == 1:
                parts.append(f"+ {body}")
            elif c == -1:
                parts.append(f"- {body}")
            else:
                parts.append(f"{'+' if c > 0 else '-'} {format_rational(abs(c))}*({body})")
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    def __str__(self) -> str:
        return self.source or self.to_source()

    def rename_ops(self, mapping: Mapping[str, str]) -> "IdentityExpr":
        return make_identity(self.variables, _rename(self.ast, mapping), self.source)


def _rename(node: Node, mapping: Mapping[str, str]) -> Node:
    if isinstance(node, Var):
        return node
    if isinstance(node, Apply):
        return Apply(mapping.get(node.op, node.op), _rename(node.left, mapping), _rename(node.right, mapping))
    if isinstance(node, Scale):
        return Scale(node.coef, _rename(node.child, mapping))
    if isinstance(node, Neg):
        return Neg(_rename(node.child, mapping))
    return Sum(tuple(_rename(c, mapping) for c in node.children))


def _check_multilinear(variables: Sequence[str], raw, src: str, pos: int) -> None:
    want = sorted(variables)
    for _, tree in raw:
        leaves = tree_leaves(tree)
        if sorted(leaves) != want:
            repeated = sorted({v for v in leaves if leaves.count(v) > 1})
            missing = [v for v in variables if v not in leaves]
            detail = []
            if repeated:
                detail.append(f"repeated {', '.join(repeated)}")
            if missing:
                detail.append(f"missing {', '.join(missing)}")
            raise MultilinearityError(
                f"not multilinear: monomial {tree_str(tree)} has {'; '.join(detail)}", src, pos
            )


def make_identity(variables: Sequence[str], ast: Node, source: str = "", pos: int = 0) -> IdentityExpr:
    variables = tuple(variables)
    raw = _expand_raw(ast)
    _check_multilinear(variables, raw, source or print_node(ast), pos)
    return IdentityExpr(variables, ast, source, combine_terms(raw))


def _difference(lhs: Node, rhs: Node) -> Node:
    if rhs == ZERO:
        return lhs
    return Sum((lhs, Neg(rhs)))


def parse_identities(src: str) -> List[IdentityExpr]:
    """Parse a chain ``a = b = ... = z`` into the differences against ``a``."""
    p = _Parser(src)
    p.header()
    sides = p.chain()
    first, first_pos = sides[0]
    if len(sides) == 1:
        return [make_identity(p.variables, first, src, first_pos)]
    out = []
    for rhs, pos in sides[1:]:
        out.append(make_identity(p.variables, _difference(first, rhs), src, pos))
    return out


def parse_identity(src: str) -> IdentityExpr:
    """Parse one identity ``lhs = rhs`` (or a bare expression meaning ``= 0``)."""
    p = _Parser(src)
    p.header()
    sides = p.chain()
    if len(sides) > 2:
        raise IdentitySyntaxError("more than one '='; use parse_identities for chains", src, sides[2][1])
    if len(sides) == 1:
        return make_identity(p.variables, sides[0][0], src, sides[0][1])
    return make_identity(p.variables, _difference(sides[0][0], sides[1][0]), src, sides[1][1])


# printing -------------------------------------------------------------------

def _op_text(op: str) -> str:
    if op in OP_SYMBOLS or re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", op):
        return op
    return f"'{op}'"


def _operand(node: Node) -> str:
    if isinstance(node, Var):
        return node.name
    if node == ZERO:
        return "0"
    return f"({print_node(node)})"


def print_node(node: Node) -> str:
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Apply):
        op = _op_text(node.op)
        sep = "" if node.op in OP_SYMBOLS else " "
        return f"{_operand(node.left)}{sep}{op}{sep}{_operand(node.right)}"
    if isinstance(node, Scale):
        child = node.child
        inner = print_node(child) if isinstance(child, (Var, Apply)) else _operand(child)
        return f"{format_rational(node.coef)}*{inner}"
    if isinstance(node, Neg):
        child = node.child
        inner = print_node(child) if isinstance(child, (Var, Apply, Scale)) else _operand(child)
        return f"-{inner}"
    if isinstance(node, Sum):
        if not node.children:
            return "0"
        out = []
        for k, ch in enumerate(node.children):
            if isinstance(ch, Neg):
                body = print_node(ch)[1:]
                out.append(f"-{body}" if k == 0 else f" - {body}")
            else:
                body = _operand(ch) if isinstance(ch, Sum) and ch.children else print_node(ch)
                out.append(body if k == 0 else f" + {body}")
        return "".join(out)
    raise TypeError(f"not an AST node: {node!r}")


# evaluation -----------------------------------------------------------------

def _eval_tree(tree: Tree, assignment: Mapping[str, Sequence], tensors: Mapping[str, object], memo: dict):
    if isinstance(tree, str):
        return assignment[tree]
    hit = memo.get(tree)
    if hit is not None:
        return hit
    op, l, r = tree
    val = bilinear(tensors[op], _eval_tree(l, assignment, tensors, memo), _eval_tree(r, assignment, tensors, memo))
    memo[tree] = val
    return val


def evaluate(identity: IdentityExpr, tensors: Mapping[str, object], assignment: Mapping[str, Sequence], dim: int) -> list:
    """Value of the identity's expression at vectors ``assignment[var]``."""
    missing = identity.ops() - set(tensors)
    if missing:
        raise UnknownOpError(f"unknown op(s) {sorted(missing)} in identity {identity}")
    memo: dict = {}
    total = [Fraction(0)] * dim
    for tree, coef in identity.terms.items():
        val = _eval_tree(tree, assignment, tensors, memo)
        for k in range(dim):
            if val[k]:
                total[k] = total[k] + coef * val[k]
    return total


def basis_tuples(dim: int, k: int) -> Iterator[Tuple[int, ...]]:
    return itertools.product(range(dim), repeat=k)


def basis_values(identity: IdentityExpr, tensors: Mapping[str, object], dim: int) -> Iterator[Tuple[Tuple[int, ...], list]]:
    """Yield ``(index tuple, value)`` over all basis tuples in lexicographic order."""
    basis = [basis_vector(dim, i) for i in range(dim)]
    for idx in basis_tuples(dim, len(identity.variables)):
        assignment = {v: basis[i] for v, i in zip(identity.variables, idx)}
        yield idx, evaluate(identity, tensors, assignment, dim)


def first_violation(identity: IdentityExpr, tensors: Mapping[str, object], dim: int):
    """First basis tuple where the identity fails, with the offending value, or None."""
    if identity.is_trivial():
        return None
    missing = identity.ops() - set(tensors)
    if missing:
        raise UnknownOpError(f"unknown op(s) {sorted(missing)} in identity {identity}")
    for idx, val in basis_values(identity, tensors, dim):
        if any(val):
            return idx, val
    return None


def derive_tensor(expr: IdentityExpr, tensors: Mapping[str, object], dim: int):
    """Tensor of the bilinear op ``(x, y) -> expr(x, y)`` for a two-variable expression."""
    if len(expr.variables) != 2:
        raise IdentityError(f"a derived op needs exactly two variables, got {expr.variables}")
    x, y = expr.variables
    basis = [basis_vector(dim, i) for i in range(dim)]
    c = [[evaluate(expr, tensors, {x: basis[i], y: basis[j]}, dim) for j in range(dim)] for i in range(dim)]
    return freeze_tensor(c)


@dataclass(frozen=True)
class Verdict:
    holds: bool
    witness: Optional[Tuple[str, ...]] = None
    identity: Optional[str] = None
    value: Optional[str] = None
    detail: Optional[str] = None

    def __bool__(self) -> bool:
        return self.holds

    def to_json(self) -> dict:
        out: dict = {"holds": self.holds}
        if self.witness is not None:
            out["witness"] = list(self.witness)
        for key in ("identity", "value", "detail"):
            val = getattr(self, key)
            if val is not None:
                out[key] = val
        return out


def check_identity(identity: IdentityExpr, alg) -> Verdict:
    """Check ``identity`` on every basis tuple of ``alg``; report the first failure."""
    from .algebra import format_vector

    missing = {op for op in identity.ops() if not alg.has_op(op)}
    if missing:
        raise UnknownOpError(f"unknown op(s) {sorted(missing)}; algebra has {sorted(alg.ops)}")
    tensors = {op: alg.tensor(op) for op in identity.ops()}
    hit = first_violation(identity, tensors, alg.dim)
    if hit is None:
        return Verdict(True)
    idx, val = hit
    return Verdict(
        False,
        witness=tuple(alg.basis[i] for i in idx),
        identity=str(identity),
        value=format_vector(alg.basis, val),
    )
