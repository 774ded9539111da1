"""AST node types. Every node keeps its 1-based source position."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union


@dataclass
class Node:
    line: int
    col: int


@dataclass
class Num(Node):
    value: float


@dataclass
class Str(Node):
    value: str


@dataclass
class Bool(Node):
    value: bool


@dataclass
class Nil(Node):
    pass


@dataclass
class ListLit(Node):
    items: list


@dataclass
class Ident(Node):
    name: str


@dataclass
class FieldAccess(Node):
    obj: "Expr"
    name: str


@dataclass
class IndexAccess(Node):
    obj: "Expr"
    index: "Expr"


@dataclass
class Call(Node):
    fn: "Expr"
    args: list


@dataclass
class Unary(Node):
    op: str
    operand: "Expr"


@dataclass
class Binary(Node):
    op: str
    left: "Expr"
    right: "Expr"


@dataclass
class FnLit(Node):
    params: tuple
    body: "Block"
    cell_id: str


@dataclass
class Assign(Node):
    target: "Expr"     # Ident | FieldAccess | IndexAccess
    value: "Expr"


@dataclass
class Return(Node):
    value: Union["Expr", None]


@dataclass
class If(Node):
    cond: "Expr"
    then: "Block"
    orelse: Union["Block", "If", None]


@dataclass
class While(Node):
    cond: "Expr"
    body: "Block"


@dataclass
class ForRange(Node):
    var: str
    count: "Expr"
    body: "Block"


@dataclass
class ExprStmt(Node):
    expr: "Expr"


@dataclass
class Block(Node):
    stmts: list


@dataclass
class Program(Node):
    cell_id: str
    body: list = field(default_factory=list)


Expr = Union[Num, Str, Bool, Nil, ListLit, Ident, FieldAccess, IndexAccess,
             Call, Unary, Binary, FnLit]
Stmt = Union[Assign, Return, If, While, ForRange, ExprStmt]
