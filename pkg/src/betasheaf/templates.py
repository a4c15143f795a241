"""``{expr}`` placeholders in form and certificate templates.

Only integer arithmetic on named parameters is allowed: ``+ - * //`` and
parentheses, e.g. ``z^{k-2*m}``.
"""
from __future__ import annotations

import ast
import operator
import re
from typing import Mapping

__all__ = ["expand", "evaluate", "TemplateError"]

_OPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.FloorDiv: operator.floordiv,
    ast.Mod: operator.mod,
}
_PLACEHOLDER = re.compile(r"\{([^{}]*)\}")


class TemplateError(ValueError):
    pass


def evaluate(expr: str, params: Mapping[str, int]) -> int:
    try:
        tree = ast.parse(expr.strip(), mode="eval")
    except SyntaxError as exc:
        raise TemplateError(f"bad placeholder {{{expr}}}") from exc

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return node.value
        if isinstance(node, ast.Name):
            if node.id not in params:
                raise TemplateError(f"unknown parameter {node.id!r} in {{{expr}}}")
            return int(params[node.id])
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return -ev(node.operand)
        raise TemplateError(f"unsupported syntax in {{{expr}}}")

    return ev(tree)


def expand(text: str, params: Mapping[str, int]) -> str:
    """Replace every ``{expr}`` by its integer value."""
    return _PLACEHOLDER.sub(lambda m: str(evaluate(m.group(1), params)), text)
