"""Evaluation of the small complex-number expression language used in data files.

Grammar: decimal literals, the names ``i``, ``pi``, ``sqrt(.)``, ``exp(.)``,
binary ``+ - * /``, unary minus and parentheses.  ``**`` is accepted as well
so that powers such as ``d**2`` stay readable.
"""
from __future__ import annotations

import ast
import cmath
import math

__all__ = ['ExpressionError', 'evaluate']


class ExpressionError(ValueError):
    pass


_NAMES = {'i': 1j, 'pi': math.pi}
_FUNCS = {'sqrt': cmath.sqrt, 'exp': cmath.exp}


def _eval(node: ast.AST) -> complex:
    if isinstance(node, ast.Expression):
        return _eval(node.body)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) \
            and not isinstance(node.value, bool):
        return complex(node.value)
    if isinstance(node, ast.Name):
        if node.id not in _NAMES:
            raise ExpressionError(f'unknown name {node.id!r}')
        return _NAMES[node.id]
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval(node.operand)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp):
        a, b = _eval(node.left), _eval(node.right)
        if isinstance(node.op, ast.Add):
            return a + b
        if isinstance(node.op, ast.Sub):
            return a - b
        if isinstance(node.op, ast.Mult):
            return a * b
        if isinstance(node.op, ast.Div):
            if b == 0:
                raise ExpressionError('division by zero')
            return a / b
        if isinstance(node.op, ast.Pow):
            return a ** b
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) \
            and node.func.id in _FUNCS and len(node.args) == 1 and not node.keywords:
        return _FUNCS[node.func.id](_eval(node.args[0]))
    raise ExpressionError(f'unsupported syntax: {ast.dump(node)}')


def evaluate(text) -> complex:
    """Evaluate `text` (string or plain number) to a Python complex."""
    if isinstance(text, bool):
        raise ExpressionError('booleans are not numbers')
    if isinstance(text, (int, float, complex)):
        return complex(text)
    if not isinstance(text, str):
        raise ExpressionError(f'expected an expression string, got {type(text).__name__}')
    try:
        tree = ast.parse(text.strip(), mode='eval')
    except SyntaxError as err:
        raise ExpressionError(f'cannot parse {text!r}: {err.msg}') from None
    return _eval(tree)
