"""Tiny arithmetic expression compiler for declarative immersion files.

Grammar (the whole of it): numeric literals, the declared variable names,
the constants ``pi`` and ``e``, binary ``+ - * /``, powers written ``^``
or ``**``, unary minus, parentheses, and calls to ``sin``, ``cos``,
``exp``, ``sqrt``.  Anything else is rejected with SpecFileError naming
the offending construct, so a typo in a spec file fails loudly instead of
evaluating something unintended.

Implementation: rewrite ``^`` to ``**``, parse with :mod:`ast`, walk the
tree against a node whitelist, then compile once and evaluate with an
empty ``__builtins__``.  The compiled callable takes one indexable point
(coordinates in declared variable order) and returns a float.
"""

from __future__ import annotations

import ast
import math

from .errors import SpecFileError

__all__ = ["compile_expression", "ALLOWED_FUNCTIONS", "ALLOWED_CONSTANTS"]

ALLOWED_FUNCTIONS = {
    "sin": math.sin,
    "cos": math.cos,
    "exp": math.exp,
    "sqrt": math.sqrt,
}
ALLOWED_CONSTANTS = {"pi": math.pi, "e": math.e}

_ALLOWED_BINOPS = (ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow)
_ALLOWED_UNARY = (ast.UAdd, ast.USub)


def _reject(src: str, why: str):
    return SpecFileError(f"bad expression {src!r}: {why}")


def _validate(node: ast.AST, src: str, names: set):
    if isinstance(node, ast.Expression):
        _validate(node.body, src, names)
    elif isinstance(node, ast.BinOp):
        if not isinstance(node.op, _ALLOWED_BINOPS):
            raise _reject(src, f"operator {type(node.op).__name__} not allowed")
        _validate(node.left, src, names)
        _validate(node.right, src, names)
    elif isinstance(node, ast.UnaryOp):
        if not isinstance(node.op, _ALLOWED_UNARY):
            raise _reject(src, f"operator {type(node.op).__name__} not allowed")
        _validate(node.operand, src, names)
    elif isinstance(node, ast.Call):
        if node.keywords or not isinstance(node.func, ast.Name):
            raise _reject(src, "only plain calls f(arg, ...) are allowed")
        if node.func.id not in ALLOWED_FUNCTIONS:
            raise _reject(
                src,
                f"unknown function {node.func.id!r}; "
                f"allowed: {sorted(ALLOWED_FUNCTIONS)}",
            )
        if len(node.args) != 1:
            raise _reject(src, f"{node.func.id} takes exactly one argument")
        _validate(node.args[0], src, names)
    elif isinstance(node, ast.Name):
        if node.id not in names and node.id not in ALLOWED_CONSTANTS:
            raise _reject(src, f"unknown name {node.id!r}; variables: {sorted(names)}")
    elif isinstance(node, ast.Constant):
        if not isinstance(node.value, (int, float)):
            raise _reject(src, f"literal {node.value!r} is not a number")
    else:
        raise _reject(src, f"construct {type(node).__name__} not allowed")


def compile_expression(src: str, var_names):
    """Compile ``src`` into a callable of one point (indexable of floats).

    ``var_names`` declares the coordinate names in order; the returned
    function reads the point positionally, so ``f([0.5, 2.0])`` binds the
    first name to 0.5.  Raises SpecFileError on any construct outside the
    grammar or on a malformed variable list.
    """
    if not isinstance(src, str):
        raise SpecFileError(f"expression must be a string, got {type(src).__name__}")
    var_names = list(var_names)
    seen = set()
    for name in var_names:
        if not isinstance(name, str) or not name.isidentifier():
            raise SpecFileError(f"bad variable name {name!r}")
        if name in ALLOWED_FUNCTIONS or name in ALLOWED_CONSTANTS:
            raise SpecFileError(f"variable name {name!r} shadows a builtin name")
        if name in seen:
            raise SpecFileError(f"duplicate variable name {name!r}")
        seen.add(name)

    try:
        tree = ast.parse(src.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise _reject(src, f"syntax error: {exc.msg}") from exc
    _validate(tree, src, seen)
    code = compile(tree, f"<expr {src!r}>", "eval")
    globals_ns = {"__builtins__": {}, **ALLOWED_FUNCTIONS, **ALLOWED_CONSTANTS}

    def evaluate(point) -> float:
        local = {name: float(point[i]) for i, name in enumerate(var_names)}
        return float(eval(code, globals_ns, local))

    evaluate.source = src
    evaluate.var_names = tuple(var_names)
    return evaluate
