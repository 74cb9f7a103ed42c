"""Functor-expression language: parsing, guardedness, elaboration.

Concrete syntax::

    X                   the functorial variable
    T <atom>            lifting
    c(<name>)           a named constant poset
    H<name>(e, ...)     a registered combinator
    e + e,  e * e       coproduct, product
    e -> e              function space (mixed expressions only)

``*`` binds tighter than ``+``, which binds tighter than ``->``; ``->`` is
right-associative, ``+`` and ``*`` are left-associative.  ``×`` and ``→`` are
accepted as synonyms.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Union

from . import finpos as fp
from . import functors as fn
from . import worlds as w
from .functors import ComputedFunctor
from .worlds import Pair, World


class DslError(ValueError):
    pass


class ParseError(DslError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line, self.column = line, column


class GuardednessError(DslError):
    def __init__(self, report: "GuardednessReport"):
        paths = ", ".join(report.paths()) or "-"
        super().__init__(f"expression is not T-guarded; unguarded X at {paths}")
        self.report = report


# -- abstract syntax ------------------------------------------------------

@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class TApp:
    arg: "Expr"


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Sum:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Prod:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Arrow:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class HApp:
    name: str
    args: tuple = ()


Expr = Union[Var, TApp, Const, Sum, Prod, Arrow, HApp]


# -- workspace ------------------------------------------------------------

@dataclass(frozen=True)
class Combinator:
    """A registered covariant functor ``C^n -> C`` on the plain world."""

    name: str
    builtin: str
    arity: int
    value: Optional[str] = None  # constant name, for builtin "const"


BUILTINS = ("id", "lift", "sum", "prod", "diag", "const")


def _default_constants() -> dict:
    return {
        "empty": fp.empty(),
        "one": fp.point(),
        "two": fp.discrete(2),
        "sierpinski": fp.chain(2),
    }


def _default_combinators() -> dict:
    return {
        "id": Combinator("id", "id", 1),
        "lift": Combinator("lift", "lift", 1),
        "sum": Combinator("sum", "sum", 2),
        "prod": Combinator("prod", "prod", 2),
        "diag": Combinator("diag", "diag", 1),
    }


@dataclass
class Workspace:
    constants: dict = field(default_factory=_default_constants)
    combinators: dict = field(default_factory=_default_combinators)
    depth: int = 6
    size_bound: int = 4

    def constant(self, name: str) -> fp.FinPoset:
        try:
            return self.constants[name]
        except KeyError:
            raise DslError(f"unknown constant {name!r}") from None

    def combinator(self, name: str) -> Combinator:
        try:
            return self.combinators[name]
        except KeyError:
            raise DslError(f"unknown combinator {name!r}") from None


def load_workspace(path: Union[str, Path, None] = None, data: Optional[dict] = None) -> Workspace:
    """Read a workspace file; declarations extend the built-in defaults.

    Format::

        {"constants": {"k": <poset literal>, ...},
         "combinators": {"P": {"builtin": "prod", "arity": 3}, "L": "lift", ...},
         "defaults": {"depth": 6, "size_bound": 4}}
    """
    ws = Workspace()
    if path is not None:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    if not data:
        return ws
    for name, lit in data.get("constants", {}).items():
        try:
            ws.constants[name] = fp.from_literal(lit)
        except fp.PosetError as exc:
            raise DslError(f"constant {name!r}: {exc}") from None
    for name, spec in data.get("combinators", {}).items():
        if isinstance(spec, str):
            spec = {"builtin": spec}
        builtin = spec.get("builtin")
        if builtin not in BUILTINS:
            raise DslError(f"combinator {name!r}: unknown builtin {builtin!r}")
        default_arity = {"id": 1, "lift": 1, "diag": 1, "const": 0}.get(builtin, 2)
        arity = int(spec.get("arity", default_arity))
        if builtin in ("id", "lift", "diag", "const") and arity != default_arity:
            raise DslError(f"combinator {name!r}: builtin {builtin} has arity {default_arity}")
        value = spec.get("value")
        if builtin == "const":
            if value is None:
                raise DslError(f"combinator {name!r}: const needs a 'value'")
            ws.constant(value)
        ws.combinators[name] = Combinator(name, builtin, arity, value)
    defaults = data.get("defaults", {})
    ws.depth = int(defaults.get("depth", ws.depth))
    ws.size_bound = int(defaults.get("size_bound", ws.size_bound))
    if ws.depth < 1 or ws.size_bound < 1:
        raise DslError("depth and size_bound must be at least 1")
    return ws


# -- parsing --------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<arrow>->|→)
  | (?P<op>[+*×(),])
  | (?P<name>[A-Za-z_][A-Za-z0-9_']*)
""", re.VERBOSE)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "ws":
            chunk = m.group()
            if "\n" in chunk:
                line += chunk.count("\n")
                line_start = pos + chunk.rindex("\n") + 1
        else:
            t = m.group()
            if t == "×":
                t = "*"
            toks.append(_Tok(kind, t, line, pos - line_start + 1))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text: str, mixed: bool, ws: Workspace):
        self.toks = _tokenize(text)
        self.i = 0
        self.mixed = mixed
        self.ws = ws

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, message: str, tok: Optional[_Tok] = None):
        tok = tok or self.tok
        raise ParseError(message, tok.line, tok.col)

    def expect(self, text: str) -> _Tok:
        if self.tok.text != text:
            found = self.tok.text or "end of input"
            self.error(f"expected {text!r}, found {found!r}")
        t = self.tok
        self.i += 1
        return t

    def parse(self) -> Expr:
        e = self.expr()
        if self.tok.kind != "eof":
            self.error(f"unexpected {self.tok.text!r}")
        return e

    def expr(self) -> Expr:
        left = self.sum()
        if self.tok.kind == "arrow":
            if not self.mixed:
                self.error("'->' is only allowed in mixed-variance expressions")
            self.i += 1
            return Arrow(left, self.expr())
        return left

    def sum(self) -> Expr:
        e = self.prod()
        while self.tok.text == "+":
            self.i += 1
            e = Sum(e, self.prod())
        return e

    def prod(self) -> Expr:
        e = self.unary()
        while self.tok.text == "*":
            self.i += 1
            e = Prod(e, self.unary())
        return e

    def unary(self) -> Expr:
        if self.tok.text == "T":
            self.i += 1
            return TApp(self.unary())
        return self.atom()

    def atom(self) -> Expr:
        tok = self.tok
        if tok.text == "(":
            self.i += 1
            e = self.expr()
            self.expect(")")
            return e
        if tok.kind != "name":
            self.error(f"expected an expression, found {tok.text or 'end of input'!r}")
        self.i += 1
        if tok.text == "X":
            return Var()
        if tok.text == "c":
            self.expect("(")
            name = self.tok
            if name.kind != "name":
                self.error("expected a constant name")
            self.i += 1
            self.expect(")")
            try:
                self.ws.constant(name.text)
            except DslError as exc:
                self.error(str(exc), name)
            return Const(name.text)
        if tok.text.startswith("H") and len(tok.text) > 1:
            cname = tok.text[1:]
            try:
                comb = self.ws.combinator(cname)
            except DslError as exc:
                self.error(str(exc), tok)
            self.expect("(")
            args = []
            if self.tok.text != ")":
                args.append(self.expr())
                while self.tok.text == ",":
                    self.i += 1
                    args.append(self.expr())
            self.expect(")")
            if len(args) != comb.arity:
                self.error(f"combinator {cname!r} takes {comb.arity} argument(s), "
                           f"got {len(args)}", tok)
            if self.mixed and comb.arity != 1:
                self.error("mixed expressions only admit unary combinators", tok)
            return HApp(cname, tuple(args))
        self.error(f"unexpected name {tok.text!r}", tok)


def parse_covariant(text: str, ws: Optional[Workspace] = None) -> Expr:
    return _Parser(text, False, ws or Workspace()).parse()


def parse_mixed(text: str, ws: Optional[Workspace] = None) -> Expr:
    return _Parser(text, True, ws or Workspace()).parse()


_PREC = {Arrow: 0, Sum: 1, Prod: 2}


def to_text(e: Expr) -> str:
    """Print with the fewest parentheses that reparse to the same tree."""

    def go(e: Expr, ctx: int) -> str:
        if isinstance(e, Var):
            return "X"
        if isinstance(e, Const):
            return f"c({e.name})"
        if isinstance(e, HApp):
            return f"H{e.name}(" + ", ".join(go(a, 0) for a in e.args) + ")"
        if isinstance(e, TApp):
            return "T " + go(e.arg, 3)
        p = _PREC[type(e)]
        sym = {Arrow: "->", Sum: "+", Prod: "*"}[type(e)]
        if isinstance(e, Arrow):
            s = f"{go(e.left, p + 1)} -> {go(e.right, p)}"
        else:
            s = f"{go(e.left, p)} {sym} {go(e.right, p + 1)}"
        return f"({s})" if p < ctx else s

    return go(e, 0)


# -- guardedness ----------------------------------------------------------

@dataclass(frozen=True)
class GuardednessReport:
    accepted: bool
    violations: tuple  # each a path: tuple of steps from the root

    def paths(self) -> list:
        return ["/" + "/".join(p) for p in self.violations]


def _children(e: Expr) -> list:
    if isinstance(e, TApp):
        return [("arg", e.arg)]
    if isinstance(e, (Sum, Prod, Arrow)):
        return [("left", e.left), ("right", e.right)]
    if isinstance(e, HApp):
        return [(f"arg{i}", a) for i, a in enumerate(e.args)]
    return []


def check_guardedness(e: Expr) -> GuardednessReport:
    """Accept iff every occurrence of ``X`` is the direct argument of ``T``."""
    bad = []

    def go(e: Expr, path: tuple, under_t: bool):
        if isinstance(e, Var):
            if not under_t:
                bad.append(path)
            return
        for step, child in _children(e):
            go(child, path + (step,), isinstance(e, TApp))

    go(e, (), False)
    return GuardednessReport(not bad, tuple(bad))


def substitute(e: Expr, s: Expr) -> Expr:
    """Replace every ``X`` in ``e`` by ``s``."""
    if isinstance(e, Var):
        return s
    if isinstance(e, TApp):
        return TApp(substitute(e.arg, s))
    if isinstance(e, (Sum, Prod, Arrow)):
        return type(e)(substitute(e.left, s), substitute(e.right, s))
    if isinstance(e, HApp):
        return HApp(e.name, tuple(substitute(a, s) for a in e.args))
    return e


# -- elaboration ----------------------------------------------------------

def _nary(node: Callable, unit: fp.FinPoset, unit_name: str, args: list, src: World):
    if not args:
        return fn.Const(unit, src, World.PLAIN, unit_name)
    out = args[0]
    for a in args[1:]:
        out = node(out, a)
    return out


def build_combinator(comb: Combinator, args: list, ws: Workspace, src: World) -> ComputedFunctor:
    """``H . <args>`` for a registered combinator; args land in the plain world."""
    if comb.builtin == "id":
        return args[0]
    if comb.builtin == "lift":
        return fn.Compose(fn.lifting(), args[0])
    if comb.builtin == "diag":
        return fn.Product(args[0], args[0])
    if comb.builtin == "sum":
        return _nary(fn.Sum, fp.empty(), "empty", args, src)
    if comb.builtin == "prod":
        return _nary(fn.Product, fp.point(), "one", args, src)
    if comb.builtin == "const":
        return fn.Const(ws.constant(comb.value), src, World.PLAIN, comb.value)
    raise DslError(f"unknown builtin {comb.builtin!r}")


def interpret_covariant(e: Expr, ws: Optional[Workspace] = None) -> ComputedFunctor:
    """The endofunctor on the plain world denoted by ``e`` (guarded or not)."""
    ws = ws or Workspace()
    P = World.PLAIN

    def go(e: Expr) -> ComputedFunctor:
        if isinstance(e, Var):
            return fn.Identity(P)
        if isinstance(e, TApp):
            return fn.Compose(fn.lifting(), go(e.arg))
        if isinstance(e, Const):
            return fn.Const(ws.constant(e.name), P, P, e.name)
        if isinstance(e, Sum):
            return fn.Sum(go(e.left), go(e.right))
        if isinstance(e, Prod):
            return fn.Product(go(e.left), go(e.right))
        if isinstance(e, HApp):
            return build_combinator(ws.combinator(e.name), [go(a) for a in e.args], ws, P)
        raise DslError(f"{type(e).__name__} is not a covariant construct")

    return go(e)


def _g_covariant(e: Expr, ws: Workspace) -> ComputedFunctor:
    D = World.POINTED
    if isinstance(e, TApp):
        if isinstance(e.arg, Var):
            return fn.Forget()
        return fn.Compose(fn.lifting(), _g_covariant(e.arg, ws))
    if isinstance(e, Const):
        return fn.Const(ws.constant(e.name), D, World.PLAIN, e.name)
    if isinstance(e, Sum):
        return fn.Sum(_g_covariant(e.left, ws), _g_covariant(e.right, ws))
    if isinstance(e, Prod):
        return fn.Product(_g_covariant(e.left, ws), _g_covariant(e.right, ws))
    if isinstance(e, HApp):
        return build_combinator(ws.combinator(e.name), [_g_covariant(a, ws) for a in e.args], ws, D)
    raise DslError(f"cannot factor {type(e).__name__}")


@dataclass
class FactoredFunctor:
    """``total ≅ g_side . f_side`` with ``flipped = f_side . g_side``."""

    expression: Expr
    total: ComputedFunctor
    g_side: ComputedFunctor
    f_side: ComputedFunctor
    flipped: ComputedFunctor
    _isos: dict = field(default_factory=dict, repr=False)

    @property
    def world(self) -> World:
        return self.total.src

    def iso_at(self, x):
        """The factorization iso ``total(x) -> g_side(f_side(x))``."""
        if x not in self._isos:
            a = self.total.obj(x)
            b = self.g_side.obj(self.f_side.obj(x))
            phi = w.find_iso(self.world, a, b)
            if phi is None:
                raise DslError("factorization is not an isomorphism at a probe object")
            self._isos[x] = phi
        return self._isos[x]


def elaborate_covariant(e: Expr, ws: Optional[Workspace] = None) -> FactoredFunctor:
    ws = ws or Workspace()
    report = check_guardedness(e)
    if not report.accepted:
        raise GuardednessError(report)
    g = _g_covariant(e, ws)
    f = fn.Lift()
    return FactoredFunctor(e, interpret_covariant(e, ws), g, f, fn.Compose(f, g))


def interpret_mixed(e: Expr, ws: Optional[Workspace] = None) -> ComputedFunctor:
    """The endofunctor on ``C^op x C`` (C plain) denoted by a mixed expression."""
    ws = ws or Workspace()
    return _mixed(e, ws, World.OP_PLAIN, guarded_base=None)


def _mixed(e: Expr, ws: Workspace, src: World, guarded_base: Optional[ComputedFunctor]):
    """Shared clauses of the mixed interpretation.

    With ``guarded_base`` set, ``T X`` is interpreted by that functor (the
    factorization's ``G^op x G``) instead of ``T^op x T``.
    """
    def go(e: Expr) -> ComputedFunctor:
        if isinstance(e, Var):
            if guarded_base is not None:
                raise DslError("unguarded X has no factorization")
            return fn.Identity(src)
        if isinstance(e, TApp):
            if isinstance(e.arg, Var) and guarded_base is not None:
                return guarded_base
            return fn.Compose(fn.OpSquare(fn.lifting()), go(e.arg))
        if isinstance(e, Const):
            c = ws.constant(e.name)
            return fn.Const(Pair(c, c), src, World.OP_PLAIN, e.name)
        if isinstance(e, HApp):
            h = build_combinator(ws.combinator(e.name), [fn.Identity(World.PLAIN)], ws,
                                 World.PLAIN)
            return fn.Compose(fn.OpSquare(h), go(e.args[0]))
        if isinstance(e, Sum):
            return fn.Symmetrized(fn.Sum(fn.Proj2(go(e.left)), fn.Proj2(go(e.right))))
        if isinstance(e, Prod):
            return fn.Symmetrized(fn.Product(fn.Proj2(go(e.left)), fn.Proj2(go(e.right))))
        if isinstance(e, Arrow):
            return fn.Symmetrized(fn.Hom(fn.Pairing(go(e.left), go(e.right))))
        raise DslError(f"unknown node {type(e).__name__}")

    return go(e)


def elaborate_mixed(e: Expr, ws: Optional[Workspace] = None) -> FactoredFunctor:
    ws = ws or Workspace()
    report = check_guardedness(e)
    if not report.accepted:
        raise GuardednessError(report)
    g = _mixed(e, ws, World.OP_POINTED, guarded_base=fn.OpSquare(fn.Forget()))
    f = fn.OpSquare(fn.Lift())
    return FactoredFunctor(e, interpret_mixed(e, ws), g, f, fn.Compose(f, g))


# -- factorization checks -------------------------------------------------

@dataclass
class NaturalityReport:
    passed: bool
    objects_checked: int
    maps_checked: int
    failure: Optional[str] = None


def check_factorization(ff: FactoredFunctor, objects: list, maps: list) -> NaturalityReport:
    """Check ``total ≅ g_side . f_side`` at ``objects`` and naturality on ``maps``."""
    world = ff.world
    for x in objects:
        try:
            ff.iso_at(x)
        except DslError:
            return NaturalityReport(False, 0, 0, f"no iso at object of size {w.size(world, x)}")
    gf = fn.Compose(ff.g_side, ff.f_side)
    for k, m in enumerate(maps):
        a, b = w.src(world, m), w.dst(world, m)
        lhs = w.compose(world, ff.iso_at(b), ff.total.mor(m))
        rhs = w.compose(world, gf.mor(m), ff.iso_at(a))
        if lhs != rhs:
            return NaturalityReport(False, len(objects), k,
                                    f"naturality square fails for map {w.map_to_json(world, m)}")
    return NaturalityReport(True, len(objects), len(maps))


def probe_set(world: World, bound: int = 3):
    """All objects with components of size <= ``bound`` and all maps between them."""
    objs = w.objects_up_to(world, bound)
    return objs, w.morphisms_between(world, objs)
