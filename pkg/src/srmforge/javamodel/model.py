"""Class/method/statement models for the supported Java subset.

The statement model is deliberately small: bodies are flattened into a
sequence of simple statements, with nested calls desugared into synthetic
temporaries (``$t0``, ``$t1``, ...) so that one statement carries at most
one call. That keeps feature counting and taint propagation uniform.
"""

from __future__ import annotations

from dataclasses import dataclass, field

MODIFIERS = frozenset({"public", "private", "protected", "static", "final", "abstract"})

STATEMENT_KINDS = frozenset(
    {
        "declaration",
        "assignment",
        "invocation",
        "return",
        "if",
        "loop",
        "try_catch",
        "concat",
        "opaque",
    }
)


@dataclass(frozen=True)
class SourceFile:
    """One project file: project-relative uri, raw text, byte offset per line."""

    uri: str
    content: str
    line_index: tuple[int, ...]

    @staticmethod
    def make(uri: str, content: str) -> "SourceFile":
        data = content.encode("utf-8")
        offsets = [0]
        for i, byte in enumerate(data):
            if byte == 0x0A and i + 1 < len(data):
                offsets.append(i + 1)
        return SourceFile(uri, content, tuple(offsets))

    def line_count(self) -> int:
        return len(self.line_index)

    def line_text(self, line: int) -> str:
        lines = self.content.splitlines()
        if 1 <= line <= len(lines):
            return lines[line - 1]
        return ""


@dataclass
class CallSite:
    """One method call after desugaring; at most one per statement.

    ``argument_vars`` holds a variable name per syntactic argument, or None
    for literals. ``receiver_var`` is set when the receiver chain is rooted
    at a local/parameter; otherwise ``receiver_type_hint`` keeps the dotted
    prefix text (class reference or unknown field).
    """

    callee_name: str
    argument_vars: list[str | None]
    receiver_type_hint: str | None = None
    receiver_var: str | None = None
    result_var: str | None = None
    resolved_signature: str | None = None
    is_constructor: bool = False


@dataclass
class Statement:
    """One desugared statement.

    ``blocks`` holds labeled nested bodies: ``then``/``else`` for if,
    ``body`` for loop, ``try``/``catch``/``finally`` for try_catch. For a
    try_catch statement, ``defs`` lists the catch variables in clause order.
    """

    kind: str
    line: int
    defs: list[str] = field(default_factory=list)
    uses: list[str] = field(default_factory=list)
    call: CallSite | None = None
    blocks: list[tuple[str, list["Statement"]]] = field(default_factory=list)
    decl_type: str | None = None

    @property
    def children(self) -> list["Statement"]:
        return [s for _, body in self.blocks for s in body]

    def walk(self):
        yield self
        for child in self.children:
            yield from child.walk()


@dataclass
class MethodModel:
    name: str
    return_type: str
    parameters: list[tuple[str, str]]
    modifiers: frozenset
    body: list[Statement]
    line_span: tuple[int, int]
    owner: "ClassModel | None" = field(default=None, compare=False, repr=False)
    is_constructor: bool = False
    has_body: bool = True

    def statements(self):
        for stmt in self.body:
            yield from stmt.walk()

    @property
    def uri(self) -> str:
        return self.owner.uri if self.owner is not None else ""


@dataclass
class ClassModel:
    package: str
    name: str
    modifiers: frozenset
    methods: list[MethodModel]
    loc: int
    uri: str = ""

    @property
    def qualified_name(self) -> str:
        return f"{self.package}.{self.name}" if self.package else self.name


@dataclass
class ProgramModel:
    files: list[SourceFile]
    classes: list[ClassModel]
    method_index: dict[str, MethodModel]

    def file_by_uri(self, uri: str) -> SourceFile | None:
        for f in self.files:
            if f.uri == uri:
                return f
        return None


@dataclass(frozen=True)
class Diagnostic:
    uri: str
    line: int
    col: int
    message: str

    def __str__(self) -> str:
        return f"{self.uri}:{self.line}:{self.col}: {self.message}"


def canonical_signature(m: MethodModel) -> str:
    """``package.Class.method(T1,T2,...)`` with no whitespace; unique per overload."""
    if m.owner is None:
        raise ValueError(f"method {m.name} has no owner class")
    params = ",".join(ptype for _, ptype in m.parameters)
    return f"{m.owner.qualified_name}.{m.name}({params})"


def parse_signature(text: str) -> tuple[str, str, list[str]]:
    """Split canonical signature text into (qualifier, method name, param types).

    Parameter types are split on top-level commas only, so generic types such
    as ``Map<String,Integer>`` count as one parameter. Raises ValueError for
    text that is not a canonical signature.
    """
    if not text or " " in text or not text.endswith(")"):
        raise ValueError(f"not a canonical signature: {text!r}")
    head, _, params_text = text[:-1].partition("(")
    qualifier, dot, name = head.rpartition(".")
    if not dot or not name or not qualifier:
        raise ValueError(f"not a canonical signature: {text!r}")
    params: list[str] = []
    if params_text:
        depth = 0
        current = []
        for ch in params_text:
            if ch == "<":
                depth += 1
            elif ch == ">":
                depth -= 1
            if ch == "," and depth == 0:
                params.append("".join(current))
                current = []
            else:
                current.append(ch)
        params.append("".join(current))
        if any(not p for p in params) or depth != 0:
            raise ValueError(f"not a canonical signature: {text!r}")
    return qualifier, name, params


def well_formedness_problems(m: MethodModel) -> list[str]:
    """Check that every used variable was defined earlier (or is a parameter)."""
    problems: list[str] = []
    known = {name for name, _ in m.parameters}

    def visit(stmts: list[Statement]) -> None:
        for stmt in stmts:
            for var in stmt.uses:
                if var not in known:
                    problems.append(
                        f"line {stmt.line}: use of {var!r} before any definition"
                    )
            known.update(stmt.defs)
            for _, body in stmt.blocks:
                visit(body)

    visit(m.body)
    return problems


# ---------------------------------------------------------------------------
# Pretty printer. Emits the desugared model back as subset-Java text such that
# reparsing yields an identical model. Literal values are not stored in the
# model, so literal arguments print as `null` and boolean conditions print as
# an and-chain of the used variables; both reparse to the same defs/uses.
# ---------------------------------------------------------------------------


def _render_call(call: CallSite) -> str:
    args = ", ".join(a if a is not None else "null" for a in call.argument_vars)
    if call.is_constructor:
        return f"new {call.callee_name}({args})"
    if call.receiver_var is not None:
        return f"{call.receiver_var}.{call.callee_name}({args})"
    if call.receiver_type_hint is not None:
        return f"{call.receiver_type_hint}.{call.callee_name}({args})"
    return f"{call.callee_name}({args})"


def _render_condition(uses: list[str]) -> str:
    return " && ".join(uses) if uses else "true"


def _render_statement(stmt: Statement, indent: int, out: list[str]) -> None:
    pad = "    " * indent
    if stmt.kind == "invocation":
        call = _render_call(stmt.call)
        if stmt.call.result_var is not None:
            out.append(f"{pad}{stmt.call.result_var} = {call};")
        else:
            out.append(f"{pad}{call};")
    elif stmt.kind == "concat":
        rhs = " + ".join(stmt.uses) if stmt.uses else '""'
        out.append(f"{pad}{stmt.defs[0]} = \"\" + {rhs};")
    elif stmt.kind in ("declaration", "assignment"):
        rhs = stmt.uses[0] if stmt.uses else "null"
        if stmt.kind == "declaration":
            out.append(f"{pad}{stmt.decl_type or 'Object'} {stmt.defs[0]} = {rhs};")
        else:
            out.append(f"{pad}{stmt.defs[0]} = {rhs};")
    elif stmt.kind == "return":
        if stmt.uses:
            out.append(f"{pad}return {' + '.join(stmt.uses)};")
        else:
            out.append(f"{pad}return;")
    elif stmt.kind == "if":
        out.append(f"{pad}if ({_render_condition(stmt.uses)}) {{")
        blocks = dict(stmt.blocks)
        for child in blocks.get("then", []):
            _render_statement(child, indent + 1, out)
        else_body = blocks.get("else", [])
        if else_body:
            out.append(f"{pad}}} else {{")
            for child in else_body:
                _render_statement(child, indent + 1, out)
        out.append(f"{pad}}}")
    elif stmt.kind == "loop":
        out.append(f"{pad}while ({_render_condition(stmt.uses)}) {{")
        for child in stmt.children:
            _render_statement(child, indent + 1, out)
        out.append(f"{pad}}}")
    elif stmt.kind == "try_catch":
        out.append(f"{pad}try {{")
        catch_idx = 0
        for label, body in stmt.blocks:
            if label == "try":
                for child in body:
                    _render_statement(child, indent + 1, out)
            elif label == "catch":
                var = stmt.defs[catch_idx] if catch_idx < len(stmt.defs) else "e"
                catch_idx += 1
                out.append(f"{pad}}} catch (Exception {var}) {{")
                for child in body:
                    _render_statement(child, indent + 1, out)
            elif label == "finally":
                out.append(f"{pad}}} finally {{")
                for child in body:
                    _render_statement(child, indent + 1, out)
        out.append(f"{pad}}}")
    elif stmt.kind == "opaque":
        # `switch` is outside the subset, so this reparses as an opaque
        # statement mentioning exactly the same variables.
        mentioned = " + ".join(stmt.defs) if stmt.defs else "null"
        out.append(f"{pad}switch ({mentioned});")
    else:  # pragma: no cover - parser never produces other kinds
        raise ValueError(f"unknown statement kind {stmt.kind!r}")


def _render_method(m: MethodModel, out: list[str]) -> None:
    mods = " ".join(s for s in ("public", "protected", "private", "static", "final", "abstract") if s in m.modifiers)
    params = ", ".join(f"{ptype} {name}" for name, ptype in m.parameters)
    head = f"{mods} " if mods else ""
    if m.is_constructor:
        sig = f"    {head}{m.name}({params})"
    else:
        sig = f"    {head}{m.return_type} {m.name}({params})"
    if not m.has_body:
        out.append(sig + ";")
        return
    out.append(sig + " {")
    for stmt in m.body:
        _render_statement(stmt, 2, out)
    out.append("    }")


def pretty_print_file(classes: list[ClassModel]) -> str:
    """Render one or more classes (sharing a package) back to parseable text."""
    out: list[str] = []
    if classes and classes[0].package:
        out.append(f"package {classes[0].package};")
        out.append("")
    for cls in classes:
        mods = " ".join(s for s in ("public", "protected", "private", "static", "final", "abstract") if s in cls.modifiers)
        head = f"{mods} " if mods else ""
        out.append(f"{head}class {cls.name} {{")
        for i, method in enumerate(cls.methods):
            if i:
                out.append("")
            _render_method(method, out)
        out.append("}")
        out.append("")
    return "\n".join(out)
