"""Recursive-descent parser for the supported Java subset.

Supported: package/import headers; top-level class declarations; method and
constructor declarations; statements: local declaration with initializer,
assignment, method invocation (incl. chained calls), string concatenation
with ``+``, return, if/else, for/while, try/catch.

Desugaring rules:
  * nested and chained calls become invocation statements assigning
    synthetic temporaries ``$t0, $t1, ...`` (numbered per method, in
    evaluation order);
  * classic ``for`` becomes init statements + a loop whose body ends with
    the update statements; enhanced ``for`` declares the loop variable at
    the head of the loop body;
  * any binary expression that reads at least one variable becomes a
    ``concat`` statement over the used variables.

Unsupported constructs inside method bodies degrade to ``opaque``
statements whose defs and uses both list every mentioned local, so later
passes stay conservative. Structural breakage (unbalanced braces, malformed
headers) raises JavaSyntaxError instead.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import MODIFIERS, CallSite, ClassModel, MethodModel, SourceFile, Statement


class JavaSyntaxError(Exception):
    """Malformed input outside the graceful-degradation envelope."""

    def __init__(self, line: int, column: int, expected: str, found: str = ""):
        self.line = line
        self.column = column
        self.expected = expected
        self.found = found
        detail = f", found {found!r}" if found else ""
        super().__init__(f"{line}:{column}: expected {expected}{detail}")


_KEYWORDS = frozenset(
    """abstract assert boolean break byte case catch char class const continue
    default do double else enum extends final finally float for goto if
    implements import instanceof int interface long native new package private
    protected public return short static strictfp super switch synchronized
    this throw throws transient try void volatile while""".split()
)

_PRIMITIVES = frozenset(
    {"boolean", "byte", "char", "double", "float", "int", "long", "short", "void"}
)

# Modifiers we accept but do not model.
_IGNORED_MODIFIERS = frozenset(
    {"synchronized", "native", "transient", "volatile", "strictfp", "default"}
)

_TWO_CHAR = {
    "==", "!=", "<=", ">=", "&&", "||", "++", "--", "+=", "-=", "*=", "/=",
    "%=", "&=", "|=", "^=", "->", "::", "<<", ">>",
}

_BINARY_OPS = {
    "+", "-", "*", "/", "%", "<", ">", "<=", ">=", "==", "!=", "&&", "||",
    "&", "|", "^", "<<", ">>",
}


@dataclass(frozen=True)
class _Tok:
    kind: str  # ident | keyword | string | char | number | punct | eof
    text: str
    line: int
    col: int


def _tokenize(content: str) -> list[_Tok]:
    toks: list[_Tok] = []
    i, line, col = 0, 1, 1
    n = len(content)

    def advance(k: int) -> None:
        nonlocal i, line, col
        for _ in range(k):
            if i < n and content[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    while i < n:
        ch = content[i]
        if ch in " \t\r\n":
            advance(1)
            continue
        if content.startswith("//", i):
            while i < n and content[i] != "\n":
                advance(1)
            continue
        if content.startswith("/*", i):
            advance(2)
            while i < n and not content.startswith("*/", i):
                advance(1)
            if i >= n:
                raise JavaSyntaxError(line, col, "closing */")
            advance(2)
            continue
        start_line, start_col = line, col
        if ch == '"':
            j = i + 1
            while j < n and content[j] != '"':
                j += 2 if content[j] == "\\" else 1
            if j >= n:
                raise JavaSyntaxError(start_line, start_col, "closing quote")
            text = content[i : j + 1]
            toks.append(_Tok("string", text, start_line, start_col))
            advance(j + 1 - i)
            continue
        if ch == "'":
            j = i + 1
            while j < n and content[j] != "'":
                j += 2 if content[j] == "\\" else 1
            if j >= n:
                raise JavaSyntaxError(start_line, start_col, "closing quote")
            toks.append(_Tok("char", content[i : j + 1], start_line, start_col))
            advance(j + 1 - i)
            continue
        if ch.isdigit():
            j = i
            while j < n and (content[j].isalnum() or content[j] in "._"):
                # A dot is part of the number only when followed by a digit
                # (so `1.toString` style chains do not swallow the dot).
                if content[j] == "." and not (j + 1 < n and content[j + 1].isdigit()):
                    break
                j += 1
            toks.append(_Tok("number", content[i:j], start_line, start_col))
            advance(j - i)
            continue
        if ch.isalpha() or ch in "_$":
            j = i
            while j < n and (content[j].isalnum() or content[j] in "_$"):
                j += 1
            text = content[i:j]
            kind = "keyword" if text in _KEYWORDS else "ident"
            toks.append(_Tok(kind, text, start_line, start_col))
            advance(j - i)
            continue
        two = content[i : i + 2]
        if two in _TWO_CHAR:
            toks.append(_Tok("punct", two, start_line, start_col))
            advance(2)
            continue
        toks.append(_Tok("punct", ch, start_line, start_col))
        advance(1)
    toks.append(_Tok("eof", "", line, col))
    return toks


class _Atom:
    """Value produced while desugaring an expression."""

    __slots__ = ("var", "pending")

    def __init__(self, var: str | None = None, pending: Statement | None = None):
        self.var = var          # local/parameter/temp carrying the value
        self.pending = pending  # invocation statement whose result is not yet named


class _Parser:
    def __init__(self, content: str, uri: str):
        self.uri = uri
        self.toks = _tokenize(content)
        self.pos = 0
        self.locals: set[str] = set()
        self.temp_counter = 0
        self.stmt_line = 0

    # -- token helpers ------------------------------------------------------

    def peek(self, offset: int = 0) -> _Tok:
        idx = min(self.pos + offset, len(self.toks) - 1)
        return self.toks[idx]

    def next(self) -> _Tok:
        tok = self.peek()
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def at(self, text: str) -> bool:
        return self.peek().text == text

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.next()
            return True
        return False

    def expect(self, text: str) -> _Tok:
        tok = self.peek()
        if tok.text != text:
            raise JavaSyntaxError(tok.line, tok.col, repr(text), tok.text or "end of file")
        return self.next()

    def error(self, expected: str) -> JavaSyntaxError:
        tok = self.peek()
        return JavaSyntaxError(tok.line, tok.col, expected, tok.text or "end of file")

    # -- file level ---------------------------------------------------------

    def parse_file(self) -> list[ClassModel]:
        package = ""
        self._skip_annotations()
        if self.at("package"):
            self.next()
            package = self._qualified_name()
            self.expect(";")
        while self.at("import"):
            self.next()
            self.accept("static")
            self._qualified_name()
            if self.accept("."):
                self.expect("*")
            self.expect(";")
        classes: list[ClassModel] = []
        while self.peek().kind != "eof":
            if self.accept(";"):
                continue
            classes.append(self._class_decl(package))
        return classes

    def _qualified_name(self) -> str:
        parts = [self._ident_like()]
        while self.at(".") and self.peek(1).kind in ("ident", "keyword") and self.peek(1).text != "*":
            self.next()
            parts.append(self._ident_like())
        return ".".join(parts)

    def _ident_like(self) -> str:
        tok = self.peek()
        if tok.kind != "ident":
            raise self.error("identifier")
        return self.next().text

    def _skip_annotations(self) -> None:
        while self.at("@"):
            self.next()
            self._qualified_name()
            if self.at("("):
                self._skip_balanced("(", ")")

    def _skip_balanced(self, open_t: str, close_t: str) -> None:
        self._skip_balanced_counting(open_t, close_t)

    def _skip_balanced_counting(self, open_t: str, close_t: str) -> int:
        tok = self.expect(open_t)
        depth = 1
        while depth:
            tok = self.next()
            if tok.kind == "eof":
                raise JavaSyntaxError(tok.line, tok.col, repr(close_t), "end of file")
            if tok.text == open_t:
                depth += 1
            elif tok.text == close_t:
                depth -= 1
        return tok.line

    # -- class level --------------------------------------------------------

    def _modifiers(self) -> frozenset:
        mods: set[str] = set()
        while True:
            self._skip_annotations()
            text = self.peek().text
            if text in MODIFIERS:
                mods.add(self.next().text)
            elif text in _IGNORED_MODIFIERS:
                self.next()
            else:
                return frozenset(mods)

    def _class_decl(self, package: str) -> ClassModel:
        mods = self._modifiers()
        if self.at("enum"):
            # Enums carry no analyzable methods in the subset; keep the shell.
            self.next()
            name_tok = self.peek()
            name = self._ident_like()
            if self.accept("implements"):
                self._type_ref()
                while self.accept(","):
                    self._type_ref()
            end_line = self._skip_balanced_counting("{", "}")
            return ClassModel(
                package=package, name=name, modifiers=mods, methods=[],
                loc=end_line - name_tok.line + 1, uri=self.uri,
            )
        if self.at("interface"):
            self.next()
            mods = mods | {"abstract"}
        elif self.at("class"):
            self.next()
        else:
            raise self.error("'class'")
        name_tok = self.peek()
        name = self._ident_like()
        if self.at("<"):
            self._skip_generic_args()
        if self.accept("extends"):
            self._type_ref()
        if self.accept("implements"):
            self._type_ref()
            while self.accept(","):
                self._type_ref()
        start_line = name_tok.line
        self.expect("{")
        methods: list[MethodModel] = []
        while not self.at("}"):
            if self.peek().kind == "eof":
                raise self.error("'}' closing class body")
            member = self._member(name)
            if member is not None:
                methods.append(member)
        end_tok = self.expect("}")
        loc = end_tok.line - start_line + 1
        cls = ClassModel(package=package, name=name, modifiers=mods, methods=methods, loc=loc, uri=self.uri)
        for m in methods:
            m.owner = cls
        return cls

    def _member(self, class_name: str) -> MethodModel | None:
        mods = self._modifiers()
        if self.at(";"):
            self.next()
            return None
        if self.at("{"):  # instance/static initializer block
            self._skip_balanced("{", "}")
            return None
        if self.peek().text in ("class", "interface", "enum"):  # nested type: skipped
            while not self.at("{"):
                if self.peek().kind == "eof":
                    raise self.error("'{'")
                self.next()
            self._skip_balanced("{", "}")
            return None
        if self.at("<"):  # generic method type parameters
            self._skip_generic_args()
        # Constructor: bare class name followed by '('.
        if self.peek().kind == "ident" and self.peek().text == class_name and self.peek(1).text == "(":
            name_tok = self.next()
            return self._method_rest(class_name, "void", name_tok, mods, is_constructor=True)
        saved = self.pos
        try:
            ret_type = self._type_ref()
            name_tok = self.peek()
            name = self._ident_like()
        except JavaSyntaxError:
            self.pos = saved
            raise self.error("member declaration")
        if self.at("("):
            return self._method_rest(name, ret_type, name_tok, mods, is_constructor=False)
        # Field declaration: consume through ';' (initializers may nest braces).
        depth = 0
        while True:
            tok = self.next()
            if tok.kind == "eof":
                raise JavaSyntaxError(tok.line, tok.col, "';' ending field declaration", "end of file")
            if tok.text in "({[":
                depth += 1
            elif tok.text in ")}]":
                depth -= 1
            elif tok.text == ";" and depth == 0:
                return None

    def _method_rest(
        self,
        name: str,
        ret_type: str,
        name_tok: _Tok,
        mods: frozenset,
        is_constructor: bool,
    ) -> MethodModel:
        self.expect("(")
        params: list[tuple[str, str]] = []
        if not self.at(")"):
            while True:
                self._skip_annotations()
                self.accept("final")
                ptype = self._type_ref()
                if self.accept("."):  # varargs: Type... name
                    self.expect(".")
                    self.expect(".")
                    ptype += "..."
                pname = self._ident_like()
                params.append((pname, ptype))
                if not self.accept(","):
                    break
        self.expect(")")
        if self.accept("throws"):
            self._type_ref()
            while self.accept(","):
                self._type_ref()
        self.locals = {p for p, _ in params}
        self.temp_counter = 0
        if self.accept(";"):
            return MethodModel(
                name=name, return_type=ret_type, parameters=params, modifiers=mods,
                body=[], line_span=(name_tok.line, name_tok.line),
                is_constructor=is_constructor, has_body=False,
            )
        body: list[Statement] = []
        self.expect("{")
        while not self.at("}"):
            if self.peek().kind == "eof":
                raise self.error("'}' closing method body")
            self._statement(body)
        end_tok = self.expect("}")
        return MethodModel(
            name=name, return_type=ret_type, parameters=params, modifiers=mods,
            body=body, line_span=(name_tok.line, end_tok.line),
            is_constructor=is_constructor, has_body=True,
        )

    def _type_ref(self) -> str:
        tok = self.peek()
        if tok.text in _PRIMITIVES:
            text = self.next().text
        elif tok.kind == "ident":
            text = self._qualified_name()
        else:
            raise self.error("type")
        if self.at("<"):
            text += self._skip_generic_args()
        while self.at("[") and self.peek(1).text == "]":
            self.next()
            self.next()
            text += "[]"
        return text

    def _skip_generic_args(self) -> str:
        # Generic argument lists nest but never contain parens/braces in the
        # subset; capture the text so the type keeps its written form.
        parts: list[str] = []
        depth = 0
        while True:
            tok = self.next()
            if tok.kind == "eof":
                raise JavaSyntaxError(tok.line, tok.col, "'>'", "end of file")
            parts.append(tok.text)
            if tok.text == "<":
                depth += 1
            elif tok.text == ">":
                depth -= 1
                if depth == 0:
                    return "".join(parts)
            elif tok.text == ">>":
                depth -= 2
                if depth <= 0:
                    return "".join(parts)

    # -- statements ---------------------------------------------------------

    def _statement(self, sink: list[Statement]) -> None:
        self._skip_annotations()
        tok = self.peek()
        self.stmt_line = tok.line
        start = self.pos
        mark = len(sink)
        known_before = set(self.locals)
        try:
            self._statement_inner(sink)
        except JavaSyntaxError:
            # Drop anything half-emitted, rewind, and swallow the statement.
            del sink[mark:]
            self.pos = start
            self._opaque_recovery(sink, known_before)

    def _statement_inner(self, sink: list[Statement]) -> None:
        tok = self.peek()
        text = tok.text
        if text == ";":
            self.next()
            return
        if text == "{":
            self.next()
            while not self.at("}"):
                if self.peek().kind == "eof":
                    raise self.error("'}'")
                self._statement(sink)
            self.next()
            return
        if text == "if":
            self._if_statement(sink)
            return
        if text == "while":
            self._while_statement(sink)
            return
        if text == "for":
            self._for_statement(sink)
            return
        if text == "try":
            self._try_statement(sink)
            return
        if text == "return":
            self.next()
            uses: list[str] = []
            if not self.at(";"):
                atoms = self._expression(sink)
                uses = self._atom_vars(atoms, sink)
            self.expect(";")
            sink.append(Statement(kind="return", line=self.stmt_line, uses=uses))
            return
        if text in ("throw",):
            # Outside the subset but common; keep the used variables visible.
            raise self.error("supported statement")
        if text == "final" or text in _PRIMITIVES or tok.kind == "ident":
            if self._try_declaration(sink):
                return
            self._expression_statement(sink)
            return
        if text in ("this", "super", "new") or tok.kind in ("string", "char", "number"):
            self._expression_statement(sink)
            return
        raise self.error("statement")

    def _block_or_statement(self) -> list[Statement]:
        body: list[Statement] = []
        if self.accept("{"):
            while not self.at("}"):
                if self.peek().kind == "eof":
                    raise self.error("'}'")
                self._statement(body)
            self.next()
        else:
            self._statement(body)
        return body

    def _if_statement(self, sink: list[Statement]) -> None:
        line = self.stmt_line
        self.expect("if")
        self.expect("(")
        cond_atoms = self._expression(sink)
        uses = self._atom_vars(cond_atoms, sink)
        self.expect(")")
        then_body = self._block_or_statement()
        blocks: list[tuple[str, list[Statement]]] = [("then", then_body)]
        if self.accept("else"):
            blocks.append(("else", self._block_or_statement()))
        sink.append(Statement(kind="if", line=line, uses=uses, blocks=blocks))

    def _while_statement(self, sink: list[Statement]) -> None:
        line = self.stmt_line
        self.expect("while")
        self.expect("(")
        cond_atoms = self._expression(sink)
        uses = self._atom_vars(cond_atoms, sink)
        self.expect(")")
        body = self._block_or_statement()
        sink.append(Statement(kind="loop", line=line, uses=uses, blocks=[("body", body)]))

    def _for_statement(self, sink: list[Statement]) -> None:
        line = self.stmt_line
        self.expect("for")
        self.expect("(")
        # Enhanced for: `Type name : iterable`
        saved = self.pos
        try:
            self.accept("final")
            decl_type = self._type_ref()
            var_name = self._ident_like()
            if self.accept(":"):
                iter_atoms = self._expression(sink)
                iter_uses = self._atom_vars(iter_atoms, sink)
                self.expect(")")
                self.locals.add(var_name)
                head = Statement(
                    kind="declaration", line=line, defs=[var_name], uses=list(iter_uses),
                    decl_type=decl_type,
                )
                body = self._block_or_statement()
                sink.append(Statement(kind="loop", line=line, uses=iter_uses, blocks=[("body", [head] + body)]))
                return
            self.pos = saved
        except JavaSyntaxError:
            self.pos = saved
        # Classic for: init; cond; update
        if not self.at(";"):
            if not self._try_declaration(sink, consume_semi=False):
                self._expression_as_statement(sink)
        self.expect(";")
        cond_uses: list[str] = []
        if not self.at(";"):
            cond_atoms = self._expression(sink)
            cond_uses = self._atom_vars(cond_atoms, sink)
        self.expect(";")
        update: list[Statement] = []
        if not self.at(")"):
            self._expression_as_statement(update)
            while self.accept(","):
                self._expression_as_statement(update)
        self.expect(")")
        body = self._block_or_statement()
        sink.append(Statement(kind="loop", line=line, uses=cond_uses, blocks=[("body", body + update)]))

    def _try_statement(self, sink: list[Statement]) -> None:
        line = self.stmt_line
        self.expect("try")
        if self.at("("):  # try-with-resources header: treat as declarations
            self.next()
            while not self.at(")"):
                if not self._try_declaration(sink, consume_semi=False):
                    self._expression_as_statement(sink)
                if not self.accept(";"):
                    break
            self.expect(")")
        blocks: list[tuple[str, list[Statement]]] = []
        catch_vars: list[str] = []
        self.expect("{")
        try_body: list[Statement] = []
        while not self.at("}"):
            if self.peek().kind == "eof":
                raise self.error("'}'")
            self._statement(try_body)
        self.next()
        blocks.append(("try", try_body))
        while self.at("catch"):
            self.next()
            self.expect("(")
            self._type_ref()
            while self.accept("|"):
                self._type_ref()
            var = self._ident_like()
            self.expect(")")
            catch_vars.append(var)
            self.locals.add(var)
            catch_body: list[Statement] = []
            self.expect("{")
            while not self.at("}"):
                if self.peek().kind == "eof":
                    raise self.error("'}'")
                self._statement(catch_body)
            self.next()
            blocks.append(("catch", catch_body))
        if self.accept("finally"):
            fin_body: list[Statement] = []
            self.expect("{")
            while not self.at("}"):
                if self.peek().kind == "eof":
                    raise self.error("'}'")
                self._statement(fin_body)
            self.next()
            blocks.append(("finally", fin_body))
        sink.append(Statement(kind="try_catch", line=line, defs=catch_vars, blocks=blocks))

    def _try_declaration(self, sink: list[Statement], consume_semi: bool = True) -> bool:
        """Attempt `Type name [= expr] [, name [= expr]]*;`; False if not a declaration."""
        saved = self.pos
        self.accept("final")
        try:
            decl_type = self._type_ref()
            if self.peek().kind != "ident" or self.peek(1).text not in ("=", ";", ",", ")"):
                self.pos = saved
                return False
        except JavaSyntaxError:
            self.pos = saved
            return False
        while True:
            name = self._ident_like()
            self.locals.add(name)
            if self.accept("="):
                self._emit_valued_statement(sink, name, decl_type, sink_kind="declaration")
            else:
                sink.append(
                    Statement(kind="declaration", line=self.stmt_line, defs=[name], decl_type=decl_type)
                )
            if not self.accept(","):
                break
        if consume_semi:
            self.expect(";")
        return True

    def _expression_statement(self, sink: list[Statement]) -> None:
        self._expression_as_statement(sink)
        self.expect(";")

    def _expression_as_statement(self, sink: list[Statement]) -> None:
        tok = self.peek()
        # Simple assignment / compound assignment / increment on a bare name.
        if tok.kind == "ident":
            nxt = self.peek(1).text
            if nxt == "=":
                name = self.next().text
                self.next()
                self.locals.add(name)
                self._emit_valued_statement(sink, name, None, sink_kind="assignment")
                return
            if nxt in ("+=", "-=", "*=", "/=", "%=", "&=", "|=", "^="):
                name = self.next().text
                self.next()
                self.locals.add(name)
                atoms = self._expression(sink)
                uses = self._atom_vars(atoms, sink)
                combined = [name] + [u for u in uses if u != name]
                sink.append(Statement(kind="concat", line=self.stmt_line, defs=[name], uses=combined))
                return
            if nxt in ("++", "--"):
                name = self.next().text
                self.next()
                if name in self.locals:
                    sink.append(Statement(kind="assignment", line=self.stmt_line, defs=[name], uses=[name]))
                return
        if tok.text in ("++", "--"):
            self.next()
            name = self._ident_like()
            if name in self.locals:
                sink.append(Statement(kind="assignment", line=self.stmt_line, defs=[name], uses=[name]))
            return
        # General expression (typically a call chain); a trailing call keeps
        # its result dropped, and bare variable reads produce no statement.
        self._expression(sink)

    def _emit_valued_statement(
        self, sink: list[Statement], target: str, decl_type: str | None, sink_kind: str
    ) -> None:
        """Parse the RHS of `target = <expr>` and emit the defining statement."""
        before = len(sink)
        atoms, saw_op = self._expression_ops(sink)
        if len(atoms) == 1 and atoms[0].pending is not None and atoms[0].pending.call.result_var is None:
            # Whole RHS is one call: retarget its result instead of a temp.
            atoms[0].pending.call.result_var = target
            stmt = atoms[0].pending
            stmt.defs = [target]
            return
        uses = self._atom_vars(atoms, sink)
        if saw_op and uses:
            sink.append(Statement(kind="concat", line=self.stmt_line, defs=[target], uses=uses))
        elif len(sink) > before and uses and uses[-1].startswith("$t"):
            # RHS reduced to a fresh temp (e.g. parenthesized call): copy it.
            sink.append(Statement(kind=sink_kind, line=self.stmt_line, defs=[target], uses=uses[-1:],
                                  decl_type=decl_type if sink_kind == "declaration" else None))
        else:
            sink.append(
                Statement(
                    kind=sink_kind, line=self.stmt_line, defs=[target],
                    uses=uses[:1] if len(uses) == 1 else uses,
                    decl_type=decl_type if sink_kind == "declaration" else None,
                )
            )

    # -- expressions --------------------------------------------------------

    def _expression(self, sink: list[Statement]) -> list[_Atom]:
        atoms, _ = self._expression_ops(sink)
        return atoms

    def _expression_ops(self, sink: list[Statement]) -> tuple[list[_Atom], bool]:
        atoms = [self._unary(sink)]
        saw_op = False
        while True:
            text = self.peek().text
            if text == "instanceof":
                self.next()
                self._type_ref()
                saw_op = True
                continue
            if text in _BINARY_OPS:
                self.next()
                saw_op = True
                atoms.append(self._unary(sink))
                continue
            return atoms, saw_op

    def _unary(self, sink: list[Statement]) -> _Atom:
        while self.peek().text in ("!", "-", "+", "~"):
            self.next()
        if self.peek().text in ("++", "--"):
            self.next()
            name = self._ident_like()
            if name in self.locals:
                sink.append(Statement(kind="assignment", line=self.stmt_line, defs=[name], uses=[name]))
                return _Atom(var=name)
            return _Atom()
        return self._postfix(sink)

    def _postfix(self, sink: list[Statement]) -> _Atom:
        atom, prefix = self._primary(sink)
        while True:
            text = self.peek().text
            if text == "." and self.peek(1).kind in ("ident", "keyword"):
                self.next()
                name = self._ident_like() if self.peek().kind == "ident" else self.next().text
                if self.at("("):
                    if atom is not None:
                        # Receiver evaluates before arguments; name its temp now.
                        atom = _Atom(var=self._materialize(atom, sink))
                    args = self._call_args(sink)
                    atom = self._emit_call(sink, name, args, receiver=atom, prefix=prefix)
                    prefix = None
                else:
                    if atom is None and prefix is not None:
                        prefix = prefix + [name]
                    # Field access on a variable keeps the variable as carrier.
                continue
            if text == "(" and prefix is not None:
                # Unqualified or dotted call: last prefix part is the callee.
                callee = prefix[-1]
                hint = ".".join(prefix[:-1]) if len(prefix) > 1 else None
                args = self._call_args(sink)
                atom = self._emit_call(sink, callee, args, receiver=None, prefix=None, hint=hint)
                prefix = None
                continue
            if text == "[":
                self._skip_balanced_expr(sink)
                continue
            if text in ("++", "--"):
                self.next()
                if atom is not None and atom.var is not None and atom.var in self.locals:
                    sink.append(Statement(kind="assignment", line=self.stmt_line, defs=[atom.var], uses=[atom.var]))
                continue
            break
        if atom is None and prefix is not None:
            # A dotted name that never became a call: no local carrier.
            return _Atom()
        return atom if atom is not None else _Atom()

    def _skip_balanced_expr(self, sink: list[Statement]) -> None:
        """Consume `[ expr ]`, desugaring any calls inside for their effects."""
        self.expect("[")
        if not self.at("]"):
            self._expression(sink)
        self.expect("]")

    def _primary(self, sink: list[Statement]) -> tuple[_Atom | None, list[str] | None]:
        """Returns (atom, dotted_prefix); exactly one of them is meaningful."""
        tok = self.peek()
        if tok.kind in ("string", "char", "number"):
            self.next()
            return _Atom(), None
        if tok.text in ("true", "false", "null"):
            self.next()
            return _Atom(), None
        if tok.text in ("this", "super"):
            self.next()
            return None, [tok.text]
        if tok.text == "new":
            self.next()
            type_name = self._type_ref()
            if self.at("("):
                args = self._call_args(sink)
                simple = type_name.split("<")[0].split(".")[-1]
                return self._emit_call(sink, simple, args, receiver=None, prefix=None, constructor=True), None
            if self.at("[") or self.at("{"):
                # Array creation: consume dimensions/initializer conservatively.
                while self.at("["):
                    self._skip_balanced_expr(sink)
                if self.at("{"):
                    self._skip_balanced("{", "}")
                return _Atom(), None
            raise self.error("'(' or '[' after new")
        if tok.text == "(":
            # Either a cast or a parenthesized expression.
            saved = self.pos
            self.next()
            try:
                inner = self._type_ref()
                if self.accept(")") and self._starts_expression():
                    if inner in self.locals and not self._starts_expression_strict():
                        raise JavaSyntaxError(tok.line, tok.col, "cast")
                    return self._unary(sink), None
                raise JavaSyntaxError(tok.line, tok.col, "cast")
            except JavaSyntaxError:
                self.pos = saved
            self.next()
            atoms = self._expression(sink)
            self.expect(")")
            varlist = self._atom_vars(atoms, sink)
            if len(varlist) == 1:
                return _Atom(var=varlist[0]), None
            if not varlist:
                return _Atom(), None
            # Multi-variable parenthesized computation: funnel through a temp
            # so every operand keeps flowing to whatever consumes the parens.
            name = f"$t{self.temp_counter}"
            self.temp_counter += 1
            self.locals.add(name)
            sink.append(Statement(kind="concat", line=self.stmt_line, defs=[name], uses=varlist))
            return _Atom(var=name), None
        if tok.kind == "ident":
            name = self.next().text
            if name in self.locals:
                return _Atom(var=name), None
            return None, [name]
        raise self.error("expression")

    def _starts_expression(self) -> bool:
        tok = self.peek()
        return (
            tok.kind in ("ident", "string", "char", "number")
            or tok.text in ("this", "super", "new", "(", "!", "true", "false", "null")
        )

    def _starts_expression_strict(self) -> bool:
        tok = self.peek()
        return tok.kind in ("string", "char", "number") or tok.text in ("new", "(")

    def _call_args(self, sink: list[Statement]) -> list[str | None]:
        self.expect("(")
        args: list[str | None] = []
        if not self.at(")"):
            while True:
                atoms = self._expression(sink)
                varlist = self._atom_vars(atoms, sink)
                args.append(varlist[0] if len(varlist) >= 1 else None)
                if not self.accept(","):
                    break
        self.expect(")")
        return args

    def _emit_call(
        self,
        sink: list[Statement],
        callee: str,
        args: list[str | None],
        receiver: _Atom | None,
        prefix: list[str] | None,
        hint: str | None = None,
        constructor: bool = False,
    ) -> _Atom:
        receiver_var = None
        receiver_hint = hint
        if receiver is not None:
            receiver_var = self._materialize(receiver, sink)
        elif prefix is not None:
            receiver_hint = ".".join(prefix)
        uses: list[str] = []
        if receiver_var is not None:
            uses.append(receiver_var)
        for a in args:
            if a is not None and a not in uses:
                uses.append(a)
        call = CallSite(
            callee_name=callee,
            argument_vars=args,
            receiver_type_hint=receiver_hint,
            receiver_var=receiver_var,
            is_constructor=constructor,
        )
        stmt = Statement(kind="invocation", line=self.stmt_line, uses=uses, call=call)
        sink.append(stmt)
        return _Atom(pending=stmt)

    def _materialize(self, atom: _Atom, sink: list[Statement]) -> str | None:
        """Give a pending call result a temp name so it can be referenced."""
        if atom.pending is not None and atom.pending.call.result_var is None:
            name = f"$t{self.temp_counter}"
            self.temp_counter += 1
            atom.pending.call.result_var = name
            atom.pending.defs = [name]
            self.locals.add(name)
            atom.var = name
            atom.pending = None
            return name
        if atom.pending is not None:
            return atom.pending.call.result_var
        return atom.var

    def _atom_vars(self, atoms: list[_Atom], sink: list[Statement]) -> list[str]:
        out: list[str] = []
        for atom in atoms:
            var = self._materialize(atom, sink)
            if var is not None and var not in out:
                out.append(var)
        return out

    # -- graceful degradation ------------------------------------------------

    def _opaque_recovery(self, sink: list[Statement], known_before: set[str]) -> None:
        """Consume one unparseable statement; record mentioned locals as defs+uses.

        Locals first introduced inside the swallowed text get a synthetic
        `Object` declaration ahead of the opaque statement, so they remain
        defined for the rest of the method.
        """
        mentioned: list[str] = []
        depth = 0
        line = self.peek().line
        while True:
            tok = self.peek()
            if tok.kind == "eof":
                raise JavaSyntaxError(tok.line, tok.col, "';' or balanced block", "end of file")
            if depth == 0 and tok.text == "}":
                # Do not eat the enclosing block's closing brace.
                break
            self.next()
            if tok.kind == "ident" and tok.text in self.locals and tok.text not in mentioned:
                mentioned.append(tok.text)
            if tok.text in ("(", "[", "{"):
                depth += 1
            elif tok.text in (")", "]"):
                depth -= 1
            elif tok.text == "}":
                depth -= 1
                if depth == 0 and self.peek().text not in ("while", "else", "catch", "finally"):
                    break
            elif tok.text == ";" and depth == 0:
                break
        for name in mentioned:
            if name not in known_before:
                sink.append(
                    Statement(kind="declaration", line=line, defs=[name], decl_type="Object")
                )
        sink.append(Statement(kind="opaque", line=line, defs=list(mentioned), uses=list(mentioned)))


def parse_source(content: str, uri: str = "<memory>") -> list[ClassModel]:
    """Parse one source file into class models; raises JavaSyntaxError."""
    return _Parser(content, uri).parse_file()
