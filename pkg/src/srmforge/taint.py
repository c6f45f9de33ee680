"""Taint-flow detection over the statement model.

Forward may-taint analysis per specification: source calls introduce taint,
assignments/concats propagate it, sanitizer calls kill it along their output,
and sink calls with a tainted argument at a guarded position raise findings.
Branches join by set union, loops run to a fixed point, and calls into
project methods are followed through memoized parameter-to-return summaries
up to a configurable depth. No aliasing or field sensitivity is modeled.
"""

from __future__ import annotations

from dataclasses import dataclass

from .javamodel import CallSite, MethodModel, ProgramModel, Statement
from .specgen import CleansePattern, MethodPattern, SinkPattern, TaintSpec

MATCH_MODES = ("exact", "name_and_arity")


@dataclass(frozen=True)
class AnalysisConfig:
    """Engine knobs: interprocedural depth and pattern match widening.

    ``max_call_depth=0`` keeps the analysis intraprocedural. Setting
    ``match_mode`` to ``name_and_arity`` widens every pattern to name/arity
    matching regardless of the pattern's own mode.
    """

    max_call_depth: int = 2
    match_mode: str = "exact"

    def __post_init__(self):
        if self.max_call_depth < 0:
            raise ValueError("max_call_depth must be >= 0")
        if self.match_mode not in MATCH_MODES:
            raise ValueError(f"unknown match mode {self.match_mode!r}")


@dataclass(frozen=True)
class PathStep:
    uri: str
    line: int
    description: str


@dataclass(frozen=True)
class Finding:
    """One unsanitized source-to-sink flow."""

    spec_id: str
    cwe: str
    source_location: tuple[str, int]
    sink_location: tuple[str, int]
    path: tuple[PathStep, ...]
    message: str

    @property
    def key(self) -> tuple[str, int, int, str]:
        return (
            self.sink_location[0],
            self.source_location[1],
            self.sink_location[1],
            self.spec_id,
        )


def match_pattern(
    call: CallSite, pattern: MethodPattern, mode: str | None = None
) -> bool:
    """Does a call site match a method pattern?

    Exact mode compares resolved signatures when resolution succeeded and
    falls back to name + arity for unresolved (library) calls; name_and_arity
    mode never looks at types.
    """
    effective = mode or pattern.match_mode
    arity = len(call.argument_vars)
    if effective == "exact" and call.resolved_signature is not None:
        return call.resolved_signature == pattern.signature
    return call.callee_name == pattern.name and arity == pattern.arity


# Taint state: variable name -> provenance path from its originating source.
_State = dict[str, tuple[PathStep, ...]]


def _join(left: _State, right: _State) -> _State:
    merged = dict(left)
    for name, path in right.items():
        merged.setdefault(name, path)
    return merged


class _Analyzer:
    """Holds the program, config, and the memoized call summaries."""

    def __init__(self, program: ProgramModel, config: AnalysisConfig):
        self.program = program
        self.config = config
        self._summaries: dict[tuple[str, int], frozenset[int]] = {}

    # -- pattern helpers ------------------------------------------------------

    def _matches(self, call: CallSite, pattern: MethodPattern) -> bool:
        mode = (
            "name_and_arity"
            if self.config.match_mode == "name_and_arity"
            else None
        )
        return match_pattern(call, pattern, mode)

    @staticmethod
    def _in_positions(entry: SinkPattern | CleansePattern, call: CallSite):
        if entry.in_indices:
            return [i for i in entry.in_indices if i < len(call.argument_vars)]
        return range(len(call.argument_vars))

    # -- interprocedural summaries -------------------------------------------

    def summary(self, signature: str, depth: int) -> frozenset[int]:
        """Parameter indices whose taint reaches the method's return value."""
        key = (signature, depth)
        if key in self._summaries:
            return self._summaries[key]
        # seed the memo to cut recursion on call cycles
        self._summaries[key] = frozenset()
        method = self.program.method_index.get(signature)
        if method is None or not method.has_body:
            result = frozenset(range(len(method.parameters))) if method else frozenset()
        else:
            state = {name: frozenset([i]) for i, (name, _) in enumerate(method.parameters)}
            returned: set[int] = set()
            self._run_summary_block(method.body, state, returned, depth)
            result = frozenset(returned)
        self._summaries[key] = result
        return result

    def _summary_transfer(
        self, stmt: Statement, state: dict, returned: set[int], depth: int
    ) -> dict:
        state = dict(state)
        if stmt.kind == "return":
            for var in stmt.uses:
                returned.update(state.get(var, frozenset()))
            return state
        if stmt.kind == "opaque":
            flowing = frozenset().union(*(state.get(u, frozenset()) for u in stmt.uses)) if stmt.uses else frozenset()
            if flowing:
                for name in stmt.defs:
                    state[name] = state.get(name, frozenset()) | flowing
            return state
        call = stmt.call
        if call is None:
            flowing = frozenset().union(*(state.get(u, frozenset()) for u in stmt.uses)) if stmt.uses else frozenset()
            for name in stmt.defs:
                if flowing:
                    state[name] = flowing
                else:
                    state.pop(name, None)
            return state
        incoming = self._call_result_origins(call, state, depth)
        if call.result_var is not None:
            if incoming:
                state[call.result_var] = incoming
            else:
                state.pop(call.result_var, None)
        return state

    def _call_result_origins(self, call: CallSite, state: dict, depth: int) -> frozenset:
        arg_sets = [
            state.get(var, frozenset())
            for var in call.argument_vars
            if var is not None
        ]
        if (
            call.resolved_signature is not None
            and call.resolved_signature in self.program.method_index
            and depth > 0
        ):
            flows = self.summary(call.resolved_signature, depth - 1)
            picked = [
                state.get(var, frozenset())
                for i, var in enumerate(call.argument_vars)
                if var is not None and i in flows
            ]
            return frozenset().union(*picked) if picked else frozenset()
        if call.receiver_var is not None:
            arg_sets.append(state.get(call.receiver_var, frozenset()))
        return frozenset().union(*arg_sets) if arg_sets else frozenset()

    def _run_summary_block(
        self, statements: list[Statement], state: dict, returned: set[int], depth: int
    ) -> dict:
        for stmt in statements:
            if stmt.kind == "if":
                branches = []
                for _, body in stmt.blocks:
                    branches.append(
                        self._run_summary_block(body, dict(state), returned, depth)
                    )
                if len(stmt.blocks) < 2:
                    branches.append(state)
                merged: dict = {}
                for branch in branches:
                    for name, origins in branch.items():
                        merged[name] = merged.get(name, frozenset()) | origins
                state = merged
            elif stmt.kind == "loop":
                bound = sum(1 for _ in stmt.walk()) + 1
                for _ in range(bound):
                    body = stmt.blocks[0][1] if stmt.blocks else []
                    after = self._run_summary_block(body, dict(state), returned, depth)
                    merged = dict(state)
                    changed = False
                    for name, origins in after.items():
                        combined = merged.get(name, frozenset()) | origins
                        if combined != merged.get(name):
                            merged[name] = combined
                            changed = True
                    state = merged
                    if not changed:
                        break
            elif stmt.kind == "try_catch":
                exits = []
                try_state = dict(state)
                for label, body in stmt.blocks:
                    if label == "try":
                        try_state = self._run_summary_block(body, dict(state), returned, depth)
                        exits.append(try_state)
                for label, body in stmt.blocks:
                    if label == "catch":
                        entry = dict(state)
                        for name, origins in try_state.items():
                            entry[name] = entry.get(name, frozenset()) | origins
                        for var in stmt.defs:
                            entry.pop(var, None)
                        exits.append(self._run_summary_block(body, entry, returned, depth))
                merged = {}
                for branch in exits or [state]:
                    for name, origins in branch.items():
                        merged[name] = merged.get(name, frozenset()) | origins
                state = merged
                for label, body in stmt.blocks:
                    if label == "finally":
                        state = self._run_summary_block(body, state, returned, depth)
            else:
                state = self._summary_transfer(stmt, state, returned, depth)
        return state

    # -- per-spec taint pass --------------------------------------------------

    def analyze(self, method: MethodModel, spec: TaintSpec) -> list[Finding]:
        findings: list[Finding] = []
        self._run_block(method.body, {}, method.uri, spec, findings)
        return findings

    def _run_block(
        self,
        statements: list[Statement],
        state: _State,
        uri: str,
        spec: TaintSpec,
        findings: list[Finding],
    ) -> _State:
        for stmt in statements:
            if stmt.kind == "if":
                branches = [
                    self._run_block(body, dict(state), uri, spec, findings)
                    for _, body in stmt.blocks
                ]
                if len(stmt.blocks) < 2:
                    branches.append(state)
                merged: _State = {}
                for branch in branches:
                    merged = _join(merged, branch)
                state = merged
            elif stmt.kind == "loop":
                bound = sum(1 for _ in stmt.walk()) + 1
                for _ in range(bound):
                    body = stmt.blocks[0][1] if stmt.blocks else []
                    after = self._run_block(body, dict(state), uri, spec, findings)
                    merged = _join(state, after)
                    if set(merged) == set(state):
                        state = merged
                        break
                    state = merged
            elif stmt.kind == "try_catch":
                exits: list[_State] = []
                try_state = dict(state)
                for label, body in stmt.blocks:
                    if label == "try":
                        try_state = self._run_block(body, dict(state), uri, spec, findings)
                        exits.append(try_state)
                for label, body in stmt.blocks:
                    if label == "catch":
                        entry = _join(dict(state), try_state)
                        for var in stmt.defs:
                            entry.pop(var, None)
                        exits.append(self._run_block(body, entry, uri, spec, findings))
                merged = {}
                for branch in exits or [state]:
                    merged = _join(merged, branch)
                state = merged
                for label, body in stmt.blocks:
                    if label == "finally":
                        state = self._run_block(body, state, uri, spec, findings)
            else:
                state = self._transfer(stmt, state, uri, spec, findings)
        return state

    def _transfer(
        self,
        stmt: Statement,
        state: _State,
        uri: str,
        spec: TaintSpec,
        findings: list[Finding],
    ) -> _State:
        state = dict(state)
        if stmt.kind == "return":
            return state
        if stmt.call is None:
            tainted_uses = [u for u in stmt.uses if u in state]
            for name in stmt.defs:
                if tainted_uses:
                    origin = state[tainted_uses[0]]
                    state[name] = origin + (
                        PathStep(uri, stmt.line, f"taint propagates to {name}"),
                    )
                elif stmt.kind == "opaque":
                    pass  # no information; keep whatever taint the var had
                else:
                    state.pop(name, None)
            return state

        call = stmt.call
        line = stmt.line

        # (d) sink check against the incoming state
        for sink in spec.sinks:
            if not self._matches(call, sink.pattern):
                continue
            for position in self._in_positions(sink, call):
                var = call.argument_vars[position]
                if var is None or var not in state:
                    continue
                path = state[var] + (
                    PathStep(
                        uri,
                        line,
                        f"tainted {var} reaches sink {call.callee_name}"
                        f" (argument {position})",
                    ),
                )
                findings.append(
                    Finding(
                        spec_id=spec.id,
                        cwe=spec.cwe,
                        source_location=(path[0].uri, path[0].line),
                        sink_location=(uri, line),
                        path=path,
                        message=spec.message,
                    )
                )
                break  # one finding per sink call per spec

        # (c) sanitizer: a tainted guarded argument makes the out target clean
        result_clean = False
        for sanitizer in spec.sanitizers:
            if not self._matches(call, sanitizer.pattern):
                continue
            triggered = any(
                call.argument_vars[i] is not None and call.argument_vars[i] in state
                for i in self._in_positions(sanitizer, call)
            )
            if not triggered:
                continue
            if sanitizer.out == "return":
                result_clean = True
                if call.result_var is not None:
                    state.pop(call.result_var, None)
            elif isinstance(sanitizer.out, int) and sanitizer.out < len(
                call.argument_vars
            ):
                cleaned = call.argument_vars[sanitizer.out]
                if cleaned is not None:
                    state.pop(cleaned, None)

        # explicit propagators: taint in at a guarded position flows to out
        propagated = False
        for propagator in spec.propagators:
            if not self._matches(call, propagator.pattern):
                continue
            carriers = [
                call.argument_vars[i]
                for i in self._in_positions(propagator, call)
                if call.argument_vars[i] is not None and call.argument_vars[i] in state
            ]
            if not carriers:
                continue
            origin = state[carriers[0]]
            target = None
            if propagator.out == "return":
                target = call.result_var
            elif isinstance(propagator.out, int) and propagator.out < len(
                call.argument_vars
            ):
                target = call.argument_vars[propagator.out]
            if target is not None:
                state[target] = origin + (
                    PathStep(uri, line, f"taint propagates through {call.callee_name}"),
                )
                propagated = True

        # (a) source: taint the out target
        sourced = False
        for source in spec.sources:
            if not self._matches(call, source.pattern):
                continue
            target = None
            if source.out == "return":
                target = call.result_var
            elif isinstance(source.out, int) and source.out < len(call.argument_vars):
                target = call.argument_vars[source.out]
            if target is not None:
                state[target] = (
                    PathStep(
                        uri, line, f"source {call.callee_name} taints {target}"
                    ),
                )
                sourced = True

        # (b)/(f) default result flow for calls not already decided above
        if call.result_var is not None and not (sourced or result_clean or propagated):
            origin = self._result_origin(call, state)
            if origin is not None:
                state[call.result_var] = origin + (
                    PathStep(
                        uri,
                        line,
                        f"taint propagates through {call.callee_name}"
                        f" to {call.result_var}",
                    ),
                )
            else:
                state.pop(call.result_var, None)
        return state

    def _result_origin(self, call: CallSite, state: _State):
        """Provenance of the call result, or None when it comes out clean."""
        if (
            call.resolved_signature is not None
            and call.resolved_signature in self.program.method_index
            and self.config.max_call_depth > 0
        ):
            flows = self.summary(call.resolved_signature, self.config.max_call_depth - 1)
            for i, var in enumerate(call.argument_vars):
                if i in flows and var is not None and var in state:
                    return state[var]
            return None
        for var in call.argument_vars:
            if var is not None and var in state:
                return state[var]
        if call.receiver_var is not None and call.receiver_var in state:
            return state[call.receiver_var]
        return None


def _dedupe_sorted(findings: list[Finding]) -> list[Finding]:
    unique: dict[tuple, Finding] = {}
    for finding in findings:
        unique.setdefault(finding.key, finding)
    return [unique[key] for key in sorted(unique)]


def analyze_method(
    method: MethodModel,
    specs: list[TaintSpec],
    program: ProgramModel,
    config: AnalysisConfig = AnalysisConfig(),
) -> list[Finding]:
    """All findings in one method, deduplicated and deterministically sorted."""
    analyzer = _Analyzer(program, config)
    findings: list[Finding] = []
    for spec in specs:
        findings.extend(analyzer.analyze(method, spec))
    return _dedupe_sorted(findings)


def analyze_program(
    program: ProgramModel,
    specs: list[TaintSpec],
    config: AnalysisConfig = AnalysisConfig(),
) -> list[Finding]:
    """All findings across the program; order (uri, source, sink, spec)."""
    analyzer = _Analyzer(program, config)
    findings: list[Finding] = []
    for cls in program.classes:
        for method in cls.methods:
            if not method.has_body:
                continue
            for spec in specs:
                findings.extend(analyzer.analyze(method, spec))
    return _dedupe_sorted(findings)
