"""Project indexing: parse many files, build the method index, resolve calls.

Per-file parse failures degrade to diagnostics and the file is skipped; only
when *every* file of a non-empty project fails does indexing abort with
IndexingError. Call sites are resolved by callee name + arity against the
project's own methods; ambiguous matches pick the lexicographically smallest
canonical signature and report a diagnostic. Unresolved calls keep
``resolved_signature = None`` so later passes can fall back to external
knowledge.
"""

from __future__ import annotations

import logging
from pathlib import Path

from .model import (
    ClassModel,
    Diagnostic,
    MethodModel,
    ProgramModel,
    SourceFile,
    canonical_signature,
)
from .parser import JavaSyntaxError, parse_source

logger = logging.getLogger(__name__)


class IndexingError(Exception):
    """Raised when a non-empty project yields no parseable files at all."""


def load_project(root: str | Path) -> list[SourceFile]:
    """Collect every ``.java`` file under ``root``, ordered by relative path."""
    root = Path(root)
    files: list[SourceFile] = []
    for path in sorted(root.rglob("*.java")):
        uri = path.relative_to(root).as_posix()
        files.append(SourceFile.make(uri=uri, content=path.read_text(encoding="utf-8")))
    return files


def index_program(files: list[SourceFile]) -> tuple[ProgramModel, list[Diagnostic]]:
    """Parse, index, and link ``files`` into one program model."""
    diagnostics: list[Diagnostic] = []
    parsed: list[tuple[SourceFile, list[ClassModel]]] = []
    failures = 0
    for sf in sorted(files, key=lambda f: f.uri):
        try:
            parsed.append((sf, parse_source(sf.content, uri=sf.uri)))
        except JavaSyntaxError as err:
            failures += 1
            diagnostics.append(Diagnostic(sf.uri, err.line, err.column, f"parse error: {err}"))
            logger.warning("skipping %s: %s", sf.uri, err)
    if files and failures == len(files):
        raise IndexingError(f"all {failures} source files failed to parse")

    classes: list[ClassModel] = []
    for _, file_classes in parsed:
        classes.extend(file_classes)
    classes.sort(key=lambda c: (c.package, c.name))

    method_index: dict[str, MethodModel] = {}
    by_name_arity: dict[tuple[str, int], list[str]] = {}
    for cls in classes:
        for m in cls.methods:
            sig = canonical_signature(m)
            if sig in method_index:
                diagnostics.append(
                    Diagnostic(cls.uri, m.line_span[0], 1, f"duplicate definition of {sig}")
                )
                continue
            method_index[sig] = m
            by_name_arity.setdefault((m.name, len(m.parameters)), []).append(sig)

    for sigs in by_name_arity.values():
        sigs.sort()

    for cls in classes:
        for m in cls.methods:
            for stmt in m.statements():
                if stmt.call is None:
                    continue
                call = stmt.call
                candidates = by_name_arity.get((call.callee_name, len(call.argument_vars)), [])
                if not candidates:
                    continue
                if len(candidates) > 1:
                    diagnostics.append(
                        Diagnostic(
                            cls.uri,
                            stmt.line,
                            1,
                            f"ambiguous call to {call.callee_name}/{len(call.argument_vars)}: "
                            f"choosing {candidates[0]} of {len(candidates)} candidates",
                        )
                    )
                call.resolved_signature = candidates[0]

    model = ProgramModel(
        files=sorted(files, key=lambda f: f.uri),
        classes=classes,
        method_index=method_index,
    )
    return model, diagnostics
