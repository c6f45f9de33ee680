from .model import (
    CallSite,
    ClassModel,
    Diagnostic,
    MethodModel,
    ProgramModel,
    SourceFile,
    Statement,
    canonical_signature,
    parse_signature,
    pretty_print_file,
    well_formedness_problems,
)
from .parser import JavaSyntaxError, parse_source
from .indexer import IndexingError, index_program, load_project

__all__ = [
    "CallSite",
    "ClassModel",
    "Diagnostic",
    "IndexingError",
    "JavaSyntaxError",
    "MethodModel",
    "ProgramModel",
    "SourceFile",
    "Statement",
    "canonical_signature",
    "index_program",
    "load_project",
    "parse_signature",
    "parse_source",
    "pretty_print_file",
    "well_formedness_problems",
]
