"""Java source layer: scanning, lexing, and method/call-site extraction."""

from smartdoc.javasrc.model import CallSite, MethodDecl, ParseResult, SourceFile, method_id
from smartdoc.javasrc.parser import parse_file
from smartdoc.javasrc.scan import load_source, scan_project

__all__ = [
    "CallSite",
    "MethodDecl",
    "ParseResult",
    "SourceFile",
    "load_source",
    "method_id",
    "parse_file",
    "scan_project",
]
