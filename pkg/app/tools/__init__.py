"""Tools package."""

from app.tools.fixtures import CATALOG, get_fixture
from app.tools.instance_tools import (
    build_gog,
    canonical_json,
    document_from_gog,
    load_instance,
    parse_instance,
    parse_word,
    serialize_instance,
)
from app.tools.report_tools import render_text, write_output

__all__ = [
    "CATALOG",
    "get_fixture",
    "build_gog",
    "canonical_json",
    "document_from_gog",
    "load_instance",
    "parse_instance",
    "parse_word",
    "serialize_instance",
    "render_text",
    "write_output",
]
