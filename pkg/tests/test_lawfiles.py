"""File formats: shipped bundle files parse back to the exact structures
they were printed from, and printing is a fixed point of parsing."""

import os

import pytest

from structlaws import lawfiles as lf
from structlaws.examples import BUNDLE_NAMES, build
from structlaws.sexpr import ParseError

BUNDLE_DIR = os.path.join(os.path.dirname(lf.__file__), "bundles")


@pytest.fixture(scope="module", params=BUNDLE_NAMES)
def bundle(request):
    return build(request.param)


def _path(name, filename):
    return os.path.join(BUNDLE_DIR, name, filename)


def test_signature_files_match_builders(bundle):
    with open(_path(bundle.name, "signature.sexpr")) as f:
        text = f.read()
    sig = lf.parse_signature(text)
    assert sig == bundle.sig
    assert lf.print_signature(sig) == text


def test_law_files_match_builders(bundle):
    with open(_path(bundle.name, "laws.sexpr")) as f:
        text = f.read()
    laws = lf.parse_laws(text)
    assert laws == list(bundle.stack.laws())
    assert lf.print_laws(laws) == text
    stack = lf.stack_from_laws(bundle.sig, laws)
    assert stack.layers == bundle.stack.layers


def test_system_files_match_builders(bundle):
    path = _path(bundle.name, "systems.sexpr")
    if not bundle.systems:
        assert not os.path.exists(path)
        return
    with open(path) as f:
        text = f.read()
    systems = lf.parse_systems(text)
    assert tuple(systems) == tuple(bundle.systems)
    assert lf.print_systems(systems) == text


def test_natexpr_and_sort_round_trip():
    from structlaws.sexpr import parse_sexpr

    for text in ("3", "#0", "#1+2"):
        assert lf.print_natexpr(lf.parse_natexpr(text)) == text
    for text in ("p", "(c #0+1)"):
        node = parse_sexpr(text) if text.startswith("(") else text
        assert lf.print_sort(lf.parse_sort(node)) == text


def test_missing_layer_is_rejected():
    b = build("peano")
    laws = [law for law in b.stack.laws() if law.schema.name == "mul"]
    with pytest.raises(ParseError, match="layer"):
        lf.stack_from_laws(b.sig, laws)


def test_malformed_signature_is_rejected():
    with pytest.raises(ParseError):
        lf.parse_signature("(signature (mode sideways))")
    with pytest.raises(ParseError):
        lf.parse_signature("(op zero)")
