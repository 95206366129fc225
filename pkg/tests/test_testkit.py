"""Enumeration: exhaustiveness cross-checks, canonical order, determinism."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from structlaws.examples import build
from structlaws.kernel import SortExpr, term_key, term_size
from structlaws.testkit import (
    EnumSpec,
    aux_instances,
    compositions,
    count_terms,
    enum_terms,
    rand_term,
)


@pytest.fixture(scope="module")
def peano():
    return build("peano")


@pytest.fixture(scope="module")
def presheaf():
    return build("lambda-presheaf")


def test_compositions_partition_totals():
    assert list(compositions(3, 2)) == [(1, 2), (2, 1)]
    assert list(compositions(0, 0)) == [()]
    assert list(compositions(2, 3)) == []


@pytest.mark.parametrize("size", [1, 3, 5, 7])
def test_enum_matches_independent_count_peano(peano, size):
    spec = EnumSpec(peano.sig, SortExpr("nat"), (0,), size)
    terms = enum_terms(spec)
    assert len(terms) == count_terms(peano.sig, (0,), SortExpr("nat"), size)
    assert len(set(terms)) == len(terms)


@pytest.mark.parametrize("ctx,size", [((0,), 4), ((1,), 4), ((2,), 5)])
def test_enum_matches_independent_count_lambda(presheaf, ctx, size):
    spec = EnumSpec(presheaf.sig, SortExpr("p"), ctx, size)
    terms = enum_terms(spec)
    assert len(terms) == count_terms(presheaf.sig, ctx, SortExpr("p"), size)


def test_enum_respects_the_size_bound_and_order(presheaf):
    spec = EnumSpec(presheaf.sig, SortExpr("p"), (1,), 5)
    terms = enum_terms(spec)
    assert all(term_size(t) <= 5 for t in terms)
    assert terms == sorted(terms, key=term_key)


def test_enum_parameterized_sorts():
    sharing = build("sharing")
    from structlaws.kernel import NatExpr

    # contexts with one extension: ext wraps a c(0) context and a term
    spec = EnumSpec(sharing.sig, SortExpr("c", NatExpr(None, 1)), (0,), 5,
                    stack=sharing.stack)
    terms = enum_terms(spec)
    assert terms and all(t.op == "ext" for t in terms)


def test_aux_instances_cover_both_operators(peano):
    spec = EnumSpec(peano.sig, SortExpr("nat"), (0,), 4, stack=peano.stack)
    law = peano.stack.law("add")
    instances = list(aux_instances(spec, (0,), law, 4))
    assert instances
    for nat_args, main, params in instances:
        assert nat_args == ()
        assert len(params) == 1


def test_rand_term_is_deterministic(peano):
    spec = EnumSpec(peano.sig, SortExpr("nat"), (0,), 5)
    assert rand_term(spec, 7) == rand_term(spec, 7)


@given(st.integers(min_value=0, max_value=1000))
@settings(max_examples=30)
def test_rand_term_stays_in_the_class(peano, seed):
    spec = EnumSpec(peano.sig, SortExpr("nat"), (0,), 5)
    t = rand_term(spec, seed)
    assert term_size(t) <= 5


@given(st.integers(min_value=1, max_value=6), st.integers(min_value=0, max_value=2))
@settings(max_examples=20, deadline=None)
def test_count_agreement_is_a_property(size, free):
    b = build("lambda-presheaf")
    spec = EnumSpec(b.sig, SortExpr("p"), (free,), size)
    assert len(enum_terms(spec)) == count_terms(b.sig, (free,), SortExpr("p"), size)
