"""Independent reference implementations for every derived operation in the
built-in calculi.

Each oracle is a direct structural recursion written from the defining
equations of the calculus.  None of them goes through the clause engine,
and none shares lifting or renaming helpers with it: agreement between the
two routes is the point of the cross-checks, so the routes must stay
genuinely separate.
"""

from __future__ import annotations

from .kernel import Con, Term, Var


class OpenTermError(Exception):
    pass


# ---------------------------------------------------------------------------
# Peano arithmetic: read numerals, compute with machine integers.


def peano_value(t: Term) -> int:
    n = 0
    while isinstance(t, Con) and t.op == "s":
        n += 1
        t = t.children[0]
    if isinstance(t, Con) and t.op == "zero":
        return n
    raise OpenTermError(f"not a closed numeral: {t!r}")


def peano_term(n: int) -> Term:
    t = Con("zero")
    for _ in range(n):
        t = Con("s", (), (t,))
    return t


def peano_add(main: Term, other: Term) -> Term:
    return peano_term(peano_value(main) + peano_value(other))


def peano_mul(main: Term, other: Term) -> Term:
    return peano_term(peano_value(main) * peano_value(other))


# ---------------------------------------------------------------------------
# Evaluation contexts: plug a program into the hole by direct recursion.


def evalctx_plug(c: Term, e: Term) -> Term:
    match c:
        case Con("hole", _, ()):
            return e
        case Con("appc", _, (inner, arg)):
            return Con("app", (), (evalctx_plug(inner, e), arg))
    raise OpenTermError(f"not a context: {c!r}")


# ---------------------------------------------------------------------------
# Presheaf-style lambda calculus (scoped, binders at the top of the range).
# An environment is a tuple with one entry per free variable.  Because new
# binders take the top index, weakening an entry is the identity on its
# representation, so lifting just appends the new variable.


def presheaf_subst(t: Term, env: tuple, depth: int) -> Term:
    """``depth`` is the number of free variables available to the entries
    (the target context); the fresh variable bound under a lambda becomes
    the top index of the extended target context."""
    match t:
        case Var(_, i):
            return env[i]
        case Con("app", _, (f, a)):
            return Con("app", (), (presheaf_subst(f, env, depth),
                                   presheaf_subst(a, env, depth)))
        case Con("lam", _, (b,)):
            lifted = env + (Var(0, depth),)
            return Con("lam", (), (presheaf_subst(b, lifted, depth + 1),))
    raise OpenTermError(f"not a lambda term: {t!r}")


# ---------------------------------------------------------------------------
# Sharing calculus: contexts with capturing explicit substitutions.
# Plugging is capture-permitting by design.


def sharing_plug(c: Term, e: Term) -> Term:
    match c:
        case Con("hole", _, ()):
            return e
        case Con("ext", _, (inner, f)):
            return Con("esub", (), (sharing_plug(inner, e), f))
    raise OpenTermError(f"not a sharing context: {c!r}")


# ---------------------------------------------------------------------------
# Lambda-mu: named substitution (e)<a := g> appends g to every stream
# named a.  Kinds: 0 = program variables, 1 = continuation names.  With
# top-of-range binding, weakening g under lam or mu is the identity on
# its representation and the name index j is unchanged.


def lammu_nsubst(t: Term, j: int, g: Term) -> Term:
    match t:
        case Var():
            return t
        case Con("app", _, (f, a)):
            return Con("app", (), (lammu_nsubst(f, j, g), lammu_nsubst(a, j, g)))
        case Con("lam", _, (b,)):
            return Con("lam", (), (lammu_nsubst(b, j, g),))
        case Con("mu", _, (b,)):
            return Con("mu", (), (lammu_nsubst(b, j, g),))
        case Con("named", _, (name, p)):
            p2 = lammu_nsubst(p, j, g)
            if name.index == j:
                return Con("named", (), (name, Con("app", (), (p2, g))))
            return Con("named", (), (name, p2))
    raise OpenTermError(f"not a lambda-mu term: {t!r}")


# ---------------------------------------------------------------------------
# Differential lambda calculus.  Sort s holds simple terms, sort m holds
# formal sums of simple terms (zero / plus).  The extended operations act
# summand by summand; substitution and the partial derivative are then
# direct recursions over the defining equations, with the s-to-m results
# assembled by the same summand-level helpers.


def _dl_summands(m: Term) -> list:
    out = []
    while isinstance(m, Con) and m.op == "plus":
        out.append(m.children[0])
        m = m.children[1]
    if isinstance(m, Con) and m.op == "zero":
        return out
    raise OpenTermError(f"not a sum: {m!r}")


def _dl_sum_of(summands) -> Term:
    t = Con("zero")
    for e in reversed(list(summands)):
        t = Con("plus", (), (e, t))
    return t


def dl_sum(m: Term, n: Term) -> Term:
    return _dl_sum_of(_dl_summands(m) + _dl_summands(n))


def dl_appm(m: Term, n: Term) -> Term:
    return _dl_sum_of(Con("appsm", (), (e, n)) for e in _dl_summands(m))


def dl_absm(m: Term) -> Term:
    return _dl_sum_of(Con("abs", (), (e,)) for e in _dl_summands(m))


def dl_lapp0(m: Term, e: Term) -> Term:
    return _dl_sum_of(Con("dapp", (), (e, d)) for d in _dl_summands(m))


def dl_lapp(m: Term, n: Term) -> Term:
    out = []
    for e in _dl_summands(m):
        out.extend(_dl_summands(dl_lapp0(n, e)))
    return _dl_sum_of(out)


def dl_subst_s(t: Term, env: tuple, depth: int) -> Term:
    """Substitute sums for the free simple variables of a simple term; the
    result is a sum.  ``depth`` is the target context of the entries."""
    match t:
        case Var(_, i):
            return env[i]
        case Con("appsm", _, (e, n)):
            return dl_appm(dl_subst_s(e, env, depth), dl_subst_m(n, env, depth))
        case Con("abs", _, (b,)):
            fresh = Con("plus", (), (Var(0, depth), Con("zero")))
            return dl_absm(dl_subst_s(b, env + (fresh,), depth + 1))
        case Con("dapp", _, (e, f)):
            return dl_lapp(dl_subst_s(e, env, depth), dl_subst_s(f, env, depth))
    raise OpenTermError(f"not a simple term: {t!r}")


def dl_subst_m(t: Term, env: tuple, depth: int) -> Term:
    return _dl_sum_of(
        d for e in _dl_summands(t) for d in _dl_summands(dl_subst_s(e, env, depth))
    )


def dl_pdiff_s(t: Term, x: int, m: Term) -> Term:
    """Partial derivative of a simple term along variable x in direction m
    (a sum); the result is a sum."""
    match t:
        case Var(_, i):
            return m if i == x else Con("zero")
        case Con("appsm", _, (e, n)):
            left = dl_appm(dl_pdiff_s(e, x, m), n)
            right = dl_appm(dl_lapp0(dl_pdiff_m(n, x, m), e), n)
            return dl_sum(left, right)
        case Con("abs", _, (b,)):
            return dl_absm(dl_pdiff_s(b, x, m))
        case Con("dapp", _, (e, f)):
            left = dl_lapp(dl_pdiff_s(e, x, m), Con("plus", (), (f, Con("zero"))))
            right = dl_lapp0(dl_pdiff_s(f, x, m), e)
            return dl_sum(left, right)
    raise OpenTermError(f"not a simple term: {t!r}")


def dl_pdiff_m(t: Term, x: int, m: Term) -> Term:
    out = []
    for e in _dl_summands(t):
        out.extend(_dl_summands(dl_pdiff_s(e, x, m)))
    return _dl_sum_of(out)


# ---------------------------------------------------------------------------
# De Bruijn lambda calculus (unscoped, binders at index 0): textbook shift,
# renaming, and substitution, with function-valued environments.


def db_shift(t: Term, by: int, cutoff: int = 0) -> Term:
    match t:
        case Var(_, i):
            return Var(0, i + by if i >= cutoff else i)
        case Con("app", _, (f, a)):
            return Con("app", (), (db_shift(f, by, cutoff), db_shift(a, by, cutoff)))
        case Con("lam", _, (b,)):
            return Con("lam", (), (db_shift(b, by, cutoff + 1),))
    raise OpenTermError(f"not a lambda term: {t!r}")


def db_rename(t: Term, rho) -> Term:
    match t:
        case Var(_, i):
            return Var(0, rho(i))
        case Con("app", _, (f, a)):
            return Con("app", (), (db_rename(f, rho), db_rename(a, rho)))
        case Con("lam", _, (b,)):
            return Con("lam", (), (db_rename(b, lambda i: 0 if i == 0 else rho(i - 1) + 1),))
    raise OpenTermError(f"not a lambda term: {t!r}")


def db_subst(t: Term, sigma) -> Term:
    match t:
        case Var(_, i):
            return sigma(i)
        case Con("app", _, (f, a)):
            return Con("app", (), (db_subst(f, sigma), db_subst(a, sigma)))
        case Con("lam", _, (b,)):
            def lifted(i):
                return Var(0, 0) if i == 0 else db_shift(sigma(i - 1), 1)
            return Con("lam", (), (db_subst(b, lifted),))
    raise OpenTermError(f"not a lambda term: {t!r}")


def db_rename_prefix_shift(t: Term, prefix: tuple, shift: int) -> Term:
    return db_rename(t, lambda i: prefix[i] if i < len(prefix) else i - len(prefix) + shift)


def db_subst_prefix_shift(t: Term, prefix: tuple, shift: int) -> Term:
    def sigma(i):
        if i < len(prefix):
            return prefix[i]
        return Var(0, i - len(prefix) + shift)
    return db_subst(t, sigma)
