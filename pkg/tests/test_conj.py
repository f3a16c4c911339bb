import itertools

import pytest

import conjcat.samples as samples
from conjcat.conj import (CGDerivation, cg_derivation, cg_enumerate, cg_member,
                          check_odd_normal_form, nullable_nonterminals,
                          replay_derivation)
from conjcat.cvp import cvp_grammar
from conjcat.errors import UndeclaredSymbolError
from conjcat.grammars import conj_grammar


def three_block_predicate(w):
    n = (len(w) - 3) // 3
    return n >= 1 and w == "b" + "a" * n + "c" + "a" * n + "c" + "a" * n


def two_block_predicate(w):
    n = (len(w) - 2) // 2
    return n >= 0 and w == "b" + "a" * n + "c" + "a" * n


# --- nullables ---------------------------------------------------------------

def test_nullable_cvp():
    assert nullable_nonterminals(cvp_grammar()) == {"A"}


def test_nullable_no_eps_rules():
    assert nullable_nonterminals(samples.three_block_conj()) == frozenset()


def test_nullable_no_base_case():
    g = conj_grammar("S", [("S", [["S"]])], terminals=set())
    assert nullable_nonterminals(g) == frozenset()


def test_nullable_through_conjunction():
    g = conj_grammar("S", [("S", [["A"], ["B"]]),
                           ("A", [[]]),
                           ("B", [["A", "A"]])], terminals=set())
    assert nullable_nonterminals(g) == {"S", "A", "B"}
    assert cg_member(g, "")


# --- membership --------------------------------------------------------------

def test_three_block_membership():
    g = samples.three_block_conj()
    assert cg_member(g, "bacaca")
    assert not cg_member(g, "bacaa")
    assert not cg_member(g, "")
    assert cg_member(g, "baacaacaa")


def test_membership_rejects_undeclared_symbols():
    with pytest.raises(UndeclaredSymbolError):
        cg_member(samples.three_block_conj(), "bxa")


def test_membership_with_alternate_start():
    g = samples.three_block_conj()
    assert cg_member(g, "aa", start="A")
    assert not cg_member(g, "aa", start="B")
    assert cg_member(g, "aca", start="B")


def test_fallback_chart_on_terminal_free_bodies():
    # unit conjuncts force the bottom-up fixpoint path
    g = conj_grammar("S", [("S", [["A"], ["B"]]),
                           ("A", [["B"]]),
                           ("B", [["A"]]),
                           ("A", [["a"]]),
                           ("B", [["a"]])], terminals={"a"})
    assert cg_member(g, "a")
    assert not cg_member(g, "aa")


# --- enumeration -------------------------------------------------------------

def test_enumerate_examples():
    g = samples.three_block_conj()
    assert cg_enumerate(g, 7) == {"bacaca"}
    assert cg_enumerate(g, 3) == frozenset()
    tiny = conj_grammar("S", [("S", [["a"]])], terminals={"a"})
    assert cg_enumerate(tiny, 1) == {"a"}


def test_enumerate_matches_membership_brute_force():
    g = samples.three_block_conj()
    enum = cg_enumerate(g, 6)
    brute = set()
    for length in range(7):
        for combo in itertools.product(sorted(g.terminals), repeat=length):
            w = "".join(combo)
            if cg_member(g, w):
                brute.add(w)
    assert set(enum) == brute


def test_enumerate_monotone():
    g = samples.two_block_cfg()
    for n in range(8):
        assert cg_enumerate(g, n) <= cg_enumerate(g, n + 1)


def test_enumerate_includes_empty_string():
    g = conj_grammar("S", [("S", [["a", "S"]]), ("S", [[]])], terminals={"a"})
    assert cg_enumerate(g, 2) == {"", "a", "aa"}


# --- independent CFG oracle (Earley) -----------------------------------------

def earley_accepts(g, w):
    """Plain Earley recognizer; independent of the span chart."""
    rules = [(r.head, r.conjuncts[0]) for r in g.rules]
    assert all(len(r.conjuncts) == 1 for r in g.rules)
    n = len(w)
    chart = [set() for _ in range(n + 1)]

    def predict_complete(k):
        changed = True
        while changed:
            changed = False
            for item in list(chart[k]):
                ri, dot, start = item
                head, body = rules[ri]
                if dot < len(body) and body[dot] in g.nonterminals:
                    for rj, (h2, _) in enumerate(rules):
                        if h2 == body[dot]:
                            if (rj, 0, k) not in chart[k]:
                                chart[k].add((rj, 0, k))
                                changed = True
                elif dot == len(body):
                    for item2 in list(chart[start]):
                        rj, dot2, start2 = item2
                        h2, body2 = rules[rj]
                        if dot2 < len(body2) and body2[dot2] == head:
                            cand = (rj, dot2 + 1, start2)
                            if cand not in chart[k]:
                                chart[k].add(cand)
                                changed = True

    for ri, (head, _) in enumerate(rules):
        if head == g.start:
            chart[0].add((ri, 0, 0))
    predict_complete(0)
    for k, ch in enumerate(w):
        for item in chart[k]:
            ri, dot, start = item
            head, body = rules[ri]
            if dot < len(body) and body[dot] == ch:
                chart[k + 1].add((ri, dot + 1, start))
        predict_complete(k + 1)
    return any(rules[ri][0] == g.start and dot == len(rules[ri][1]) and start == 0
               for ri, dot, start in chart[n])


def test_cfg_compatibility_against_earley():
    g = samples.two_block_cfg()
    for length in range(9):
        for combo in itertools.product("abc", repeat=length):
            w = "".join(combo)
            expected = earley_accepts(g, w)
            assert cg_member(g, w) == expected == two_block_predicate(w), w


def test_conjunction_semantics():
    g = conj_grammar("S", [("S", [["A"], ["B"]]),
                           ("A", [["a", "A"]]), ("A", [["a"]]),
                           ("B", [["a", "a", "B"]]), ("B", [[]])],
                     terminals={"a"})
    for length in range(9):
        w = "a" * length
        both = cg_member(g, w, start="A") and cg_member(g, w, start="B")
        assert cg_member(g, w) == both


# --- derivations ---------------------------------------------------------------

def test_derivation_replay_three_block():
    g = samples.three_block_conj()
    d = cg_derivation(g, "bacaca")
    assert isinstance(d, CGDerivation)
    assert replay_derivation(g, d)
    assert cg_derivation(g, "bacaa") is None


def test_derivation_replay_cvp_and_eps():
    g = cvp_grammar()
    for w in ["1", "b0", "abb0", "b10"]:
        d = cg_derivation(g, w)
        if d is not None:
            assert replay_derivation(g, d)
    eps_g = conj_grammar("S", [("S", [["A", "B"], ["B"]]),
                               ("A", [[]]), ("B", [[]])], terminals=set())
    d = cg_derivation(eps_g, "")
    assert d is not None and replay_derivation(eps_g, d)


def test_derivation_is_deterministic():
    g = samples.three_block_conj()
    assert cg_derivation(g, "bacaca") == cg_derivation(g, "bacaca")


def test_derivation_exports():
    g = samples.three_block_conj()
    d = cg_derivation(g, "bacaca")
    blob = d.to_json(g)
    assert '"head": "S"' in blob
    latex = d.to_latex()
    assert latex.startswith(r"\infer") and "S(bacaca)" in latex


def test_replay_rejects_tampered_tree():
    import dataclasses
    g = samples.three_block_conj()
    d = cg_derivation(g, "bacaca")
    bad = dataclasses.replace(d.root, symbol="A")
    assert not replay_derivation(g, CGDerivation("bacaca", bad))


# --- rule-shape check ----------------------------------------------------------

def test_odd_form_pass():
    g = conj_grammar("S", [("S", [["a"]])], terminals={"a"})
    assert check_odd_normal_form(g).passed
    assert check_odd_normal_form(samples.three_block_quotient()).passed


def test_odd_form_three_block_violations():
    report = check_odd_normal_form(samples.three_block_conj())
    assert not report.passed
    assert any("S -> b B c A & b A c B" in v for v in report.violations)


def test_odd_form_referenced_start():
    g = conj_grammar("S", [("S", [["a", "S"]]), ("S", [["b"]])],
                     terminals={"a", "b"})
    report = check_odd_normal_form(g)
    assert not report.passed
    assert any("referenced" in v for v in report.violations)
