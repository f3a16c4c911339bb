import random
import threading

import pytest

import conjcat.samples as samples
from conjcat.errors import BudgetError, CalculusError
from conjcat.fuzz import conjunction_goals, derivable_pool, random_sequent
from conjcat.grammars import CALCULI, lambek_grammar
from conjcat.prover import (ProofTree, SearchCache, categories_equivalent,
                            derivable, lambek_enumerate, lambek_member,
                            macll_derivable, prove, prove_macll)
from conjcat.syntax import (And, BOT, LDiv, ONE, Or, Par,
                            Plus, Prim, Prod, RDiv, Sequent, TOP, Times, With,
                            macll_image, macll_negate, parse_category,
                            parse_macll_sequent, parse_sequent,
                            substitute_primitive)

S = parse_sequent
p, q, r, s = (Prim(n) for n in "pqrs")


# --- independent replay of proof trees --------------------------------------

def _find_unique(pairs):
    assert pairs, "no rule instantiation matches"
    return True


def replay_proof(calculus, tree: ProofTree) -> bool:
    calc = CALCULI[calculus]
    seq = tree.conclusion
    ants, succ = seq.antecedent, seq.succedent
    kids = [k.conclusion for k in tree.premises]
    rule = tree.rule
    ok = False
    if rule == "axiom":
        ok = len(ants) == 1 and ants[0] == succ and not kids
    elif rule == "(->\\)":
        ok = (isinstance(succ, LDiv) and len(kids) == 1
              and kids[0] == Sequent((succ.den,) + ants, succ.num)
              and not (calc.lambek_restriction and not ants))
    elif rule == "(->/)":
        ok = (isinstance(succ, RDiv) and len(kids) == 1
              and kids[0] == Sequent(ants + (succ.den,), succ.num)
              and not (calc.lambek_restriction and not ants))
    elif rule == "(.->)":
        ok = len(kids) == 1 and any(
            isinstance(ants[h], Prod)
            and kids[0] == Sequent(ants[:h] + (ants[h].left, ants[h].right)
                                   + ants[h + 1:], succ)
            for h in range(len(ants)))
    elif rule in ("(&->)_1", "(&->)_2"):
        pick = (lambda a: a.left) if rule.endswith("1") else (lambda a: a.right)
        ok = len(kids) == 1 and any(
            isinstance(ants[h], And)
            and kids[0] == Sequent(ants[:h] + (pick(ants[h]),) + ants[h + 1:], succ)
            for h in range(len(ants)))
    elif rule == "(->&)":
        ok = (isinstance(succ, And) and len(kids) == 2
              and kids[0] == Sequent(ants, succ.left)
              and kids[1] == Sequent(ants, succ.right))
    elif rule in ("(->+)_1", "(->+)_2"):
        side = succ.left if rule.endswith("1") else succ.right
        ok = isinstance(succ, Or) and len(kids) == 1 and kids[0] == Sequent(ants, side)
    elif rule == "(+->)":
        ok = len(kids) == 2 and any(
            isinstance(ants[h], Or)
            and kids[0] == Sequent(ants[:h] + (ants[h].left,) + ants[h + 1:], succ)
            and kids[1] == Sequent(ants[:h] + (ants[h].right,) + ants[h + 1:], succ)
            for h in range(len(ants)))
    elif rule == "(->.)":
        if isinstance(succ, Prod) and len(kids) == 2:
            k = len(kids[0].antecedent)
            ok = (kids[0] == Sequent(ants[:k], succ.left)
                  and kids[1] == Sequent(ants[k:], succ.right))
    elif rule == "(\\->)":
        if len(kids) == 2:
            for h in range(len(ants)):
                a = ants[h]
                if not isinstance(a, LDiv):
                    continue
                for l in range(h + 1):
                    if (kids[0] == Sequent(ants[l:h], a.den)
                            and kids[1] == Sequent(
                                ants[:l] + (a.num,) + ants[h + 1:], succ)):
                        ok = True
    elif rule == "(/->)":
        if len(kids) == 2:
            for h in range(len(ants)):
                a = ants[h]
                if not isinstance(a, RDiv):
                    continue
                for rr in range(h + 1, len(ants) + 1):
                    if (kids[0] == Sequent(ants[h + 1:rr], a.den)
                            and kids[1] == Sequent(
                                ants[:h] + (a.num,) + ants[rr:], succ)):
                        ok = True
    if not ok:
        return False
    return all(replay_proof(calculus, k) for k in tree.premises)


def replay_macll(tree: ProofTree) -> bool:
    fs = tree.conclusion.formulas
    kids = [k.conclusion.formulas for k in tree.premises]
    rule = tree.rule
    head, rest = fs[0], fs[1:]
    ok = False
    if rule == "axiom":
        ok = len(fs) == 2 and fs[1] == macll_negate(fs[0]) and not kids
    elif rule == "(1)":
        ok = fs == (ONE,) and not kids
    elif rule == "(top)":
        ok = head is TOP and not kids
    elif rule == "(bot)":
        ok = head is BOT and len(kids) == 1 and kids[0] == rest
    elif rule == "(par)":
        ok = (isinstance(head, Par) and len(kids) == 1
              and kids[0] == (head.left, head.right) + rest)
    elif rule == "(with)":
        ok = (isinstance(head, With) and len(kids) == 2
              and kids[0] == (head.left,) + rest
              and kids[1] == (head.right,) + rest)
    elif rule in ("(plus)_1", "(plus)_2"):
        side = head.left if rule.endswith("1") else head.right
        ok = isinstance(head, Plus) and len(kids) == 1 and kids[0] == (side,) + rest
    elif rule == "(times)":
        if isinstance(head, Times) and len(kids) == 2:
            t = len(kids[1]) - 1
            ok = (kids[0] == fs[t + 1:] + (head.left,)
                  and kids[1] == (head.right,) + fs[1:t + 1])
    elif rule == "(cycle)":
        if len(kids) == 1 and len(kids[0]) == len(fs):
            n = len(fs)
            ok = any(kids[0] == fs[i:] + fs[:i] for i in range(n))
    if not ok:
        return False
    return all(replay_macll(k) for k in tree.premises)


# --- calculus basics ---------------------------------------------------------

def test_axiom_and_restriction():
    assert derivable("MALC", S("p -> p"))
    assert prove("L", S("-> p/p")) is None
    tree = prove("L*", S("-> p/p"))
    assert tree is not None and replay_proof("L*", tree)


def test_language_violation():
    with pytest.raises(CalculusError):
        prove("L", S("p & q -> p"))
    with pytest.raises(CalculusError):
        derivable("L*", S("-> p + q"))
    derivable("MALC", S("p & q -> p"))


def test_unknown_calculus():
    with pytest.raises(CalculusError):
        prove("XYZ", S("p -> p"))


def test_empty_string_category_sequents():
    tree = prove("MALC*", S(r"-> ((r\r)\((t\t)\q))\q"))
    assert tree is not None and replay_proof("MALC*", tree)
    spine = [rule for rule in tree.rules() if rule != "axiom"]
    assert spine == ["(->\\)", "(\\->)", "(->\\)", "(\\->)", "(->\\)"]
    assert not derivable("MALC*", S(r"t\t, r\r, t\t, r\r, (r\r)\((t\t)\q) -> q"))
    assert not derivable("MALC*", S(r"-> (r\r)\((t\t)\q)"))


def test_lambek_restriction_site_only():
    # nonempty antecedents keep all other rules available under L
    assert derivable("L", S(r"p, p\q -> q"))
    assert derivable("L", S(r"p.q -> p.q"))
    assert derivable("L", S(r"p -> q/(p\q)"))
    # the restriction can bite deep inside a sequent with a nonempty antecedent
    assert not derivable("L", S(r"p -> (q/q).p"))
    assert derivable("L*", S(r"p -> (q/q).p"))


def test_budget_error_is_distinct():
    with pytest.raises(BudgetError):
        prove("MALC*", S(r"p/p, p/p, p/p -> p/p"), budget=2)


def test_equivalences():
    assert categories_equivalent("MALC", parse_category(r"(p\r)&(q\r)"),
                                 parse_category(r"(p+q)\r"))
    assert categories_equivalent("MALC", p, p)
    assert categories_equivalent(
        "MALC", parse_category(r"((p\f)\f)&((q\f)\f)"),
        parse_category(r"((p\f)+(q\f))\f"))
    assert not categories_equivalent("MALC", p, q)


def test_proof_tree_exports():
    tree = prove("MALC", S(r"p, p\q -> q"))
    assert '"rule"' in tree.to_json()
    assert "\\infer" in tree.to_latex()


# --- MACLL -------------------------------------------------------------------

def test_macll_basics():
    assert macll_derivable(parse_macll_sequent("|- ~p, p"))
    tree = prove_macll(parse_macll_sequent("|- 1"))
    assert tree.rule == "(1)" and replay_macll(tree)
    tree = prove_macll(parse_macll_sequent("|- bot, ~p, p"))
    assert tree is not None and replay_macll(tree)
    assert "(bot)" in tree.rules()
    assert not macll_derivable(parse_macll_sequent("|- p, p"))
    assert prove_macll(parse_macll_sequent("|- p, q")) is None


def test_macll_constants():
    assert macll_derivable(parse_macll_sequent("|- top, p"))
    assert macll_derivable(parse_macll_sequent("|- 0, top"))
    assert not macll_derivable(parse_macll_sequent("|- 0"))
    assert not macll_derivable(parse_macll_sequent("|- bot"))
    assert macll_derivable(parse_macll_sequent("|- p*q, ~q@~p"))


def test_macll_cycle():
    seq = parse_macll_sequent("|- p, bot, ~p")
    tree = prove_macll(seq)
    assert tree is not None and replay_macll(tree)


# --- fuzz properties ---------------------------------------------------------

def test_forward_pool_is_derivable():
    rng = random.Random(11)
    cache = SearchCache()
    for name in ("L", "L*", "MALC", "MALC*"):
        pool = derivable_pool(rng, name, steps=300)
        assert all(derivable(name, seq, cache=cache) for seq in pool)


def test_conjunction_invertibility():
    rng = random.Random(23)
    cache = SearchCache()
    goals = conjunction_goals(rng, 200)
    for seq in goals:
        assert derivable("MALC*", seq, cache=cache)
        assert derivable("MALC*", Sequent(seq.antecedent, seq.succedent.left),
                         cache=cache)
        assert derivable("MALC*", Sequent(seq.antecedent, seq.succedent.right),
                         cache=cache)


def test_cut_admissibility():
    rng = random.Random(31)
    cache = SearchCache()
    pool = derivable_pool(rng, "MALC", steps=1200, max_size=6)
    by_succ = {}
    for seq in pool:
        by_succ.setdefault(seq.succedent, []).append(seq)
    checked = 0
    for host in pool:
        for h, cat in enumerate(host.antecedent):
            for donor in by_succ.get(cat, []):
                merged = Sequent(host.antecedent[:h] + donor.antecedent
                                 + host.antecedent[h + 1:], host.succedent)
                if sum(c.size for c in merged.antecedent) + merged.succedent.size > 10:
                    continue
                assert derivable("MALC", merged, cache=cache), (host, donor)
                checked += 1
                if checked >= 200:
                    return
    assert checked >= 200


def test_macll_agreement_with_two_sided():
    rng = random.Random(47)
    cache = SearchCache()
    disagreements = []
    for _ in range(200):
        seq = random_sequent(rng, rng.randint(1, 8))
        two = derivable("MALC*", seq, cache=cache)
        one = macll_derivable(macll_image(seq), cache=cache)
        if two != one:
            disagreements.append(seq)
    assert not disagreements


def test_l_conservativity():
    rng = random.Random(59)
    cache = SearchCache()
    pool = [seq for seq in derivable_pool(rng, "L", steps=600) if seq.antecedent]
    assert len(pool) >= 100
    for seq in pool:
        assert derivable("L", seq, cache=cache)
        assert derivable("MALC", seq, cache=cache)
        assert derivable("L*", seq, cache=cache)
    # and some random sequents where L proves nothing extra
    for _ in range(200):
        seq = random_sequent(rng, rng.randint(1, 6), additives=False)
        if seq.antecedent and derivable("L", seq, cache=cache):
            assert derivable("MALC", seq, cache=cache)


def test_fuzzed_trees_replay():
    rng = random.Random(61)
    cache = SearchCache()
    pool = derivable_pool(rng, "MALC*", steps=250)
    for seq in pool[:120]:
        tree = prove("MALC*", seq, cache=cache)
        assert tree is not None and tree.conclusion == seq
        assert replay_proof("MALC*", tree)


def test_fuzzed_macll_trees_replay():
    rng = random.Random(67)
    cache = SearchCache()
    pool = derivable_pool(rng, "MALC*", steps=300)
    for seq in pool[:120]:
        tree = prove_macll(macll_image(seq), cache=cache)
        assert tree is not None
        assert replay_macll(tree)


# --- grammar membership ------------------------------------------------------

def test_lambek_member_three_block():
    from conjcat.transforms import ccg_to_malc
    g = ccg_to_malc(samples.three_block_ccg())
    cache = SearchCache()
    assert lambek_member(g, "bacaca", cache=cache)
    assert not lambek_member(g, "cab", cache=cache)
    assert not lambek_member(g, "", cache=cache)  # MALC rejects the empty string


def test_lambek_member_epsilon_and_missing_entries():
    g = lambek_grammar({"a": [p]}, RDiv(p, p), "MALC*", alphabet={"a", "b"})
    assert lambek_member(g, "")  # -> p/p
    assert not lambek_member(g, "b")  # alphabet letter without entry rejects
    from conjcat.errors import UndeclaredSymbolError
    with pytest.raises(UndeclaredSymbolError):
        lambek_member(g, "z")


def test_lambek_member_multiple_entries():
    g = lambek_grammar({"a": [p, q]}, Prod(p, q), "L", alphabet={"a"})
    assert lambek_member(g, "aa")
    assert not lambek_member(g, "a")


def test_lambek_enumerate():
    g = lambek_grammar({"a": [p], "b": [LDiv(p, s)]}, s, "L")
    assert lambek_enumerate(g, 3) == {"ab"}


def test_shared_cache_thread_safety():
    g_cache = SearchCache()
    seqs = [random_sequent(random.Random(i), 6) for i in range(40)]
    expected = [derivable("MALC*", sq) for sq in seqs]
    results = {}

    def work(idx):
        results[idx] = derivable("MALC*", seqs[idx], cache=g_cache)

    threads = [threading.Thread(target=work, args=(i,)) for i in range(len(seqs))]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert [results[i] for i in range(len(seqs))] == expected
