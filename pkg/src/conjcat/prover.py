"""Cut-free backward proof search for the two-sided calculi and the
one-sided cyclic calculus, plus grammar membership via proof search.

Every inference rule's premises carry strictly fewer connectives than its
conclusion, so plain memoized recursion terminates without loop checks.
Two prunings keep desk-scale searches tractable, neither losing
completeness:

- a primitive-count necessary condition: counting occurrences per
  primitive (numerators positive, denominators negative, additive
  choices widened to an interval), a derivable sequent must admit a zero
  balance;

- additive rules fire in full bursts: a connective chain is decomposed
  straight down to its non-additive leaves instead of one step at a
  time.  Partial decompositions can always be permuted away (a chain
  needed as a unit is matched by the identity axiom before any
  decomposition), and skipping the intermediate chain states shrinks the
  memoized search space combinatorially.  Returned proof trees re-expand
  the bursts into single rule applications.

Memo entries record calculus-level facts, so a cache may be shared
between calls and across threads; concurrent queries return the same
results as sequential ones.
"""

import itertools
import json
import sys
from dataclasses import dataclass
from typing import Optional, Union

from .errors import BudgetError, CalculusError, UndeclaredSymbolError
from .grammars import CALCULI, Calculus, LambekGrammar
from .syntax import (And, Atom, BOT, Category, Const, Formula, LDiv, MacllSequent,
                     ONE, Or, Par, Plus, Prim, Prod, RDiv, Sequent, TOP, Times,
                     With, formula_str, is_multiplicative, macll_negate,
                     macll_sequent_str, sequent_latex, sequent_str)

DEFAULT_BUDGET = 10_000_000

# backward search recurses once per connective of the goal sequent
if sys.getrecursionlimit() < 20_000:
    sys.setrecursionlimit(20_000)

_Interval = dict[str, tuple[int, int]]
_MISS = object()


class SearchCache:
    """Shareable memo tables, keyed by calculus."""

    def __init__(self):
        self.tables: dict[str, dict] = {}
        self.intervals: dict = {}
        self.formula_keys: dict = {}

    def table(self, name: str) -> dict:
        return self.tables.setdefault(name, {})


@dataclass(frozen=True)
class ProofTree:
    conclusion: Union[Sequent, MacllSequent]
    rule: str
    premises: tuple["ProofTree", ...] = ()

    def to_json(self) -> str:
        return json.dumps(_proof_json(self), sort_keys=True, indent=2) + "\n"

    def to_latex(self) -> str:
        return _proof_latex(self)

    def rules(self) -> list[str]:
        out = [self.rule]
        for p in self.premises:
            out.extend(p.rules())
        return out


def _proof_json(t: ProofTree):
    return {"sequent": str(t.conclusion),
            "rule": t.rule,
            "premises": [_proof_json(p) for p in t.premises]}


_LATEX_RULES = {
    "(\\->)": r"({\backslash}\to)", "(->\\)": r"(\to{\backslash})",
    "(/->)": r"({/}\to)", "(->/)": r"(\to{/})",
    "(.->)": r"({\cdot}\to)", "(->.)": r"(\to{\cdot})",
    "(&->)_1": r"({\wedge}\to)_1", "(&->)_2": r"({\wedge}\to)_2",
    "(->&)": r"(\to{\wedge})",
    "(+->)": r"({\vee}\to)", "(->+)_1": r"(\to{\vee})_1", "(->+)_2": r"(\to{\vee})_2",
    "(1)": "(1)", "(bot)": r"(\bot)", "(top)": r"(\top)",
    "(times)": r"(\otimes)", "(par)": r"(\parr)",
    "(with)": r"(\with)", "(plus)_1": r"(\oplus)_1", "(plus)_2": r"(\oplus)_2",
    "(cycle)": r"(\mathrm{cycle})",
}


def _conclusion_latex(c) -> str:
    if isinstance(c, Sequent):
        return sequent_latex(c)
    from .syntax import formula_latex
    return r"{}\to " + ", ".join(formula_latex(f) for f in c.formulas)


def _proof_latex(t: ProofTree) -> str:
    if not t.premises and t.rule == "axiom":
        return _conclusion_latex(t.conclusion)
    label = _LATEX_RULES.get(t.rule, t.rule)
    premises = " & ".join(_proof_latex(p) for p in t.premises)
    return rf"\infer[{label}]{{{_conclusion_latex(t.conclusion)}}}{{{premises}}}"


# ---------------------------------------------------------------------------
# Primitive-count pruning
# ---------------------------------------------------------------------------

def _category_interval(c: Category, memo: dict) -> _Interval:
    hit = memo.get(c)
    if hit is not None:
        return hit
    if isinstance(c, Prim):
        out = {c.name: (1, 1)}
    elif isinstance(c, Prod):
        out = _add(_category_interval(c.left, memo), _category_interval(c.right, memo))
    elif isinstance(c, (LDiv, RDiv)):
        out = _add(_category_interval(c.num, memo),
                   _neg(_category_interval(c.den, memo)))
    else:  # And / Or: either operand may be chosen
        out = _hull(_category_interval(c.left, memo), _category_interval(c.right, memo))
    memo[c] = out
    return out


def _formula_interval(f: Formula, memo: dict) -> Optional[_Interval]:
    """None means "contains the additive truth", which matches anything."""
    hit = memo.get(f, _MISS)
    if hit is not _MISS:
        return hit
    if isinstance(f, Atom):
        out: Optional[_Interval] = {f.name: (-1, -1) if f.negated else (1, 1)}
    elif isinstance(f, Const):
        out = None if f is TOP else {}
    else:
        left = _formula_interval(f.left, memo)
        right = _formula_interval(f.right, memo)
        if left is None or right is None:
            out = None
        elif isinstance(f, (Times, Par)):
            out = _add(left, right)
        else:
            out = _hull(left, right)
    memo[f] = out
    return out


def _add(a: _Interval, b: _Interval) -> _Interval:
    out = dict(a)
    for name, (lo, hi) in b.items():
        alo, ahi = out.get(name, (0, 0))
        out[name] = (alo + lo, ahi + hi)
    return out


def _neg(a: _Interval) -> _Interval:
    return {name: (-hi, -lo) for name, (lo, hi) in a.items()}


def _hull(a: _Interval, b: _Interval) -> _Interval:
    out = {}
    for name in a.keys() | b.keys():
        alo, ahi = a.get(name, (0, 0))
        blo, bhi = b.get(name, (0, 0))
        out[name] = (min(alo, blo), max(ahi, bhi))
    return out


def _balanced(total: _Interval) -> bool:
    return all(lo <= 0 <= hi for lo, hi in total.values())


# ---------------------------------------------------------------------------
# Two-sided search
# ---------------------------------------------------------------------------

_SeqKey = tuple[tuple[Category, ...], Category]


def _and_leaves(c: Category) -> tuple[Category, ...]:
    if isinstance(c, And):
        return _and_leaves(c.left) + _and_leaves(c.right)
    return (c,)


def _or_leaves(c: Category) -> tuple[Category, ...]:
    if isinstance(c, Or):
        return _or_leaves(c.left) + _or_leaves(c.right)
    return (c,)


class _TwoSidedSearch:
    def __init__(self, calculus: Calculus, budget: int, cache: SearchCache):
        self.calculus = calculus
        self.budget = budget
        self.memo = cache.table(calculus.name)
        self.intervals = cache.intervals

    def _spend(self):
        self.budget -= 1
        if self.budget < 0:
            raise BudgetError("proof search exhausted its node budget")

    def derivable(self, ants: tuple[Category, ...], succ: Category) -> bool:
        key = (ants, succ)
        hit = self.memo.get(key, _MISS)
        if hit is not _MISS:
            return hit is not None
        if not self._maybe_balanced(ants, succ):
            self.memo[key] = None
            return False
        size = sum(c.size for c in ants) + succ.size
        for rule, data, premises in self._expansions(ants, succ):
            self._spend()
            assert all(sum(c.size for c in p) + s.size < size
                       for p, s in premises) or not premises, \
                "premise must lose a connective"
            if all(self.derivable(*p) for p in premises):
                self.memo[key] = (rule, data, premises)
                return True
        self.memo[key] = None
        return False

    def _maybe_balanced(self, ants, succ) -> bool:
        total = _neg(_category_interval(succ, self.intervals))
        for c in ants:
            total = _add(total, _category_interval(c, self.intervals))
        return _balanced(total)

    def _expansions(self, ants: tuple[Category, ...], succ: Category):
        restricted = self.calculus.lambek_restriction
        n = len(ants)
        if n == 1 and ants[0] == succ:
            yield ("axiom", None, ())
        # Invertible rules are forced: their premises are equiderivable
        # with the conclusion, so nothing else needs to be tried.
        for h in range(n):
            if isinstance(ants[h], Prod):
                a = ants[h]
                yield ("(.->)", h,
                       ((ants[:h] + (a.left, a.right) + ants[h + 1:], succ),))
                return
        if isinstance(succ, LDiv) and not (restricted and n == 0):
            yield ("(->\\)", None, (((succ.den,) + ants, succ.num),))
            return
        if isinstance(succ, RDiv) and not (restricted and n == 0):
            yield ("(->/)", None, ((ants + (succ.den,), succ.num),))
            return
        if isinstance(succ, And):
            yield ("and_right", None,
                   tuple((ants, leaf) for leaf in _and_leaves(succ)))
            return
        for h in range(n):
            if isinstance(ants[h], Or):
                yield ("or_left", h,
                       tuple((ants[:h] + (leaf,) + ants[h + 1:], succ)
                             for leaf in _or_leaves(ants[h])))
                return
        # choice rules
        for h in range(n):
            if isinstance(ants[h], And):
                for i, leaf in enumerate(_and_leaves(ants[h])):
                    yield ("and_left", (h, i),
                           ((ants[:h] + (leaf,) + ants[h + 1:], succ),))
        if isinstance(succ, Or):
            for i, leaf in enumerate(_or_leaves(succ)):
                yield ("or_right", i, ((ants, leaf),))
        if isinstance(succ, Prod):
            for k in range(n + 1):
                if restricted and (k == 0 or k == n):
                    continue  # an empty part is underivable anyway
                yield ("(->.)", k, ((ants[:k], succ.left), (ants[k:], succ.right)))
        for h in range(n):
            a = ants[h]
            if isinstance(a, LDiv):
                for l in range(h + 1):
                    if restricted and l == h:
                        continue
                    yield ("(\\->)", (h, l),
                           ((ants[l:h], a.den),
                            (ants[:l] + (a.num,) + ants[h + 1:], succ)))
            elif isinstance(a, RDiv):
                for r in range(h + 1, n + 1):
                    if restricted and r == h + 1:
                        continue
                    yield ("(/->)", (h, r),
                           ((ants[h + 1:r], a.den),
                            (ants[:h] + (a.num,) + ants[r:], succ)))

    # -- proof reconstruction (bursts re-expanded into single steps) --------

    def rebuild(self, ants: tuple[Category, ...], succ: Category) -> ProofTree:
        rule, data, premises = self.memo[(ants, succ)]
        if rule == "and_left":
            h, i = data
            subtree = self.rebuild(*premises[0])
            return self._expand_and_left(ants, succ, h, ants[h], i, subtree)
        if rule == "or_right":
            subtree = self.rebuild(*premises[0])
            return self._expand_or_right(ants, succ, data, subtree)
        if rule == "and_right":
            subtrees = [self.rebuild(*p) for p in premises]
            return self._expand_and_right(ants, succ, iter(subtrees))
        if rule == "or_left":
            h = data
            subtrees = [self.rebuild(*p) for p in premises]
            return self._expand_or_left(ants, succ, h, ants[h], iter(subtrees))
        return ProofTree(Sequent(ants, succ), rule,
                         tuple(self.rebuild(*p) for p in premises))

    def _expand_and_left(self, ants, succ, h, chain, i, subtree) -> ProofTree:
        if not isinstance(chain, And):
            return subtree
        here = Sequent(ants[:h] + (chain,) + ants[h + 1:], succ)
        left_count = len(_and_leaves(chain.left))
        if i < left_count:
            child = self._expand_and_left(ants, succ, h, chain.left, i, subtree)
            return ProofTree(here, "(&->)_1", (child,))
        child = self._expand_and_left(ants, succ, h, chain.right, i - left_count, subtree)
        return ProofTree(here, "(&->)_2", (child,))

    def _expand_or_right(self, ants, chain, i, subtree) -> ProofTree:
        if not isinstance(chain, Or):
            return subtree
        here = Sequent(ants, chain)
        left_count = len(_or_leaves(chain.left))
        if i < left_count:
            child = self._expand_or_right(ants, chain.left, i, subtree)
            return ProofTree(here, "(->+)_1", (child,))
        child = self._expand_or_right(ants, chain.right, i - left_count, subtree)
        return ProofTree(here, "(->+)_2", (child,))

    def _expand_and_right(self, ants, chain, subtrees) -> ProofTree:
        if not isinstance(chain, And):
            return next(subtrees)
        left = self._expand_and_right(ants, chain.left, subtrees)
        right = self._expand_and_right(ants, chain.right, subtrees)
        return ProofTree(Sequent(ants, chain), "(->&)", (left, right))

    def _expand_or_left(self, ants, succ, h, chain, subtrees) -> ProofTree:
        if not isinstance(chain, Or):
            return next(subtrees)
        left = self._expand_or_left(ants, succ, h, chain.left, subtrees)
        right = self._expand_or_left(ants, succ, h, chain.right, subtrees)
        here = Sequent(ants[:h] + (chain,) + ants[h + 1:], succ)
        return ProofTree(here, "(+->)", (left, right))


def _resolve_calculus(calculus: Union[str, Calculus]) -> Calculus:
    if isinstance(calculus, Calculus):
        return calculus
    try:
        return CALCULI[calculus]
    except KeyError:
        raise CalculusError(f"unknown calculus {calculus!r}") from None


def _check_language(calculus: Calculus, s: Sequent):
    if calculus.additives:
        return
    for cat in s.antecedent + (s.succedent,):
        if not is_multiplicative(cat):
            raise CalculusError(
                f"{calculus.name} does not admit additive connectives: {cat}")


def derivable(calculus: Union[str, Calculus], s: Sequent,
              budget: int = DEFAULT_BUDGET, cache: Optional[SearchCache] = None) -> bool:
    calculus = _resolve_calculus(calculus)
    _check_language(calculus, s)
    search = _TwoSidedSearch(calculus, budget, cache or SearchCache())
    return search.derivable(s.antecedent, s.succedent)


def prove(calculus: Union[str, Calculus], s: Sequent,
          budget: int = DEFAULT_BUDGET,
          cache: Optional[SearchCache] = None) -> Optional[ProofTree]:
    """A cut-free proof of `s`, or None when none exists.

    Raises BudgetError when the node budget runs out, which is a distinct
    outcome from "not derivable".
    """
    calculus = _resolve_calculus(calculus)
    _check_language(calculus, s)
    search = _TwoSidedSearch(calculus, budget, cache or SearchCache())
    if not search.derivable(s.antecedent, s.succedent):
        return None
    return search.rebuild(s.antecedent, s.succedent)


def categories_equivalent(calculus: Union[str, Calculus], a: Category, b: Category,
                          budget: int = DEFAULT_BUDGET,
                          cache: Optional[SearchCache] = None) -> bool:
    """Both directed sequents between `a` and `b` are derivable."""
    cache = cache or SearchCache()
    return (derivable(calculus, Sequent((a,), b), budget, cache)
            and derivable(calculus, Sequent((b,), a), budget, cache))


# ---------------------------------------------------------------------------
# One-sided cyclic search
# ---------------------------------------------------------------------------

class _MacllSearch:
    def __init__(self, budget: int, cache: SearchCache):
        self.budget = budget
        self.memo = cache.table("MACLL")
        self.intervals = cache.intervals
        self.keys = cache.formula_keys

    def _spend(self):
        self.budget -= 1
        if self.budget < 0:
            raise BudgetError("proof search exhausted its node budget")

    def _formula_key(self, f: Formula) -> str:
        key = self.keys.get(f)
        if key is None:
            key = formula_str(f)
            self.keys[f] = key
        return key

    def canonical(self, formulas: tuple[Formula, ...]) -> tuple[Formula, ...]:
        """The rotation with the least rendering; rotation never changes
        derivability, so one representative stands for the whole orbit."""
        n = len(formulas)
        if n == 1:
            return formulas
        keys = [self._formula_key(f) for f in formulas]
        best = min(range(n), key=lambda i: tuple(keys[i:] + keys[:i]))
        return formulas[best:] + formulas[:best]

    def derivable(self, formulas: tuple[Formula, ...]) -> bool:
        key = self.canonical(formulas)
        hit = self.memo.get(key, _MISS)
        if hit is not _MISS:
            return hit is not None
        if not self._maybe_balanced(key):
            self.memo[key] = None
            return False
        size = sum(f.size for f in key)
        for rule, rotated, premises in self._expansions(key):
            self._spend()
            assert rule in ("axiom", "(1)", "(top)") or all(
                sum(f.size for f in p) < size for p in premises), \
                "premise must lose a connective"
            if all(self.derivable(p) for p in premises):
                self.memo[key] = (rule, rotated, premises)
                return True
        self.memo[key] = None
        return False

    def _maybe_balanced(self, formulas) -> bool:
        total: _Interval = {}
        for f in formulas:
            interval = _formula_interval(f, self.intervals)
            if interval is None:
                return True
            total = _add(total, interval)
        return _balanced(total)

    def _expansions(self, seq: tuple[Formula, ...]):
        n = len(seq)
        for i in range(n):
            rot = seq[i:] + seq[:i]
            head, rest = rot[0], rot[1:]
            if n == 2 and rot[1] == macll_negate(head):
                yield ("axiom", rot, ())
            if head is ONE and n == 1:
                yield ("(1)", rot, ())
            if head is TOP:
                yield ("(top)", rot, ())
            if head is BOT and n >= 2:
                yield ("(bot)", rot, (rest,))
            if isinstance(head, Par):
                yield ("(par)", rot, ((head.left, head.right) + rest,))
            if isinstance(head, With):
                yield ("(with)", rot, ((head.left,) + rest, (head.right,) + rest))
            if isinstance(head, Plus):
                yield ("(plus)_1", rot, ((head.left,) + rest,))
                yield ("(plus)_2", rot, ((head.right,) + rest,))
            if isinstance(head, Times):
                for t in range(n):
                    yield ("(times)", rot,
                           (rot[t + 1:] + (head.left,), (head.right,) + rot[1:t + 1]))

    def rebuild(self, formulas: tuple[Formula, ...]) -> ProofTree:
        key = self.canonical(formulas)
        rule, rotated, premises = self.memo[key]
        node = ProofTree(MacllSequent(rotated), rule,
                         tuple(self.rebuild(p) for p in premises))
        if rotated != formulas:
            node = ProofTree(MacllSequent(formulas), "(cycle)", (node,))
        return node


def macll_derivable(s: MacllSequent, budget: int = DEFAULT_BUDGET,
                    cache: Optional[SearchCache] = None) -> bool:
    search = _MacllSearch(budget, cache or SearchCache())
    return search.derivable(s.formulas)


def prove_macll(s: MacllSequent, budget: int = DEFAULT_BUDGET,
                cache: Optional[SearchCache] = None) -> Optional[ProofTree]:
    """A cut-free proof modulo rotation, or None.  Rotations show up as
    explicit "(cycle)" steps in the returned tree."""
    search = _MacllSearch(budget, cache or SearchCache())
    if not search.derivable(s.formulas):
        return None
    return search.rebuild(s.formulas)


# ---------------------------------------------------------------------------
# Grammar membership
# ---------------------------------------------------------------------------

def lambek_member(g: LambekGrammar, w: str, budget: int = DEFAULT_BUDGET,
                  cache: Optional[SearchCache] = None) -> bool:
    """True when some lexicon choice yields a derivable sequent.

    The empty string is a member exactly when the calculus admits empty
    antecedents and the bare target is derivable.  Alphabet symbols
    without lexicon entries reject; undeclared symbols are an error.
    """
    cache = cache or SearchCache()
    calculus = CALCULI[g.calculus]
    if w == "":
        if calculus.lambek_restriction:
            return False
        return derivable(calculus, Sequent((), g.target), budget, cache)
    choices = []
    for ch in w:
        entry = g.lexicon.get(ch)
        if entry is None:
            if ch in g.alphabet:
                return False
            raise UndeclaredSymbolError(f"symbol {ch!r} has no lexicon entry")
        choices.append(entry)
    search = _TwoSidedSearch(calculus, budget, cache)
    for combo in itertools.product(*choices):
        if search.derivable(tuple(combo), g.target):
            return True
        # unused budget carries over between lexicon choices
    return False


def lambek_enumerate(g: LambekGrammar, max_len: int, budget: int = DEFAULT_BUDGET,
                     cache: Optional[SearchCache] = None) -> frozenset[str]:
    """All members of length at most `max_len`, by exhaustive query."""
    cache = cache or SearchCache()
    letters = sorted(g.lexicon)
    out = set()
    if lambek_member(g, "", budget, cache):
        out.add("")
    for length in range(1, max_len + 1):
        for combo in itertools.product(letters, repeat=length):
            w = "".join(combo)
            if lambek_member(g, w, budget, cache):
                out.add(w)
    return frozenset(out)
