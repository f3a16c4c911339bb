"""Membership, derivations, enumeration, and shape checks for conjunctive grammars.

Derivability follows the logical reading: terminal axioms a(a) and the
empty axiom, a concatenation rule, and one inference per grammar rule
requiring every conjunct to derive the same string.
"""

import json
from dataclasses import dataclass
from typing import Optional

from .errors import BudgetError, GrammarError, UndeclaredSymbolError
from .grammars import ConjGrammar, Rule

DEFAULT_ENUM_BUDGET = 2_000_000


def nullable_nonterminals(g: ConjGrammar) -> frozenset[str]:
    """Least fixpoint of "some rule has every conjunct built from nullable
    nonterminals (or empty)"."""
    nullable: set[str] = set()
    changed = True
    while changed:
        changed = False
        for rule in g.rules:
            if rule.head in nullable:
                continue
            if all(all(sym in nullable for sym in body) for body in rule.conjuncts):
                nullable.add(rule.head)
                changed = True
    return frozenset(nullable)


def _check_word(g: ConjGrammar, w: str):
    for ch in w:
        if ch not in g.terminals:
            raise UndeclaredSymbolError(f"symbol {ch!r} is not a terminal of the grammar")


# ---------------------------------------------------------------------------
# Derivation trees
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CGNode:
    """One derivation node.

    Leaves are terminal axioms (`rule_index is None`, `children is None`)
    or the empty-string axiom (empty `symbol`).  Internal nodes cite a
    grammar rule and carry one child sequence per conjunct.
    """

    symbol: str
    span: tuple[int, int]
    rule_index: Optional[int] = None
    children: Optional[tuple[tuple["CGNode", ...], ...]] = None


@dataclass(frozen=True)
class CGDerivation:
    word: str
    root: CGNode

    def to_json(self, grammar: Optional[ConjGrammar] = None) -> str:
        return json.dumps(_cg_node_json(self.root, self.word, grammar),
                          sort_keys=True, indent=2) + "\n"

    def to_latex(self) -> str:
        return _cg_node_latex(self.root, self.word)


def _cg_node_json(node: CGNode, w: str, g: Optional[ConjGrammar]):
    out = {"head": node.symbol if node.symbol else "eps",
           "span": list(node.span),
           "rule": None,
           "children": None}
    if node.rule_index is not None:
        out["rule"] = str(g.rules[node.rule_index]) if g else node.rule_index
        out["children"] = [[_cg_node_json(c, w, g) for c in group]
                           for group in node.children]
    return out


def _proposition(symbol: str, w: str, span: tuple[int, int]) -> str:
    text = w[span[0]:span[1]]
    head = symbol if symbol else r"\varepsilon"
    return f"{head}({text if text else chr(92) + 'varepsilon'})"


def _cg_node_latex(node: CGNode, w: str) -> str:
    if node.rule_index is None:
        return _proposition(node.symbol, w, node.span)
    groups = []
    for group in node.children:
        body = "".join(c.symbol if c.symbol else "" for c in group)
        premises = " & ".join(_cg_node_latex(c, w) for c in group)
        groups.append(rf"\infer{{{_proposition(body, w, node.span)}}}{{{premises}}}")
    return rf"\infer{{{_proposition(node.symbol, w, node.span)}}}{{{' & '.join(groups)}}}"


# ---------------------------------------------------------------------------
# Membership
# ---------------------------------------------------------------------------

class _Chart:
    """Span table shared by the two membership strategies.

    When every conjunct body contains a terminal, recursion always moves
    to a strictly smaller span, so a demand-driven table is safe.  With
    terminal-free bodies (unit conjuncts, nullable chains) nonterminals
    on one span can depend on each other, and the chart falls back to
    processing spans by increasing length, iterating each span to a
    fixpoint.
    """

    def __init__(self, g: ConjGrammar, w: str):
        self.g = g
        self.w = w
        self.nullable = nullable_nonterminals(g)
        self.rules_by_head: dict[str, list[tuple[int, Rule]]] = {}
        for idx, rule in enumerate(g.rules):
            self.rules_by_head.setdefault(rule.head, []).append((idx, rule))
        self.topdown = all(any(sym in g.terminals for sym in body)
                           for rule in g.rules for body in rule.conjuncts if body)
        # (nt, i, j) -> backpointer | None;  backpointer = (rule_index, splits)
        self.table: dict[tuple[str, int, int], Optional[tuple]] = {}
        if not self.topdown:
            self._fill_bottom_up()

    # -- shared ------------------------------------------------------------

    def derives(self, nt: str, i: int, j: int) -> bool:
        if i == j:
            return nt in self.nullable
        if self.topdown:
            return self._derive_topdown(nt, i, j)
        return (nt, i, j) in self.table

    def _match_splits(self, body: tuple[str, ...], i: int, j: int,
                      live: Optional[set[str]] = None) -> Optional[tuple]:
        """Leftmost split of w[i:j] into the body items, or None.

        `live` restricts which same-span nonterminal entries may be used
        (bottom-up fixpoint snapshot); irrelevant in demand-driven mode.
        """
        if not body:
            return () if i == j else None

        def walk(idx: int, pos: int) -> Optional[list]:
            if idx == len(body):
                return [] if pos == j else None
            sym = body[idx]
            if sym in self.g.terminals:
                if pos < j and self.w[pos] == sym:
                    rest = walk(idx + 1, pos + 1)
                    if rest is not None:
                        return [(sym, pos, pos + 1)] + rest
                return None
            for mid in range(pos, j + 1):
                if mid == pos:
                    ok = sym in self.nullable
                elif live is not None and pos == i and mid == j:
                    ok = sym in live
                else:
                    ok = self.derives(sym, pos, mid)
                if ok:
                    rest = walk(idx + 1, mid)
                    if rest is not None:
                        return [(sym, pos, mid)] + rest
            return None

        out = walk(0, i)
        return tuple(out) if out is not None else None

    # -- demand-driven -----------------------------------------------------

    def _derive_topdown(self, nt: str, i: int, j: int) -> bool:
        key = (nt, i, j)
        if key in self.table:
            return self.table[key] is not None
        self.table[key] = None
        for idx, rule in self.rules_by_head.get(nt, ()):
            splits = []
            for body in rule.conjuncts:
                split = self._match_splits(body, i, j)
                if split is None:
                    break
                splits.append(split)
            else:
                self.table[key] = (idx, tuple(splits))
                return True
        return False

    # -- bottom-up fixpoint ------------------------------------------------

    def _fill_bottom_up(self):
        n = len(self.w)
        for length in range(1, n + 1):
            for i in range(n - length + 1):
                j = i + length
                cell: set[str] = set()
                changed = True
                while changed:
                    changed = False
                    for idx, rule in enumerate(self.g.rules):
                        if rule.head in cell:
                            continue
                        splits = []
                        for body in rule.conjuncts:
                            split = self._match_splits(body, i, j, live=cell)
                            if split is None:
                                break
                            splits.append(split)
                        else:
                            cell.add(rule.head)
                            self.table[(rule.head, i, j)] = (idx, tuple(splits))
                            changed = True

    # -- tree extraction ---------------------------------------------------

    def tree(self, nt: str, i: int, j: int) -> CGNode:
        if i == j:
            return self._nullable_tree(nt, i)
        back = self.table[(nt, i, j)]
        idx, splits = back
        groups = []
        for split in splits:
            group = []
            for sym, a, b in split:
                if sym in self.g.terminals:
                    group.append(CGNode(sym, (a, b)))
                elif a == b:
                    group.append(self._nullable_tree(sym, a))
                else:
                    group.append(self.tree(sym, a, b))
            if not group:
                group = [CGNode("", (i, i))]
            groups.append(tuple(group))
        return CGNode(nt, (i, j), idx, tuple(groups))

    def _nullable_tree(self, nt: str, pos: int) -> CGNode:
        # Replay of the nullable fixpoint; witnesses added earlier never
        # reference later ones, so the recursion is well founded.
        witness: dict[str, int] = {}
        order: list[str] = []
        changed = True
        while changed and nt not in witness:
            changed = False
            for idx, rule in enumerate(self.g.rules):
                if rule.head in witness:
                    continue
                if all(all(sym in witness for sym in body) for body in rule.conjuncts):
                    witness[rule.head] = idx
                    order.append(rule.head)
                    changed = True

        def build(sym: str) -> CGNode:
            idx = witness[sym]
            rule = self.g.rules[idx]
            groups = []
            for body in rule.conjuncts:
                group = tuple(build(s) for s in body)
                if not group:
                    group = (CGNode("", (pos, pos)),)
                groups.append(group)
            return CGNode(sym, (pos, pos), idx, tuple(groups))

        return build(nt)


def cg_member(g: ConjGrammar, w: str, start: Optional[str] = None) -> bool:
    """Does the grammar derive `w` from `start` (default: the start symbol)?"""
    _check_word(g, w)
    start = g.start if start is None else start
    if start not in g.nonterminals:
        raise GrammarError(f"unknown nonterminal {start!r}")
    if w == "":
        return start in nullable_nonterminals(g)
    return _Chart(g, w).derives(start, 0, len(w))


def cg_derivation(g: ConjGrammar, w: str,
                  start: Optional[str] = None) -> Optional[CGDerivation]:
    """A derivation tree for `w`, or None.  The tree is deterministic:
    rules in declaration order, leftmost splits."""
    _check_word(g, w)
    start = g.start if start is None else start
    chart = _Chart(g, w)
    if not chart.derives(start, 0, len(w)):
        return None
    return CGDerivation(w, chart.tree(start, 0, len(w)))


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------

def cg_enumerate(g: ConjGrammar, max_len: int,
                 budget: int = DEFAULT_ENUM_BUDGET,
                 start: Optional[str] = None) -> frozenset[str]:
    """All derivable strings of length at most `max_len`.

    Computed as the length-capped least fixpoint over per-nonterminal
    string sets; every proposition in a derivation concerns a substring
    of the derived string, so the cap loses nothing.
    """
    if max_len < 0:
        raise ValueError("max_len must be nonnegative")
    start = g.start if start is None else start
    languages: dict[str, set[str]] = {nt: set() for nt in g.nonterminals}

    def body_language(body: tuple[str, ...]) -> set[str]:
        out = {""}
        for sym in body:
            piece = {sym} if sym in g.terminals else languages[sym]
            out = {u + v for u in out for v in piece if len(u) + len(v) <= max_len}
            if not out:
                return out
        return out

    changed = True
    while changed:
        changed = False
        for rule in g.rules:
            derived = body_language(rule.conjuncts[0])
            for body in rule.conjuncts[1:]:
                if not derived:
                    break
                derived &= body_language(body)
            new = derived - languages[rule.head]
            if new:
                languages[rule.head].update(new)
                changed = True
        if sum(len(s) for s in languages.values()) > budget:
            raise BudgetError("enumeration exceeded its string budget")
    return frozenset(languages.get(start, set()))


# ---------------------------------------------------------------------------
# Rule-shape check
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OddFormReport:
    passed: bool
    violations: tuple[str, ...]

    def __str__(self):
        if self.passed:
            return "odd normal form: pass"
        return "odd normal form: FAIL\n" + "\n".join(f"  - {v}" for v in self.violations)


def check_odd_normal_form(g: ConjGrammar) -> OddFormReport:
    """Every rule must be A->a, a conjunction of N-terminal-N bodies, or a
    start rule S->aA, the latter only when S is never referenced."""
    violations = []
    referenced = {sym for rule in g.rules for body in rule.conjuncts
                  for sym in body if sym in g.nonterminals}
    for rule in g.rules:
        if _is_terminal_rule(g, rule) or _is_triple_rule(g, rule):
            continue
        if _is_start_extension_rule(g, rule):
            if rule.head != g.start:
                violations.append(
                    f"rule {rule}: only the start symbol may have a symbol-"
                    f"nonterminal rule")
            elif g.start in referenced:
                violations.append(
                    f"rule {rule}: start symbol is referenced in a rule body")
            continue
        violations.append(f"rule {rule}: not of any permitted shape")
    return OddFormReport(not violations, tuple(violations))


def _is_terminal_rule(g: ConjGrammar, rule: Rule) -> bool:
    return (len(rule.conjuncts) == 1 and len(rule.conjuncts[0]) == 1
            and rule.conjuncts[0][0] in g.terminals)


def _is_triple_rule(g: ConjGrammar, rule: Rule) -> bool:
    return all(len(body) == 3
               and body[0] in g.nonterminals
               and body[1] in g.terminals
               and body[2] in g.nonterminals
               for body in rule.conjuncts)


def _is_start_extension_rule(g: ConjGrammar, rule: Rule) -> bool:
    return (len(rule.conjuncts) == 1 and len(rule.conjuncts[0]) == 2
            and rule.conjuncts[0][0] in g.terminals
            and rule.conjuncts[0][1] in g.nonterminals)


# ---------------------------------------------------------------------------
# Independent replay of a derivation (used by tests and the CLI)
# ---------------------------------------------------------------------------

def replay_derivation(g: ConjGrammar, d: CGDerivation, start: Optional[str] = None) -> bool:
    """Check a derivation bottom-up against the rules, spans, and word."""
    start = g.start if start is None else start
    root = d.root
    if root.symbol != start or root.span != (0, len(d.word)):
        return False
    return _replay_node(g, d.word, root)


def _replay_node(g: ConjGrammar, w: str, node: CGNode) -> bool:
    i, j = node.span
    if node.rule_index is None:
        if node.symbol == "":
            return i == j
        return (node.symbol in g.terminals and j == i + 1 and w[i] == node.symbol)
    if not (0 <= node.rule_index < len(g.rules)):
        return False
    rule = g.rules[node.rule_index]
    if rule.head != node.symbol or len(node.children) != len(rule.conjuncts):
        return False
    for body, group in zip(rule.conjuncts, node.children):
        if not body:
            if len(group) != 1 or group[0].symbol != "" or group[0].span != (i, i):
                return False
            continue
        if tuple(c.symbol for c in group) != body:
            return False
        pos = i
        for child in group:
            if child.span[0] != pos:
                return False
            pos = child.span[1]
        if pos != j:
            return False
        if not all(_replay_node(g, w, child) for child in group):
            return False
    return True
