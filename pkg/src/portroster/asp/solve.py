"""Answer-set computation.

An interpretation I is an answer set of P when I is a minimal model of the
reduct of Ground(P) with respect to I (the reduct keeps the rules whose whole
body is true in I; minimality re-evaluates bodies against each subset).

Two engines implement the same contract:

* ``exhaustive`` is the textbook reference: it grounds naively, iterates every
  subset of the head atoms of the ground program (no answer set can contain an
  atom that heads no rule), and keeps the subsets that are minimal models of
  their own reduct, checking minimality against every proper subset.

* ``guided`` grounds with derivability pruning and runs a depth-first search
  over truth assignments of the candidate atoms with sound propagation
  (violated-rule pruning, forced heads, support counting, aggregate bounds).
  Every total candidate is verified with the reduct/minimality check before it
  is emitted, so pruning only affects speed, never the result.

Exceeding the step or time budget raises SolveBudgetError; an exhausted search
returning an empty list is a proof that no answer set exists.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional

from .errors import SolveBudgetError
from .eval import (
    UNDEFINED,
    body_satisfied,
    compare,
    eval_aggregate,
    rule_satisfied,
)
from .ground import GroundingLimits, ground_program, naive_ground
from .syntax import (
    AGGREGATE,
    INT,
    NEGATIVE,
    POSITIVE,
    AggregateAtom,
    GroundSet,
    Literal,
    Program,
    Rule,
    StandardAtom,
    Term,
    num,
)

TRUE = 1
FALSE = 0
UNDEC = -1


@dataclass(frozen=True)
class SolveLimits:
    max_steps: Optional[int] = None
    timeout: Optional[float] = None  # seconds of wall clock
    grounding: GroundingLimits = field(default_factory=GroundingLimits)


DEFAULT_LIMITS = SolveLimits()

# The exhaustive engine enumerates 2^n subsets; past this it cannot finish.
_EXHAUSTIVE_ATOM_CAP = 24


class _Ticker:
    def __init__(self, limits: SolveLimits):
        self.steps = 0
        self.max_steps = limits.max_steps
        self.deadline = (
            time.monotonic() + limits.timeout if limits.timeout is not None else None
        )

    def tick(self, amount: int = 1):
        self.steps += amount
        if self.max_steps is not None and self.steps > self.max_steps:
            raise SolveBudgetError("solver step budget exceeded")
        if (
            self.deadline is not None
            and self.steps % 1024 < amount
            and time.monotonic() > self.deadline
        ):
            raise SolveBudgetError("solver timeout exceeded")


# ---------------------------------------------------------------------------
# reduct / answer-set verification
# ---------------------------------------------------------------------------


def reduct_rules(rules: list[Rule], interp: frozenset) -> list[Rule]:
    return [r for r in rules if body_satisfied(r, interp)]


def is_answer_set_ground(
    interp: frozenset,
    rules: list[Rule],
    limits: SolveLimits = DEFAULT_LIMITS,
) -> bool:
    """Check a candidate against ground rules: model of reduct, and minimal."""
    interp = frozenset(interp)
    red = reduct_rules(rules, interp)
    if not all(any(h in interp for h in r.heads) for r in red):
        return False
    if not interp:
        return True
    return not _has_proper_submodel(red, interp, limits)


def is_answer_set(
    interp,
    program: Program,
    limits: SolveLimits = DEFAULT_LIMITS,
) -> bool:
    """True iff interp is a minimal model of the reduct of Ground(P) w.r.t. it."""
    ground = naive_ground(program, limits.grounding)
    return is_answer_set_ground(frozenset(interp), list(ground.rules), limits)


# ---------------------------------------------------------------------------
# search-time simplification (guided engine only)
# ---------------------------------------------------------------------------


def _constant_aggregate_value(agg: AggregateAtom) -> Optional[bool]:
    """Truth of an aggregate whose set has no satisfiable pair left."""
    value = eval_aggregate(agg.func, [])
    if value is UNDEFINED:
        return False
    return compare(value, agg.cmp, agg.guard)


def _simplify_for_search(rules: list[Rule]) -> list[Rule]:
    """Iteratively drop rules and literals that candidate atoms cannot satisfy.

    Candidate atoms are the head atoms of the remaining rules; no answer set
    contains anything else.  Positive literals on non-candidates kill their
    rule, negative ones are vacuously true, aggregate pairs with a
    non-candidate conjunct never contribute.  Each transformation preserves
    body truth values for every interpretation within the candidates, hence
    the answer sets.
    """
    current = rules
    while True:
        candidates = {h for r in current for h in r.heads}
        rebuilt: list[Rule] = []
        changed = False
        for rule in current:
            body: list[Literal] = []
            dead = False
            for lit in rule.body:
                if lit.kind == POSITIVE:
                    if lit.atom in candidates:
                        body.append(lit)
                    else:
                        dead = True
                        break
                elif lit.kind == NEGATIVE:
                    if lit.atom in candidates:
                        body.append(lit)
                    else:
                        changed = True
                elif lit.kind == AGGREGATE:
                    agg = lit.atom
                    kept = [
                        pair
                        for pair in agg.set_term.pairs
                        if all(a in candidates for a in pair[1])
                    ]
                    if len(kept) == len(agg.set_term.pairs):
                        body.append(lit)
                    elif kept:
                        changed = True
                        body.append(
                            Literal(
                                AGGREGATE,
                                AggregateAtom(
                                    agg.func,
                                    GroundSet(tuple(kept)),
                                    agg.cmp,
                                    agg.guard,
                                ),
                            )
                        )
                    else:
                        changed = True
                        verdict = _constant_aggregate_value(agg)
                        if not verdict:
                            dead = True
                            break
                else:  # pragma: no cover - builtins are evaluated at grounding
                    body.append(lit)
            if dead:
                changed = True
                continue
            rebuilt.append(rule if len(body) == len(rule.body) else Rule(rule.heads, tuple(body)))
        if not changed:
            return rebuilt
        current = rebuilt


# ---------------------------------------------------------------------------
# the propagating truth-assignment search
# ---------------------------------------------------------------------------


def _range_verdict(cmp: str, guard: Term, lo: int, hi: int) -> int:
    """Three-valued truth of "value cmp guard" for an integer value in [lo, hi]."""
    if guard.kind != INT:
        # count/sum produce integers; against a symbol guard the comparison
        # has the same verdict for every integer value.
        return TRUE if compare(num(0), cmp, guard) else FALSE
    g = guard.value
    if cmp == "<":
        return TRUE if hi < g else (FALSE if lo >= g else UNDEC)
    if cmp == "<=":
        return TRUE if hi <= g else (FALSE if lo > g else UNDEC)
    if cmp == ">":
        return TRUE if lo > g else (FALSE if hi <= g else UNDEC)
    if cmp == ">=":
        return TRUE if lo >= g else (FALSE if hi < g else UNDEC)
    if cmp == "=":
        return TRUE if lo == hi == g else (FALSE if g < lo or g > hi else UNDEC)
    if cmp == "!=":
        return FALSE if lo == hi == g else (TRUE if g < lo or g > hi else UNDEC)
    raise ValueError("unknown comparator %r" % cmp)


class _Conflict(Exception):
    pass


class _Propagator:
    """Truth assignment search over ground rules with sound pruning.

    In answer-set mode (support=True) the extra propagations are justified by
    minimality: every atom of an answer set heads a rule of the reduct, and an
    atom whose disjunctive sibling occurs nowhere else cannot join it in an
    answer set.  In plain model-finding mode (support=False, used for the
    minimality check) only forced heads and violated-rule pruning apply.
    """

    def __init__(
        self,
        rules: list[Rule],
        *,
        support: bool,
        ticker: _Ticker,
        extra_atoms: tuple[StandardAtom, ...] = (),
    ):
        self.support_mode = support
        self.ticker = ticker

        ids: dict[StandardAtom, int] = {}
        atoms: list[StandardAtom] = []

        def intern(atom: StandardAtom) -> int:
            idx = ids.get(atom)
            if idx is None:
                idx = len(atoms)
                ids[atom] = idx
                atoms.append(atom)
            return idx

        r_heads: list[tuple[int, ...]] = []
        r_pos: list[tuple[int, ...]] = []
        r_neg: list[tuple[int, ...]] = []
        r_aggs: list[tuple[int, ...]] = []

        a_func: list[str] = []
        a_cmp: list[str] = []
        a_guard: list[Term] = []
        a_rule: list[int] = []
        a_pairs: list[tuple[int, ...]] = []  # global pair ids

        p_conj: list[tuple[int, ...]] = []
        p_weight: list[Optional[int]] = []  # int value of first constant, or None
        p_elem: list[Term] = []

        for rule in rules:
            ri = len(r_heads)
            heads = tuple(intern(a) for a in rule.heads)
            pos: list[int] = []
            neg: list[int] = []
            aggs: list[int] = []
            for lit in rule.body:
                if lit.kind == POSITIVE:
                    pos.append(intern(lit.atom))
                elif lit.kind == NEGATIVE:
                    neg.append(intern(lit.atom))
                elif lit.kind == AGGREGATE:
                    agg = lit.atom
                    ai = len(a_func)
                    a_func.append(agg.func)
                    a_cmp.append(agg.cmp)
                    a_guard.append(agg.guard)
                    a_rule.append(ri)
                    pair_ids = []
                    for terms, conj in agg.set_term.pairs:
                        pi = len(p_conj)
                        p_conj.append(tuple(intern(a) for a in conj))
                        elem = terms[0]
                        p_elem.append(elem)
                        p_weight.append(elem.value if elem.kind == INT else None)
                        pair_ids.append(pi)
                    a_pairs.append(tuple(pair_ids))
                    aggs.append(ai)
            r_heads.append(heads)
            r_pos.append(tuple(pos))
            r_neg.append(tuple(neg))
            r_aggs.append(tuple(aggs))

        for atom in extra_atoms:
            intern(atom)

        n = len(atoms)
        self.atoms = atoms
        self.ids = ids
        self.r_heads = r_heads
        self.r_pos = r_pos
        self.r_neg = r_neg
        self.r_aggs = r_aggs
        self.a_func = a_func
        self.a_cmp = a_cmp
        self.a_guard = a_guard
        self.a_rule = a_rule
        self.a_pairs = a_pairs
        self.p_conj = p_conj
        self.p_weight = p_weight
        self.p_elem = p_elem

        nr = len(r_heads)
        na = len(a_func)
        npairs = len(p_conj)

        # occurrence lists
        self.occ_head = [[] for _ in range(n)]
        self.occ_pos = [[] for _ in range(n)]
        self.occ_neg = [[] for _ in range(n)]
        self.occ_pair = [[] for _ in range(n)]
        for ri in range(nr):
            for a in r_heads[ri]:
                self.occ_head[a].append(ri)
            for a in r_pos[ri]:
                self.occ_pos[a].append(ri)
            for a in r_neg[ri]:
                self.occ_neg[a].append(ri)
        for pi in range(npairs):
            for a in p_conj[pi]:
                self.occ_pair[a].append(pi)
        self.pair_agg = [0] * npairs
        for ai in range(na):
            for pi in a_pairs[ai]:
                self.pair_agg[pi] = ai

        # mutable state
        self.val = [UNDEC] * n
        self.rc_pos_false = [0] * nr
        self.rc_pos_undec = [len(r_pos[ri]) for ri in range(nr)]
        self.rc_neg_true = [0] * nr
        self.rc_neg_undec = [len(r_neg[ri]) for ri in range(nr)]
        self.rc_agg_false = [0] * nr
        self.rc_agg_undec = [len(r_aggs[ri]) for ri in range(nr)]
        self.rc_heads_true = [0] * nr
        self.rc_heads_undec = [len(r_heads[ri]) for ri in range(nr)]
        self.pc_false = [0] * npairs
        self.pc_undec = [len(p_conj[pi]) for pi in range(npairs)]
        self.ag_true = [0] * na  # pairs fully true
        self.ag_dead = [0] * na  # pairs with a false conjunct
        self.ag_sum_true = [0] * na
        self.ag_sum_maybe = [0] * na
        self.ag_nonint_true = [0] * na
        self.ag_nonint_maybe = [0] * na
        self.ag_status = [UNDEC] * na
        for ai in range(na):
            for pi in a_pairs[ai]:
                w = p_weight[pi]
                if w is None:
                    self.ag_nonint_maybe[ai] += 1
                else:
                    self.ag_sum_maybe[ai] += w
            status = self._agg_status(ai)
            self.ag_status[ai] = status
            if status != UNDEC:
                # decided before any pair news (no pairs, or a constant
                # verdict such as count >= 0); the rule counter must agree
                self.rc_agg_undec[a_rule[ai]] -= 1
                if status == FALSE:
                    self.rc_agg_false[a_rule[ai]] += 1

        self.support = [len(self.occ_head[a]) for a in range(n)]
        self.dead_rule = [False] * nr

        self.trail: list = []
        self.queue: list[tuple[int, int]] = []

    # -- state mutation with undo -----------------------------------------

    def _set(self, array, idx, value, trail=True):
        if trail:
            self.trail.append((array, idx, array[idx]))
        array[idx] = value

    def mark(self) -> int:
        return len(self.trail)

    def undo_to(self, mark: int):
        trail = self.trail
        while len(trail) > mark:
            array, idx, old = trail.pop()
            array[idx] = old

    # -- aggregate status ---------------------------------------------------

    def _agg_status(self, ai: int) -> int:
        func = self.a_func[ai]
        if func == "#count":
            lo = self.ag_true[ai]
            hi = lo + (
                len(self.a_pairs[ai]) - self.ag_true[ai] - self.ag_dead[ai]
            )
            return _range_verdict(self.a_cmp[ai], self.a_guard[ai], lo, hi)
        if func == "#sum":
            if self.ag_nonint_true[ai]:
                return FALSE  # sum over a symbol is undefined
            lo = self.ag_sum_true[ai]
            hi = lo + self.ag_sum_maybe[ai]
            verdict = _range_verdict(self.a_cmp[ai], self.a_guard[ai], lo, hi)
            if verdict == TRUE and self.ag_nonint_maybe[ai]:
                return UNDEC  # a pending symbol pair could still ruin the sum
            return verdict
        # #min / #max: evaluate only once every pair is decided
        if self.ag_true[ai] + self.ag_dead[ai] < len(self.a_pairs[ai]):
            return UNDEC
        bag = [
            self.p_elem[pi]
            for pi in self.a_pairs[ai]
            if self.pc_false[pi] == 0
        ]
        value = eval_aggregate(func, sorted(bag, key=lambda t: (t.kind, str(t.value))))
        if value is UNDEFINED:
            return FALSE
        return TRUE if compare(value, self.a_cmp[ai], self.a_guard[ai]) else FALSE

    # -- assignment and propagation ----------------------------------------

    def assign(self, atom: int, value: int):
        current = self.val[atom]
        if current != UNDEC:
            if current != value:
                raise _Conflict()
            return
        self._set(self.val, atom, value)
        self.queue.append((atom, value))

    def propagate(self):
        queue = self.queue
        while queue:
            atom, value = queue.pop()
            self.ticker.tick()
            if value == TRUE:
                for ri in self.occ_pos[atom]:
                    self._set(self.rc_pos_undec, ri, self.rc_pos_undec[ri] - 1)
                    self._check_rule(ri)
                for ri in self.occ_neg[atom]:
                    self._set(self.rc_neg_undec, ri, self.rc_neg_undec[ri] - 1)
                    self._set(self.rc_neg_true, ri, self.rc_neg_true[ri] + 1)
                    self._rule_went_dead(ri)
                for ri in self.occ_head[atom]:
                    self._set(self.rc_heads_undec, ri, self.rc_heads_undec[ri] - 1)
                    self._set(self.rc_heads_true, ri, self.rc_heads_true[ri] + 1)
                    if self.support_mode:
                        self._choice_complement(ri, atom)
            else:
                for ri in self.occ_pos[atom]:
                    self._set(self.rc_pos_undec, ri, self.rc_pos_undec[ri] - 1)
                    self._set(self.rc_pos_false, ri, self.rc_pos_false[ri] + 1)
                    self._rule_went_dead(ri)
                for ri in self.occ_neg[atom]:
                    self._set(self.rc_neg_undec, ri, self.rc_neg_undec[ri] - 1)
                    self._check_rule(ri)
                for ri in self.occ_head[atom]:
                    self._set(self.rc_heads_undec, ri, self.rc_heads_undec[ri] - 1)
                    self._check_rule(ri)
            for pi in self.occ_pair[atom]:
                self._update_pair(pi, value)

    def _pair_state(self, pi: int) -> int:
        if self.pc_false[pi]:
            return FALSE
        if self.pc_undec[pi]:
            return UNDEC
        return TRUE

    def _update_pair(self, pi: int, value: int):
        before = self._pair_state(pi)
        self._set(self.pc_undec, pi, self.pc_undec[pi] - 1)
        if value == FALSE:
            self._set(self.pc_false, pi, self.pc_false[pi] + 1)
        after = self._pair_state(pi)
        if after == before:
            return
        ai = self.pair_agg[pi]
        w = self.p_weight[pi]
        if after == TRUE:
            self._set(self.ag_true, ai, self.ag_true[ai] + 1)
            if w is None:
                self._set(self.ag_nonint_true, ai, self.ag_nonint_true[ai] + 1)
                self._set(self.ag_nonint_maybe, ai, self.ag_nonint_maybe[ai] - 1)
            else:
                self._set(self.ag_sum_true, ai, self.ag_sum_true[ai] + w)
                self._set(self.ag_sum_maybe, ai, self.ag_sum_maybe[ai] - w)
        else:  # after == FALSE and before == UNDEC
            self._set(self.ag_dead, ai, self.ag_dead[ai] + 1)
            if w is None:
                self._set(self.ag_nonint_maybe, ai, self.ag_nonint_maybe[ai] - 1)
            else:
                self._set(self.ag_sum_maybe, ai, self.ag_sum_maybe[ai] - w)
        status = self._agg_status(ai)
        if status != self.ag_status[ai]:
            old = self.ag_status[ai]
            self._set(self.ag_status, ai, status)
            ri = self.a_rule[ai]
            if old == UNDEC:
                self._set(self.rc_agg_undec, ri, self.rc_agg_undec[ri] - 1)
            elif old == FALSE:
                self._set(self.rc_agg_false, ri, self.rc_agg_false[ri] - 1)
            if status == FALSE:
                self._set(self.rc_agg_false, ri, self.rc_agg_false[ri] + 1)
                self._rule_went_dead(ri)
            elif status == UNDEC:
                self._set(self.rc_agg_undec, ri, self.rc_agg_undec[ri] + 1)
                self._check_rule(ri)
            else:
                self._check_rule(ri)

    def _body_dead(self, ri: int) -> bool:
        return (
            self.rc_pos_false[ri] > 0
            or self.rc_neg_true[ri] > 0
            or self.rc_agg_false[ri] > 0
        )

    def _body_true(self, ri: int) -> bool:
        return (
            self.rc_pos_false[ri] == 0
            and self.rc_pos_undec[ri] == 0
            and self.rc_neg_true[ri] == 0
            and self.rc_neg_undec[ri] == 0
            and self.rc_agg_false[ri] == 0
            and self.rc_agg_undec[ri] == 0
        )

    def _rule_went_dead(self, ri: int):
        if self.dead_rule[ri] or not self._body_dead(ri):
            return
        self._set(self.dead_rule, ri, True)
        if not self.support_mode:
            return
        for h in self.r_heads[ri]:
            self._set(self.support, h, self.support[h] - 1)
            if self.support[h] == 0:
                if self.val[h] == TRUE:
                    raise _Conflict()
                if self.val[h] == UNDEC:
                    self.assign(h, FALSE)

    def _check_rule(self, ri: int):
        """After a counter change: force or fail when the rule demands it."""
        if self.rc_heads_true[ri] or self._body_dead(ri):
            return
        undec_body = (
            self.rc_pos_undec[ri] + self.rc_neg_undec[ri] + self.rc_agg_undec[ri]
        )
        if undec_body == 0:
            undec = self.rc_heads_undec[ri]
            if undec == 0:
                raise _Conflict()
            if undec == 1:
                for h in self.r_heads[ri]:
                    if self.val[h] == UNDEC:
                        self.assign(h, TRUE)
                        return
            return
        if (
            self.rc_heads_undec[ri] == 0
            and undec_body == 1
            and self.rc_agg_undec[ri] == 0
        ):
            # every head is false and a single standard body literal is
            # undecided: the literal must fall the satisfying way
            if self.rc_pos_undec[ri]:
                for a in self.r_pos[ri]:
                    if self.val[a] == UNDEC:
                        self.assign(a, FALSE)
                        return
            else:
                for a in self.r_neg[ri]:
                    if self.val[a] == UNDEC:
                        self.assign(a, TRUE)
                        return

    def _choice_complement(self, ri: int, assigned_head: int):
        """h1 v h2 :- B with h2 occurring nowhere else: h1 true forces h2 out.

        Keeping h2 as well could never be minimal: dropping it from a model
        leaves every rule satisfied through h1.
        """
        heads = self.r_heads[ri]
        if len(heads) != 2:
            return
        other = heads[0] if heads[1] == assigned_head else heads[1]
        if other == assigned_head or self.val[other] != UNDEC:
            return
        if (
            len(self.occ_head[other]) == 1
            and not self.occ_pos[other]
            and not self.occ_neg[other]
            and not self.occ_pair[other]
        ):
            self.assign(other, FALSE)

    # -- initial propagation -------------------------------------------------

    def initialize(self, fixed_false: Iterator[int] = (), fixed_true: Iterator[int] = ()):
        for atom in fixed_false:
            self.assign(atom, FALSE)
        for atom in fixed_true:
            self.assign(atom, TRUE)
        if self.support_mode:
            for a in range(len(self.atoms)):
                if self.val[a] == UNDEC and self.support[a] == 0:
                    self.assign(a, FALSE)
                    continue
                if self.val[a] == UNDEC and self.occ_head[a]:
                    # an atom whose every deriving rule negates it can never
                    # belong to an answer set (the constraint pattern)
                    if all(a in self.r_neg[ri] for ri in self.occ_head[a]):
                        self.assign(a, FALSE)
        for ri in range(len(self.r_heads)):
            self._rule_went_dead(ri)
            self._check_rule(ri)
        self.propagate()

    # -- depth-first enumeration ---------------------------------------------

    def search(self, order: list[int], first_value: int) -> Iterator[list[int]]:
        """Yield every total assignment reachable under the sound pruning."""
        second = TRUE if first_value == FALSE else FALSE
        stack: list[tuple[int, int, int, int]] = []  # atom, tried, mark, ptr
        ptr = 0
        failed = False
        while True:
            if not failed:
                while ptr < len(order) and self.val[order[ptr]] != UNDEC:
                    ptr += 1
                if ptr == len(order):
                    yield self.val
                    failed = True  # continue exploring after the leaf
                    continue
                atom = order[ptr]
                mark = self.mark()
                stack.append((atom, first_value, mark, ptr))
                try:
                    self.assign(atom, first_value)
                    self.propagate()
                except _Conflict:
                    self.queue.clear()
                    failed = True
                continue
            # backtrack
            while stack:
                atom, tried, mark, ptr = stack.pop()
                self.undo_to(mark)
                if tried == first_value:
                    stack.append((atom, second, mark, ptr))
                    try:
                        self.assign(atom, second)
                        self.propagate()
                    except _Conflict:
                        self.queue.clear()
                        continue
                    failed = False
                    break
            else:
                return


# ---------------------------------------------------------------------------
# minimality via submodel search
# ---------------------------------------------------------------------------


def _has_proper_submodel(
    red: list[Rule], interp: frozenset, limits: SolveLimits
) -> bool:
    """Is some proper subset of interp a model of the reduct?

    Bodies are re-evaluated against the subset, so nothing here may assume
    supportedness; only forced heads and violated-rule pruning are used.
    """
    ticker = _Ticker(limits)
    prop = _Propagator(red, support=False, ticker=ticker, extra_atoms=tuple(interp))
    in_m = [prop.ids[a] for a in sorted(interp, key=StandardAtom.key)]
    member = set(in_m)
    fixed_false = [a for a in range(len(prop.atoms)) if a not in member]
    try:
        prop.initialize(fixed_false=fixed_false)
    except _Conflict:
        return False
    for assignment in prop.search(in_m, FALSE):
        if any(assignment[a] == FALSE for a in in_m):
            return True
    return False


# ---------------------------------------------------------------------------
# engines
# ---------------------------------------------------------------------------


def _enumerate_exhaustive(
    program: Program, limit: Optional[int], limits: SolveLimits
) -> list[frozenset]:
    ground = naive_ground(program, limits.grounding)
    rules = list(ground.rules)
    candidates = sorted(
        {h for r in rules for h in r.heads}, key=StandardAtom.key
    )
    n = len(candidates)
    if n > _EXHAUSTIVE_ATOM_CAP:
        raise SolveBudgetError(
            "exhaustive engine cannot enumerate %d candidate atoms" % n
        )
    ticker = _Ticker(limits)
    results: list[frozenset] = []
    for mask in range(1 << n):
        ticker.tick()
        interp = frozenset(
            candidates[i] for i in range(n) if mask & (1 << i)
        )
        red = reduct_rules(rules, interp)
        if not all(any(h in interp for h in r.heads) for r in red):
            continue
        minimal = True
        sub = (mask - 1) & mask
        while mask:
            ticker.tick()
            subset = frozenset(
                candidates[i] for i in range(n) if sub & (1 << i)
            )
            if all(rule_satisfied(r, subset) for r in red):
                minimal = False
                break
            if sub == 0:
                break
            sub = (sub - 1) & mask
        if minimal:
            results.append(interp)
            if limit is not None and len(results) >= limit:
                break
    return results


def _enumerate_guided(
    program: Program,
    limit: Optional[int],
    limits: SolveLimits,
    branch_key: Optional[Callable[[StandardAtom], object]],
) -> list[frozenset]:
    ground = ground_program(program, limits.grounding, prune_set_pairs=True)
    rules = list(ground.rules)
    simplified = _simplify_for_search(rules)
    ticker = _Ticker(limits)
    prop = _Propagator(simplified, support=True, ticker=ticker)

    guess_atoms = set()
    for rule in simplified:
        if len(rule.heads) > 1:
            guess_atoms.update(rule.heads)

    def sort_key(atom: StandardAtom):
        if branch_key is None:
            return atom.key()
        return (branch_key(atom), atom.key())

    decided_first = sorted(
        (prop.ids[a] for a in guess_atoms), key=lambda i: sort_key(prop.atoms[i])
    )
    rest = sorted(
        (
            i
            for i in range(len(prop.atoms))
            if prop.atoms[i] not in guess_atoms
        ),
        key=lambda i: sort_key(prop.atoms[i]),
    )
    order = decided_first + rest

    try:
        prop.initialize()
    except _Conflict:
        return []

    results: list[frozenset] = []
    for assignment in prop.search(order, TRUE):
        candidate = frozenset(
            prop.atoms[i] for i in range(len(prop.atoms)) if assignment[i] == TRUE
        )
        if is_answer_set_ground(candidate, rules, limits):
            results.append(candidate)
            if limit is not None and len(results) >= limit:
                break
    return results


def enumerate_answer_sets(
    program: Program,
    limit: Optional[int] = None,
    *,
    engine: str = "guided",
    limits: SolveLimits = DEFAULT_LIMITS,
    branch_key: Optional[Callable[[StandardAtom], object]] = None,
) -> list[frozenset]:
    """All (or the first ``limit``) answer sets, in a deterministic order.

    The two engines return the same set of answer sets; their emission order
    differs (subset order for exhaustive, branch order for guided).
    """
    if engine == "exhaustive":
        return _enumerate_exhaustive(program, limit, limits)
    if engine == "guided":
        return _enumerate_guided(program, limit, limits, branch_key)
    raise ValueError("unknown engine %r" % engine)
