"""Critical pairs, local-confluence checking, and Knuth-Bendix completion."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Optional

from .rewrite import (
    DEFAULT_FUEL,
    Certification,
    GREATER,
    LESS,
    ReductionOrder,
    Rule,
    RewritingSystem,
    _reduce,
    _upgrade,
    compare,
    verify_termination,
)
from .words import Word, find_occurrences, print_word

if TYPE_CHECKING:  # avoids an import cycle; Presentation lives with the family code
    from .family import Presentation


@dataclass(frozen=True)
class CriticalPair:
    """Two one-step reducts of a minimal word where two rule lhs overlap.

    ``source`` reduces to ``left`` via rule ``rule_i`` at ``pos_i`` and to
    ``right`` via rule ``rule_j`` at ``pos_j``.  ``kind`` records whether
    the overlap was a suffix-prefix staircase or a containment of one lhs
    in the other.
    """

    source: Word
    left: Word
    right: Word
    rule_i: int
    rule_j: int
    pos_i: int
    pos_j: int
    kind: str


def _pairs_for_rules(rules) -> list[CriticalPair]:
    out: list[CriticalPair] = []
    seen: set[tuple[Word, frozenset]] = set()

    def add(source, left, right, i, j, pi, pj, kind):
        if left == right:
            return
        key = (source, frozenset((left, right)))
        if key in seen:
            return
        seen.add(key)
        out.append(CriticalPair(source, left, right, i, j, pi, pj, kind))

    for i, (l1, r1) in enumerate(rules):
        for j, (l2, r2) in enumerate(rules):
            # staircase: proper suffix of l1 = proper prefix of l2
            for t in range(1, min(len(l1), len(l2))):
                if l1[len(l1) - t:] == l2[:t]:
                    source = l1 + l2[t:]
                    add(source, r1 + l2[t:], l1[:len(l1) - t] + r2,
                        i, j, 0, len(l1) - t, "suffix_prefix")
            # containment of l2 in l1 (any position, boundaries included);
            # needed for soundness on systems that are not inter-reduced
            if i != j and len(l2) <= len(l1):
                if len(l2) == len(l1):
                    if l1 == l2:
                        add(l1, r1, r2, i, j, 0, 0, "containment")
                    continue
                for p in find_occurrences(l1, l2):
                    add(l1, r1, l1[:p] + r2 + l1[p + len(l2):],
                        i, j, 0, p, "containment")
    return out


def critical_pairs(system: RewritingSystem) -> list[CriticalPair]:
    """All critical pairs of the system, deduplicated by (source, reduct set)."""
    return _pairs_for_rules(system.rule_pairs())


@dataclass(frozen=True)
class ConfluenceFailure:
    pair: CriticalPair
    left_normal_form: Word
    right_normal_form: Word


@dataclass(frozen=True)
class LocalConfluenceReport:
    joinable: bool
    pairs_checked: int
    failures: tuple[ConfluenceFailure, ...] = ()
    system: Optional[RewritingSystem] = None

    def message(self) -> str:
        if self.joinable:
            return f"locally confluent ({self.pairs_checked} critical pairs joinable)"
        f = self.failures[0]
        return (f"critical pair at {print_word(f.pair.source)} does not join: "
                f"{print_word(f.left_normal_form)} vs {print_word(f.right_normal_form)}")


def check_local_confluence(system: RewritingSystem,
                           fuel: int = DEFAULT_FUEL) -> LocalConfluenceReport:
    """Reduce both sides of every critical pair to normal form and compare."""
    pairs = system.rule_pairs()
    failures = []
    cps = critical_pairs(system)
    for cp in cps:
        nl = _reduce(pairs, cp.left, fuel)
        nr = _reduce(pairs, cp.right, fuel)
        if nl != nr:
            failures.append(ConfluenceFailure(cp, nl, nr))
    if failures:
        return LocalConfluenceReport(False, len(cps), tuple(failures))
    upgraded = system.with_certification(
        _upgrade(system.certification, Certification.LOCALLY_CONFLUENT))
    return LocalConfluenceReport(True, len(cps), (), upgraded)


def is_length_non_increasing(system: RewritingSystem) -> bool:
    """True iff every rule satisfies |lhs| >= |rhs|."""
    return all(len(r.lhs) >= len(r.rhs) for r in system.rules)


@dataclass(frozen=True)
class CompletionStats:
    pairs_processed: int = 0
    rules_added: int = 0
    rules_removed: int = 0
    steps: int = 0


@dataclass(frozen=True)
class CompletionReport:
    outcome: str  # "completed" | "limit-exceeded" | "unorientable"
    system: Optional[RewritingSystem]
    stats: CompletionStats
    equation: Optional[tuple[Word, Word]] = None

    @property
    def completed(self) -> bool:
        return self.outcome == "completed"


def knuth_bendix(presentation: "Presentation", order: ReductionOrder,
                 max_rules: int = 200, max_steps: int = 5000,
                 fuel: int = DEFAULT_FUEL) -> CompletionReport:
    """Standard completion: orient, overlap, repair, inter-reduce.

    Equations are processed FIFO and normalized before orientation; after
    each rule addition, rules whose lhs became reducible are removed and
    requeued, and reducible rhs sides are re-normalized.  The outcome is
    ``completed`` exactly when the pair queue empties within the limits,
    and a completed system is self-checked (locally confluent and
    terminating under ``order``) before being returned.
    """
    if max_rules < 1 or max_steps < 1:
        raise ValueError("limits must be positive")
    for letter in order.precedence:
        if letter not in presentation.alphabet:
            raise ValueError(f"order letter {letter!r} not in presentation alphabet")

    queue: deque[tuple[Word, Word]] = deque(presentation.equations)
    live: list[tuple[Word, Word]] = []
    pairs_processed = rules_added = rules_removed = steps = 0

    def report(outcome, system=None, equation=None):
        return CompletionReport(outcome, system,
                                CompletionStats(pairs_processed, rules_added,
                                                rules_removed, steps),
                                equation)

    while queue:
        steps += 1
        if steps > max_steps:
            return report("limit-exceeded")
        u, v = queue.popleft()
        pairs_processed += 1
        u = _reduce(live, u, fuel)
        v = _reduce(live, v, fuel)
        if u == v:
            continue
        c = compare(order, u, v)
        if c == 0:
            return report("unorientable", equation=(u, v))
        lhs, rhs = (u, v) if c == GREATER else (v, u)
        if not lhs:
            return report("unorientable", equation=(u, v))

        # inter-reduce against the new rule before installing it
        kept: list[tuple[Word, Word]] = []
        for l, r in live:
            if lhs in l:
                queue.append((l, r))
                rules_removed += 1
            else:
                kept.append((l, r))
        live = kept
        live.append((lhs, rhs))
        rules_added += 1
        if len(live) > max_rules:
            return report("limit-exceeded")
        live = [(l, _reduce(live, r, fuel)) for l, r in live]

        for cp in _pairs_for_rules(live):
            # only pairs involving the new rule are genuinely new, but
            # requeuing duplicates is harmless: they normalize to equal
            # words and are discarded
            if cp.rule_i == len(live) - 1 or cp.rule_j == len(live) - 1:
                queue.append((cp.left, cp.right))

    system = RewritingSystem(presentation.alphabet,
                             tuple(Rule(l, r) for l, r in sorted(live)))
    lc = check_local_confluence(system, fuel)
    term = verify_termination(lc.system if lc.system else system, order)
    if not (lc.joinable and term.certified):  # pragma: no cover - self-check
        raise AssertionError("completion produced a non-complete system")
    return report("completed", system=term.system)
