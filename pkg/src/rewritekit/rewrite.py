"""Rules, rewriting systems, reduction to normal form, and termination
certification via weighted-shortlex reduction orders.

The rewriting strategy is fixed: always rewrite at the leftmost matching
position, and among rules matching there, the one with the lowest index
wins.  On a complete system the normal form is strategy-independent, so
this choice only pins down traces and makes every run reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from itertools import permutations, product
from typing import Mapping, Optional

from .words import Alphabet, Word, parse_word, print_word

LESS, EQUAL, GREATER = -1, 0, 1

DEFAULT_FUEL = 10**6


class FuelExhausted(RuntimeError):
    """A reduction exceeded its step budget."""


@dataclass(frozen=True)
class Rule:
    lhs: Word
    rhs: Word

    def __post_init__(self) -> None:
        if not self.lhs:
            raise ValueError("rule left-hand side must be non-empty")
        if self.lhs == self.rhs:
            raise ValueError(f"trivial rule {self.lhs!r} -> {self.rhs!r}")

    def __str__(self) -> str:
        return f"{print_word(self.lhs)} -> {print_word(self.rhs)}"


class Certification(Enum):
    """How much of 'complete' has been established for a system."""

    UNCERTIFIED = "uncertified"
    LOCALLY_CONFLUENT = "locally-confluent"
    TERMINATING = "terminating"
    COMPLETE = "complete"


@dataclass(frozen=True)
class ReductionOrder:
    """Weighted shortlex: total weight, then length, then leftmost letter.

    ``precedence`` lists letters greatest-first.  With all weights >= 1
    this is a reduction order: well-founded and compatible with
    concatenation on both sides, so rule-wise descent certifies
    termination.
    """

    weights: Mapping[str, int]
    precedence: tuple[str, ...]

    def __post_init__(self) -> None:
        if set(self.weights) != set(self.precedence):
            raise ValueError("weights and precedence must cover the same letters")
        if len(set(self.precedence)) != len(self.precedence):
            raise ValueError("precedence must list each letter once")
        for letter, w in self.weights.items():
            if w < 1:
                raise ValueError(f"weight of {letter!r} must be >= 1, got {w}")

    def weight(self, word: Word) -> int:
        w = self.weights
        return sum(w[c] for c in word)

    def sort_key(self, word: Word):
        """A key that sorts words ascending in this order."""
        rank = {c: -i for i, c in enumerate(self.precedence)}
        try:
            return (sum(self.weights[c] for c in word), len(word), tuple(rank[c] for c in word))
        except KeyError as exc:
            raise KeyError(f"letter {exc.args[0]!r} missing from order") from None

    def __str__(self) -> str:
        ws = " ".join(f"{c}={self.weights[c]}" for c in self.precedence)
        return f"weights: {ws}; precedence: {'>'.join(self.precedence)}"


def compare(order: ReductionOrder, u: Word, v: Word) -> int:
    """-1, 0, or +1 as u is less than, equal to, or greater than v.

    Equality holds only for identical words: ties on weight and length
    fall through to a letter-by-letter comparison.
    """
    ku, kv = order.sort_key(u), order.sort_key(v)
    return (ku > kv) - (ku < kv)


def parse_order(text: str) -> ReductionOrder:
    """Parse ``weights: a=4 b=1 x=2; precedence: x>b>a``."""
    try:
        wpart, ppart = text.split(";")
        weights = {}
        for item in wpart.split(":", 1)[1].split():
            letter, value = item.split("=")
            weights[letter] = int(value)
        precedence = tuple(ppart.split(":", 1)[1].strip().split(">"))
    except (ValueError, IndexError) as exc:
        raise ValueError(f"bad order syntax: {text!r}") from exc
    return ReductionOrder(weights, precedence)


@dataclass(frozen=True)
class RewritingSystem:
    alphabet: Alphabet
    rules: tuple[Rule, ...]
    certification: Certification = Certification.UNCERTIFIED
    order: Optional[ReductionOrder] = None

    def __post_init__(self) -> None:
        seen = set()
        for rule in self.rules:
            self.alphabet.validate_word(rule.lhs)
            self.alphabet.validate_word(rule.rhs)
            key = (rule.lhs, rule.rhs)
            if key in seen:
                raise ValueError(f"duplicate rule {rule}")
            seen.add(key)
        if self.certification in (Certification.TERMINATING, Certification.COMPLETE):
            if self.order is None:
                raise ValueError(f"certification {self.certification.value} requires an order")

    def rule_pairs(self) -> tuple[tuple[Word, Word], ...]:
        return tuple((r.lhs, r.rhs) for r in self.rules)

    def with_certification(self, certification: Certification,
                           order: Optional[ReductionOrder] = None) -> "RewritingSystem":
        return replace(self, certification=certification,
                       order=order if order is not None else self.order)

    def __str__(self) -> str:
        lines = [f"letters: {' '.join(self.alphabet.letters)}"]
        lines += [str(rule) for rule in self.rules]
        return "\n".join(lines)


def _leftmost_match(pairs, w: Word) -> tuple[int, int]:
    """(position, rule index) of the leftmost lowest-index match, or (-1, -1)."""
    best_pos, best_idx = -1, -1
    for idx, (lhs, _) in enumerate(pairs):
        p = w.find(lhs)
        if p != -1 and (best_pos == -1 or p < best_pos):
            best_pos, best_idx = p, idx
    return best_pos, best_idx


def rewrite_step(system: RewritingSystem, w: Word) -> Optional[tuple[Word, int, int]]:
    """Apply one rule at the leftmost position (lowest rule index on ties).

    Returns ``(word, rule index, position)``, or ``None`` if ``w`` is a
    normal form.
    """
    pos, idx = _leftmost_match(system.rule_pairs(), w)
    if pos == -1:
        return None
    lhs, rhs = system.rules[idx].lhs, system.rules[idx].rhs
    return w[:pos] + rhs + w[pos + len(lhs):], idx, pos


def _reduce(pairs, w: Word, fuel: int) -> Word:
    """Normal form of ``w`` without building a trace (hot path)."""
    steps = 0
    while True:
        pos, idx = _leftmost_match(pairs, w)
        if pos == -1:
            return w
        if steps >= fuel:
            raise FuelExhausted(f"no normal form within {fuel} steps (at {print_word(w)})")
        lhs, rhs = pairs[idx]
        w = w[:pos] + rhs + w[pos + len(lhs):]
        steps += 1


@dataclass(frozen=True)
class ReductionTrace:
    """Steps of a reduction: (rule index, position, word after the step)."""

    steps: tuple[tuple[int, int, Word], ...]

    def replay(self, system: RewritingSystem, start: Word) -> bool:
        """Check each recorded step applies the recorded rule at the recorded spot."""
        w = start
        for idx, pos, after in self.steps:
            rule = system.rules[idx]
            if not w.startswith(rule.lhs, pos):
                return False
            if w[:pos] + rule.rhs + w[pos + len(rule.lhs):] != after:
                return False
            w = after
        return True


def normal_form(system: RewritingSystem, w: Word,
                fuel: int = DEFAULT_FUEL) -> tuple[Word, ReductionTrace]:
    """Reduce ``w`` until no rule applies; deterministic leftmost strategy."""
    if fuel < 1:
        raise ValueError("fuel must be >= 1")
    pairs = system.rule_pairs()
    steps: list[tuple[int, int, Word]] = []
    while True:
        pos, idx = _leftmost_match(pairs, w)
        if pos == -1:
            return w, ReductionTrace(tuple(steps))
        if len(steps) >= fuel:
            raise FuelExhausted(f"no normal form within {fuel} steps (at {print_word(w)})")
        lhs, rhs = pairs[idx]
        w = w[:pos] + rhs + w[pos + len(lhs):]
        steps.append((idx, pos, w))


@dataclass(frozen=True)
class TerminationReport:
    certified: bool
    order: ReductionOrder
    failing_rule: Optional[int] = None
    system: Optional[RewritingSystem] = None

    def message(self) -> str:
        if self.certified:
            return f"terminating under {self.order}"
        return f"rule {self.failing_rule} is not oriented by {self.order}"


def _upgrade(certification: Certification, fact: Certification) -> Certification:
    """Combine an established fact with the current certification state."""
    have = {certification, fact}
    if Certification.COMPLETE in have:
        return Certification.COMPLETE
    if {Certification.LOCALLY_CONFLUENT, Certification.TERMINATING} <= have:
        return Certification.COMPLETE  # Newman's lemma
    if Certification.TERMINATING in have:
        return Certification.TERMINATING
    if Certification.LOCALLY_CONFLUENT in have:
        return Certification.LOCALLY_CONFLUENT
    return Certification.UNCERTIFIED


def verify_termination(system: RewritingSystem, order: ReductionOrder) -> TerminationReport:
    """Check every rule strictly descends under ``order``.

    Weighted shortlex is compatible with concatenation, so rule-wise
    descent is sufficient for termination.  On success the report carries
    a copy of the system with its certification upgraded.
    """
    for idx, rule in enumerate(system.rules):
        if compare(order, rule.lhs, rule.rhs) != GREATER:
            return TerminationReport(False, order, failing_rule=idx)
    upgraded = system.with_certification(
        _upgrade(system.certification, Certification.TERMINATING), order=order)
    return TerminationReport(True, order, system=upgraded)


def find_termination_order(system: RewritingSystem, max_weight: int = 8,
                           per_letter_max: Optional[Mapping[str, int]] = None,
                           ) -> Optional[ReductionOrder]:
    """Exhaustive search for a certifying weighted-shortlex order.

    Scans all precedence permutations and all weight vectors with values
    in ``[1, max_weight]`` (optionally widened per letter), returning the
    first order under which every rule strictly descends, or ``None``.
    """
    if max_weight < 1:
        raise ValueError("max weight must be >= 1")
    letters = system.alphabet.letters
    caps = {c: max_weight for c in letters}
    if per_letter_max:
        for c, cap in per_letter_max.items():
            caps[c] = max(caps.get(c, max_weight), cap)
    pairs = system.rule_pairs()
    for prec in permutations(letters):
        rank = {c: -i for i, c in enumerate(prec)}
        for vec in product(*(range(1, caps[c] + 1) for c in letters)):
            weights = dict(zip(letters, vec))
            ok = True
            for lhs, rhs in pairs:
                kl = (sum(weights[c] for c in lhs), len(lhs), tuple(rank[c] for c in lhs))
                kr = (sum(weights[c] for c in rhs), len(rhs), tuple(rank[c] for c in rhs))
                if kl <= kr:
                    ok = False
                    break
            if ok:
                return ReductionOrder(weights, prec)
    return None


def parse_system_file(text: str) -> RewritingSystem:
    """Parse the system file format::

        letters: a b x
        ax^2b -> x
        ab -> x^2
    """
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or not lines[0].startswith("letters:"):
        raise ValueError("system file must start with a 'letters:' line")
    alpha = Alphabet(tuple(lines[0].split(":", 1)[1].split()))
    rules = []
    for ln in lines[1:]:
        if "->" not in ln:
            raise ValueError(f"bad rule line {ln!r}")
        lhs_text, rhs_text = ln.split("->", 1)
        rules.append(Rule(parse_word(lhs_text.strip(), alpha),
                          parse_word(rhs_text.strip(), alpha)))
    return RewritingSystem(alpha, tuple(rules))


def format_system_file(system: RewritingSystem) -> str:
    return str(system) + "\n"
