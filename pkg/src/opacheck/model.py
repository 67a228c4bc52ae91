"""Core automaton model: nondeterministic finite automata with a
partially observable alphabet and a set of secret states.

States and events are opaque strings ordered lexicographically; every
operation iterates in that order so results are reproducible.  Automaton
and Run values are immutable and all functions here are pure.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

Transition = tuple[str, str, str]


class ValidationError(ValueError):
    """An automaton description is inconsistent and cannot be used."""


class AutomatonWarning(UserWarning):
    """Base class for non-fatal findings during validation."""


class PrunedStatesWarning(AutomatonWarning):
    """Some declared states were unreachable and have been dropped."""

    def __init__(self, pruned: tuple[str, ...]):
        super().__init__("pruned unreachable states: " + ", ".join(pruned))
        self.pruned = pruned


class AllStatesSecretWarning(AutomatonWarning):
    """Every state is secret, so no non-secret behaviour exists at all."""

    def __init__(self) -> None:
        super().__init__("every state is secret; nothing can be kept deniable")


@dataclass(frozen=True)
class Automaton:
    """A finite automaton with set-valued transitions.

    ``observable`` is the subset of ``events`` an external observer can
    see; the remaining events are silent.  ``secret_states`` marks the
    states whose visits the system wants to keep deniable.
    """

    states: tuple[str, ...]
    events: tuple[str, ...]
    observable: frozenset[str]
    transitions: tuple[Transition, ...]
    initial_states: frozenset[str]
    secret_states: frozenset[str]

    @classmethod
    def build(
        cls,
        states: Iterable[str],
        events: Iterable[str],
        observable: Iterable[str],
        transitions: Iterable[Transition],
        initial_states: Iterable[str],
        secret_states: Iterable[str],
    ) -> "Automaton":
        """Construct with canonical (sorted, deduplicated) field values.

        No semantic checks are performed; use :func:`validate` for
        untrusted descriptions.
        """
        return cls(
            states=tuple(sorted(set(states))),
            events=tuple(sorted(set(events))),
            observable=frozenset(observable),
            transitions=tuple(sorted({(s, e, t) for (s, e, t) in transitions})),
            initial_states=frozenset(initial_states),
            secret_states=frozenset(secret_states),
        )

    @cached_property
    def unobservable(self) -> frozenset[str]:
        return frozenset(self.events) - self.observable

    @cached_property
    def non_secret_initials(self) -> frozenset[str]:
        return self.initial_states - self.secret_states

    @cached_property
    def _state_set(self) -> frozenset[str]:
        return frozenset(self.states)

    @cached_property
    def _event_set(self) -> frozenset[str]:
        return frozenset(self.events)

    @cached_property
    def _out(self) -> dict[str, tuple[tuple[str, str], ...]]:
        by_src: dict[str, list[tuple[str, str]]] = {x: [] for x in self.states}
        for src, event, dst in self.transitions:
            by_src[src].append((event, dst))
        return {x: tuple(sorted(pairs)) for x, pairs in by_src.items()}

    @cached_property
    def _succ(self) -> dict[tuple[str, str], tuple[str, ...]]:
        by_key: dict[tuple[str, str], list[str]] = {}
        for src, event, dst in self.transitions:
            by_key.setdefault((src, event), []).append(dst)
        return {key: tuple(sorted(dsts)) for key, dsts in by_key.items()}

    @cached_property
    def _silent_succ(self) -> dict[str, tuple[str, ...]]:
        by_src: dict[str, list[str]] = {x: [] for x in self.states}
        for src, event, dst in self.transitions:
            if event not in self.observable:
                by_src[src].append(dst)
        return {x: tuple(sorted(set(dsts))) for x, dsts in by_src.items()}

    def is_observable(self, event: str) -> bool:
        return event in self.observable

    def outgoing(self, state: str) -> tuple[tuple[str, str], ...]:
        """All (event, target) pairs leaving ``state``, sorted."""
        return self._out.get(state, ())

    def successors(self, state: str, event: str) -> tuple[str, ...]:
        """Targets of ``event``-labelled transitions from ``state``, sorted."""
        return self._succ.get((state, event), ())


@dataclass(frozen=True)
class Run:
    """A path through an automaton: a start state and (event, state) steps."""

    start: str
    steps: tuple[tuple[str, str], ...] = ()

    @property
    def events(self) -> tuple[str, ...]:
        return tuple(event for event, _ in self.steps)

    @property
    def visited(self) -> tuple[str, ...]:
        """All states touched by the run, in order, including the start."""
        return (self.start,) + tuple(state for _, state in self.steps)

    @property
    def end(self) -> str:
        return self.steps[-1][1] if self.steps else self.start

    def is_valid(self, aut: Automaton) -> bool:
        """True when every step follows a declared transition of ``aut``."""
        if self.start not in aut._state_set:
            return False
        here = self.start
        for event, state in self.steps:
            if state not in aut.successors(here, event):
                return False
            here = state
        return True

    def is_non_secret(self, aut: Automaton) -> bool:
        """True when no visited state (including the start) is secret."""
        return all(state not in aut.secret_states for state in self.visited)


def validate(
    states: Iterable[str],
    events: Iterable[tuple[str, bool]],
    transitions: Iterable[Transition],
    initial_states: Iterable[str],
    secret_states: Iterable[str] = (),
) -> Automaton:
    """Check a raw automaton description and return a usable Automaton.

    ``events`` are (name, observable) pairs, so the observable/silent
    split is a partition by construction.  States unreachable from the
    initial states are pruned with a :class:`PrunedStatesWarning`; an
    automaton whose states are all secret is accepted with an
    :class:`AllStatesSecretWarning`.

    Raises :class:`ValidationError` for duplicate names, references to
    undeclared states or events, and (possibly after pruning) an empty
    state set.
    """
    state_list = list(states)
    declared: set[str] = set()
    for name in state_list:
        if name in declared:
            raise ValidationError(f"duplicate state {name!r}")
        declared.add(name)
    if not declared:
        raise ValidationError("empty state set")

    alphabet: dict[str, bool] = {}
    for name, is_obs in events:
        if name in alphabet:
            raise ValidationError(f"duplicate event {name!r}")
        alphabet[name] = bool(is_obs)

    triples = list(transitions)
    for src, event, dst in triples:
        if src not in declared:
            raise ValidationError(f"transition source {src!r} is not a declared state")
        if dst not in declared:
            raise ValidationError(f"transition target {dst!r} is not a declared state")
        if event not in alphabet:
            raise ValidationError(f"transition event {event!r} is not a declared event")

    initial = set(initial_states)
    for name in initial:
        if name not in declared:
            raise ValidationError(f"initial state {name!r} is not a declared state")
    secret = set(secret_states)
    for name in secret:
        if name not in declared:
            raise ValidationError(f"secret state {name!r} is not a declared state")

    reachable = _reachable_from(initial, triples)
    pruned = tuple(sorted(declared - reachable))
    if pruned:
        warnings.warn(PrunedStatesWarning(pruned), stacklevel=2)
    if not reachable:
        raise ValidationError("empty state set: no state is reachable from the initial states")
    if reachable <= secret:
        warnings.warn(AllStatesSecretWarning(), stacklevel=2)

    kept_transitions = [
        (src, event, dst) for (src, event, dst) in triples if src in reachable and dst in reachable
    ]
    return Automaton.build(
        states=reachable,
        events=alphabet,
        observable={name for name, is_obs in alphabet.items() if is_obs},
        transitions=kept_transitions,
        initial_states=initial,
        secret_states=secret & reachable,
    )


def _reachable_from(sources: set[str], triples: list[Transition]) -> set[str]:
    by_src: dict[str, list[str]] = {}
    for src, _, dst in triples:
        by_src.setdefault(src, []).append(dst)
    seen = set(sources)
    frontier = sorted(sources)
    while frontier:
        state = frontier.pop()
        for dst in by_src.get(state, ()):
            if dst not in seen:
                seen.add(dst)
                frontier.append(dst)
    return seen


def _require_states(aut: Automaton, src: Iterable[str]) -> frozenset[str]:
    members = frozenset(src)
    unknown = members - aut._state_set
    if unknown:
        raise ValueError(f"unknown states: {sorted(unknown)}")
    return members


def unobservable_reach(aut: Automaton, src: Iterable[str]) -> frozenset[str]:
    """All states reachable from ``src`` via zero or more silent transitions.

    This is a closure operator: the result contains ``src``, is monotone
    in it, and applying it twice changes nothing.
    """
    seen = set(_require_states(aut, src))
    frontier = sorted(seen)
    while frontier:
        state = frontier.pop()
        for dst in aut._silent_succ.get(state, ()):
            if dst not in seen:
                seen.add(dst)
                frontier.append(dst)
    return frozenset(seen)


def delta_extended(aut: Automaton, src: Iterable[str], seq: Sequence[str]) -> frozenset[str]:
    """States reachable from ``src`` under exactly the event sequence ``seq``.

    Silent events are consumed like any other; no implicit closure is
    taken.  The result is empty when no run realizes the sequence.
    """
    current = _require_states(aut, src)
    for event in seq:
        if event not in aut._event_set:
            raise ValueError(f"unknown event: {event!r}")
        nxt: set[str] = set()
        for state in current:
            nxt.update(aut.successors(state, event))
        current = frozenset(nxt)
        if not current:
            break
    return frozenset(current)


def project(aut: Automaton, seq: Sequence[str]) -> tuple[str, ...]:
    """Erase silent events from ``seq``, preserving order."""
    for event in seq:
        if event not in aut._event_set:
            raise ValueError(f"unknown event: {event!r}")
    return tuple(event for event in seq if event in aut.observable)


def enumerate_runs(aut: Automaton, max_len: int) -> Iterator[Run]:
    """Yield every run of length at most ``max_len`` from the initial states.

    Order is deterministic: by length, then lexicographically by event
    sequence, breaking ties by start state and visited states.
    """
    if max_len < 0:
        raise ValueError("max_len must be >= 0")
    level = [Run(state) for state in sorted(aut.initial_states)]
    yield from level
    for _ in range(max_len):
        nxt: list[Run] = []
        for run in level:
            for event, target in aut.outgoing(run.end):
                nxt.append(Run(run.start, run.steps + ((event, target),)))
        if not nxt:
            return
        nxt.sort(key=lambda run: (run.events, run.start, run.visited))
        yield from nxt
        level = nxt
