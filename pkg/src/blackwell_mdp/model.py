"""Finite MDP instances with exact rational data.

Every probability and reward is a :class:`fractions.Fraction`. A validated
instance also carries the common denominator ``m`` of all its entries and the
integer ``r_inf`` bounding the scaled rewards ``|m * r[s][a]|``.

Instance files are JSON objects::

    {"n_states": 2, "n_actions": 2,
     "rewards": [["1", "-1/2"], [0, 0]],
     "transitions": [[["1/3", "2/3"], [1, 0]], [[0, 1], [0, 1]]],
     "m": 6}

``m`` is optional; when absent it is the LCM of all denominators.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Integral
from typing import Any, Iterator, Sequence

from .errors import (
    DenominatorMismatch,
    InvalidPolicy,
    NegativeProbability,
    NonStochasticRow,
    ParseError,
    PolicySpaceTooLarge,
)

Policy = tuple[int, ...]

DEFAULT_POLICY_GUARD = 10**6


def parse_rational(value: Any, *, rationalize: bool = False,
                   max_denominator: int = 10**6) -> Fraction:
    """Parse ``"num/den"``, an integer, or an exact decimal string.

    Floats are refused unless ``rationalize`` is set, in which case the value
    is replaced by its best rational approximation with bounded denominator.
    """
    if isinstance(value, bool):
        raise ParseError(f"booleans are not rationals: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, Integral):
        return Fraction(int(value))
    if isinstance(value, float):
        if not rationalize:
            raise ParseError(
                f"floating-point entry {value!r} refused; pass rationalize=True "
                "or write it as 'num/den'")
        if not math.isfinite(value):
            raise ParseError(f"non-finite entry {value!r}")
        return Fraction(value).limit_denominator(max_denominator)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"cannot parse rational {value!r}") from exc
    raise ParseError(f"unsupported rational value {value!r}")


def format_rational(x: Fraction) -> str | int:
    """JSON form of a rational: bare int when integral, else ``"num/den"``."""
    if x.denominator == 1:
        return x.numerator
    return f"{x.numerator}/{x.denominator}"


def rational_str(x: Fraction) -> str:
    """Always ``"num/den"``, as used in reports."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class MdpInstance:
    """A validated rational MDP.

    ``rewards[s][a]`` and ``transitions[s][a][s2]`` are Fractions; every
    ``m * transitions[s][a][s2]`` is an integer in ``[0, m]`` and every
    ``m * rewards[s][a]`` is an integer of absolute value at most ``r_inf``.
    """

    n_states: int
    n_actions: int
    rewards: tuple[tuple[Fraction, ...], ...]
    transitions: tuple[tuple[tuple[Fraction, ...], ...], ...]
    m: int
    r_inf: int

    def scaled_reward(self, s: int, a: int) -> int:
        return int(self.rewards[s][a] * self.m)

    def scaled_transition(self, s: int, a: int, s2: int) -> int:
        return int(self.transitions[s][a][s2] * self.m)

    def to_dict(self) -> dict:
        return {
            "n_states": self.n_states,
            "n_actions": self.n_actions,
            "rewards": [[format_rational(r) for r in row] for row in self.rewards],
            "transitions": [
                [[format_rational(p) for p in dist] for dist in state]
                for state in self.transitions
            ],
            "m": self.m,
        }


def _shape_error(msg: str) -> ParseError:
    return ParseError(f"malformed instance: {msg}")


def validate_instance(raw: dict, *, rationalize: bool = False,
                      max_denominator: int = 10**6) -> MdpInstance:
    """Parse and validate raw instance data (e.g. a decoded JSON object)."""
    if not isinstance(raw, dict):
        raise _shape_error("top level must be an object")
    try:
        raw_rewards = raw["rewards"]
        raw_trans = raw["transitions"]
    except KeyError as exc:
        raise _shape_error(f"missing key {exc}") from None
    if not isinstance(raw_rewards, list) or not raw_rewards:
        raise _shape_error("rewards must be a non-empty list of rows")
    n_states = len(raw_rewards)
    if not isinstance(raw_rewards[0], list) or not raw_rewards[0]:
        raise _shape_error("reward rows must be non-empty lists")
    n_actions = len(raw_rewards[0])
    if raw.get("n_states", n_states) != n_states:
        raise _shape_error("n_states does not match rewards")
    if raw.get("n_actions", n_actions) != n_actions:
        raise _shape_error("n_actions does not match rewards")

    def conv(v):
        return parse_rational(v, rationalize=rationalize,
                              max_denominator=max_denominator)

    rewards = []
    for s, row in enumerate(raw_rewards):
        if not isinstance(row, list) or len(row) != n_actions:
            raise _shape_error(f"reward row {s} must have {n_actions} entries")
        rewards.append(tuple(conv(v) for v in row))

    if not isinstance(raw_trans, list) or len(raw_trans) != n_states:
        raise _shape_error(f"transitions must have {n_states} state blocks")
    transitions = []
    for s, block in enumerate(raw_trans):
        if not isinstance(block, list) or len(block) != n_actions:
            raise _shape_error(f"transition block {s} must have {n_actions} rows")
        rows = []
        for a, dist in enumerate(block):
            if not isinstance(dist, list) or len(dist) != n_states:
                raise _shape_error(
                    f"transition row ({s},{a}) must have {n_states} entries")
            row = tuple(conv(v) for v in dist)
            for s2, p in enumerate(row):
                if p < 0:
                    raise NegativeProbability(
                        f"P[{s}][{a}][{s2}] = {p} is negative")
            total = sum(row)
            if total != 1:
                raise NonStochasticRow(
                    f"row P[{s}][{a}] sums to {total}, not 1")
            rows.append(row)
        transitions.append(tuple(rows))

    denominators = {x.denominator for row in rewards for x in row}
    denominators |= {p.denominator for block in transitions
                     for row in block for p in row}
    lcm = math.lcm(*denominators)
    m = raw.get("m")
    if m is None:
        m = lcm
    else:
        if isinstance(m, bool) or not isinstance(m, Integral) or m < 1:
            raise ParseError(f"m must be a positive integer, got {m!r}")
        m = int(m)
        if m % lcm:
            bad = sorted(d for d in denominators if m % d)
            raise DenominatorMismatch(
                f"explicit m={m} is not divisible by denominators {bad}")
    r_inf = max(abs(int(r * m)) for row in rewards for r in row)
    return MdpInstance(n_states, n_actions, tuple(rewards), tuple(transitions),
                       m, r_inf)


def make_instance(rewards: Sequence[Sequence[Any]],
                  transitions: Sequence[Sequence[Sequence[Any]]],
                  m: int | None = None) -> MdpInstance:
    raw = {"rewards": [list(r) for r in rewards],
           "transitions": [[list(d) for d in b] for b in transitions]}
    if m is not None:
        raw["m"] = m
    return validate_instance(raw)


def dumps_instance(M: MdpInstance, extra: dict | None = None) -> str:
    """Deterministic JSON text for an instance (plus optional extra keys)."""
    doc = M.to_dict()
    if extra:
        doc.update(extra)
    return json.dumps(doc, indent=1) + "\n"


def load_json(path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from exc
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from exc


def load_instance(path, **kwargs) -> MdpInstance:
    return validate_instance(load_json(path), **kwargs)


# ---------------------------------------------------------------- policies

def check_policy(M: MdpInstance, pi: Sequence[int]) -> Policy:
    pi = tuple(pi)
    if len(pi) != M.n_states:
        raise InvalidPolicy(f"policy has {len(pi)} entries, expected {M.n_states}")
    for s, a in enumerate(pi):
        if not 0 <= a < M.n_actions:
            raise InvalidPolicy(f"action {a} at state {s} out of range")
    return pi


def induced_reward_vector(M: MdpInstance, pi: Policy) -> list[Fraction]:
    return [M.rewards[s][a] for s, a in enumerate(pi)]


def induced_transition_matrix(M: MdpInstance, pi: Policy) -> list[list[Fraction]]:
    return [list(M.transitions[s][a]) for s, a in enumerate(pi)]


def action_representatives(M: MdpInstance, extra=None) -> list[list[int]]:
    """``rep[s][a]``: lowest action at ``s`` with the same reward and row as ``a``.

    Actions that coincide on (reward, transition row) are indistinguishable;
    this is how padded action menus collapse back to the meaningful choices.
    ``extra[s][a]``, if given, must also agree (e.g. an uncertainty radius).
    """
    reps = []
    for s in range(M.n_states):
        seen: dict = {}
        row = []
        for a in range(M.n_actions):
            key = (M.rewards[s][a], M.transitions[s][a],
                   None if extra is None else extra[s][a])
            row.append(seen.setdefault(key, a))
        reps.append(row)
    return reps


def canonical_policy(M: MdpInstance, pi: Policy, reps=None) -> Policy:
    if reps is None:
        reps = action_representatives(M)
    return tuple(reps[s][a] for s, a in enumerate(pi))


def enumerate_policies(M: MdpInstance, *, canonical: bool = False,
                       guard: int = DEFAULT_POLICY_GUARD,
                       reps=None) -> Iterator[Policy]:
    """All deterministic stationary policies in lexicographic order.

    With ``canonical=True`` only one policy per class of indistinguishable
    policies is produced (each action replaced by its representative).
    """
    if canonical:
        if reps is None:
            reps = action_representatives(M)
        menus = [sorted(set(r)) for r in reps]
    else:
        menus = [range(M.n_actions)] * M.n_states
    count = math.prod(len(menu) for menu in menus)
    if count > guard:
        raise PolicySpaceTooLarge(
            f"{count} policies exceed the enumeration guard {guard}")
    return itertools.product(*menus)
