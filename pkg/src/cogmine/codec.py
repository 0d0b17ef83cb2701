"""Quantize coverage vectors to {0, 1/2, 1} and pack them as positional integers.

Component ``j`` (1-based, at most three) occupies the two decimal digits at
``10**(7 - 2j)``: complete is ``10``, partial ``05``, untouched ``00``. So
(1/2, 1/2, 0) packs to 50500 and (1, 1, 1) to 101010.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InvalidCodeword, OutOfRange, TooManyComponents

HALF = Fraction(1, 2)
STATES = (Fraction(0), HALF, Fraction(1))
MAX_COMPONENTS = 3
MAX_CODE = 101010
_PAIR_TO_STATE = {0: Fraction(0), 5: HALF, 10: Fraction(1)}


def quantize(x) -> Fraction:
    x = Fraction(x)
    if x < 0 or x > 1:
        raise OutOfRange(f"coverage {x} outside [0, 1]")
    if x == 0:
        return Fraction(0)
    if x == 1:
        return Fraction(1)
    return HALF


def encode_ccm(q: Sequence) -> int:
    if len(q) > MAX_COMPONENTS:
        raise TooManyComponents(f"at most {MAX_COMPONENTS} components can be encoded, got {len(q)}")
    code = Fraction(0)
    for j, state in enumerate(q, start=1):
        state = Fraction(state)
        if state not in STATES:
            raise OutOfRange(f"component {j} = {state} is not a quantized state")
        code += state * 10 ** (7 - 2 * j)
    return int(code)


def decode_ccm(code: int, arity: int = MAX_COMPONENTS) -> tuple[Fraction, ...]:
    if not 1 <= arity <= MAX_COMPONENTS:
        raise ValueError(f"arity must be 1..{MAX_COMPONENTS}, got {arity}")
    if isinstance(code, bool) or int(code) != code or not 0 <= code <= 999999:
        raise InvalidCodeword(f"{code!r} is not a six-digit codeword")
    digits = f"{int(code):06d}"
    states = []
    for j in range(MAX_COMPONENTS):
        pair = int(digits[2 * j: 2 * j + 2])
        if pair not in _PAIR_TO_STATE:
            raise InvalidCodeword(f"{code}: digit pair {digits[2 * j: 2 * j + 2]!r} is not 00, 05 or 10")
        states.append(_PAIR_TO_STATE[pair])
    if any(states[arity:]):
        raise InvalidCodeword(f"{code} uses components beyond arity {arity}")
    return tuple(states[:arity])


def collapse(codes: Iterable[int]) -> list[int]:
    out = []
    for c in codes:
        if not out or out[-1] != c:
            out.append(c)
    return out


def encode_sequence(s_cog) -> list[int]:
    """Quantize and encode every CCM, then merge consecutive repeats."""
    ccms = getattr(s_cog, "ccms", s_cog)
    return collapse(encode_ccm([quantize(x) for x in ccm]) for ccm in ccms)


def decode_sequence(codes: Iterable[int], arity: int = MAX_COMPONENTS) -> list[tuple[Fraction, ...]]:
    return [decode_ccm(c, arity) for c in codes]
