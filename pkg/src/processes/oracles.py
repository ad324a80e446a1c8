"""Exact probability oracles for exchangeable processes.

Rational results use fractions.Fraction and are limited to sequences of length
EXACT_LIMIT; longer sequences go through the log-probability evaluators.
"""

from collections.abc import Sequence
from fractions import Fraction
from math import factorial

from scipy.special import betaln

from src.core.models import coerce_binary
from src.exceptions import ExactOracleLimitError, InvalidProcessSpecError

EXACT_LIMIT = 20


def _counts(seq: Sequence[int], exact: bool) -> tuple[list[int], int, int]:
    values = coerce_binary(seq)
    if exact and len(values) > EXACT_LIMIT:
        raise ExactOracleLimitError(len(values), EXACT_LIMIT)
    reds = sum(values)
    return values, reds, len(values) - reds


def _check_urn(r0: int, b0: int) -> None:
    if r0 < 1 or b0 < 1:
        raise InvalidProcessSpecError(
            "polya", f"initial counts must be >= 1, got r0={r0}, b0={b0}"
        )


def polya_sequence_prob(seq: Sequence[int], r0: int = 1, b0: int = 1) -> Fraction:
    """
    Exact probability of a Pólya urn draw sequence (1 = red).

    Multiplies the sequential draw probabilities r/(r+b), updating the counts
    after every draw.

    Raises:
        InvalidProcessSpecError: If r0 or b0 is below 1
        ExactOracleLimitError: If the sequence is longer than EXACT_LIMIT
    """
    _check_urn(r0, b0)
    values, _, _ = _counts(seq, exact=True)
    red, green = r0, b0
    prob = Fraction(1)
    for drew_red in values:
        if drew_red:
            prob *= Fraction(red, red + green)
            red += 1
        else:
            prob *= Fraction(green, red + green)
            green += 1
    return prob


def polya_sequence_logprob(seq: Sequence[int], r0: int = 1, b0: int = 1) -> float:
    """Natural log of the Pólya sequence probability, for any length.

    Uses the closed form B(r0 + reds, b0 + greens) / B(r0, b0).
    """
    _check_urn(r0, b0)
    _, reds, greens = _counts(seq, exact=False)
    return float(betaln(r0 + reds, b0 + greens) - betaln(r0, b0))


def uniform_mixture_prob(reds: int, greens: int) -> Fraction:
    """Integral of p^reds (1-p)^greens over the uniform prior: a!b!/(a+b+1)!."""
    return Fraction(factorial(reds) * factorial(greens), factorial(reds + greens + 1))


def mixture_sequence_prob(seq: Sequence[int], a: int = 1, b: int = 1) -> Fraction:
    """
    Exact probability of a sequence under a Beta(a, b) mixture of Bernoulli laws.

    Only integer shapes have rational values; a = b = 1 is the uniform prior.
    """
    if a < 1 or b < 1:
        raise InvalidProcessSpecError("mixture", f"beta shapes must be integers >= 1, got {a}, {b}")
    _, reds, greens = _counts(seq, exact=True)
    return _beta_function(a + reds, b + greens) / _beta_function(a, b)


def _beta_function(x: int, y: int) -> Fraction:
    return Fraction(factorial(x - 1) * factorial(y - 1), factorial(x + y - 1))
