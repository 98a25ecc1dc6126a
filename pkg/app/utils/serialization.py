from contextvars import ContextVar
from fractions import Fraction
from typing import Sequence

KEY_SEPARATOR = ":"

# set by the CLI's --decimal flag; JSON defaults to exact "p/q" strings
decimal_output: ContextVar[bool] = ContextVar("decimal_output", default=False)


def format_rational(value: Fraction | int, places: int = 6) -> str:
    """
    Render a rational for JSON output.

    Args:
        value (Fraction | int): The number.
        places (int): Decimal places used when decimal output is switched on.

    Returns:
        str: "p/q" in lowest terms ("3" for integers), or a rounded decimal.
    """
    value = Fraction(value)
    if decimal_output.get():
        return f"{float(value):.{places}f}"
    return str(value)


def parse_rational(text: str | int) -> Fraction:
    """Parse "p/q", integers and finite decimals exactly."""
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError(f"Not a rational number: {text!r}") from e


def join_key(identifiers: Sequence[str]) -> str:
    return KEY_SEPARATOR.join(identifiers)


def split_key(key: str) -> tuple[str, ...]:
    return tuple(key.split(KEY_SEPARATOR)) if key else ()
