"""Deterministic text reports: human ``key: value`` lines or machine ``key<TAB>value`` lines."""

from __future__ import annotations

from fractions import Fraction


def fmt_value(v) -> str:
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}" if v.denominator != 1 else str(v.numerator)
    if isinstance(v, (list, tuple)):
        if v and all(isinstance(x, (int, Fraction)) and not isinstance(x, bool) for x in v):
            return "(" + ",".join(fmt_value(x) for x in v) + ")"
        return "[" + "; ".join(fmt_value(x) for x in v) + "]"
    return str(v)


class Report:
    """Mixin: subclasses implement :meth:`items` returning ``(key, value)`` pairs."""

    def items(self) -> list[tuple[str, object]]:
        raise NotImplementedError

    def machine(self) -> str:
        return "\n".join(f"{k}\t{fmt_value(v)}" for k, v in self.items())

    def human(self) -> str:
        return "\n".join(f"{k}: {fmt_value(v)}" for k, v in self.items())

    def __str__(self):
        return self.human()
