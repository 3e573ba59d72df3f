"""Immutable sets of integer times stored as sorted, disjoint inclusive spans."""

from __future__ import annotations

from typing import Iterable, Iterator

__all__ = ["Timeset", "EMPTY"]


class Timeset:
    __slots__ = ("spans",)

    def __init__(self, spans: Iterable[tuple[int, int]] = ()):
        merged: list[tuple[int, int]] = []
        for lo, hi in sorted(spans):
            if lo > hi:
                continue
            if merged and lo <= merged[-1][1] + 1:
                if hi > merged[-1][1]:
                    merged[-1] = (merged[-1][0], hi)
            else:
                merged.append((lo, hi))
        self.spans: tuple[tuple[int, int], ...] = tuple(merged)

    @classmethod
    def _raw(cls, spans: tuple[tuple[int, int], ...]) -> "Timeset":
        obj = cls.__new__(cls)
        obj.spans = spans
        return obj

    @classmethod
    def span(cls, lo: int, hi: int) -> "Timeset":
        """``{lo, ..., hi}``; empty when ``lo > hi``."""
        return cls._raw(((lo, hi),) if lo <= hi else ())

    @classmethod
    def point(cls, t: int) -> "Timeset":
        return cls._raw(((t, t),))

    @classmethod
    def of(cls, times: Iterable[int]) -> "Timeset":
        return cls((t, t) for t in times)

    def __contains__(self, t: int) -> bool:
        for lo, hi in self.spans:
            if t < lo:
                return False
            if t <= hi:
                return True
        return False

    def __iter__(self) -> Iterator[int]:
        for lo, hi in self.spans:
            yield from range(lo, hi + 1)

    def __len__(self) -> int:
        return sum(hi - lo + 1 for lo, hi in self.spans)

    def __bool__(self) -> bool:
        return bool(self.spans)

    def __eq__(self, other) -> bool:
        if isinstance(other, Timeset):
            return self.spans == other.spans
        if isinstance(other, (set, frozenset)):
            return self.to_set() == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.spans)

    def __or__(self, other: "Timeset") -> "Timeset":
        return Timeset(self.spans + other.spans)

    def __and__(self, other: "Timeset") -> "Timeset":
        out = []
        for a_lo, a_hi in self.spans:
            for b_lo, b_hi in other.spans:
                lo, hi = max(a_lo, b_lo), min(a_hi, b_hi)
                if lo <= hi:
                    out.append((lo, hi))
        return Timeset(out)

    def __sub__(self, other: "Timeset") -> "Timeset":
        out = []
        for lo, hi in self.spans:
            pieces = [(lo, hi)]
            for b_lo, b_hi in other.spans:
                nxt = []
                for p_lo, p_hi in pieces:
                    if b_hi < p_lo or b_lo > p_hi:
                        nxt.append((p_lo, p_hi))
                        continue
                    if p_lo < b_lo:
                        nxt.append((p_lo, b_lo - 1))
                    if b_hi < p_hi:
                        nxt.append((b_hi + 1, p_hi))
                pieces = nxt
            out.extend(pieces)
        return Timeset(out)

    def __le__(self, other: "Timeset") -> bool:
        return not (self - other)

    @property
    def first(self) -> int | None:
        return self.spans[0][0] if self.spans else None

    @property
    def last(self) -> int | None:
        return self.spans[-1][1] if self.spans else None

    def is_contiguous(self) -> bool:
        return len(self.spans) <= 1

    def to_set(self) -> frozenset[int]:
        return frozenset(self)

    def to_json(self) -> list[list[int]]:
        return [[lo, hi] for lo, hi in self.spans]

    def __repr__(self) -> str:
        return f"Timeset({self})"

    def __str__(self) -> str:
        if not self.spans:
            return "{}"
        parts = []
        for lo, hi in self.spans:
            if lo == hi:
                parts.append(str(lo))
            elif hi == lo + 1:
                parts.append(f"{lo},{hi}")
            else:
                parts.append(f"{lo}..{hi}")
        return "{" + ",".join(parts) + "}"


EMPTY = Timeset._raw(())
