"""Free-group words over twist, slide and transposition generators.

Letters are stored left to right as written; the rightmost letter acts
first when a word is read as a mapping class.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence


class McgError(Exception):
    """Base class for all toolkit errors."""


class WordSyntaxError(McgError):
    def __init__(self, col: int, expected: str, text: str = ""):
        super().__init__(f"column {col + 1}: expected {expected}" + (f" near {text!r}" if text else ""))
        self.col = col
        self.expected = expected


class MissingImage(McgError):
    def __init__(self, symbol):
        super().__init__(f"no image for generator {symbol}")
        self.symbol = symbol


class Kind(enum.Enum):
    TWIST = "T"
    SLIDE = "Y"
    TRANSPOSITION = "U"


class Sidedness(enum.Enum):
    ONE = "one"
    TWO = "two"


class Arrow(enum.Enum):
    FORWARD = 1
    REVERSED = -1


@dataclass(frozen=True)
class CurveRef:
    name: str
    sidedness: Sidedness = Sidedness.TWO
    arrow: Arrow | None = None

    def __post_init__(self):
        if self.arrow is not None and self.sidedness is not Sidedness.TWO:
            raise ValueError(f"one-sided curve {self.name} cannot carry an arrow")

    def __lt__(self, other):
        return self.render() < other.render()

    def unarrowed(self) -> CurveRef:
        return CurveRef(self.name, self.sidedness, None)

    def render(self) -> str:
        return self.name + ("^-1" if self.arrow is Arrow.REVERSED else "")


def one_sided(name: str) -> CurveRef:
    return CurveRef(name, Sidedness.ONE)


def two_sided(name: str) -> CurveRef:
    return CurveRef(name, Sidedness.TWO)


def arrowed(name: str, reversed_: bool = False) -> CurveRef:
    return CurveRef(name, Sidedness.TWO, Arrow.REVERSED if reversed_ else Arrow.FORWARD)


SIGNS = ("+", "-")


def flip_sign(sign: str) -> str:
    return "-" if sign == "+" else "+"


@dataclass(frozen=True)
class GeneratorSymbol:
    """A twist ``T(c,s)``, slide ``Y(mu,alpha)`` or transposition ``U(mu,alpha,s)``."""

    kind: Kind
    curves: tuple
    sign: str | None = None

    def __post_init__(self):
        if self.kind is Kind.TWIST:
            if len(self.curves) != 1 or self.sign not in SIGNS:
                raise ValueError("a twist takes one curve and an orientation")
            (c,) = self.curves
            if c.sidedness is not Sidedness.TWO or c.arrow is not None:
                raise ValueError(f"twist curve {c.name} must be two-sided without arrow")
            return
        if len(self.curves) != 2:
            raise ValueError(f"{self.kind.name.lower()} takes two curves")
        mu, alpha = self.curves
        if mu.sidedness is not Sidedness.ONE:
            raise ValueError(f"first argument {mu.name} must be one-sided")
        if alpha.sidedness is not Sidedness.TWO or alpha.arrow is None:
            raise ValueError(f"second argument {alpha.name} must be two-sided with an arrow")
        if self.kind is Kind.SLIDE and self.sign is not None:
            raise ValueError("a crosscap slide carries no orientation")
        if self.kind is Kind.TRANSPOSITION and self.sign not in SIGNS:
            raise ValueError("a crosscap transposition needs an orientation")

    @property
    def orientation(self):
        """(curve name, sign) of the orientation token, or None for slides."""
        if self.sign is None:
            return None
        return (self.curves[-1].name, self.sign)

    def render(self) -> str:
        args = [c.render() for c in self.curves]
        if self.sign is not None:
            args.append(self.sign)
        return f"{self.kind.value}({','.join(args)})"

    def __str__(self):
        return self.render()


def twist(curve: str, sign: str = "+") -> GeneratorSymbol:
    return GeneratorSymbol(Kind.TWIST, (two_sided(curve),), sign)


def slide(mu: str, alpha: str, reversed_: bool = False) -> GeneratorSymbol:
    return GeneratorSymbol(Kind.SLIDE, (one_sided(mu), arrowed(alpha, reversed_)))


def transposition(mu: str, alpha: str, sign: str = "+", reversed_: bool = False) -> GeneratorSymbol:
    return GeneratorSymbol(Kind.TRANSPOSITION, (one_sided(mu), arrowed(alpha, reversed_)), sign)


@dataclass(frozen=True)
class Letter:
    symbol: GeneratorSymbol
    exponent: int = 1

    def __post_init__(self):
        if self.exponent not in (1, -1):
            raise ValueError("exponent must be +1 or -1")

    def inverse(self) -> Letter:
        return Letter(self.symbol, -self.exponent)

    def render(self) -> str:
        return self.symbol.render() + ("^-1" if self.exponent == -1 else "")


def reduce_letters(raw: Iterable[Letter]) -> tuple:
    out: list[Letter] = []
    for letter in raw:
        if out and out[-1].symbol == letter.symbol and out[-1].exponent == -letter.exponent:
            out.pop()
        else:
            out.append(letter)
    return tuple(out)


def is_reduced(letters: Sequence[Letter]) -> bool:
    return all(
        not (a.symbol == b.symbol and a.exponent == -b.exponent)
        for a, b in zip(letters, letters[1:])
    )


class Word:
    """An immutable, freely reduced word. ``Word()`` is the identity."""

    __slots__ = ("letters",)

    def __init__(self, letters: Iterable[Letter] = ()):
        object.__setattr__(self, "letters", reduce_letters(letters))

    def __setattr__(self, name, value):
        raise AttributeError("Word is immutable")

    @classmethod
    def of(cls, *items) -> Word:
        """Build from symbols (exponent +1) or ``(symbol, exponent)`` pairs."""
        letters = []
        for item in items:
            if isinstance(item, Letter):
                letters.append(item)
            elif isinstance(item, GeneratorSymbol):
                letters.append(Letter(item, 1))
            else:
                letters.append(Letter(*item))
        return cls(letters)

    @classmethod
    def parse(cls, text: str) -> Word:
        return cls(parse_letters(text))

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, i):
        return self.letters[i]

    def __eq__(self, other):
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self):
        return hash(self.letters)

    def __mul__(self, other: Word) -> Word:
        return concat(self, other)

    def __pow__(self, n: int) -> Word:
        base = self if n >= 0 else invert(self)
        return Word(base.letters * abs(n))

    def __repr__(self):
        return f"Word({render_letters(self.letters)!r})"

    def __str__(self):
        return render_letters(self.letters)

    def symbols(self) -> set:
        return {letter.symbol for letter in self.letters}


IDENTITY = Word()


def reduce(raw: Iterable[Letter]) -> Word:
    return Word(raw)


def concat(u: Word, v: Word) -> Word:
    return Word(u.letters + v.letters)


def invert_letters(letters: Sequence[Letter]) -> tuple:
    return tuple(letter.inverse() for letter in reversed(letters))


def invert(w: Word) -> Word:
    return Word(invert_letters(w.letters))


def conjugate(f: Word, w: Word) -> Word:
    """``f w f^-1``."""
    return Word(f.letters + w.letters + invert_letters(f.letters))


def substitute(w: Word, images: Mapping[GeneratorSymbol, Word]) -> Word:
    out: list[Letter] = []
    for letter in w.letters:
        try:
            image = images[letter.symbol]
        except KeyError:
            raise MissingImage(letter.symbol) from None
        out.extend(image.letters if letter.exponent == 1 else invert_letters(image.letters))
    return Word(out)


# -- text form ---------------------------------------------------------------

def render_letters(letters: Sequence[Letter]) -> str:
    if not letters:
        return "1"
    return " ".join(letter.render() for letter in letters)


_NAME = r"[A-Za-z_][A-Za-z0-9_']*"
_LETTER_RE = re.compile(r"([TYU])\(([^()]*)\)(\^-1)?")
_NAME_RE = re.compile(_NAME + r"$")


def _curve_arg(text: str, col: int, allow_arrow: bool) -> tuple:
    text = text.strip()
    rev = text.endswith("^-1")
    name = text[:-3] if rev else text
    if not _NAME_RE.match(name):
        raise WordSyntaxError(col, "curve name", text)
    if rev and not allow_arrow:
        raise WordSyntaxError(col, "curve without ^-1", text)
    return name, rev


def parse_symbol(text: str, col: int = 0) -> GeneratorSymbol:
    m = _LETTER_RE.fullmatch(text.strip())
    if not m or m.group(3):
        raise WordSyntaxError(col, "generator symbol", text)
    return _symbol_from_match(m, col)


def _symbol_from_match(m, col: int) -> GeneratorSymbol:
    kind = Kind(m.group(1))
    args = [a.strip() for a in m.group(2).split(",")]
    try:
        if kind is Kind.TWIST:
            if len(args) != 2:
                raise WordSyntaxError(col, "T(curve,sign)", m.group(0))
            name, _ = _curve_arg(args[0], col, allow_arrow=False)
            if args[1] not in SIGNS:
                raise WordSyntaxError(col, "orientation + or -", m.group(0))
            return twist(name, args[1])
        want = 2 if kind is Kind.SLIDE else 3
        if len(args) != want:
            raise WordSyntaxError(col, f"{kind.value} with {want} arguments", m.group(0))
        mu, _ = _curve_arg(args[0], col, allow_arrow=False)
        alpha, rev = _curve_arg(args[1], col, allow_arrow=True)
        if kind is Kind.SLIDE:
            return slide(mu, alpha, rev)
        if args[2] not in SIGNS:
            raise WordSyntaxError(col, "orientation + or -", m.group(0))
        return transposition(mu, alpha, args[2], rev)
    except ValueError as exc:
        raise WordSyntaxError(col, str(exc), m.group(0)) from None


def parse_letters(text: str, col_offset: int = 0) -> tuple:
    """Parse a space-separated letter sequence without reducing it."""
    letters: list[Letter] = []
    pos = 0
    n = len(text)
    while True:
        while pos < n and text[pos] in " \t":
            pos += 1
        if pos >= n:
            break
        if text[pos] == "1" and (pos + 1 == n or text[pos + 1] in " \t"):
            if letters or text[pos + 1:].strip():
                raise WordSyntaxError(col_offset + pos, "generator letter", "1")
            return ()
        m = _LETTER_RE.match(text, pos)
        if not m:
            raise WordSyntaxError(col_offset + pos, "generator letter", text[pos:pos + 12])
        symbol = _symbol_from_match(m, col_offset + pos)
        letters.append(Letter(symbol, -1 if m.group(3) else 1))
        pos = m.end()
        if pos < n and text[pos] not in " \t":
            raise WordSyntaxError(col_offset + pos, "space between letters", text[pos:pos + 12])
    if not letters:
        raise WordSyntaxError(col_offset, "word (use 1 for the identity)")
    return tuple(letters)
