"""CNF representation, DIMACS I/O, resolution and model checking.

Literals are stored internally as non-negative integer codes so that watch and
occurrence lists can be plain Python lists indexed by literal::

    code = 2 * (var - 1) + (1 if negative else 0)

so ``code ^ 1`` negates a literal and ``code >> 1`` is the 0-based variable.
Everything that crosses the package boundary (DIMACS, models, diagnostics)
uses the usual 1-based signed integers.
"""
from __future__ import annotations

from typing import Iterable, Mapping, Sequence


class DimacsError(ValueError):
    """Malformed DIMACS input. ``line`` is 1-based (0 when not line-specific)."""

    def __init__(self, message: str, line: int = 0):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


class Tautology(Exception):
    """Raised by :func:`resolvent` when the result holds complementary literals."""


def lit(ext: int) -> int:
    """Signed DIMACS literal -> internal code."""
    if ext == 0:
        raise ValueError("0 is not a literal")
    return 2 * (ext - 1) if ext > 0 else 2 * (-ext - 1) + 1


def ext(code: int) -> int:
    """Internal code -> signed DIMACS literal."""
    v = (code >> 1) + 1
    return -v if code & 1 else v


def neg(code: int) -> int:
    return code ^ 1


def var(code: int) -> int:
    """0-based variable of an internal literal code."""
    return code >> 1


class Clause:
    __slots__ = ("lits", "learned", "activity")

    def __init__(self, lits: list[int], learned: bool = False):
        self.lits = lits
        self.learned = learned
        self.activity = 0.0

    @classmethod
    def from_ints(cls, ints: Iterable[int], learned: bool = False) -> "Clause":
        return cls([lit(x) for x in ints], learned)

    def ints(self) -> list[int]:
        return [ext(c) for c in self.lits]

    def __len__(self) -> int:
        return len(self.lits)

    def __iter__(self):
        return iter(self.lits)

    def __repr__(self) -> str:
        tag = "L" if self.learned else ""
        return f"Clause{tag}({self.ints()})"


def normalize(ints: Iterable[int]) -> list[int] | None:
    """Drop duplicate literals (keeping first occurrence); None for a tautology."""
    out: list[int] = []
    seen: set[int] = set()
    for x in ints:
        if -x in seen:
            return None
        if x not in seen:
            seen.add(x)
            out.append(x)
    return out


class Formula:
    """A CNF formula: immutable original clauses plus a growable learned store."""

    def __init__(self, num_vars: int, original: Sequence[Clause] = ()):
        self.num_vars = num_vars
        self.original: tuple[Clause, ...] = tuple(original)
        self.learned: list[Clause] = []
        for c in self.original:
            for code in c.lits:
                if (code >> 1) >= num_vars:
                    raise ValueError(f"literal {ext(code)} exceeds num_vars={num_vars}")

    @classmethod
    def from_clauses(cls, clauses: Iterable[Iterable[int]], num_vars: int | None = None) -> "Formula":
        """Build from signed-int clauses, normalizing them the same way the parser does."""
        kept = []
        top = 0
        for raw in clauses:
            raw = list(raw)
            top = max([top] + [abs(x) for x in raw])
            norm = normalize(raw)
            if norm is not None:
                kept.append(Clause.from_ints(norm))
        return cls(top if num_vars is None else num_vars, kept)

    @property
    def clauses(self) -> list[Clause]:
        return list(self.original) + self.learned

    def copy(self) -> "Formula":
        """Deep copy; solvers reorder literals inside clauses for watching."""
        f = Formula(self.num_vars, [Clause(list(c.lits)) for c in self.original])
        f.learned = [Clause(list(c.lits), True) for c in self.learned]
        return f

    def add_learned(self, clause: Clause) -> None:
        clause.learned = True
        self.learned.append(clause)

    def as_ints(self, include_learned: bool = False) -> list[list[int]]:
        src = self.clauses if include_learned else self.original
        return [c.ints() for c in src]

    def has_empty_clause(self) -> bool:
        return any(not c.lits for c in self.original)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Formula):
            return NotImplemented
        return self.num_vars == other.num_vars and self.as_ints() == other.as_ints()

    def __repr__(self) -> str:
        return f"Formula(num_vars={self.num_vars}, clauses={self.as_ints()})"


def parse_dimacs(text: str | bytes) -> Formula:
    """Parse DIMACS CNF text into a normalized :class:`Formula`.

    Duplicate literals are merged and tautological clauses dropped, so the
    resulting clause count may be smaller than the header's. An explicit empty
    clause (a lone ``0``) is kept.
    """
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("utf-8", errors="replace")
    num_vars = None
    clauses: list[Clause] = []
    current: list[int] = []
    current_line = 0
    lineno = 0
    for lineno, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if not s or s[0] == "c":
            continue
        if s[0] == "%":  # SATLIB end marker
            break
        if s[0] == "p":
            parts = s.split()
            if num_vars is not None:
                raise DimacsError("duplicate problem line", lineno)
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"malformed header {s!r}", lineno)
            try:
                num_vars, declared = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsError(f"malformed header {s!r}", lineno) from None
            if num_vars < 0 or declared < 0:
                raise DimacsError("negative counts in header", lineno)
            continue
        if num_vars is None:
            raise DimacsError("clause data before 'p cnf' header", lineno)
        for tok in s.split():
            try:
                x = int(tok)
            except ValueError:
                raise DimacsError(f"bad token {tok!r}", lineno) from None
            if x == 0:
                norm = normalize(current)
                if norm is not None:
                    clauses.append(Clause.from_ints(norm))
                current = []
                continue
            if abs(x) > num_vars:
                raise DimacsError(f"literal {x} exceeds declared {num_vars} variables", lineno)
            if not current:
                current_line = lineno
            current.append(x)
    if num_vars is None:
        raise DimacsError("missing 'p cnf' header" if lineno else "empty input", lineno)
    if current:
        raise DimacsError("clause not terminated by 0", current_line)
    return Formula(num_vars, clauses)


def to_dimacs(formula: Formula, include_learned: bool = False) -> str:
    rows = formula.as_ints(include_learned)
    out = [f"p cnf {formula.num_vars} {len(rows)}"]
    out.extend(" ".join(map(str, r + [0])) for r in rows)
    return "\n".join(out) + "\n"


def resolvent(ci: Iterable[int], cj: Iterable[int], x: int) -> list[int]:
    """Resolve ``ci`` (containing ``x``) with ``cj`` (containing ``-x``).

    Works on signed ints; ``x`` is the pivot literal as it occurs in ``ci``. Raises
    :class:`Tautology` if the result contains opposite literals.
    """
    ci, cj = list(ci), list(cj)
    if x not in ci or -x not in cj:
        raise ValueError(f"pivot {x} not in first clause or {-x} not in second")
    merged = [a for a in ci if a != x] + [b for b in cj if b != -x]
    out = normalize(merged)
    if out is None:
        raise Tautology(merged)
    return out


def verify_model(formula: Formula, model: Mapping[int, bool] | Sequence[bool],
                 include_learned: bool = True) -> bool:
    """True iff every clause has a literal true under ``model``.

    ``model`` maps 1-based variables to booleans (a dict, or a sequence
    indexed by variable with index 0 unused).
    """
    src = formula.clauses if include_learned else formula.original
    for c in src:
        for code in c.lits:
            if bool(model[(code >> 1) + 1]) != bool(code & 1):
                break
        else:
            return False
    return True
