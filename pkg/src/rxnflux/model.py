"""Reaction-network models and their textual format.

A model is a finite list of named reactions over identifier-named species
plus an initial multiset of species.  Reactions have one or two reactants
(never zero, never more), any number of products (repetition allowed) and
a strictly positive rate constant.

The file format is line oriented::

    # comment
    init A * 4
    r1: A -> P + P @ 1.0
    r4: B + C -> D @ 0.5
    sink: P -> @ 2e-3

``init`` lines accumulate; ``#`` starts a comment anywhere on a line.
The reaction name ``init`` is reserved for initialization events.
"""

import re
from dataclasses import dataclass, field

from .errors import ParseError

INIT_LABEL = "init"

_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
_NUMBER = re.compile(r"[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?")


@dataclass(frozen=True)
class Reaction:
    """A named rewrite rule ``name: reactants -> products @ rate``."""

    name: str
    reactants: tuple
    products: tuple
    rate: float

    def __post_init__(self):
        if not _IDENT.fullmatch(self.name):
            raise ValueError(f"invalid reaction name {self.name!r}")
        if self.name == INIT_LABEL:
            raise ValueError(f"reaction name {INIT_LABEL!r} is reserved")
        if len(self.reactants) not in (1, 2):
            raise ValueError(
                f"reaction {self.name!r} must have 1 or 2 reactants, "
                f"got {len(self.reactants)}"
            )
        for sp in (*self.reactants, *self.products):
            if not _IDENT.fullmatch(sp):
                raise ValueError(f"invalid species name {sp!r}")
        if not (self.rate > 0.0) or self.rate != self.rate or self.rate == float("inf"):
            raise ValueError(f"reaction {self.name!r} needs a positive finite rate")

    @property
    def arity(self):
        return len(self.reactants)


@dataclass(frozen=True)
class Model:
    """An initial species multiset plus an ordered list of reactions.

    ``initial`` is a sorted tuple of (species, count) pairs with positive
    counts; ``species`` is the sorted tuple of every species mentioned in a
    reaction or an ``init`` line (including zero-count mentions).
    """

    initial: tuple
    reactions: tuple
    species: tuple = field(default=())

    def __post_init__(self):
        mentioned = {sp for sp, _ in self.initial}
        for r in self.reactions:
            mentioned.update(r.reactants)
            mentioned.update(r.products)
        mentioned.update(self.species)
        object.__setattr__(self, "species", tuple(sorted(mentioned)))
        object.__setattr__(
            self, "initial", tuple(sorted((sp, int(n)) for sp, n in self.initial))
        )
        names = [r.name for r in self.reactions]
        if len(set(names)) != len(names):
            dup = sorted({n for n in names if names.count(n) > 1})
            raise ValueError(f"duplicate reaction name(s): {', '.join(dup)}")
        for sp, n in self.initial:
            if n <= 0:
                raise ValueError(f"initial count for {sp!r} must be positive")

    def initial_counts(self):
        """Initial multiset as a plain dict (species absent means zero)."""
        return dict(self.initial)

    def reaction(self, name):
        for r in self.reactions:
            if r.name == name:
                return r
        raise KeyError(name)


class _LineScanner:
    """Cursor over one line, reporting 1-based columns on failure."""

    def __init__(self, text, lineno):
        self.text = text
        self.lineno = lineno
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    @property
    def column(self):
        return self.pos + 1

    def at_end(self):
        self.skip_ws()
        return self.pos >= len(self.text)

    def fail(self, expected):
        got = self.text[self.pos : self.pos + 12] or "end of line"
        raise ParseError(
            f"expected {expected}, got {got!r}", self.lineno, self.column
        )

    def take(self, pattern, expected):
        self.skip_ws()
        m = pattern.match(self.text, self.pos) if hasattr(pattern, "match") else None
        if m is None:
            self.fail(expected)
        self.pos = m.end()
        return m.group(0)

    def take_literal(self, literal):
        self.skip_ws()
        if not self.text.startswith(literal, self.pos):
            self.fail(f"{literal!r}")
        self.pos += len(literal)

    def peek_literal(self, literal):
        self.skip_ws()
        return self.text.startswith(literal, self.pos)


def _parse_species_list(scan, terminators):
    """Parse ``A + B + ...`` up to (not consuming) one of the terminators."""
    names = []
    while True:
        for term in terminators:
            if scan.peek_literal(term):
                return names
        if names and scan.at_end():
            scan.fail(f"'+' or {terminators[0]!r}")
        if names:
            scan.take_literal("+")
        names.append(scan.take(_IDENT, "a species name"))
        scan.skip_ws()


def parse_model(text):
    """Parse the reaction DSL into a :class:`Model`.

    Raises :class:`ParseError` with line/column information on any
    grammar or invariant violation; input is never silently repaired.
    """
    initial = {}
    mentioned = set()
    reactions = []
    seen_names = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        scan = _LineScanner(line, lineno)
        word = scan.take(_IDENT, "'init' or a reaction name")
        if word == INIT_LABEL and not scan.peek_literal(":"):
            species = scan.take(_IDENT, "a species name")
            scan.take_literal("*")
            count = scan.take(re.compile(r"\d+"), "a non-negative integer count")
            if not scan.at_end():
                scan.fail("end of line")
            mentioned.add(species)
            initial[species] = initial.get(species, 0) + int(count)
            continue

        name = word
        if name == INIT_LABEL:
            raise ParseError(
                f"reaction name {INIT_LABEL!r} is reserved", lineno, 1
            )
        if name in seen_names:
            raise ParseError(
                f"duplicate reaction name {name!r} "
                f"(first defined on line {seen_names[name]})",
                lineno,
                1,
            )
        scan.take_literal(":")
        reactants = _parse_species_list(scan, ("->",))
        if not reactants:
            raise ParseError("reaction needs at least one reactant", lineno, scan.column)
        if len(reactants) > 2:
            raise ParseError(
                f"too many reactants ({len(reactants)}); at most 2 allowed",
                lineno,
                scan.column,
            )
        scan.take_literal("->")
        products = _parse_species_list(scan, ("@",))
        scan.take_literal("@")
        scan.skip_ws()
        ratecol = scan.column
        ratetxt = scan.take(_NUMBER, "a rate constant")
        if not scan.at_end():
            scan.fail("end of line")
        rate = float(ratetxt)
        if rate <= 0.0:
            raise ParseError(
                f"rate of reaction {name!r} must be positive, got {ratetxt}",
                lineno,
                ratecol,
            )
        seen_names[name] = lineno
        mentioned.update(reactants)
        mentioned.update(products)
        reactions.append(Reaction(name, tuple(reactants), tuple(products), rate))

    positive = tuple((sp, n) for sp, n in initial.items() if n > 0)
    return Model(positive, tuple(reactions), tuple(sorted(mentioned)))


def serialize_model(model):
    """Render a model back into DSL text; reparsing yields an equal model."""
    lines = []
    counts = model.initial_counts()
    for sp, n in model.initial:
        lines.append(f"init {sp} * {n}")
    in_reactions = set()
    for r in model.reactions:
        in_reactions.update(r.reactants)
        in_reactions.update(r.products)
    for sp in model.species:
        # zero-count mentions survive only via an explicit init line
        if sp not in counts and sp not in in_reactions:
            lines.append(f"init {sp} * 0")
    for r in model.reactions:
        left = " + ".join(r.reactants)
        right = " + ".join(r.products)
        arrow = f"{left} -> {right}" if right else f"{left} ->"
        lines.append(f"{r.name}: {arrow} @ {r.rate!r}")
    return "\n".join(lines) + "\n"
