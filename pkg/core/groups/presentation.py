"""
Finite group presentations and free-group words

Words are tuples of ``Letter(generator, sign)``. In text a generator is a
lowercase letter followed by optional digits (``a``, ``t1``); the same name
with its first letter uppercased denotes the inverse (``A``, ``T1``).

Presentation file format::

    # comment
    gens: a b
    rel: abAB
"""
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union

from core.utils.error_handler import PresentationParseError
from core.utils.logging_config import get_logger

logger = get_logger(__name__)

NAME_PATTERN = re.compile(r'[a-z][0-9]*')
TOKEN_PATTERN = re.compile(r'[A-Za-z][0-9]*')


class Letter(NamedTuple):
    """One signed generator occurrence"""
    generator: int
    sign: int

    def inverse(self) -> 'Letter':
        return Letter(self.generator, -self.sign)


Word = Tuple[Letter, ...]


@dataclass(frozen=True)
class Generator:
    index: int
    name: str


@dataclass(frozen=True)
class Presentation:
    """
    Group presentation <generators | relators>

    Relators are stored as given; cyclic permutations and inverses are
    produced on demand by ``cyclic_conjugates``.
    """
    generators: Tuple[Generator, ...]
    relators: Tuple[Word, ...]

    def __post_init__(self):
        seen = set()
        for position, generator in enumerate(self.generators):
            if generator.index != position:
                raise ValueError(f"Generator indices must be contiguous from 0, got {generator.index} at {position}")
            if not NAME_PATTERN.fullmatch(generator.name):
                raise ValueError(f"Invalid generator name: {generator.name!r}")
            if generator.name in seen:
                raise ValueError(f"Duplicate generator name: {generator.name!r}")
            seen.add(generator.name)
        for relator in self.relators:
            if not relator:
                raise ValueError("Relators must be nonempty words")
            for letter in relator:
                if not 0 <= letter.generator < len(self.generators) or letter.sign not in (1, -1):
                    raise ValueError(f"Relator letter {letter} outside the alphabet")

    @classmethod
    def from_names(cls, names: Sequence[str], relators: Iterable[Word]) -> 'Presentation':
        generators = tuple(Generator(i, name) for i, name in enumerate(names))
        return cls(generators, tuple(tuple(r) for r in relators))

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(g.name for g in self.generators)

    @property
    def rank(self) -> int:
        return len(self.generators)

    @property
    def max_relator_length(self) -> int:
        """The constant K: longest relator length (0 without relators)"""
        return max((len(r) for r in self.relators), default=0)

    def is_triangular(self) -> bool:
        return self.max_relator_length <= 3

    def parse(self, text: str) -> Word:
        return parse_word(text, self)

    def render(self, word: Word) -> str:
        return render_word(word, self)


Alphabet = Union[Presentation, Sequence[str]]


def _name_list(alphabet: Alphabet) -> Sequence[str]:
    if isinstance(alphabet, Presentation):
        return alphabet.names
    return alphabet


def parse_word(text: str, alphabet: Alphabet, line: Optional[int] = None) -> Word:
    """
    Parse a word written with the lowercase/uppercase convention

    No reduction is performed.

    Args:
        text: Word text, e.g. "abAB"
        alphabet: Presentation or sequence of generator names
        line: Source line, reported in errors

    Returns:
        The word as a tuple of letters

    Raises:
        PresentationParseError: On an unknown character or generator
    """
    names = _name_list(alphabet)
    index = {name: i for i, name in enumerate(names)}
    letters: List[Letter] = []
    position = 0
    while position < len(text):
        match = TOKEN_PATTERN.match(text, position)
        if match is None:
            raise PresentationParseError(
                f"Unexpected character {text[position]!r} in word {text!r}",
                line=line, position=position
            )
        token = match.group(0)
        name = token[0].lower() + token[1:]
        if name not in index:
            raise PresentationParseError(
                f"Unknown generator {token!r} in word {text!r}",
                line=line, position=position
            )
        letters.append(Letter(index[name], 1 if token[0].islower() else -1))
        position = match.end()
    return tuple(letters)


def render_letter(letter: Letter, alphabet: Alphabet) -> str:
    name = _name_list(alphabet)[letter.generator]
    return name if letter.sign > 0 else name[0].upper() + name[1:]


def render_word(word: Word, alphabet: Alphabet) -> str:
    return ''.join(render_letter(letter, alphabet) for letter in word)


def inverse(word: Word) -> Word:
    return tuple(letter.inverse() for letter in reversed(word))


def free_reduce(word: Word) -> Word:
    """
    Cancel adjacent inverse pairs until none remain

    Cyclic reduction is deliberately not performed: the first and last
    letters stay put because the base point is fixed.
    """
    stack: List[Letter] = []
    for letter in word:
        if stack and stack[-1] == letter.inverse():
            stack.pop()
        else:
            stack.append(letter)
    return tuple(stack)


def is_reduced(word: Word) -> bool:
    return all(word[i + 1] != word[i].inverse() for i in range(len(word) - 1))


def cyclic_conjugates(relator: Word) -> List[Word]:
    """All distinct cyclic permutations of a relator and of its inverse"""
    seen = []
    for base in (relator, inverse(relator)):
        for shift in range(len(base)):
            rotated = base[shift:] + base[:shift]
            if rotated not in seen:
                seen.append(rotated)
    return seen


def abelianization(word: Word, rank: int) -> Tuple[int, ...]:
    """Exponent-sum vector of a word"""
    vector = [0] * rank
    for letter in word:
        vector[letter.generator] += letter.sign
    return tuple(vector)


def parse_presentation(text: str) -> Presentation:
    """
    Parse the presentation text format

    Args:
        text: File contents

    Returns:
        Parsed presentation

    Raises:
        PresentationParseError: On any malformed line
    """
    names: Optional[List[str]] = None
    relators: List[Word] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split('#', 1)[0].strip()
        if not content:
            continue
        key, sep, rest = content.partition(':')
        key = key.strip()
        if not sep or key not in ('gens', 'rel'):
            raise PresentationParseError(f"Expected 'gens:' or 'rel:' line, got {content!r}", line=number)
        if key == 'gens':
            if names is not None:
                raise PresentationParseError("Duplicate 'gens:' line", line=number)
            names = rest.split()
            for name in names:
                if not NAME_PATTERN.fullmatch(name):
                    raise PresentationParseError(f"Invalid generator name {name!r}", line=number)
            if len(set(names)) != len(names):
                raise PresentationParseError("Duplicate generator names", line=number)
            continue
        if names is None:
            raise PresentationParseError("'rel:' line before 'gens:' line", line=number)
        word_text = rest.strip()
        if not word_text:
            raise PresentationParseError("Empty relator", line=number)
        relators.append(parse_word(word_text, names, line=number))
    if names is None:
        raise PresentationParseError("Missing 'gens:' line")
    return Presentation.from_names(names, relators)


def render_presentation(presentation: Presentation, header: Sequence[str] = ()) -> str:
    lines = [f"# {line}" for line in header]
    lines.append("gens: " + " ".join(presentation.names))
    lines.extend("rel: " + render_word(r, presentation) for r in presentation.relators)
    return "\n".join(lines) + "\n"


def load_presentation(path: Union[str, Path]) -> Presentation:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise PresentationParseError(f"Cannot read presentation file {path}: {e}")
    presentation = parse_presentation(text)
    logger.debug(f"Loaded presentation {path} with {presentation.rank} generators, "
                 f"{len(presentation.relators)} relators")
    return presentation


def _fresh_names(taken: Iterable[str]):
    taken = set(taken)
    k = 1
    while True:
        name = f"t{k}"
        if name not in taken:
            taken.add(name)
            yield name
        k += 1


def triangularize(presentation: Presentation) -> Presentation:
    """
    Rewrite every relator of length L >= 4 into L-3 new generators and
    L-2 relators of length 3.

    A relator r = w1 w2 with |w1| = 2 is replaced by t^-1 w1 and t w2 where
    t is a new generator; the second piece is split again while it is
    longer than 3. Relators of length <= 3 are kept unchanged.
    """
    names = list(presentation.names)
    fresh = _fresh_names(names)
    relators: List[Word] = []
    for relator in presentation.relators:
        current = relator
        while len(current) > 3:
            name = next(fresh)
            names.append(name)
            added = len(names) - 1
            relators.append((Letter(added, -1),) + current[:2])
            current = (Letter(added, 1),) + current[2:]
        relators.append(current)
    result = Presentation.from_names(names, relators)
    if result.rank > presentation.rank:
        logger.info(f"Triangularized: {result.rank - presentation.rank} new generators, "
                    f"{len(result.relators)} relators")
    return result


def z2_presentation() -> Presentation:
    """<a, b | abAB>"""
    return Presentation.from_names(['a', 'b'], [parse_word('abAB', ['a', 'b'])])


def _commutator(x: Word, y: Word) -> Word:
    return inverse(x) + inverse(y) + x + y


def bridson_presentation(m: int) -> Presentation:
    """
    The groups G_m with generators a1..am, s, t, u (u plays the role of tau)

    Relations: s^-1 a_i s = a_{i+1} for i < m; t and u commute with a_i for
    i < m; s and t commute with a_m; u commutes with a_m t.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    names = [f"a{i}" for i in range(1, m + 1)] + ['s', 't', 'u']
    a = [(Letter(i, 1),) for i in range(m)]
    s, t, u = ((Letter(m + k, 1),) for k in range(3))
    relators: List[Word] = []
    for i in range(m - 1):
        relators.append(inverse(s) + a[i] + s + inverse(a[i + 1]))
        relators.append(_commutator(t, a[i]))
        relators.append(_commutator(u, a[i]))
    for relator in (_commutator(s, a[m - 1]), _commutator(t, a[m - 1]), _commutator(u, a[m - 1] + t)):
        if relator not in relators:
            relators.append(relator)
    return Presentation.from_names(names, relators)


def is_null_homotopic_bounded(presentation: Presentation, word: Word, area_budget: int):
    """
    Search for a van Kampen diagram of area at most ``area_budget``

    Returns:
        A minimal-area witness diagram, or None when no diagram exists
        within the budget (which does not prove the word nontrivial)
    """
    from core.groups.invariants import witness_diagram
    return witness_diagram(presentation, word, area_budget)
