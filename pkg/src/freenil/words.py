"""Free-monoid words, cyclic words, primitivity, and the admissible-set sieve.

Words are tuples of letters drawn from a finite ordered alphabet.  The
alphabet's declared order (not Python's string order) drives every
lexicographic comparison, so ``Alphabet(("b", "a"))`` really does sort
``b`` before ``a``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

Word = tuple[str, ...]


def as_word(w: Iterable[str] | str) -> Word:
    """Coerce a string (one letter per character) or iterable to a Word."""
    if isinstance(w, str):
        return tuple(w)
    return tuple(w)


class Alphabet:
    """A finite ordered set of letters; the order fixes all tie-breaking."""

    def __init__(self, letters: Iterable[str]):
        self.letters: tuple[str, ...] = tuple(letters)
        if not self.letters:
            raise ValueError("alphabet must be nonempty")
        if len(set(self.letters)) != len(self.letters):
            raise ValueError("alphabet letters must be distinct")
        if any(not l for l in self.letters):
            raise ValueError("alphabet letters must be nonempty strings")
        self._rank = {l: i for i, l in enumerate(self.letters)}

    def __len__(self) -> int:
        return len(self.letters)

    def __contains__(self, letter: str) -> bool:
        return letter in self._rank

    def __repr__(self) -> str:
        return f"Alphabet({self.letters!r})"

    def key(self, u: Word) -> tuple[int, ...]:
        """Map a word to its letter-rank tuple for order comparisons."""
        try:
            return tuple(self._rank[l] for l in u)
        except KeyError as exc:
            raise ValueError(f"letter {exc.args[0]!r} not in alphabet") from None

    def sort_key(self, u: Word) -> tuple[int, tuple[int, ...]]:
        """Length-then-lex key, the order used to pick sieve pivots."""
        return (len(u), self.key(u))

    def words_of_length(self, n: int) -> Iterator[Word]:
        if n == 0:
            yield ()
            return
        for prefix in self.words_of_length(n - 1):
            for l in self.letters:
                yield prefix + (l,)


def is_reduced(u: Word) -> bool:
    """True iff the word is primitive: not a proper power of any shorter word.

    Uses the border (failure-function) criterion: the minimal period is
    ``len(u) - border(u)``, and ``u`` is a proper power exactly when that
    period properly divides ``len(u)``.
    """
    n = len(u)
    if n == 0:
        raise ValueError("empty word has no primitivity status")
    fail = [0] * n
    k = 0
    for i in range(1, n):
        while k > 0 and u[i] != u[k]:
            k = fail[k - 1]
        if u[i] == u[k]:
            k += 1
        fail[i] = k
    period = n - fail[n - 1]
    return not (period < n and n % period == 0)


def _least_rotation_index(key: Sequence[int]) -> int:
    """Index of the lexicographically least rotation (Booth's algorithm)."""
    n = len(key)
    doubled = tuple(key) + tuple(key)
    fail = [-1] * (2 * n)
    least = 0
    for j in range(1, 2 * n):
        c = doubled[j]
        i = fail[j - least - 1]
        while i != -1 and c != doubled[least + i + 1]:
            if c < doubled[least + i + 1]:
                least = j - i - 1
            i = fail[i]
        if c != doubled[least + i + 1]:
            if c < doubled[least]:
                least = j
            fail[j - least] = -1
        else:
            fail[j - least] = i + 1
    return least


def cyclic_canonical(u: Word, alphabet: Alphabet) -> Word:
    """Canonical representative of the rotation class: the least rotation.

    Two words get equal results iff they are rotations of each other.
    """
    if not u:
        raise ValueError("empty word has no rotation class")
    k = _least_rotation_index(alphabet.key(u))
    return u[k:] + u[:k]


def rotate(u: Word, k: int) -> Word:
    if not u:
        return u
    k %= len(u)
    return u[k:] + u[:k]


def primitive_classes(alphabet: Alphabet, bound: int) -> set[Word]:
    """Canonical representatives of rotation classes of primitive words.

    Enumerates every word of length 1..bound, keeps the primitive ones,
    and deduplicates through `cyclic_canonical`.
    """
    if bound < 1:
        raise ValueError("length bound must be >= 1")
    out: set[Word] = set()
    for n in range(1, bound + 1):
        for w in alphabet.words_of_length(n):
            if is_reduced(w):
                out.add(cyclic_canonical(w, alphabet))
    return out


def mobius(n: int) -> int:
    """Moebius function, by trial-division factorization."""
    if n < 1:
        raise ValueError("mobius undefined for n < 1")
    result = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    if n > 1:
        result = -result
    return result


def aperiodic_necklace_count(k: int, n: int) -> int:
    """Number of rotation classes of primitive length-n words over k letters."""
    if n < 1:
        raise ValueError("length must be >= 1")
    total = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            total += mobius(d) * k ** (n // d)
            if d != n // d:
                total += mobius(n // d) * k ** d
        d += 1
    assert total % n == 0
    return total // n


def prefix_extensions(words: set[Word], pivot: Word, bound: int) -> set[Word]:
    """All words ``pivot^p + other`` (p >= 0, other != pivot) of length <= bound."""
    if pivot not in words:
        raise ValueError("pivot must belong to the word set")
    out: set[Word] = set()
    for other in words:
        if other == pivot:
            continue
        w = other
        while len(w) <= bound:
            out.add(w)
            w = pivot + w
    return out


@dataclass(frozen=True)
class SieveState:
    """Snapshot of one sieve step.

    ``pool`` is the current word set (already truncated to the length
    budget), ``pivot`` the chosen minimal word, ``min_len`` its length,
    and ``emitted`` every pivot chosen so far.
    """

    step: int
    pool: frozenset[Word]
    pivot: Word | None
    min_len: int | None
    emitted: tuple[Word, ...] = field(default_factory=tuple)


def sieve(alphabet: Alphabet, bound: int) -> tuple[SieveState, list[Word]]:
    """Run the pivot sieve up to the length budget.

    Starts from the single letters, repeatedly picks the shortest word
    (ties broken by the alphabet order), emits it, and replaces the pool
    by its prefix extensions.  Truncation to ``bound`` is sound because
    extensions never shorten words.  Returns the final state and the
    emitted pivots, which enumerate one representative per primitive
    rotation class of length <= bound.
    """
    if bound < 1:
        raise ValueError("length bound must be >= 1")
    letters = [(l,) for l in alphabet.letters]
    if len(alphabet) <= 1:
        state = SieveState(0, frozenset(), None, None, tuple(letters))
        return state, letters
    pool: set[Word] = set(letters)
    emitted: list[Word] = []
    step = 0
    min_lens: list[int] = []
    while pool:
        pivot = min(pool, key=alphabet.sort_key)
        assert is_reduced(pivot), "sieve pivots must be primitive"
        emitted.append(pivot)
        min_lens.append(len(pivot))
        pool = prefix_extensions(pool, pivot, bound)
        step += 1
    assert min_lens == sorted(min_lens), "pivot lengths must be non-decreasing"
    state = SieveState(step, frozenset(pool), None, None, tuple(emitted))
    return state, emitted


def verify_admissible(candidates: Sequence[Word], alphabet: Alphabet, bound: int):
    """Check a candidate admissible set against the enumeration oracle.

    Verifies that, restricted to length <= bound, every candidate is
    primitive, the canonical-rotation map is injective on the candidates,
    and its image is exactly the set of primitive rotation classes.
    Failures are reported as items, never raised.
    Returns a list of (check name, expected, got, ok) tuples.
    """
    from .report import CheckItem

    items: list[CheckItem] = []
    in_range = [w for w in candidates if len(w) <= bound]

    not_reduced = [w for w in in_range if not is_reduced(w)]
    items.append(CheckItem("all candidates primitive", "[]",
                           _fmt_words(not_reduced), not not_reduced))

    canon: dict[Word, Word] = {}
    collisions: list[Word] = []
    for w in in_range:
        if not is_reduced(w):
            continue
        c = cyclic_canonical(w, alphabet)
        if c in canon and canon[c] != w:
            collisions.append(w)
        canon.setdefault(c, w)
    items.append(CheckItem("rotation classes distinct", "[]",
                           _fmt_words(collisions), not collisions))

    target = primitive_classes(alphabet, bound)
    missing = sorted(target - set(canon), key=alphabet.sort_key)
    extra = sorted(set(canon) - target, key=alphabet.sort_key)
    items.append(CheckItem("no class missing", "[]", _fmt_words(missing), not missing))
    items.append(CheckItem("no class extraneous", "[]", _fmt_words(extra), not extra))
    items.append(CheckItem("class count", str(len(target)), str(len(canon)),
                           len(canon) == len(target) and not collisions))
    return items


def _fmt_words(ws: Iterable[Word]) -> str:
    return "[" + ", ".join("".join(w) for w in ws) + "]"
