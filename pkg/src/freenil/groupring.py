"""Integer group rings over the two normal-form constructions, together with
the reduced-sequence grading of the ring and basis descriptions of its
syllable blocks.

Every basis word of the ring falls into exactly one block product indexed by
a sequence (i_1, j_1, ..., i_n, j_n) over {1, 2} with j_k != i_{k+1}; the
empty sequence is the copy of the subgroup ring itself.  For an amalgam a
factor-1 syllable contributes (1, 1) and a factor-2 syllable (2, 2).  For an
HNN extension the four block shapes are: a base element outside the left
image (1, 1); a base element wrapped as t*g*t^-1 (2, 2); t*g (2, 1); and
g*t^-1 (1, 2).  ``grade_decompose`` classifies a ring element's basis words
by this sequence; ``s_blocks`` lists left-module bases for the four
single-step blocks in the separate (i, j) coordinates in which the mixed
products of an amalgam vanish.
"""

from __future__ import annotations

from dataclasses import dataclass

from .amalgam import Amalgam, AmalgamWord
from .errors import InvariantError
from .hnn import HNN, HNNWord


@dataclass(frozen=True)
class SequenceType:
    """Flattened block-index sequence with the no-adjacent-repeat rule."""

    seq: tuple

    def __post_init__(self):
        seq = self.seq
        if not isinstance(seq, tuple) or len(seq) % 2:
            raise ValueError("sequence must be a flat tuple of index pairs")
        if any(v not in (1, 2) for v in seq):
            raise ValueError("sequence entries must be 1 or 2")
        for k in range(1, len(seq) // 2):
            if seq[2 * k - 1] == seq[2 * k]:
                raise ValueError("consecutive blocks may not share an index")

    @property
    def blocks(self):
        return tuple(zip(self.seq[0::2], self.seq[1::2]))

    def __lt__(self, other):
        return (len(self.seq), self.seq) < (len(other.seq), other.seq)


EMPTY_SEQUENCE = SequenceType(())


class GroupRingElement:
    """Finitely supported integer combination of normal-form words."""

    __slots__ = ("construction", "terms")

    def __init__(self, construction, terms):
        self.construction = construction
        self.terms = {word: int(c) for word, c in terms.items() if c}

    @classmethod
    def zero(cls, construction):
        return cls(construction, {})

    @classmethod
    def one(cls, construction):
        return cls(construction, {construction.identity_word(): 1})

    @classmethod
    def basis(cls, construction, tokens, coeff=1):
        return cls(construction, {construction.normalize(tokens): coeff})

    def _match(self, other):
        if not isinstance(other, GroupRingElement):
            raise TypeError("expected a group ring element")
        if other.construction is not self.construction:
            raise ValueError("elements live over different constructions")
        return other

    def __add__(self, other):
        self._match(other)
        out = dict(self.terms)
        for word, c in other.terms.items():
            out[word] = out.get(word, 0) + c
        return GroupRingElement(self.construction, out)

    def __neg__(self):
        return GroupRingElement(self.construction, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, scalar):
        if not isinstance(scalar, int):
            return NotImplemented
        return GroupRingElement(self.construction, {w: scalar * c for w, c in self.terms.items()})

    def __mul__(self, other):
        return ring_mul(self, other)

    def __eq__(self, other):
        return (
            isinstance(other, GroupRingElement)
            and self.construction is other.construction
            and self.terms == other.terms
        )

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"GroupRingElement({len(self.terms)} terms)"


def ring_mul(u, v):
    """Bilinear product; every basis product is renormalized."""
    u._match(v)
    acc = {}
    for w1, c1 in u.terms.items():
        for w2, c2 in v.terms.items():
            word = u.construction.multiply_words(w1, w2)
            acc[word] = acc.get(word, 0) + c1 * c2
    return GroupRingElement(u.construction, acc)


def _hnn_sequence(hnn, word):
    """Block sequence of a Britton-reduced word.

    Scans left to right with a pending base element.  A plain t opens a
    (2, 1) block; t followed on both sides by base material and closed by
    t^-1 forms a (2, 2) block; a t^-1 closes the pending element into a
    (1, 2) block.  Pending elements inside the left image dissolve into the
    subgroup coefficient, everything else stands alone as (1, 1).
    """
    hnn.assert_reduced(word)
    in_left = hnn.alpha.image.membership
    blocks = []
    pending = word.base0
    tail = word.tail
    i = 0
    while i < len(tail):
        sign, g = tail[i]
        if sign == 1:
            if not in_left(pending):
                blocks.append((1, 1))
            if i + 1 < len(tail) and tail[i + 1][0] == -1:
                blocks.append((2, 2))
                pending = tail[i + 1][1]
                i += 2
            else:
                blocks.append((2, 1))
                pending = hnn.base.identity
                i += 1
        else:
            blocks.append((1, 2))
            pending = g
            i += 1
    if not in_left(pending):
        blocks.append((1, 1))
    return SequenceType(tuple(v for block in blocks for v in block))


def word_sequence_type(construction, word):
    """The grading sequence of one normal-form basis word."""
    if isinstance(construction, Amalgam):
        if not isinstance(word, AmalgamWord):
            raise TypeError("expected an amalgam word")
        return SequenceType(tuple(v for k, _ in word.syllables for v in (k, k)))
    if isinstance(construction, HNN):
        if not isinstance(word, HNNWord):
            raise TypeError("expected an HNN word")
        return _hnn_sequence(construction, word)
    raise TypeError(f"no grading for construction {construction!r}")


def grade_decompose(u):
    """Split a ring element by the block sequence of each basis word.

    The returned components carry disjoint supports and sum back to the
    input exactly.
    """
    buckets = {}
    for word, c in u.terms.items():
        buckets.setdefault(word_sequence_type(u.construction, word), {})[word] = c
    return {
        seq: GroupRingElement(u.construction, terms)
        for seq, terms in sorted(buckets.items(), key=lambda kv: (len(kv[0].seq), kv[0].seq))
    }


@dataclass(frozen=True)
class SBlock:
    """Left-module basis description of one (i, j) block.

    ``members`` lists normal-form words; ``exhaustive`` says whether the
    list is the whole basis or a bounded sample of an infinite one.
    """

    left: int
    right: int
    members: tuple
    exhaustive: bool
    form: str


def _amalgam_block(amalgam, k, i, j, bound):
    factor = amalgam.factors[k - 1]
    image = amalgam.embeddings[k - 1].image
    reps = [r for r in image.transversal_list(bound) if r != factor.identity]
    members = tuple(AmalgamWord(amalgam.subgroup.identity, ((k, r),)) for r in reps)
    return SBlock(i, j, members, image.finite_index, "syllable")


def _hnn_block(hnn, i, j, bound):
    identity = hnn.base.identity
    if (i, j) == (1, 1):
        image, form = hnn.beta.image, "t g"
        shape = lambda r: HNNWord(identity, ((1, r),))
        nontrivial = False
    elif (i, j) == (1, 2):
        image, form = hnn.beta.image, "t g t^-1"
        shape = lambda r: HNNWord(identity, ((1, r), (-1, identity)))
        nontrivial = True
    elif (i, j) == (2, 1):
        image, form = hnn.alpha.image, "g"
        shape = lambda r: HNNWord(r, ())
        nontrivial = True
    else:
        image, form = hnn.alpha.image, "g t^-1"
        shape = lambda r: HNNWord(r, ((-1, identity),))
        nontrivial = False
    reps = image.transversal_list(bound)
    if nontrivial:
        reps = [r for r in reps if r != identity]
    return SBlock(i, j, tuple(shape(r) for r in reps), image.finite_index, form)


def s_blocks(case, data, bound=4):
    """Basis descriptions of the four single-step blocks.

    Case 1 returns the user-supplied bimodule unchanged.  Case 2 takes an
    amalgam: the off-diagonal blocks are spanned by the nontrivial coset
    representatives of the two factors and the diagonal blocks vanish.
    Case 3 takes an HNN extension and materializes the four stable-letter
    shapes, sampling transversals of infinite index up to ``bound``.
    """
    if case == 1:
        return data
    if case == 2:
        if not isinstance(data, Amalgam):
            raise TypeError("case 2 needs an amalgam")
        empty = lambda i, j: SBlock(i, j, (), True, "syllable")
        return {
            (1, 1): empty(1, 1),
            (2, 2): empty(2, 2),
            (2, 1): _amalgam_block(data, 1, 2, 1, bound),
            (1, 2): _amalgam_block(data, 2, 1, 2, bound),
        }
    if case == 3:
        if not isinstance(data, HNN):
            raise TypeError("case 3 needs an HNN extension")
        return {(i, j): _hnn_block(data, i, j, bound) for i in (1, 2) for j in (1, 2)}
    raise ValueError("case must be 1, 2, or 3")
