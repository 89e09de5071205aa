"""The nerve functor: from acyclic categories to regular flag trisps.

The d-simplices of the nerve are chains of d composable non-identity
morphisms; the 0-simplices are the objects.  Boundaries drop an end object
or compose two consecutive morphisms.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InputError
from .trisp import Trisp


@dataclass(frozen=True)
class Chain:
    """A composable chain; objects are derived from the morphisms."""

    objects: tuple
    morphisms: tuple

    @property
    def dim(self):
        return len(self.morphisms)


class Nerve:
    def __init__(self, category, trisp, chains):
        self.category = category
        self.trisp = trisp
        self.chains = chains  # per dimension, tuple of Chain
        self._index = {}
        for d in range(1, len(chains)):
            for s, ch in enumerate(chains[d]):
                self._index[ch.morphisms] = s

    def chain(self, d, s):
        return self.chains[d][s]

    def simplex_of(self, chain):
        """(d, s) of a chain; vertices are indexed by their object."""
        if chain.dim == 0:
            return (0, chain.objects[0])
        return (chain.dim, self._index[chain.morphisms])

    def simplex_of_morphisms(self, morphisms):
        morphisms = tuple(morphisms)
        if not morphisms:
            raise InputError("a zero-length chain is identified by its object")
        return self._index[morphisms]


def _chain_objects(c, morphisms):
    return (c.src[morphisms[0]],) + tuple(c.tgt[m] for m in morphisms)


def nerve(c):
    """Nerve of an acyclic category, with a bidirectional simplex <-> chain index.

    Chain enumeration is deterministic: within each dimension chains are
    sorted by (object list, morphism list).
    """
    chains = [tuple(Chain((x,), ()) for x in range(c.n_objects))]
    out_by_src = {}
    for m in range(c.n_morphisms):
        out_by_src.setdefault(c.src[m], []).append(m)
    level = [(m,) for m in range(c.n_morphisms)]
    while level:
        if len(chains) > c.n_objects:
            raise InputError("chains do not terminate; the category has a directed cycle")
        with_objects = [(_chain_objects(c, ms), ms) for ms in level]
        with_objects.sort()
        chains.append(tuple(Chain(objs, ms) for objs, ms in with_objects))
        level = [
            ms + (m,)
            for _objs, ms in with_objects
            for m in out_by_src.get(c.tgt[ms[-1]], ())
        ]
    index = [{ch.morphisms: s for s, ch in enumerate(lvl)} for lvl in chains]
    counts = [len(lvl) for lvl in chains]
    bnd = [()]
    for d in range(1, len(chains)):
        table = []
        for ch in chains[d]:
            ms = ch.morphisms
            if d == 1:
                row = (c.tgt[ms[0]], c.src[ms[0]])
            else:
                row = [index[d - 1][ms[1:]]]
                for i in range(1, d):
                    try:
                        composite = c.comp[(ms[i - 1], ms[i])]
                    except KeyError:
                        raise InputError(
                            f"composition table incomplete at {(ms[i - 1], ms[i])}"
                        ) from None
                    row.append(index[d - 1][ms[: i - 1] + (composite,) + ms[i + 1:]])
                row.append(index[d - 1][ms[:-1]])
                row = tuple(row)
            table.append(row)
        bnd.append(tuple(table))
    return Nerve(c, Trisp(counts, bnd), tuple(chains))


@dataclass
class TrispMap:
    """A simplex-level map between trisps; entries[d][s] = (image dim, image index)."""

    src: Trisp
    dst: Trisp
    entries: tuple

    def image(self, d, s):
        return self.entries[d][s]


def map_chain(f, chain, dst_category):
    """Image of a chain under an ACMap, with identity components deleted."""
    img_ms = tuple(f.mor[m] for m in chain.morphisms if f.mor[m] is not None)
    if img_ms:
        return Chain(_chain_objects(dst_category, img_ms), img_ms)
    return Chain((f.obj[chain.objects[0]],), ())


def nerve_of_map(nerve_src, nerve_dst, f):
    """Trisp map induced by a functor, deleting degenerate chain entries."""
    entries = []
    for d in range(len(nerve_src.chains)):
        level = [
            nerve_dst.simplex_of(map_chain(f, ch, nerve_dst.category))
            for ch in nerve_src.chains[d]
        ]
        entries.append(tuple(level))
    return TrispMap(nerve_src.trisp, nerve_dst.trisp, tuple(entries))


def surviving_positions(f, chain):
    """Image position of each vertex of a chain under an ACMap."""
    pos = [0]
    for m in chain.morphisms:
        pos.append(pos[-1] + (0 if f.mor[m] is None else 1))
    return tuple(pos)
