"""Finitely generated abelian groups as rank plus torsion coefficients."""

from dataclasses import dataclass

from . import intmat
from .errors import InternalInvariantError


@dataclass(frozen=True)
class AbelianInvariants:
    """Canonical value of a finitely generated abelian group.

    ``torsion`` entries are >= 2 and each divides the next, so the
    representation is unique.
    """

    rank: int
    torsion: tuple = ()

    def __post_init__(self):
        if self.rank < 0:
            raise InternalInvariantError("negative rank")
        object.__setattr__(self, "torsion", tuple(int(t) for t in self.torsion))
        prev = None
        for t in self.torsion:
            if t < 2:
                raise InternalInvariantError(f"torsion coefficient {t} < 2")
            if prev is not None and t % prev:
                raise InternalInvariantError("torsion coefficients must form a divisibility chain")
            prev = t

    @property
    def is_trivial(self):
        return self.rank == 0 and not self.torsion

    def to_json(self):
        return {"rank": self.rank, "torsion": list(self.torsion)}

    def __str__(self):
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " + ".join(parts) if parts else "0"


def trivial_group():
    return AbelianInvariants(0, ())


def free_group(rank):
    return AbelianInvariants(rank, ())


def from_pair(rank, torsion):
    return AbelianInvariants(rank, tuple(torsion))


def cokernel(a, ncols=None):
    """Invariants of ``Z^m / column-lattice(a)``."""
    rank, torsion = intmat.cokernel_invariants(a, ncols=ncols)
    return AbelianInvariants(rank, tuple(torsion))


def quotient(span, sub, span_cols=None, sub_cols=None):
    """Invariants of ``lattice(span)/lattice(sub)`` (columns, sub inside span)."""
    rank, torsion = intmat.quotient_invariants(
        span, sub, span_cols=span_cols, sub_cols=sub_cols
    )
    return AbelianInvariants(rank, tuple(torsion))
