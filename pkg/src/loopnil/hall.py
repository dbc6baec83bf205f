"""Hall bases of basic commutators and free graded Lie algebras over Z.

A Hall tree is either a generator index (int, 1-based) or a pair of Hall
trees.  Trees are ordered by weight first, then recursively; generators in
index order.  A bracket ``[u, v]`` belongs to the Hall family when ``u > v``
and, if ``u = [a, b]``, additionally ``b <= v``.
"""

from dataclasses import dataclass
from functools import lru_cache

from . import intmat
from .abelian import AbelianInvariants
from .errors import InternalInvariantError, LoopnilError


def tree_weight(t):
    if isinstance(t, int):
        return 1
    return tree_weight(t[0]) + tree_weight(t[1])


def tree_key(t):
    """Total order on trees: weight, then leaves before brackets, then
    recursively on the two branches."""
    if isinstance(t, int):
        return (1, 0, t)
    return (tree_weight(t), 1, tree_key(t[0]), tree_key(t[1]))


def tree_str(t):
    if isinstance(t, int):
        return f"x{t}"
    return f"[{tree_str(t[0])},{tree_str(t[1])}]"


def tree_leaves(t, out=None):
    if out is None:
        out = []
    if isinstance(t, int):
        out.append(t)
    else:
        tree_leaves(t[0], out)
        tree_leaves(t[1], out)
    return out


def max_generator(t):
    return max(tree_leaves(t))


@lru_cache(maxsize=None)
def hall_basis(k, n):
    """The weight-n Hall trees over k generators, canonically ordered."""
    if k < 0 or n < 1:
        raise LoopnilError(f"hall_basis needs k >= 0 and n >= 1, got ({k}, {n})")
    if n == 1:
        return tuple(range(1, k + 1))
    out = []
    for wl in range(1, n):
        for left in hall_basis(k, wl):
            kl = tree_key(left)
            sub = None if isinstance(left, int) else tree_key(left[1])
            for right in hall_basis(k, n - wl):
                kr = tree_key(right)
                if kl > kr and (sub is None or sub <= kr):
                    out.append((left, right))
    out.sort(key=tree_key)
    return tuple(out)


def _mobius(d):
    result = 1
    p = 2
    while p * p <= d:
        if d % p == 0:
            d //= p
            if d % p == 0:
                return 0
            result = -result
        p += 1
    if d > 1:
        result = -result
    return result


def witt_rank(k, n):
    """Rank of the weight-n part of the free Lie ring on k generators:
    (1/n) * sum over d | n of mu(d) * k^(n/d)."""
    if k < 0 or n < 1:
        raise LoopnilError(f"witt_rank needs k >= 0 and n >= 1, got ({k}, {n})")
    total = 0
    for d in range(1, n + 1):
        if n % d == 0:
            total += _mobius(d) * k ** (n // d)
    if total % n:
        raise InternalInvariantError("Witt sum not divisible by n")
    return total // n


def total_hall_rank(k, n):
    return sum(witt_rank(k, w) for w in range(1, n + 1))


# ---------------------------------------------------------------------------
# rewriting into the Hall basis


@lru_cache(maxsize=None)
def _reduce_pair(u, v):
    """Hall expansion of [u, v] for Hall trees u, v as a tuple of
    (tree, coefficient) pairs.  Uses antisymmetry and Jacobi only."""
    ku, kv = tree_key(u), tree_key(v)
    if ku == kv:
        return ()
    if ku < kv:
        return tuple((t, -c) for t, c in _reduce_pair(v, u))
    if isinstance(u, int) or tree_key(u[1]) <= kv:
        return (((u, v), 1),)
    # u = [a, b] with b > v: [[a,b],v] = [[a,v],b] + [a,[b,v]]
    a, b = u
    acc = {}
    for t1, c1 in _reduce_pair(a, v):
        for t2, c2 in _bracket_combo(((t1, c1),), ((b, 1),)):
            acc[t2] = acc.get(t2, 0) + c2
    for t1, c1 in _reduce_pair(b, v):
        for t2, c2 in _bracket_combo(((a, 1),), ((t1, c1),)):
            acc[t2] = acc.get(t2, 0) + c2
    return tuple(sorted(((t, c) for t, c in acc.items() if c), key=lambda x: tree_key(x[0])))


def _bracket_combo(left, right):
    """Bilinear bracket of two Hall-basis combinations."""
    acc = {}
    for t1, c1 in left:
        for t2, c2 in right:
            for t, c in _reduce_pair(t1, t2):
                acc[t] = acc.get(t, 0) + c1 * c2 * c
    return tuple((t, c) for t, c in acc.items() if c)


@dataclass(frozen=True)
class LieElement:
    """Homogeneous integer combination of weight-n Hall trees over k
    generators."""

    k: int
    weight: int
    coeffs: tuple  # sorted tuple of (tree, coefficient)

    def __post_init__(self):
        basis = set(hall_basis(self.k, self.weight))
        for t, c in self.coeffs:
            if t not in basis:
                raise InternalInvariantError(f"{tree_str(t)} is not a Hall tree here")
            if c == 0:
                raise InternalInvariantError("zero coefficient stored")

    @property
    def is_zero(self):
        return not self.coeffs

    def vector(self):
        basis = hall_basis(self.k, self.weight)
        index = {t: i for i, t in enumerate(basis)}
        out = [0] * len(basis)
        for t, c in self.coeffs:
            out[index[t]] = c
        return out

    def __add__(self, other):
        if (self.k, self.weight) != (other.k, other.weight):
            raise LoopnilError("mismatched Lie elements")
        acc = dict(self.coeffs)
        for t, c in other.coeffs:
            acc[t] = acc.get(t, 0) + c
        return _element(self.k, self.weight, acc)

    def __neg__(self):
        return _element(self.k, self.weight, {t: -c for t, c in self.coeffs})

    def scale(self, m):
        return _element(self.k, self.weight, {t: m * c for t, c in self.coeffs})

    def bracket(self, other):
        if self.k != other.k:
            raise LoopnilError("mismatched generator counts")
        acc = {}
        for t1, c1 in self.coeffs:
            for t2, c2 in other.coeffs:
                for t, c in _reduce_pair(t1, t2):
                    acc[t] = acc.get(t, 0) + c1 * c2 * c
        return _element(self.k, self.weight + other.weight, acc)

    def __str__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"{c}*{tree_str(t)}" for t, c in self.coeffs)


def _element(k, weight, acc):
    coeffs = tuple(
        sorted(((t, c) for t, c in acc.items() if c), key=lambda x: tree_key(x[0]))
    )
    return LieElement(k, weight, coeffs)


def zero_element(k, weight):
    return LieElement(k, weight, ())


def lie_normalize(terms, k, n):
    """Rewrite a formal bracket expression into the Hall basis.

    ``terms`` is an iterable of (tree, coefficient) pairs where trees are
    arbitrary bracketings (not necessarily Hall); the expression must be
    homogeneous of weight n over generators 1..k.
    """
    acc = {}
    for tree, coeff in terms:
        if coeff == 0:
            continue
        if tree_weight(tree) != n:
            raise LoopnilError(
                f"non-homogeneous input: {tree_str(tree)} has weight "
                f"{tree_weight(tree)}, expected {n}"
            )
        if max_generator(tree) > k:
            raise LoopnilError(f"generator out of range in {tree_str(tree)}")
        for t, c in _normalize_tree(tree):
            acc[t] = acc.get(t, 0) + coeff * c
    return _element(k, n, acc)


@lru_cache(maxsize=None)
def _normalize_tree(tree):
    if isinstance(tree, int):
        return ((tree, 1),)
    left = _normalize_tree(tree[0])
    right = _normalize_tree(tree[1])
    return _bracket_combo(left, right)


# ---------------------------------------------------------------------------
# functoriality: Lie_n applied to an integer matrix


def lie_of_map(f, n, src_k=None, tgt_k=None):
    """Matrix of Lie_n(f) in Hall bases, for an integer matrix f mapping
    Z^src_k -> Z^tgt_k (rows are targets)."""
    tgt = len(f) if tgt_k is None else tgt_k
    src = len(f[0]) if f else (0 if src_k is None else src_k)
    if src_k is not None:
        src = src_k
    if f and any(len(row) != src for row in f):
        raise LoopnilError("ragged matrix")
    src_basis = hall_basis(src, n)
    tgt_basis = hall_basis(tgt, n)
    tgt_index = {t: i for i, t in enumerate(tgt_basis)}
    out = intmat.zeros(len(tgt_basis), len(src_basis))
    for j, tree in enumerate(src_basis):
        for t, c in _substitute(tree, f, tgt):
            out[tgt_index[t]][j] += c
    return out


def _substitute(tree, f, tgt):
    """Hall expansion of a tree after substituting generator images."""
    if isinstance(tree, int):
        return tuple(
            (i + 1, f[i][tree - 1]) for i in range(tgt) if f[i][tree - 1]
        )
    left = _substitute(tree[0], f, tgt)
    right = _substitute(tree[1], f, tgt)
    return _bracket_combo(left, right)


# ---------------------------------------------------------------------------
# cross-effect complex of Lie_n on a tuple of free abelian groups


def _collapse_matrix(ranks, drop):
    """Projection Z^(sum ranks) -> Z^(sum of ranks without block ``drop``)."""
    total = sum(ranks)
    keep = []
    offset = 0
    for s, r in enumerate(ranks):
        if s != drop:
            keep.extend(range(offset, offset + r))
        offset += r
    out = intmat.zeros(len(keep), total)
    for i, j in enumerate(keep):
        out[i][j] = 1
    return out


def cross_effect_blocks(n, ranks):
    """The signed collapse maps Lie_n(sum of all blocks) -> Lie_n(sum minus
    one block), one matrix per dropped index (sign alternates with the
    position of the dropped summand)."""
    ranks = list(ranks)
    if len(ranks) != n + 1:
        raise LoopnilError(f"expected {n + 1} ranks, got {len(ranks)}")
    total = sum(ranks)
    blocks = []
    for s in range(n + 1):
        coll = _collapse_matrix(ranks, s)
        mat = lie_of_map(coll, n, src_k=total, tgt_k=total - ranks[s])
        if s % 2 == 1:
            mat = [[-v for v in row] for row in mat]
        blocks.append(mat)
    return blocks


def cross_effect_kernel(n, ranks):
    """Invariants of ker(L0 -> L1) in the cross-effect complex of Lie_n.

    Computed by intersecting the kernels of the collapse maps one block at
    a time; kernels of integer matrices are free, so no torsion can occur.
    """
    total = sum(ranks)
    dim = witt_rank(total, n)
    basis = intmat.identity(dim)
    width = dim
    for mat in cross_effect_blocks(n, ranks):
        if width == 0:
            break
        proj = intmat.matmul(mat, basis, b_cols=width)
        kb, p = intmat.kernel_basis(proj, ncols=width)
        basis = intmat.matmul(basis, kb, a_cols=width, b_cols=p)
        width = p
    return AbelianInvariants(width, ())
