"""Free nilpotent groups with collection-process normal forms.

Elements of the class-n quotient of a rank-k free group are ordered products
of Hall-basis commutators with integer exponents.  Arithmetic is collection
from the left; the commutation rule between two Hall letters is computed once
inside the degree-truncated free associative ring (generators map to 1 + X_i,
which is faithful on the class-n quotient) and cached.
"""

import threading
from dataclasses import dataclass

from . import intmat
from .caps import current_caps
from .errors import InternalInvariantError, LoopnilError
from .hall import hall_basis, tree_str, tree_weight, witt_rank


# ---------------------------------------------------------------------------
# degree-truncated free associative ring; polynomials are dicts monomial->int
# with monomials tuples of 0-based generator indices


class TruncatedRing:
    def __init__(self, k, degree):
        self.k = k
        self.degree = degree
        self.one = {(): 1}

    def gen_unit(self, i):
        """1 + X_i for the 0-based generator i."""
        return {(): 1, (i,): 1}

    def mul(self, p, q):
        cap = self.degree
        out = {}
        for ma, ca in p.items():
            la = len(ma)
            for mb, cb in q.items():
                if la + len(mb) <= cap:
                    key = ma + mb
                    v = out.get(key, 0) + ca * cb
                    if v:
                        out[key] = v
                    elif key in out:
                        del out[key]
        return out

    def inv(self, p):
        """Inverse of a polynomial with constant term 1 (geometric series)."""
        if p.get((), 0) != 1:
            raise InternalInvariantError("inverse requires constant term 1")
        u = {m: c for m, c in p.items() if m}
        out = dict(self.one)
        power = dict(self.one)
        sign = -1
        for _ in range(self.degree):
            power = self.mul(power, u)
            if not power:
                break
            for m, c in power.items():
                v = out.get(m, 0) + sign * c
                if v:
                    out[m] = v
                elif m in out:
                    del out[m]
            sign = -sign
        return out

    def power(self, p, e):
        if e == 0:
            return dict(self.one)
        base = p if e > 0 else self.inv(p)
        e = abs(e)
        out = dict(self.one)
        while e:
            if e & 1:
                out = self.mul(out, base)
            base_needed = e >> 1
            if base_needed:
                base = self.mul(base, base)
            e >>= 1
        return out

    def commutator(self, p, q, p_inv=None, q_inv=None):
        a = p_inv if p_inv is not None else self.inv(p)
        b = q_inv if q_inv is not None else self.inv(q)
        return self.mul(self.mul(a, b), self.mul(p, q))

    def homogeneous(self, p, w):
        return {m: c for m, c in p.items() if len(m) == w}

    def is_one(self, p):
        return all(c == 0 for m, c in p.items() if m) and p.get((), 0) == 1


# ---------------------------------------------------------------------------
# the collection engine for one (k, n)


class RuleSystem:
    """Hall letters, their ordering, and cached commutation rules for the
    free class-n quotient on k generators.

    Construction is guarded by the total-rank cap.  After construction the
    caches only grow monotonically under a lock, so concurrent readers are
    safe.
    """

    def __init__(self, k, n, caps=None):
        if k < 0 or n < 1:
            raise LoopnilError(f"need k >= 0 and n >= 1, got ({k}, {n})")
        caps = caps or current_caps()
        rank = sum(witt_rank(k, w) for w in range(1, n + 1))
        caps.check_hall_rank(rank, f"free class-{n} group on {k} generators")
        self.k = k
        self.n = n
        self.rank = rank
        self.letters = []
        self.weight_start = {}
        for w in range(1, n + 1):
            self.weight_start[w] = len(self.letters)
            self.letters.extend(hall_basis(k, w))
        self.weights = [tree_weight(t) for t in self.letters]
        self.index = {t: i for i, t in enumerate(self.letters)}
        self.ring = TruncatedRing(k, n)
        self._poly = {}
        self._poly_inv = {}
        self._tails = {}
        self._lie_polys = {}
        self._solver = {}
        self._lock = threading.Lock()

    # -- letter data ---------------------------------------------------------

    def letter_str(self, i):
        return tree_str(self.letters[i])

    def letters_of_weight(self, w):
        lo = self.weight_start[w]
        return list(range(lo, lo + witt_rank(self.k, w)))

    def letter_poly(self, i):
        p = self._poly.get(i)
        if p is None:
            t = self.letters[i]
            if isinstance(t, int):
                p = self.ring.gen_unit(t - 1)
            else:
                a = self.index[t[0]]
                b = self.index[t[1]]
                p = self.ring.commutator(
                    self.letter_poly(a),
                    self.letter_poly(b),
                    self.letter_inv(a),
                    self.letter_inv(b),
                )
            with self._lock:
                self._poly[i] = p
        return p

    def letter_inv(self, i):
        p = self._poly_inv.get(i)
        if p is None:
            p = self.ring.inv(self.letter_poly(i))
            with self._lock:
                self._poly_inv[i] = p
        return p

    # -- Lie expansion data for exponent extraction ---------------------------

    def _lie_poly(self, tree):
        p = self._lie_polys.get(tree)
        if p is None:
            if isinstance(tree, int):
                p = {(tree - 1,): 1}
            else:
                a = self._lie_poly(tree[0])
                b = self._lie_poly(tree[1])
                ab = self.ring.mul(a, b)
                ba = self.ring.mul(b, a)
                p = dict(ab)
                for m, c in ba.items():
                    v = p.get(m, 0) - c
                    if v:
                        p[m] = v
                    elif m in p:
                        del p[m]
            with self._lock:
                self._lie_polys[tree] = p
        return p

    def _weight_solver(self, w):
        """Peeling order for expressing a homogeneous Lie polynomial in the
        Hall expansions of the weight-w letters."""
        data = self._solver.get(w)
        if data is None:
            ids = self.letters_of_weight(w)
            polys = [self._lie_poly(self.letters[i]) for i in ids]
            owners = {}
            for pos, p in enumerate(polys):
                for m in p:
                    owners.setdefault(m, []).append(pos)
            data = (ids, polys, owners)
            with self._lock:
                self._solver[w] = data
        return data

    def _solve_weight(self, w, target):
        """Coefficients over weight-w letters with sum of Hall expansions
        equal to ``target`` (a homogeneous degree-w Lie polynomial)."""
        ids, polys, owners = self._weight_solver(w)
        remaining = set(range(len(ids)))
        alive = {m: len(lst) for m, lst in owners.items()}
        work = dict(target)
        out = {}
        queue = [m for m, lst in owners.items() if alive[m] == 1]
        while remaining:
            mono = None
            while queue:
                cand = queue.pop()
                if alive.get(cand, 0) == 1:
                    holder = [p for p in owners[cand] if p in remaining]
                    if holder:
                        mono = cand
                        break
            if mono is None:
                for m, cnt in alive.items():
                    if cnt == 1 and any(p in remaining for p in owners[m]):
                        mono = m
                        break
            if mono is None:
                return self._solve_weight_dense(w, target)
            (pos,) = [p for p in owners[mono] if p in remaining]
            coeff = polys[pos][mono]
            val = work.get(mono, 0)
            if val % coeff:
                raise InternalInvariantError("exponent extraction: non-integer solution")
            e = val // coeff
            if e:
                out[ids[pos]] = e
                for m, c in polys[pos].items():
                    v = work.get(m, 0) - e * c
                    if v:
                        work[m] = v
                    elif m in work:
                        del work[m]
            remaining.discard(pos)
            for m in polys[pos]:
                alive[m] -= 1
                if alive[m] == 1:
                    queue.append(m)
        if any(work.values()):
            raise InternalInvariantError("exponent extraction left a remainder")
        return out

    def _solve_weight_dense(self, w, target):
        # fallback: exact dense solve of the full monomial system
        ids, polys, _ = self._weight_solver(w)
        monos = sorted({m for p in polys for m in p} | set(target))
        mindex = {m: i for i, m in enumerate(monos)}
        mat = intmat.zeros(len(monos), len(ids))
        for j, p in enumerate(polys):
            for m, c in p.items():
                mat[mindex[m]][j] = c
        rhs = [[target.get(m, 0)] for m in monos]
        sol, _ = intmat.solve_columns(mat, rhs, a_cols=len(ids), b_cols=1)
        return {ids[j]: sol[j][0] for j in range(len(ids)) if sol[j][0]}

    # -- normal forms ----------------------------------------------------------

    def extract(self, poly, start_weight=1):
        """Normal-form exponents of a group-like ring element."""
        vec = [0] * self.rank
        g = poly
        for w in range(start_weight, self.n + 1):
            part = self.ring.homogeneous(g, w)
            if not part:
                continue
            coeffs = self._solve_weight(w, part)
            if not coeffs:
                continue
            prefix = dict(self.ring.one)
            for letter, e in sorted(coeffs.items()):
                vec[letter] = e
                prefix = self.ring.mul(prefix, self.ring.power(self.letter_poly(letter), e))
            g = self.ring.mul(self.ring.inv(prefix), g)
            if self.ring.homogeneous(g, w):
                raise InternalInvariantError("weight peeling failed")
        if not self.ring.is_one(g):
            raise InternalInvariantError("extraction terminated off the identity")
        return vec

    def vector_to_poly(self, vec):
        out = dict(self.ring.one)
        for i, e in enumerate(vec):
            if e:
                out = self.ring.mul(out, self.ring.power(self.letter_poly(i), e))
        return out

    def block_tail(self, hi, a, lo, b):
        """Normal-form word of [hi^a, lo^b] for letters hi > lo; supported on
        letters of weight >= weight(hi) + weight(lo)."""
        key = (hi, a, lo, b)
        tail = self._tails.get(key)
        if tail is None:
            w = self.weights[hi] + self.weights[lo]
            if w > self.n:
                tail = ()
            else:
                pu = self.ring.power(self.letter_poly(hi), a)
                pv = self.ring.power(self.letter_poly(lo), b)
                comm = self.ring.commutator(pu, pv)
                vec = self.extract(comm, start_weight=w)
                tail = tuple((i, e) for i, e in enumerate(vec) if e)
            with self._lock:
                self._tails[key] = tail
        return tail

    def collect(self, word):
        """Collect a word of (letter, exponent) pairs into normal form."""
        work = []
        for letter, exp in word:
            if exp:
                if work and work[-1][0] == letter:
                    merged = work[-1][1] + exp
                    work.pop()
                    if merged:
                        work.append((letter, merged))
                else:
                    work.append((letter, exp))
        pos = 0
        while pos + 1 < len(work):
            u, a = work[pos]
            v, b = work[pos + 1]
            if u == v:
                merged = a + b
                if merged:
                    work[pos : pos + 2] = [(u, merged)]
                else:
                    work[pos : pos + 2] = []
                pos = max(pos - 1, 0)
            elif u < v:
                pos += 1
            else:
                # u > v: swap whole blocks, u^a v^b = v^b u^a [u^a, v^b]
                tail = self.block_tail(u, a, v, b)
                work[pos : pos + 2] = [(v, b), (u, a)] + list(tail)
                pos = max(pos - 1, 0)
        vec = [0] * self.rank
        for letter, exp in work:
            vec[letter] += exp
        return vec


_systems = {}
_systems_lock = threading.Lock()


def rule_system(k, n, caps=None):
    """Shared per-(k, n) collection engine; cached after first construction."""
    key = (k, n, caps or current_caps())
    sys = _systems.get(key)
    if sys is None:
        with _systems_lock:
            sys = _systems.get(key)
            if sys is None:
                sys = RuleSystem(k, n, caps=key[2])
                _systems[key] = sys
    return sys


# ---------------------------------------------------------------------------
# free words and nilpotent elements


def reduce_free_word(word):
    """Freely reduce a list of (generator, exponent) pairs."""
    out = []
    for g, e in word:
        if not e:
            continue
        if out and out[-1][0] == g:
            merged = out[-1][1] + e
            out.pop()
            if merged:
                out.append((g, merged))
        else:
            out.append((g, e))
    return out


def invert_free_word(word):
    return [(g, -e) for g, e in reversed(word)]


@dataclass(frozen=True)
class NilpotentElement:
    """Normal form in the free class-n group on k generators: an exponent
    vector over the concatenated Hall bases of weights 1..n."""

    k: int
    n: int
    exponents: tuple

    def __post_init__(self):
        expected = sum(witt_rank(self.k, w) for w in range(1, self.n + 1))
        if len(self.exponents) != expected:
            raise InternalInvariantError(
                f"exponent vector has length {len(self.exponents)}, expected {expected}"
            )

    @property
    def is_identity(self):
        return not any(self.exponents)

    def lowest_weight(self):
        """Smallest weight carrying a nonzero exponent; None for the identity."""
        sys = rule_system(self.k, self.n)
        for i, e in enumerate(self.exponents):
            if e:
                return sys.weights[i]
        return None

    def weight_slice(self, w):
        """Exponents over the weight-w letters."""
        sys = rule_system(self.k, self.n)
        ids = sys.letters_of_weight(w)
        return [self.exponents[i] for i in ids]

    def word(self):
        return tuple((i, e) for i, e in enumerate(self.exponents) if e)

    def truncate(self, m):
        """Image in the class-m quotient (m <= n)."""
        if m > self.n:
            raise LoopnilError("cannot truncate upwards")
        sys = rule_system(self.k, self.n)
        keep = sum(witt_rank(self.k, w) for w in range(1, m + 1))
        return NilpotentElement(self.k, m, tuple(self.exponents[:keep]))

    def to_json(self):
        sys = rule_system(self.k, self.n)
        return [
            {"letter": sys.letter_str(i), "exponent": e}
            for i, e in enumerate(self.exponents)
            if e
        ]

    def __str__(self):
        sys = rule_system(self.k, self.n)
        parts = [f"{sys.letter_str(i)}^{e}" for i, e in enumerate(self.exponents) if e]
        return " ".join(parts) if parts else "1"


def identity_element(k, n):
    rank = sum(witt_rank(k, w) for w in range(1, n + 1))
    return NilpotentElement(k, n, (0,) * rank)


def generator_element(k, n, i):
    if not 1 <= i <= k:
        raise LoopnilError(f"generator {i} out of range 1..{k}")
    vec = [0] * sum(witt_rank(k, w) for w in range(1, n + 1))
    vec[i - 1] = 1
    return NilpotentElement(k, n, tuple(vec))


def collect(word, k, n, caps=None):
    """Normal form of a free word in the class-n quotient."""
    for g, _ in word:
        if not 1 <= g <= k:
            raise LoopnilError(f"generator {g} out of range 1..{k}")
    sys = rule_system(k, n, caps)
    vec = sys.collect([(g - 1, e) for g, e in word])
    return NilpotentElement(k, n, tuple(vec))


def _require_match(u, v):
    if (u.k, u.n) != (v.k, v.n):
        raise LoopnilError(
            f"mismatched ambient groups: ({u.k},{u.n}) vs ({v.k},{v.n})"
        )


def nil_multiply(u, v):
    _require_match(u, v)
    sys = rule_system(u.k, u.n)
    vec = sys.collect(list(u.word()) + list(v.word()))
    return NilpotentElement(u.k, u.n, tuple(vec))


def nil_inverse(u):
    sys = rule_system(u.k, u.n)
    vec = sys.collect([(i, -e) for i, e in reversed(u.word())])
    return NilpotentElement(u.k, u.n, tuple(vec))


def nil_power(u, e):
    if e == 0:
        return identity_element(u.k, u.n)
    base = u if e > 0 else nil_inverse(u)
    e = abs(e)
    out = identity_element(u.k, u.n)
    while e:
        if e & 1:
            out = nil_multiply(out, base)
        e >>= 1
        if e:
            base = nil_multiply(base, base)
    return out


def nil_commutator(u, v):
    _require_match(u, v)
    sys = rule_system(u.k, u.n)
    word = (
        [(i, -e) for i, e in reversed(u.word())]
        + [(i, -e) for i, e in reversed(v.word())]
        + list(u.word())
        + list(v.word())
    )
    return NilpotentElement(u.k, u.n, tuple(sys.collect(word)))


# ---------------------------------------------------------------------------
# graded layers and homomorphisms


def graded_layer(k, n, w):
    """The identification of the weight-w layer of the free class-n group
    with the weight-w free Lie module: Hall letters on the group side map to
    the identically shaped Hall trees."""
    if not 1 <= w <= n:
        raise LoopnilError(f"weight {w} out of range 1..{n}")
    sys = rule_system(k, n)
    ids = sys.letters_of_weight(w)
    trees = hall_basis(k, w)
    pairs = tuple((i, trees[pos]) for pos, i in enumerate(ids))
    assert all(sys.letters[i] == t for i, t in pairs)
    return {
        "rank": witt_rank(k, w),
        "letters": pairs,
        "trees": trees,
    }


@dataclass(frozen=True)
class NilpotentHom:
    """Homomorphism between free class-n groups, given on generators.

    Any choice of images defines a homomorphism because the source is free
    in the variety of class-n groups.
    """

    src_k: int
    tgt_k: int
    n: int
    images: tuple  # NilpotentElement over tgt_k, one per source generator

    def __post_init__(self):
        if len(self.images) != self.src_k:
            raise LoopnilError("one image per source generator required")
        for img in self.images:
            if (img.k, img.n) != (self.tgt_k, self.n):
                raise LoopnilError("image lives in the wrong group")


def identity_hom(k, n):
    return NilpotentHom(k, k, n, tuple(generator_element(k, n, i) for i in range(1, k + 1)))


def projection_hom(s, k, n):
    """The k-ary projection onto coordinate s: the map from the free rank-1
    group picking out the s-th generator."""
    if not 1 <= s <= k:
        raise LoopnilError(f"projection index {s} out of range 1..{k}")
    return NilpotentHom(1, k, n, (generator_element(k, n, s),))


def hom_from_matrix(mat, n, src_k=None, tgt_k=None):
    """Homomorphism sending generator j to the product of generator powers
    given by column j (used for permutations and collapse maps)."""
    tgt = len(mat) if tgt_k is None else tgt_k
    src = src_k if src_k is not None else (len(mat[0]) if mat else 0)
    images = []
    for j in range(src):
        word = [(i + 1, mat[i][j]) for i in range(tgt) if mat[i][j]]
        images.append(collect(word, tgt, n))
    return NilpotentHom(src, tgt, n, tuple(images))


def apply_hom(f, u):
    """Image of ``u``: substitute generator images into the Hall-letter word
    and collect."""
    if (u.k, u.n) != (f.src_k, f.n):
        raise LoopnilError("element not in the source of the homomorphism")
    out = identity_element(f.tgt_k, f.n)

    def eval_tree(tree):
        if isinstance(tree, int):
            return f.images[tree - 1]
        a = eval_tree(tree[0])
        b = eval_tree(tree[1])
        return nil_commutator(a, b)

    sys = rule_system(u.k, u.n)
    for i, e in u.word():
        val = eval_tree(sys.letters[i])
        out = nil_multiply(out, nil_power(val, e))
    return out


def compose_homs(g, f):
    """g after f."""
    if (f.tgt_k, f.n) != (g.src_k, g.n):
        raise LoopnilError("homomorphisms do not compose")
    return NilpotentHom(
        f.src_k, g.tgt_k, f.n, tuple(apply_hom(g, img) for img in f.images)
    )


def layer_matrix(f, w):
    """Matrix of the weight-w layer map induced by ``f``: columns are images
    of the source weight-w Hall letters, computed by collection."""
    src_sys = rule_system(f.src_k, f.n)
    cols = []
    for i in src_sys.letters_of_weight(w):
        basis_elt = NilpotentElement(
            f.src_k,
            f.n,
            tuple(1 if j == i else 0 for j in range(src_sys.rank)),
        )
        img = apply_hom(f, basis_elt)
        low = img.lowest_weight()
        if low is not None and low < w:
            raise InternalInvariantError("layer image dropped below its weight")
        cols.append(img.weight_slice(w))
    rows = witt_rank(f.tgt_k, w)
    out = intmat.zeros(rows, len(cols))
    for j, col in enumerate(cols):
        for i, v in enumerate(col):
            out[i][j] = v
    return out
