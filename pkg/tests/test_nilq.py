import random

import pytest

from loopnil.abelian import AbelianInvariants
from loopnil.hall import witt_rank
from loopnil.nilq import free_nilpotent_layers, nilpotent_quotient


def inv(rank, *torsion):
    return AbelianInvariants(rank, tuple(torsion))


def layer_tuples(q):
    return [(l.rank, tuple(l.torsion)) for l in q.layers]


def test_free_presentation_reproduces_witt_ranks():
    for k in (1, 2, 3):
        for n in (1, 2, 3, 4):
            q = nilpotent_quotient(k, [], n)
            assert q.layers == free_nilpotent_layers(k, n)
            assert all(l.rank == witt_rank(k, w + 1) for w, l in enumerate(q.layers))


def test_heisenberg_layers():
    q = nilpotent_quotient(2, [], 2)
    assert layer_tuples(q) == [(2, ()), (1, ())]


def test_single_torsion_relator():
    q = nilpotent_quotient(1, [[(1, 2)]], 1)
    assert layer_tuples(q) == [(0, (2,))]


def test_commutator_relator_kills_weight_two():
    # [a, b] = a^-1 b^-1 a b as a relator
    rel = [(1, -1), (2, -1), (1, 1), (2, 1)]
    q = nilpotent_quotient(2, [rel], 2)
    assert layer_tuples(q) == [(2, ()), (0, ())]


def test_relator_ab_gives_infinite_cyclic():
    # <a, b | ab> is free of rank 1: layers Z, 0, 0
    q = nilpotent_quotient(2, [[(1, 1), (2, 1)]], 3)
    assert layer_tuples(q) == [(1, ()), (0, ()), (0, ())]


def test_torsion_generator_class_two():
    # <a, b | a^2>: the weight-2 layer picks up 2[b,a]
    q = nilpotent_quotient(2, [[(1, 2)]], 2)
    assert layer_tuples(q) == [(1, (2,)), (0, (2,))]


def test_mixed_weight_relator():
    # a^2 [b,a]: abelianization Z/2 + Z; the weight-2 layer is killed by
    # the closure combinations 2[b,a] and the relator's own leading carry
    rel = [(1, 2), (2, -1), (1, -1), (2, 1), (1, 1)]
    q = nilpotent_quotient(2, [rel], 2)
    assert layer_tuples(q)[0] == (1, (2,))
    # weight-2 layer: relations from [a^2 c, b]-type elements give 2[b,a],
    # and conjugation carries give nothing smaller here
    assert layer_tuples(q)[1] == (0, (2,))


def test_dihedral_style_presentation():
    # <a, b | a^2, b^2>: class-2 layers Z/2 + Z/2, then Z/2 on [b,a]
    q = nilpotent_quotient(2, [[(1, 2)], [(2, 2)]], 2)
    assert layer_tuples(q) == [(0, (2, 2)), (0, (2,))]


def test_perturbed_relator_equivalence():
    # conjugated relators present the same group
    rng = random.Random(4)
    base = [(1, 2), (2, 1)]
    for _ in range(5):
        conj = [(rng.randint(1, 2), rng.choice([-1, 1])) for _ in range(3)]
        rel = [(g, -e) for g, e in reversed(conj)] + base + conj
        q1 = nilpotent_quotient(2, [base], 3)
        q2 = nilpotent_quotient(2, [rel], 3)
        assert q1.layers == q2.layers


def test_quotient_json_shape():
    q = nilpotent_quotient(2, [[(1, 2)]], 2)
    obj = q.to_json()
    assert obj["class"] == 2
    assert [l["rank"] for l in obj["layers"]] == [1, 0]
    assert obj["layers"][0]["torsion"] == [2]
    assert all(isinstance(r, str) for r in obj["relations"])


def test_quaternion_style_presentation():
    # <a, b | a^4, a^2 b^-2, b^-1 a b a>: layers (Z/2)^2, Z/2, then trivial
    rels = [
        [(1, 4)],
        [(1, 2), (2, -2)],
        [(2, -1), (1, 1), (2, 1), (1, 1)],
    ]
    q2 = nilpotent_quotient(2, rels, 2)
    assert layer_tuples(q2) == [(0, (2, 2)), (0, (2,))]
    q3 = nilpotent_quotient(2, rels, 3)
    assert layer_tuples(q3) == [(0, (2, 2)), (0, (2,)), (0, ())]


def test_klein_four_presentation():
    # <a, b | a^2, b^2, (ab)^2> is abelian: the weight-2 layer dies
    rels = [[(1, 2)], [(2, 2)], [(1, 1), (2, 1), (1, 1), (2, 1)]]
    q = nilpotent_quotient(2, rels, 3)
    assert layer_tuples(q) == [(0, (2, 2)), (0, ()), (0, ())]


def test_mod_three_heisenberg_presentation():
    # <a, b | a^3, b^3>: extraspecial-like class-2 quotient
    q = nilpotent_quotient(2, [[(1, 3)], [(2, 3)]], 2)
    assert layer_tuples(q) == [(0, (3, 3)), (0, (3,))]


def test_cyclic_power_tower():
    q = nilpotent_quotient(1, [[(1, 4)]], 3)
    assert layer_tuples(q) == [(0, (4,)), (0, ()), (0, ())]


def test_brute_force_closure_lattice_oracle():
    # completeness probe: the leading form of every bounded product of
    # relator conjugates must lie in the relation lattice the quotient
    # engine computed (membership checked by exact integer solve)
    import itertools

    from loopnil import intmat
    from loopnil.errors import InternalInvariantError
    from loopnil.nilpotent import collect, nil_inverse, nil_multiply, rule_system

    k, n = 2, 3
    sys = rule_system(k, n)
    cases = [
        [[(1, 2)]],
        [[(1, 1), (2, 1)]],
        [[(1, 2), (2, -1), (1, -1), (2, 1), (1, 1)]],
        [[(1, 2)], [(2, 2)]],
    ]
    conj_words = [[]]
    letters = [(1, 1), (1, -1), (2, 1), (2, -1)]
    for length in (1, 2):
        conj_words.extend(list(t) for t in itertools.product(letters, repeat=length))
    for rels in cases:
        base = [collect(r, k, n) for r in rels]
        conjugates = []
        for elt in base:
            for w in conj_words:
                inv = [(g, -e) for g, e in reversed(w)]
                conj = nil_multiply(nil_multiply(collect(inv, k, n), elt), collect(w, k, n))
                conjugates.append(conj)
                conjugates.append(nil_inverse(conj))
        pool = list(conjugates)
        for a in conjugates[:14]:
            for b in conjugates[:14]:
                pool.append(nil_multiply(a, b))
        q = nilpotent_quotient(k, rels, n)
        lattice = {
            w: [p.weight_slice(w) for p in q.pivots if p.lowest_weight() == w]
            for w in range(1, n + 1)
        }
        for e in pool:
            low = e.lowest_weight()
            if low is None:
                continue
            rows = lattice[low]
            vec = e.weight_slice(low)
            rank_w = len(vec)
            assert rows, (rels, low, vec)
            span = intmat.transpose(rows, ncols=rank_w)
            target = [[v] for v in vec]
            try:
                intmat.solve_columns(span, target, a_cols=len(rows), b_cols=1)
            except InternalInvariantError:
                raise AssertionError(
                    f"closure element outside computed lattice: {rels} weight {low} {vec}"
                ) from None


def test_random_presentations_closure_membership():
    # randomized version of the completeness probe: for arbitrary small
    # presentations, leading forms of products of relator conjugates must
    # lie inside the computed relation lattices
    import itertools
    import random

    from loopnil import intmat
    from loopnil.errors import InternalInvariantError
    from loopnil.nilpotent import collect, nil_inverse, nil_multiply

    k, n = 2, 3
    rng = random.Random(77)
    letters = [(1, 1), (1, -1), (2, 1), (2, -1)]
    conj_words = [[]] + [list(t) for t in itertools.product(letters, repeat=1)] + [
        list(t) for t in itertools.product(letters, repeat=2)
    ]
    for trial in range(20):
        rels = [
            [
                (rng.randint(1, k), rng.choice((-2, -1, 1, 2)))
                for _ in range(rng.randint(1, 4))
            ]
            for _ in range(rng.randint(1, 2))
        ]
        q = nilpotent_quotient(k, rels, n)
        lattice = {
            w: [p.weight_slice(w) for p in q.pivots if p.lowest_weight() == w]
            for w in range(1, n + 1)
        }
        conjugates = []
        for rel in rels:
            base = collect(rel, k, n)
            for w in conj_words:
                inv = [(g, -e) for g, e in reversed(w)]
                conj = nil_multiply(nil_multiply(collect(inv, k, n), base), collect(w, k, n))
                conjugates.append(conj)
        pool = list(conjugates)
        for a in conjugates[:10]:
            for b in conjugates[:10]:
                pool.append(nil_multiply(a, nil_inverse(b)))
        for e in pool:
            low = e.lowest_weight()
            if low is None:
                continue
            rows = lattice[low]
            vec = e.weight_slice(low)
            assert rows, (trial, rels, low, vec)
            span = intmat.transpose(rows, ncols=len(vec))
            try:
                intmat.solve_columns(span, [[v] for v in vec], a_cols=len(rows), b_cols=1)
            except InternalInvariantError:
                raise AssertionError(
                    f"trial {trial}: closure element escapes lattice {rels} w={low} {vec}"
                ) from None
