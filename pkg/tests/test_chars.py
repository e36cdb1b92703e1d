"""Exact combinatorics: labels, parity, triple signs, orbits, counts."""

import itertools
from collections import defaultdict

import pytest

from hyperflex.chars import (
    ALL_CHARS,
    EVEN_CHARS,
    ODD_CHARS,
    V0,
    V1,
    AffineAction,
    Char,
    SymplecticMatrix,
    SymplecticSubspace,
    char,
    char_orbit,
    classify_boundary_pair,
    classify_subspace_pair,
    complete_fundamental_system,
    decode_label,
    encode_label,
    enumerate_counts,
    is_azygetic,
    is_essentially_independent,
    is_even,
    is_fundamental_system,
    is_odd,
    orbit_signature,
    pair_orbit,
    parity,
    sp_f2_group_order,
    symplectic_generators,
    apply_symplectic,
    transport_to,
    triple_sign,
)
from hyperflex.errors import (
    InternalConsistencyError,
    InvalidBoundaryLabelError,
    InvalidElementError,
    InvalidSubspaceError,
    UnsupportedDimensionError,
)


def test_label_codec_paper_example():
    m = Char((1, 1, 0), (0, 1, 1))
    assert encode_label(m) == (6, 3)
    assert decode_label("63") == m


def test_label_codec_corners():
    assert encode_label(char("00")) == (0, 0)
    assert decode_label((7, 7)) == Char((1, 1, 1), (1, 1, 1))


def test_label_roundtrip_all():
    for m in ALL_CHARS:
        assert decode_label(encode_label(m)) == m


def test_label_requires_genus_three():
    with pytest.raises(UnsupportedDimensionError):
        encode_label(Char((1, 0), (0, 1)))


def test_parity_basics():
    assert parity(char("77")) == -1
    assert parity(char("00")) == 1
    assert len(EVEN_CHARS) == 36
    assert len(ODD_CHARS) == 28


def test_triple_sign_values():
    assert triple_sign(char("77"), char("64"), char("13")) == -1
    assert triple_sign(char("00"), char("00"), char("00")) == 1
    assert triple_sign(char("77"), char("51"), char("26")) == -1


def test_fundamental_system_from_main_display():
    seq = [char(c) for c in ("77", "64", "13", "42", "06", "30", "21", "55")]
    assert is_fundamental_system(seq)
    odd = sum(1 for m in seq if is_odd(m))
    assert odd in (3, 7)


def test_fundamental_system_rejects_syzygetic():
    assert not is_fundamental_system([char("00")] * 3)


def test_every_fundamental_system_has_3_or_7_odd():
    # spot-check: completions of azygetic odd triples always give 3 odd members
    triples = [("77", "64", "13"), ("77", "51", "26"), ("77", "64", "51")]
    for t in triples:
        triple = [char(c) for c in t]
        quint = complete_fundamental_system(triple)
        n_odd = sum(1 for m in list(quint) + triple if is_odd(m))
        assert n_odd == 3


def test_essential_independence():
    m = char("52")
    assert not is_essentially_independent([m, m])
    assert is_essentially_independent([char("77"), char("64"), char("13")])
    assert is_essentially_independent([])


def test_apply_symplectic_identity_and_parity():
    eye = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    zero = [[0, 0, 0], [0, 0, 0], [0, 0, 0]]
    gamma = SymplecticMatrix.from_blocks(eye, zero, zero, eye)
    for m in ALL_CHARS:
        assert apply_symplectic(gamma, m) == m
    for gamma in symplectic_generators():
        for m in ALL_CHARS:
            assert parity(AffineAction.of(gamma).on_char(m)) == parity(m)


def test_apply_symplectic_rejects_non_symplectic():
    eye = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    bad = SymplecticMatrix(
        tuple(map(tuple, eye)),
        tuple(map(tuple, eye)),
        tuple(map(tuple, eye)),
        tuple(map(tuple, eye)),
    )
    with pytest.raises(InvalidElementError):
        apply_symplectic(bad, char("00"))


def test_odd_orbit_size():
    assert len(char_orbit(char("77"))) == 28
    assert len(char_orbit(char("00"))) == 36


def test_triple_sign_invariant_under_generators():
    import random

    rng = random.Random(7)
    actions = [AffineAction.of(g) for g in symplectic_generators()]
    for _ in range(300):
        m1, m2, m3 = (rng.choice(ALL_CHARS) for _ in range(3))
        s = triple_sign(m1, m2, m3)
        for act in actions:
            assert triple_sign(act.on_char(m1), act.on_char(m2), act.on_char(m3)) == s


def test_essential_independence_invariant_under_generators():
    import random

    rng = random.Random(11)
    actions = [AffineAction.of(g) for g in symplectic_generators()]
    for _ in range(100):
        seq = [rng.choice(ALL_CHARS) for _ in range(rng.randint(1, 4))]
        e = is_essentially_independent(seq)
        for act in actions:
            assert is_essentially_independent([act.on_char(m) for m in seq]) == e


def test_orbit_signature_single():
    assert orbit_signature([char("77")]) == orbit_signature([char("13")])
    assert orbit_signature([char("77")]) != orbit_signature([char("00")])


def test_orbit_signature_distinguishes_boundary_pairs():
    a = orbit_signature([char("77"), char("04"), char("00")])
    b = orbit_signature([char("77"), char("06"), char("00")])
    assert a != b


def test_signature_equality_equals_bfs_on_all_2_sequences():
    actions = [AffineAction.of(g) for g in symplectic_generators()]
    unassigned = set(itertools.product(ALL_CHARS, ALL_CHARS))
    bfs = {}
    orbit_id = 0
    while unassigned:
        start = next(iter(unassigned))
        orb = {start}
        frontier = [start]
        while frontier:
            nxt = []
            for x in frontier:
                for act in actions:
                    y = (act.on_char(x[0]), act.on_char(x[1]))
                    if y not in orb:
                        orb.add(y)
                        nxt.append(y)
            frontier = nxt
        for p in orb:
            bfs[p] = orbit_id
        unassigned -= orb
        orbit_id += 1
    by_sig = defaultdict(set)
    for p in bfs:
        by_sig[orbit_signature(p)].add(p)
    by_orb = defaultdict(set)
    for p, o in bfs.items():
        by_orb[o].add(p)
    assert set(map(frozenset, by_sig.values())) == set(map(frozenset, by_orb.values()))


def test_classify_boundary_pair():
    assert classify_boundary_pair(char("77"), char("04")) == "even-sum"
    assert classify_boundary_pair(char("77"), char("06")) == "odd-sum"
    assert classify_boundary_pair(char("77"), char("77")) == "degenerate"
    with pytest.raises(InvalidBoundaryLabelError):
        classify_boundary_pair(char("77"), char("00"))


def test_boundary_tag_constant_on_bfs_orbits_off_degenerate():
    # Two orbits per parity of m; degenerate pairs are absorbed into the
    # even-sum orbit by the (affine, linear) action, hence excluded here.
    for m0 in (char("77"), char("01")):
        for n0 in (char("04"), char("06")):
            tag0 = classify_boundary_pair(m0, n0)
            tags = {
                classify_boundary_pair(m, n)
                for m, n in pair_orbit(m0, n0)
                if not (m + n).is_zero()
            }
            assert tags == {tag0}


def test_degenerate_pairs_sit_in_even_sum_orbit():
    orb = pair_orbit(char("77"), char("04"))
    degenerates = {(m, m) for m in ODD_CHARS}
    assert degenerates <= orb


def test_classify_subspace_pair():
    assert classify_subspace_pair(char("77"), V0) == 3
    assert classify_subspace_pair(char("77"), V1) == 1
    with pytest.raises(InvalidSubspaceError):
        SymplecticSubspace(char("40"), char("40"))
    with pytest.raises(InvalidSubspaceError):
        # pairing 0: both from the eps side
        SymplecticSubspace(char("40"), char("20"))


def test_subspace_parity_product_rule():
    for m in ODD_CHARS:
        for V in (V0, V1):
            e1 = parity(m + V.n1)
            e2 = parity(m + V.n2)
            assert parity(m + V.n1 + V.n2) == e1 * e2
            assert classify_subspace_pair(m, V) in (1, 3)


def test_enumerate_counts_against_brute_force():
    rep = enumerate_counts(n=char("04"), V=V0)
    assert (rep["even"], rep["odd"]) == (36, 28)
    assert rep["boundary"]["odd_m_even_sum"] == 16
    assert rep["boundary"]["odd_m_odd_sum"] == 12
    assert rep["subspace"]["odd_m_one_even"] == 18
    assert rep["subspace"]["odd_m_three_even"] == 10
    # independent brute force from raw definitions
    n = char("04")
    even_sum = sum(
        1
        for m in ALL_CHARS
        if is_odd(m) and sum(a * b for a, b in zip((m + n).eps, (m + n).delta)) % 2 == 0
    )
    assert even_sum == 16


def test_counts_uniform_over_all_nonzero_n():
    # merged with the degenerate class, the 16/12 split holds for every n
    for n in ALL_CHARS:
        if n.is_zero():
            continue
        rep = enumerate_counts(n=n)["boundary"]
        merged_even = rep["odd_m_even_sum"] + rep["odd_m_degenerate"]
        assert (merged_even, rep["odd_m_odd_sum"]) == (16, 12)


def test_complete_fundamental_system_reproduces_display_quintuples():
    cases = {
        ("77", "64", "13"): {"42", "06", "30", "21", "55"},
        ("77", "51", "26"): {"33", "05", "14", "60", "42"},
        ("77", "64", "51"): {"00", "04", "57", "70", "61"},
        ("77", "13", "26"): {"73", "20", "07", "00", "16"},
    }
    for triple, expected in cases.items():
        quint = complete_fundamental_system([char(c) for c in triple])
        assert {m.label for m in quint} == expected


def test_complete_fundamental_system_rejects_bad_input():
    with pytest.raises(ValueError):
        complete_fundamental_system([char("77"), char("64"), char("42")])  # 42 even
    with pytest.raises(ValueError):
        complete_fundamental_system([char("77"), char("77"), char("64")])  # syzygetic


def test_completion_unique_for_every_azygetic_odd_triple():
    count = 0
    for triple in itertools.combinations(ODD_CHARS, 3):
        if is_azygetic(*triple):
            quint = complete_fundamental_system(triple)
            assert len(quint) == 5
            assert is_fundamental_system(list(triple) + sorted(quint, key=lambda m: m.label))
            count += 1
    assert count > 0


def test_transport_reaches_any_odd_characteristic():
    for target in ODD_CHARS:
        act = transport_to(char("77"), target)
        assert act.on_char(char("77")) == target


@pytest.mark.slow
def test_generated_group_has_full_symplectic_order():
    assert sp_f2_group_order(3) == 1451520
