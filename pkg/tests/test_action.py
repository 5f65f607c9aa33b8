import random

import pytest

from leafspace.core import Tri, UnresolvedName, UndefinedGenerator, expand, mid_point, vertex_point
from leafspace.action import (
    Word,
    act,
    act_cell,
    act_locus,
    branching_type,
    canonical_points,
    classify_element,
    comparable_sample,
    fixed_cells,
    in_comparable_set,
    is_identity_action,
    word_map,
)
from leafspace.paths import Comparability, compare
from leafspace.core import branch_loci
from leafspace.randspec import RandomParams, random_spec


def test_word_reduction_and_parse():
    w = Word.parse("g g g^-1")
    assert w == Word.generator("g") and len(w) == 1
    assert Word.parse("g^2*h^-1").letters == (("g", 1), ("g", 1), ("h", -1))
    assert Word.parse("1").is_identity
    assert (Word.generator("g") * Word.generator("g", -1)).is_identity
    w = Word.parse("g*h")
    assert (w * w.inverse()).is_identity
    assert str(Word.generator("g", -3)) == "g^-3"
    assert (Word.generator("g") ** 0).is_identity


def test_act_examples(line, swap):
    t = Word.generator("t")
    assert act_cell(line.spec, t, ("v", 0)) == ("v", 1)
    g = Word.generator("g")
    assert act_cell(swap.spec, g, ("a", 0)) == ("b", 0)
    assert act_cell(swap.spec, g, ("b", 0)) == ("a", 0)
    assert act(swap.spec, g ** 2, mid_point("ra", 0)) == mid_point("ra", -1)
    assert act(swap.spec, Word.identity(), mid_point("s", 0)) == mid_point("s", 0)


def test_act_inverse_roundtrip(swap, zigzag):
    rng = random.Random(3)
    for spec in (swap.spec, zigzag.spec):
        names = sorted(spec.generators)
        pts = canonical_points(expand(spec, 2))
        for _ in range(25):
            letters = [(rng.choice(names), rng.choice((1, -1))) for _ in range(4)]
            w = Word.of(letters)
            x = rng.choice(pts)
            assert act(spec, w.inverse(), act(spec, w, x)) == x


def test_act_undefined_generator(line):
    with pytest.raises(UndefinedGenerator):
        act(line.spec, Word.generator("nope"), vertex_point("v", 0))


def test_generator_must_be_automorphism(swap):
    spec = swap.spec
    with pytest.raises(UnresolvedName):
        spec.add_generator("bad", {f: (f, 0) for f in list(spec.families)[:-1]})
    with pytest.raises(UnresolvedName):
        # swapping the branch chains without swapping their limit targets
        spec.add_generator("bad", {
            "s": ("s", 0), "ra": ("rb", 0), "rb": ("ra", 0),
            "a": ("a", 0), "b": ("b", 0)})


def test_in_comparable_set_examples(swap, zigzag):
    g = Word.generator("g")
    assert in_comparable_set(swap.spec, g, mid_point("s", 0), 3) is Tri.YES
    assert in_comparable_set(swap.spec, g, mid_point("ra", 0), 3) is Tri.NO
    h = Word.generator("h")
    assert in_comparable_set(zigzag.spec, h, mid_point("E", 0), 3) is Tri.NO


def test_fixed_cells_examples(swap, line):
    g = Word.generator("g")
    assert fixed_cells(swap.spec, g, 2) == []
    assert fixed_cells(swap.spec, g ** 2, 2) == [("a", 0), ("b", 0)]
    trunc = expand(line.spec, 1)
    assert fixed_cells(line.spec, Word.identity(), 1) == sorted(
        trunc.vertex_cells + trunc.edge_cells)


def test_classify_line_translation(line):
    profile = classify_element(line.spec, Word.generator("t"), 3)
    assert profile.tangentiable.value is Tri.TRUNCATED
    assert profile.tangentiable.witness is None
    assert profile.pos_transversable.value is Tri.YES
    assert profile.neg_transversable.value is Tri.TRUNCATED


def test_classify_swap_square(swap):
    profile = classify_element(swap.spec, Word.generator("g") ** 2, 3)
    assert profile.tangentiable.value is Tri.YES
    assert profile.tangentiable.witness == vertex_point("a")
    assert profile.pos_transversable.value is Tri.YES
    assert profile.neg_transversable.value is Tri.YES
    # descending witness sits on a branch chain moving toward the locus
    assert profile.neg_transversable.witness.cell[0] in ("ra", "rb")


def test_classify_zigzag_neither(zigzag):
    profile = classify_element(zigzag.spec, Word.generator("h"), 3)
    assert profile.neither_in_window
    assert profile.tangentiable.value is Tri.TRUNCATED
    assert profile.tangentiable.witness is None
    assert profile.pos_transversable.value is Tri.TRUNCATED


def test_classify_certified_no_on_closed_window(yplus, tripod):
    w = Word.generator("w")
    profile = classify_element(tripod, w, 2)
    assert profile.pos_transversable.value is Tri.NO       # sweep closed
    assert profile.neg_transversable.value is Tri.NO
    assert profile.tangentiable.value is Tri.YES            # fixes a and its branch


def test_branching_types(line, swap, zigzag, comb):
    assert branching_type(line.spec, 2).value == "none"
    assert branching_type(swap.spec, 2).value == "one_sided_positive"
    assert branching_type(zigzag.spec, 2).value == "two_sided"
    assert branching_type(comb.spec, 2).value == "one_sided_positive"
    assert branching_type(line.spec, 2).truncated_caveat
    assert not branching_type(gallery_fixture("YPLUS").spec, 2).truncated_caveat


def gallery_fixture(name):
    from leafspace.gallery import gallery
    return gallery(name)


def test_order_preservation(swap, zigzag):
    rng = random.Random(5)
    for spec in (swap.spec, zigzag.spec):
        trunc = expand(spec, 3)
        pts = canonical_points(trunc)
        names = sorted(spec.generators)
        for _ in range(40):
            w = Word.of([(rng.choice(names), rng.choice((1, -1)))
                         for _ in range(rng.randint(1, 3))])
            x, y = rng.choice(pts), rng.choice(pts)
            if compare(trunc, x, y) is not Comparability.LESS:
                continue
            ix, iy = act(spec, w, x), act(spec, w, y)
            if not (trunc.contains_point(ix) and trunc.contains_point(iy)):
                continue
            rel = compare(trunc, ix, iy)
            if rel is not Comparability.TRUNCATED:
                assert rel is Comparability.LESS


def test_comparable_set_word_identities(swap, comb):
    # identities hold wherever the window certifies both sides
    for spec, name in ((swap.spec, "g"), (comb.spec, "u")):
        w = Word.generator(name)
        trunc = expand(spec, 3)
        decided = 0
        for p in canonical_points(trunc):
            ans = in_comparable_set(spec, w, p, 3)
            inv = in_comparable_set(spec, w.inverse(), p, 3)
            if Tri.TRUNCATED not in (ans, inv):
                assert ans is inv
                decided += 1
            if ans is Tri.YES:
                for k in (2, 3):
                    assert in_comparable_set(spec, w ** k, p, 3) in (Tri.YES, Tri.TRUNCATED)
                image = act(spec, w, p)
                if trunc.contains_point(image):
                    assert in_comparable_set(spec, w, image, 3) in (Tri.YES, Tri.TRUNCATED)
        assert decided > 5


def test_comparable_sample_records_sweep(swap):
    sample = comparable_sample(swap.spec, Word.generator("g"), 2)
    assert sample.touched_truncation
    yes = sample.points(Tri.YES)
    assert yes and all(p.cell[0] == "s" for p in yes)


def test_loci_equivariance():
    rng = random.Random(9)
    for seed in range(1, 60):
        spec = random_spec(RandomParams(seed=seed, symmetric=True))
        trunc = expand(spec, 0)
        loci = {b.members: b.sign for b in branch_loci(trunc)}
        w = Word.generator("rho", rng.choice((1, 2, -1)))
        for members, sign in loci.items():
            image = act_locus(spec, w, members)
            assert image in loci and loci[image] == sign


def test_tangentiable_iff_fixed_cells(swap, zigzag, comb):
    for spec in (swap.spec, zigzag.spec, comb.spec):
        names = sorted(spec.generators)
        for name in names:
            for k in (1, 2, 3):
                w = Word.generator(name, k)
                profile = classify_element(spec, w, 3)
                has_fixed = bool(fixed_cells(spec, w, 3))
                assert (profile.tangentiable.value is Tri.YES) == has_fixed


def test_word_map_composition(swap):
    g = Word.generator("g")
    m = word_map(swap.spec, g ** 2)
    assert m["s"] == ("s", -2)
    assert m["ra"] == ("ra", -1) and m["rb"] == ("rb", -1)
    assert m["a"] == ("a", 0)
    assert is_identity_action(swap.spec, g * g.inverse())
    assert not is_identity_action(swap.spec, g ** 2)


def test_membership_yes_is_depth_monotone(swap, comb):
    for spec, name in ((swap.spec, "g"), (comb.spec, "u")):
        w = Word.generator(name)
        for p in canonical_points(expand(spec, 2)):
            if in_comparable_set(spec, w, p, 2) is Tri.YES:
                assert in_comparable_set(spec, w, p, 4) is Tri.YES
                assert in_comparable_set(spec, w, p, 6) is Tri.YES


def test_profile_witnesses_verify(swap, line):
    # every Yes entry carries a witness that replays under the primitives
    from leafspace.action import image_relation

    for spec, word in ((swap.spec, Word.generator("g") ** 2),
                       (line.spec, Word.generator("t"))):
        trunc = expand(spec, 3)
        profile = classify_element(spec, word, 3)
        if profile.tangentiable.value is Tri.YES:
            w = profile.tangentiable.witness
            assert act(spec, word, w) == w
        if profile.pos_transversable.value is Tri.YES:
            w = profile.pos_transversable.witness
            assert image_relation(spec, trunc, w, act(spec, word, w)) is Comparability.LESS
        if profile.neg_transversable.value is Tri.YES:
            w = profile.neg_transversable.witness
            assert image_relation(spec, trunc, w, act(spec, word, w)) is Comparability.GREATER
