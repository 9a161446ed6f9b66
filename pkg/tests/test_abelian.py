from __future__ import annotations

import json
import math

import numpy as np
import pytest

from eqwalk import (
    CharacterIndex,
    Distribution,
    Element,
    GroupFunction,
    GroupSpec,
    annihilator,
    annihilator_indices,
    bernoulli_distribution,
    char_eval,
    character_values,
    convolve,
    convolve_power,
    coset_partition,
    delta_distribution,
    distribution_from_json,
    elem_add,
    elem_neg,
    elem_sub,
    fixed_weight_distribution,
    fourier,
    inverse_fourier,
    parse_group_spec,
    periodize,
    poisson_check,
    subgroup_generate,
    trivial_subgroup,
    uniform_distribution,
    uniform_on_set,
)
from eqwalk.abelian import Subgroup, full_subgroup

import oracles


def random_distribution(rng, group):
    nums = rng.integers(0, 10, size=group.order).astype(float)
    if nums.sum() == 0:
        nums[0] = 1.0
    return Distribution(group, nums / nums.sum())


def random_subgroup(rng, group):
    gens = [
        tuple(int(rng.integers(0, m)) for m in group.moduli)
        for _ in range(int(rng.integers(0, 3)))
    ]
    return subgroup_generate(group, gens)


class TestGroupSpec:
    def test_order_and_indexing(self):
        G = GroupSpec((4, 6, 5))
        assert G.order == 120
        assert G.flat_index((1, 2, 3)) == 1 * 30 + 2 * 5 + 3
        assert G.coords_of(43) == (1, 2, 3)
        # round trip over the whole group
        for flat in range(G.order):
            assert G.flat_index(G.coords_of(flat)) == flat

    def test_validation(self):
        with pytest.raises(ValueError):
            GroupSpec(())
        with pytest.raises(ValueError):
            GroupSpec((1, 4))
        with pytest.raises(ValueError):
            GroupSpec((2,) * 17)  # order 131072 > default cap
        GroupSpec((2,) * 17, max_order=1 << 20)  # explicit flag allows it

    def test_parse(self):
        assert parse_group_spec("Z2^7").moduli == (2,) * 7
        assert parse_group_spec("Z4xZ6xZ5").moduli == (4, 6, 5)
        assert parse_group_spec("z3 x z3").moduli == (3, 3)
        assert parse_group_spec("Z2^2xZ9").moduli == (2, 2, 9)
        for bad in ("", "Z", "Z1", "Q8", "Z4^0", "Z4x"):
            with pytest.raises(ValueError):
                parse_group_spec(bad)


class TestElements:
    def test_cyclic_add(self):
        G = GroupSpec((4,))
        assert elem_add(Element(G, (1,)), Element(G, (3,))).coords == (0,)

    def test_coordinatewise_add(self):
        G = GroupSpec((2, 2))
        assert elem_add(Element(G, (1, 0)), Element(G, (1, 1))).coords == (0, 1)

    def test_negation(self):
        G = GroupSpec((6,))
        assert elem_neg(Element(G, (2,))).coords == (4,)
        assert elem_sub(Element(G, (1,)), Element(G, (2,))).coords == (5,)

    def test_group_mismatch(self):
        with pytest.raises(ValueError):
            elem_add(Element(GroupSpec((4,)), (1,)), Element(GroupSpec((5,)), (1,)))

    def test_coordinate_range(self):
        with pytest.raises(ValueError):
            Element(GroupSpec((4,)), (4,))


class TestCharacters:
    def test_trivial_character(self):
        G = GroupSpec((3, 4))
        a = CharacterIndex(G, (0, 0))
        for flat in range(G.order):
            assert char_eval(a, Element(G, G.coords_of(flat))) == pytest.approx(1.0)

    def test_sign_character(self):
        G = GroupSpec((2, 2))
        val = char_eval(CharacterIndex(G, (1, 1)), Element(G, (1, 0)))
        assert val == pytest.approx(-1.0)

    def test_z4_quarter_turn(self):
        G = GroupSpec((4,))
        val = char_eval(CharacterIndex(G, (1,)), Element(G, (1,)))
        assert val == pytest.approx(1j)

    def test_unit_modulus(self, rng):
        G = GroupSpec((3, 4, 5))
        for _ in range(20):
            a = tuple(int(rng.integers(0, m)) for m in G.moduli)
            g = tuple(int(rng.integers(0, m)) for m in G.moduli)
            assert abs(abs(char_eval(CharacterIndex(G, a), Element(G, g))) - 1) < 1e-14

    def test_orthogonality(self, rng):
        for moduli in ((6,), (2, 2, 2), (3, 4)):
            G = GroupSpec(moduli)
            chars = np.stack([character_values(G, G.coords_of(a)) for a in range(G.order)])
            gram = chars @ np.conj(chars.T)
            off = gram - np.diag(np.diag(gram))
            assert np.abs(off).max() <= 1e-10 * G.order


class TestFourier:
    def test_delta_is_flat(self):
        G = GroupSpec((2,))
        ft = fourier(delta_distribution(G, (0,)))
        assert np.allclose(ft.values, [0.5, 0.5])

    def test_uniform_concentrates(self):
        G = GroupSpec((4,))
        ft = fourier(uniform_distribution(G))
        assert np.allclose(ft.values, [0.25, 0, 0, 0], atol=1e-15)

    def test_bernoulli_z2_squared(self):
        # frozen via the brute-force character sum over 4 elements
        G = GroupSpec((2, 2))
        f = bernoulli_distribution(G, 0.1)
        oracle = oracles.dft_bruteforce(G.moduli, f.values)
        assert np.allclose(oracle, [0.25, 0.2, 0.2, 0.16], atol=1e-14)
        assert np.allclose(fourier(f).values, oracle, atol=1e-12)

    def test_naive_fft_agree(self, rng):
        for moduli in ((12,), (2, 3, 4), (5, 5)):
            G = GroupSpec(moduli)
            f = random_distribution(rng, G)
            naive = fourier(f, method="naive").values
            fast = fourier(f, method="fft").values
            assert np.abs(naive - fast).max() <= 1e-10
            oracle = oracles.dft_bruteforce(moduli, f.values)
            assert np.abs(naive - oracle).max() <= 1e-12

    def test_distribution_mass_at_trivial_character(self, rng):
        G = GroupSpec((3, 5))
        f = random_distribution(rng, G)
        assert abs(fourier(f).values[0] - 1.0 / G.order) <= 1e-12

    def test_inversion(self, rng):
        G = GroupSpec((4, 3))
        f = GroupFunction(G, rng.normal(size=G.order))
        back = inverse_fourier(fourier(f))
        assert np.abs(back.values - f.values).max() <= 1e-10


class TestConvolution:
    def test_delta_shift(self):
        G = GroupSpec((4,))
        out = convolve(delta_distribution(G, (1,)), delta_distribution(G, (2,)))
        assert isinstance(out, Distribution)
        assert np.allclose(out.values, delta_distribution(G, (3,)).values)

    def test_uniform_absorbs(self, rng):
        G = GroupSpec((2, 3))
        f = random_distribution(rng, G)
        out = convolve(uniform_distribution(G), f)
        assert np.abs(out.values - 1.0 / G.order).max() <= 1e-12

    def test_bernoulli_composes(self):
        # p * q noise composes to p(1-q) + q(1-p); 2*0.1*0.9 = 0.18
        G = GroupSpec((2, 2, 2))
        f = bernoulli_distribution(G, 0.1)
        conv = convolve(f, f)
        expected = bernoulli_distribution(G, 0.18)
        assert np.abs(conv.values - expected.values).max() <= 1e-12
        oracle = oracles.convolve_bruteforce(G.moduli, f.values, f.values)
        assert np.abs(conv.values - oracle).max() <= 1e-12

    def test_against_bruteforce(self, rng):
        G = GroupSpec((3, 4))
        f, h = random_distribution(rng, G), random_distribution(rng, G)
        oracle = oracles.convolve_bruteforce(G.moduli, f.values, h.values)
        assert np.abs(convolve(f, h).values - oracle).max() <= 1e-12

    def test_convolution_theorem(self, rng):
        G = GroupSpec((2, 5))
        f, h = random_distribution(rng, G), random_distribution(rng, G)
        lhs = fourier(convolve(f, h)).values
        rhs = G.order * fourier(f).values * fourier(h).values
        assert np.abs(lhs - rhs).max() <= 1e-10

    def test_power(self):
        G = GroupSpec((5,))
        f = delta_distribution(G, (1,))
        assert np.allclose(convolve_power(f, 3).values, delta_distribution(G, (3,)).values)
        with pytest.raises(ValueError):
            convolve_power(f, 0)

    def test_group_mismatch(self):
        with pytest.raises(ValueError):
            convolve(uniform_distribution(GroupSpec((4,))), uniform_distribution(GroupSpec((5,))))


class TestSubgroups:
    def test_empty_generators(self):
        G = GroupSpec((6,))
        assert subgroup_generate(G, []).members == (0,)

    def test_order_two_element(self):
        assert subgroup_generate(GroupSpec((4,)), [(2,)]).members == (0, 2)

    def test_closure_enumeration(self):
        assert subgroup_generate(GroupSpec((6,)), [(4,)]).members == (0, 2, 4)

    def test_random_closure_exhaustive(self, rng):
        for moduli in ((8,), (2, 2, 3), (4, 6)):
            G = GroupSpec(moduli)
            H = random_subgroup(rng, G)
            H.verify_closure()
            assert G.order % len(H) == 0

    def test_invalid_subgroup_rejected(self):
        G = GroupSpec((4,))
        with pytest.raises(ValueError):
            Subgroup(G, (1, 2))  # missing 0
        with pytest.raises(ValueError):
            Subgroup(G, (0, 1))  # not closed: 1+1=2 missing


class TestCosets:
    def test_full_subgroup_single_block(self):
        G = GroupSpec((3, 2))
        cosets = coset_partition(full_subgroup(G))
        assert cosets.n_blocks == 1
        assert cosets.representatives == (0,)

    def test_trivial_subgroup_singletons(self):
        G = GroupSpec((5,))
        cosets = coset_partition(trivial_subgroup(G))
        assert cosets.n_blocks == 5
        assert all(block.size == 1 for block in cosets.blocks)

    def test_z4_cosets(self):
        G = GroupSpec((4,))
        cosets = coset_partition(subgroup_generate(G, [(2,)]))
        assert [b.tolist() for b in cosets.blocks] == [[0, 2], [1, 3]]
        assert cosets.representatives == (0, 1)

    def test_block_zero_is_subgroup(self, rng):
        G = GroupSpec((2, 3, 2))
        H = random_subgroup(rng, G)
        cosets = coset_partition(H)
        assert cosets.blocks[0].tolist() == list(H.members)
        assert all(b.size == len(H) for b in cosets.blocks)


class TestAnnihilator:
    def test_full_subgroup(self):
        G = GroupSpec((3, 4))
        assert annihilator_indices(full_subgroup(G)).tolist() == [0]

    def test_trivial_subgroup(self):
        G = GroupSpec((3, 4))
        assert annihilator_indices(trivial_subgroup(G)).tolist() == list(range(12))

    def test_z4_even_characters(self):
        G = GroupSpec((4,))
        H = subgroup_generate(G, [(2,)])
        assert annihilator_indices(H).tolist() == [0, 2]

    def test_counting_identity(self, rng):
        for moduli in ((8,), (2, 2, 2), (6, 4)):
            G = GroupSpec(moduli)
            H = random_subgroup(rng, G)
            assert len(annihilator_indices(H)) * len(H) == G.order

    def test_definition(self, rng):
        G = GroupSpec((4, 3))
        H = random_subgroup(rng, G)
        ann = set(annihilator_indices(H).tolist())
        for a in range(G.order):
            vals = [
                oracles.char_value(G.moduli, G.coords_of(a), G.coords_of(h))
                for h in H.members
            ]
            trivial_on_h = all(abs(v - 1) < 1e-9 for v in vals)
            assert (a in ann) == trivial_on_h

    def test_character_index_wrapper(self):
        G = GroupSpec((4,))
        chars = annihilator(subgroup_generate(G, [(2,)]))
        assert [c.coords for c in chars] == [(0,), (2,)]


class TestPeriodization:
    def test_trivial_subgroup_identity(self, rng):
        G = GroupSpec((6,))
        f = random_distribution(rng, G)
        per = periodize(f, trivial_subgroup(G))
        assert np.allclose(per.values, f.values)

    def test_full_subgroup_average(self, rng):
        G = GroupSpec((2, 4))
        f = random_distribution(rng, G)
        per = periodize(f, full_subgroup(G))
        assert per.values.shape == (1,)
        assert per.values[0] == pytest.approx(1.0 / G.order, abs=1e-12)

    def test_z4_delta(self):
        G = GroupSpec((4,))
        per = periodize(delta_distribution(G, (1,)), subgroup_generate(G, [(2,)]))
        assert np.allclose(per.values, [0.0, 0.5])

    def test_recomputation(self, rng):
        G = GroupSpec((3, 4))
        f = random_distribution(rng, G)
        H = random_subgroup(rng, G)
        per = periodize(f, H)
        for b, block in enumerate(per.cosets.blocks):
            assert per.values[b] == pytest.approx(f.values[block].mean(), abs=1e-12)


class TestPoisson:
    def test_trivial_subgroup_exact_zero(self, rng):
        G = GroupSpec((8,))
        f = random_distribution(rng, G)
        assert poisson_check(f, trivial_subgroup(G)) <= 1e-13

    def test_full_subgroup(self, rng):
        G = GroupSpec((3, 3))
        f = random_distribution(rng, G)
        assert poisson_check(f, full_subgroup(G)) <= 1e-13

    def test_z4_delta(self):
        G = GroupSpec((4,))
        dev = poisson_check(delta_distribution(G, (1,)), subgroup_generate(G, [(2,)]))
        assert dev <= 1e-12

    def test_random_instances(self, rng):
        for moduli in ((12,), (2, 2, 2, 2), (6, 6)):
            G = GroupSpec(moduli)
            f = random_distribution(rng, G)
            H = random_subgroup(rng, G)
            assert poisson_check(f, H) <= 1e-12


class TestDistributions:
    def test_validation(self):
        G = GroupSpec((2,))
        with pytest.raises(ValueError):
            Distribution(G, [0.6, 0.6])
        with pytest.raises(ValueError):
            Distribution(G, [1.5, -0.5])
        d = Distribution(G, [1.0 + 1e-13, -1e-13])
        assert d.values[1] == 0.0  # fuzz clamped

    def test_bernoulli(self):
        G = GroupSpec((2, 2))
        f = bernoulli_distribution(G, 0.1)
        assert np.allclose(f.values, [0.81, 0.09, 0.09, 0.01])
        with pytest.raises(ValueError):
            bernoulli_distribution(GroupSpec((3,)), 0.1)
        with pytest.raises(ValueError):
            bernoulli_distribution(G, 1.5)

    def test_fixed_weight(self):
        G = GroupSpec((2, 2, 2))
        f = fixed_weight_distribution(G, 2)
        hot = np.flatnonzero(f.values)
        assert sorted(hot.tolist()) == [3, 5, 6]
        assert np.allclose(f.values[hot], 1 / 3)
        with pytest.raises(ValueError):
            fixed_weight_distribution(G, 4)

    def test_uniform_on_set(self):
        G = GroupSpec((4,))
        f = uniform_on_set(G, [1, 3])
        assert np.allclose(f.values, [0, 0.5, 0, 0.5])
        with pytest.raises(ValueError):
            uniform_on_set(G, [])

    def test_json_round_trip(self):
        from eqwalk.abelian import distribution_to_json

        G = GroupSpec((2, 2))
        f = bernoulli_distribution(G, 0.25)
        again = distribution_from_json(distribution_to_json(f))
        assert again.group.moduli == (2, 2)
        assert np.allclose(again.values, f.values)

    def test_json_errors(self):
        with pytest.raises(ValueError):
            distribution_from_json(json.dumps({"moduli": [2], "probs": [0.9, 0.2]}))
        with pytest.raises(ValueError):
            distribution_from_json(json.dumps({"moduli": [2], "probs": [0.7, 0.2]}))
        with pytest.raises(ValueError):
            distribution_from_json(json.dumps({"probs": [1.0]}))
