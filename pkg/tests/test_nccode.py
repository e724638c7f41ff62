from __future__ import annotations

import random
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dualcast.errors import (
    CodeConstructionError,
    CyclicSupportError,
    InfeasibleResidualError,
    InputError,
)
from dualcast.nccode import (
    DEFAULT_MODULI,
    GF,
    _topological_edge_order,
    apply_code,
    build_multicast_code,
    decode_symbols,
    get_field,
    gf_add,
    gf_inv,
    gf_mul,
)

from conftest import mknet, parallel_net
from oracles import gf_mul_reference, is_irreducible_reference

GF256 = get_field(8)


class TestFieldBasics:
    @given(st.integers(0, 255))
    def test_adding_an_element_to_itself_vanishes(self, x):
        assert gf_add(x, x) == 0

    @given(st.integers(0, 255))
    def test_one_is_the_multiplicative_identity(self, x):
        assert gf_mul(1, x) == x

    def test_documented_product_with_default_modulus(self):
        # 0x02 * 0x80 lifts to x^8, which reduces by one XOR with 0x11D.
        assert gf_mul(0x02, 0x80) == 0x1D
        assert 0x100 ^ 0x11D == 0x1D

    def test_every_nonzero_element_has_an_inverse(self):
        for a in range(1, 256):
            assert gf_mul(a, gf_inv(a)) == 1

    def test_zero_has_no_inverse(self):
        with pytest.raises(ZeroDivisionError):
            gf_inv(0)

    @pytest.mark.parametrize("bits", sorted(DEFAULT_MODULI))
    def test_default_moduli_are_irreducible(self, bits):
        poly = DEFAULT_MODULI[bits]
        assert poly.bit_length() == bits + 1
        assert is_irreducible_reference(poly)

    @pytest.mark.parametrize("bits", [2, 4, 8, 16])
    @given(data=st.data())
    @settings(max_examples=60, deadline=None)
    def test_multiplication_matches_schoolbook_reference(self, bits, data):
        field = get_field(bits)
        a = data.draw(st.integers(0, field.size - 1))
        b = data.draw(st.integers(0, field.size - 1))
        assert field.mul(a, b) == gf_mul_reference(a, b, bits, field.modulus)

    @given(st.integers(0, 255), st.integers(0, 255), st.integers(0, 255))
    def test_field_axioms_sampled(self, a, b, c):
        f = GF256
        assert f.mul(a, b) == f.mul(b, a)
        assert f.mul(a, f.mul(b, c)) == f.mul(f.mul(a, b), c)
        assert f.mul(a, b ^ c) == f.mul(a, b) ^ f.mul(a, c)

    def test_bad_field_parameters_rejected(self):
        with pytest.raises(InputError):
            GF(0)
        with pytest.raises(InputError):
            GF(17)
        with pytest.raises(InputError):
            GF(8, modulus=0x100)  # x^8: reducible
        with pytest.raises(InputError):
            GF(8, modulus=0x1D)  # wrong degree

    def test_inverse_in_large_tableless_field(self):
        f = get_field(16)
        rng = random.Random(3)
        for _ in range(50):
            a = rng.randrange(1, f.size)
            assert f.mul(a, f.inv(a)) == 1


class TestMatrices:
    def test_inverse_round_trip(self):
        f = GF256
        rng = random.Random(1)
        for _ in range(20):
            n = rng.randint(1, 4)
            m = [[rng.randrange(f.size) for _ in range(n)] for _ in range(n)]
            inv = f.mat_inv(m)
            if inv is None:
                assert f.rank(m) < n
                continue
            prod = f.mat_mul(inv, m)
            assert prod == [[int(i == j) for j in range(n)] for i in range(n)]

    def test_singular_matrix_has_no_inverse(self):
        f = GF256
        assert f.mat_inv([[1, 1], [1, 1]]) is None
        assert f.rank([[1, 1], [1, 1]]) == 1


class TestButterflyExhaustive:
    def test_gf2_bottleneck_vector_is_forced(self, butterfly):
        """With unit vectors on the two source branches, every decodable GF(2)
        assignment puts the all-ones combination on the bottleneck edge."""
        # Edge roles: 2=a->t1, 3=b->t2, 4=a->m, 5=b->m, 6=m->n, 7=n->t1, 8=n->t2.
        decodable = 0
        for c2, c3, c4, c5, c6a, c6b, c7, c8 in product((0, 1), repeat=8):
            g = {0: (1, 0), 1: (0, 1)}
            g[2] = tuple(c2 & x for x in g[0])
            g[4] = tuple(c4 & x for x in g[0])
            g[3] = tuple(c3 & x for x in g[1])
            g[5] = tuple(c5 & x for x in g[1])
            g[6] = tuple((c6a & x) ^ (c6b & y) for x, y in zip(g[4], g[5]))
            g[7] = tuple(c7 & x for x in g[6])
            g[8] = tuple(c8 & x for x in g[6])
            det_t1 = (g[2][0] & g[7][1]) ^ (g[2][1] & g[7][0])
            det_t2 = (g[3][0] & g[8][1]) ^ (g[3][1] & g[8][0])
            if det_t1 and det_t2:
                decodable += 1
                assert g[6] == (1, 1)
        assert decodable > 0


class TestBuildMulticastCode:
    def test_zero_rate_gives_empty_code(self, butterfly):
        code = build_multicast_code(butterfly, 0, rng=random.Random(0))
        assert code.support == ()
        assert code.h0 == 0
        assert apply_code(code, [], butterfly) == {}

    def test_disjoint_parallel_routes_code_trivially(self):
        net = parallel_net(2, 2)
        code = build_multicast_code(net, 2, rng=random.Random(0))
        x0 = [17, 202]
        symbols = apply_code(code, x0, net)
        assert decode_symbols(code, 1, symbols) == x0
        assert decode_symbols(code, 2, symbols) == x0

    def test_butterfly_code_decodes_random_messages(self, butterfly):
        code = build_multicast_code(butterfly, 2, rng=random.Random(42))
        rng = random.Random(7)
        for _ in range(10):
            x0 = [rng.randrange(256) for _ in range(2)]
            symbols = apply_code(code, x0, butterfly)
            assert decode_symbols(code, 1, symbols) == x0
            assert decode_symbols(code, 2, symbols) == x0

    def test_butterfly_support_is_within_the_coded_core(self, butterfly):
        code = build_multicast_code(butterfly, 2, rng=random.Random(42))
        assert set(code.support) <= {e.eid for e in butterfly.edges}
        assert len(code.inputs_t1) == 2 and len(code.inputs_t2) == 2
        for eid in code.inputs_t1:
            assert butterfly.edge(eid).head == "t1"

    def test_single_draw_success_rate_over_gf256(self, butterfly):
        successes = 0
        for seed in range(100):
            code = build_multicast_code(
                butterfly, 2, rng=random.Random(seed), attempts_per_field=1
            )
            if code.field_bits == 8:
                successes += 1
        assert successes >= 95

    def test_insufficient_residual_flow_is_reported(self):
        net = parallel_net(1, 1)
        with pytest.raises(InfeasibleResidualError):
            build_multicast_code(net, 2, rng=random.Random(0))

    def test_construction_is_deterministic_in_the_seed(self, butterfly):
        a = build_multicast_code(butterfly, 2, rng=random.Random(5))
        b = build_multicast_code(butterfly, 2, rng=random.Random(5))
        assert a == b

    def test_cyclic_support_is_rejected(self):
        net = mknet(
            [("s", "a"), ("a", "b"), ("b", "a"), ("b", "t1"), ("a", "t2")],
            source="s",
            terminals=("t1", "t2"),
        )
        with pytest.raises(CyclicSupportError):
            _topological_edge_order(net, {1, 2})

    def test_exhausted_retry_ladder_reports_the_ceiling_field(self, butterfly):
        class ZeroMixing(random.Random):
            # Minimal legal draws: mixing coefficients all zero, so every
            # attempt yields a singular bottleneck and the ladder runs out.
            def randrange(self, start, stop=None, step=1):
                return 0 if stop is None else start

        with pytest.raises(CodeConstructionError) as exc:
            build_multicast_code(
                butterfly, 2, rng=ZeroMixing(), field_bits=16, attempts_per_field=2
            )
        assert "GF(2^16)" in str(exc.value)


@pytest.fixture(scope="module")
def butterfly_code(butterfly):
    return build_multicast_code(butterfly, 2, rng=random.Random(42))


class TestApplyCode:
    def test_zero_messages_give_zero_symbols(self, butterfly, butterfly_code):
        symbols = apply_code(butterfly_code, [0, 0], butterfly)
        assert set(symbols.values()) == {0}

    def test_unit_messages_read_out_global_coefficients(self, butterfly, butterfly_code):
        code = butterfly_code
        for i in range(2):
            x0 = [int(i == j) for j in range(2)]
            symbols = apply_code(code, x0, butterfly)
            for eid in code.support:
                assert symbols[eid] == code.global_vectors[eid][i]

    @given(
        st.lists(st.integers(0, 255), min_size=2, max_size=2),
        st.lists(st.integers(0, 255), min_size=2, max_size=2),
    )
    @settings(max_examples=50, deadline=None)
    def test_evaluation_is_linear(self, butterfly, butterfly_code, x, y):
        code = butterfly_code
        sx = apply_code(code, x, butterfly)
        sy = apply_code(code, y, butterfly)
        sxy = apply_code(code, [a ^ b for a, b in zip(x, y)], butterfly)
        for eid in code.support:
            assert sx[eid] ^ sy[eid] == sxy[eid]

    def test_wrong_message_count_rejected(self, butterfly, butterfly_code):
        with pytest.raises(InputError):
            apply_code(butterfly_code, [1, 2, 3], butterfly)

    def test_decode_matrices_invert_the_transfer_matrices(self, butterfly_code):
        code = butterfly_code
        f = code.field
        for inputs, matrix in (
            (code.inputs_t1, code.decode_t1),
            (code.inputs_t2, code.decode_t2),
        ):
            transfer = code.transfer_matrix(inputs)
            assert f.rank(transfer) == code.h0
            prod = f.mat_mul([list(r) for r in matrix], transfer)
            assert prod == [[int(i == j) for j in range(code.h0)] for i in range(code.h0)]
