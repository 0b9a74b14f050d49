
import pytest
from hypothesis import given
from hypothesis import strategies as st

from submod_lab import EMPTY, InputError, RingElem, all_ideals, ideal_generate, is_phi_prime_ideal, parse_phi, ring_make, saturate
from submod_lab.ring import eval_phi, ideal_ops, ideal_power, minimal_idempotent

from conftest import SMALL_RINGS


def ideal(R, elems):
    return ideal_generate(R, [R.elem(e) for e in elems])


def residues(I):
    return sorted(e.residues for e in I.elements)


class TestConstruction:
    @pytest.mark.parametrize("moduli,size", [([6], 6), ([6, 6], 36), ([8], 8)])
    def test_ring_sizes(self, moduli, size):
        assert ring_make(moduli).size == size

    def test_rejects_bad_moduli(self):
        with pytest.raises(InputError):
            ring_make([1])
        with pytest.raises(InputError):
            ring_make([])

    def test_arithmetic(self):
        R6 = ring_make([6])
        assert (R6.elem((3,)) + R6.elem((5,))).residues == (2,)
        R66 = ring_make([6, 6])
        assert (R66.elem((2, 1)) * R66.elem((3, 3))).residues == (0, 3)
        assert (-R66.elem((1, 0))).residues == (5, 0)


class TestIdeals:
    def test_generate(self):
        R6, R8 = ring_make([6]), ring_make([8])
        assert residues(ideal(R6, [(2,)])) == [(0,), (2,), (4,)]
        assert residues(ideal_generate(R6, [])) == [(0,)]
        assert residues(ideal(R8, [(2,)])) == [(0,), (2,), (4,), (6,)]

    def test_all_ideals(self):
        assert [residues(I) for I in all_ideals(ring_make([6]))] == [
            [(0,)],
            [(0,), (3,)],
            [(0,), (2,), (4,)],
            [(i,) for i in range(6)],
        ]
        assert [I.size for I in all_ideals(ring_make([8]))] == [1, 2, 4, 8]
        assert [I.size for I in all_ideals(ring_make([2]))] == [1, 2]

    def test_operations(self):
        R8, R6 = ring_make([8]), ring_make([6])
        two = ideal(R8, [(2,)])
        assert residues(ideal_power(two, 2)) == [(0,), (4,)]
        assert residues(ideal_power(two, 3)) == [(0,)]
        assert ideal_power(two, 0).size == 8
        total = ideal_ops("sum", ideal(R6, [(3,)]), ideal(R6, [(2,)]))
        assert total.size == 6

    @pytest.mark.parametrize("n", range(2, 41))
    def test_ideal_count_is_divisor_count(self, n):
        assert len(all_ideals(ring_make([n]))) == sum(1 for d in range(1, n + 1) if n % d == 0)

    @pytest.mark.parametrize("moduli", SMALL_RINGS)
    def test_closure_idempotent_and_powers_descend(self, moduli):
        R = ring_make(moduli)
        for I in all_ideals(R):
            assert ideal_generate(R, list(I.elements)) == I
            prev = I
            for k in range(2, R.size + 2):
                cur = ideal_power(I, k)
                assert cur <= prev
                prev = cur
            assert ideal_power(I, R.size + 1) == ideal_power(I, R.size)


class TestPhi:
    def test_values(self):
        R6, R8 = ring_make([6]), ring_make([8])
        P = ideal(R6, [(2,)])
        assert eval_phi(parse_phi("identity"), P) == P
        assert residues(eval_phi(parse_phi("power:2"), ideal(R8, [(2,)]))) == [(0,), (4,)]
        assert eval_phi(parse_phi("empty"), P) is EMPTY

    def test_phi_prime_examples(self):
        R6 = ring_make([6])
        empty, identity = parse_phi("empty"), parse_phi("identity")
        assert is_phi_prime_ideal(ideal(R6, [(2,)]), empty)
        res = is_phi_prime_ideal(ideal(R6, []), empty)
        assert not res
        assert {res.witness["r"].residues, res.witness["s"].residues} == {(2,), (3,)}
        assert is_phi_prime_ideal(ideal(R6, []), identity)

    def test_whole_ring_rejected(self):
        R6 = ring_make([6])
        with pytest.raises(InputError):
            is_phi_prime_ideal(ideal(R6, [(1,)]), parse_phi("empty"))

    @pytest.mark.parametrize("moduli", SMALL_RINGS)
    def test_empty_phi_matches_zero_divisor_free_quotient(self, moduli):
        R = ring_make(moduli)
        for P in all_ideals(R):
            if not P.is_proper():
                continue
            inside = P.__contains__
            expected = all(
                inside(r) or inside(s) for r in R.elements() for s in R.elements() if inside(r * s)
            )
            assert is_phi_prime_ideal(P, parse_phi("empty")).verdict == expected
            assert is_phi_prime_ideal(P, parse_phi("identity"))

    def test_witness_revalidates(self):
        for moduli in SMALL_RINGS:
            R = ring_make(moduli)
            for tag in ("empty", "zero", "power:2"):
                phi = parse_phi(tag)
                for P in all_ideals(R):
                    if not P.is_proper():
                        continue
                    res = is_phi_prime_ideal(P, phi)
                    if res:
                        continue
                    r, s = res.witness["r"], res.witness["s"]
                    excluded = eval_phi(phi, P)
                    assert (r * s) in P and r not in P and s not in P
                    assert excluded is EMPTY or (r * s) not in excluded


class TestMultiplicativeSets:
    def test_saturation(self):
        R6 = ring_make([6])
        assert sorted(e.residues[0] for e in saturate(R6, [R6.elem((3,))]).elements) == [1, 3]
        assert sorted(e.residues[0] for e in saturate(R6, [R6.elem((2,))]).elements) == [1, 2, 4]
        assert sorted(e.residues[0] for e in saturate(R6, [R6.elem((1,))]).elements) == [1]

    def test_minimal_idempotent(self):
        R6 = ring_make([6])
        assert minimal_idempotent(saturate(R6, [R6.elem((3,))])).residues == (3,)
        assert minimal_idempotent(saturate(R6, [R6.elem((2,))])).residues == (4,)
        assert minimal_idempotent(saturate(R6, [R6.elem((1,))])).residues == (1,)

    @given(st.sampled_from(SMALL_RINGS), st.data())
    def test_idempotent_contract(self, moduli, data):
        R = ring_make(moduli)
        s = data.draw(st.integers(0, R.size - 1))
        S = saturate(R, [RingElem(R, s)])
        e = minimal_idempotent(S)
        assert e * e == e
        component = [e * x for x in R.elements()]
        for t in S.elements:
            assert any(t * u == e for u in component)
