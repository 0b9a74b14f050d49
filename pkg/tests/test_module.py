import pytest
from hypothesis import given
from hypothesis import strategies as st

from submod_lab import (
    InputError,
    ResourceLimitError,
    Limits,
    all_submodules,
    annihilator,
    ci_decomposition,
    colon_module,
    colon_ring,
    completely_irreducibles,
    hom_make,
    ideal_generate,
    ideal_image,
    localize,
    module_make,
    product,
    quotient,
    ring_make,
    saturate,
    submodule_generate,
)
from submod_lab.module import (
    ModuleSpec,
    is_comultiplication_module,
    is_completely_irreducible,
    is_multiplication_module,
    join,
    split,
)
from submod_lab.ring import all_ideals

from conftest import small_modules


def res(N):
    return sorted(x.residues for x in N.elements)


def closed(N):
    M = N.module
    members = N.mask
    for x in range(M.size):
        if not members >> x & 1:
            continue
        for y in range(M.size):
            if members >> y & 1 and not members >> M.add[x][y] & 1:
                return False
        for row in M.act:
            if not members >> row[x] & 1:
                return False
    return True


@pytest.fixture(scope="module")
def z6():
    return module_make(ring_make([6]), [6])


@pytest.fixture(scope="module")
def z66():
    return module_make(ring_make([6, 6]), [6, 6], [1, 2])


@pytest.fixture(scope="module")
def z8():
    return module_make(ring_make([8]), [8])


class TestConstruction:
    def test_sizes(self, z6, z66):
        assert z6.size == 6
        assert z66.size == 36
        assert module_make(ring_make([4]), [2]).size == 2

    def test_order_must_divide_modulus(self):
        with pytest.raises(InputError):
            ModuleSpec(ring_make([6]), (4,), (1,))
        with pytest.raises(InputError):
            ModuleSpec(ring_make([6]), (2,), (2,))

    def test_axioms_hold(self, z66):
        z66.check_axioms()

    def test_generate(self, z6, z66):
        assert res(submodule_generate(z6, [(2,)])) == [(0,), (2,), (4,)]
        assert res(submodule_generate(z66, [(1, 0)])) == [(i, 0) for i in range(6)]
        assert submodule_generate(z6, []).is_zero()


class TestLattice:
    def test_counts(self, z6, z66):
        assert len(all_submodules(z6)) == 4
        assert len(all_submodules(z66)) == 16
        assert len(all_submodules(module_make(ring_make([2]), [2]))) == 2

    def test_every_product_submodule_splits(self, z66):
        for N in all_submodules(z66):
            a = {x.residues[0] for x in N.elements}
            b = {x.residues[1] for x in N.elements}
            assert {x.residues for x in N.elements} == {(i, j) for i in a for j in b}

    def test_resource_cap(self, z66):
        with pytest.raises(ResourceLimitError):
            all_submodules(z66, Limits(max_module_order=10))

    @given(small_modules())
    def test_closed_under_sum_and_meet(self, M):
        lattice = all_submodules(M)
        masks = {N.mask for N in lattice}
        for N in lattice:
            assert closed(N)
            for K in lattice:
                assert (N + K).mask in masks
                assert (N & K).mask in masks


class TestColons:
    def test_images(self, z8, z66):
        R8 = z8.ring
        assert res(ideal_image(R8.elem((2,)), z8.whole)) == [(0,), (2,), (4,), (6,)]
        S = submodule_generate(z66, [(1, 0)])
        assert res(ideal_image(z66.ring.elem((2, 1)), S)) == [(0, 0), (2, 0), (4, 0)]
        assert ideal_image(ideal_generate(z8.ring, []), z8.whole).is_zero()

    def test_colon_module(self, z6, z8):
        R6, R8 = z6.ring, z8.ring
        assert res(colon_module(z6.zero_submodule, ideal_generate(R6, [R6.elem((2,))]))) == [(0,), (3,)]
        N = submodule_generate(z8, [(1,)])
        assert colon_module(submodule_generate(z8, [(3,)]), ideal_generate(R8, [])).is_whole()
        N = submodule_generate(z8, [(2,)])
        assert colon_module(N, ideal_generate(R8, [R8.elem((4,))])).is_whole()

    def test_annihilators(self, z6, z8):
        assert sorted(e.residues for e in annihilator(submodule_generate(z6, [(2,)])).elements) == [(0,), (3,)]
        assert sorted(e.residues for e in annihilator(submodule_generate(z8, [(2,)])).elements) == [(0,), (4,)]
        assert not colon_ring(z8.whole, z8.whole).is_proper()

    @given(small_modules())
    def test_galois_connections(self, M):
        lattice = all_submodules(M)
        for I in all_ideals(M.ring):
            for N in lattice:
                img = ideal_image(I, N)
                assert closed(img)
                for K in lattice:
                    inside = img <= K
                    assert (I <= colon_ring(K, N)) == inside
                    col = colon_module(K, I)
                    assert closed(col)
                    assert (N <= col) == inside


class TestQuotientAndLocalization:
    def test_quotient_examples(self, z8, z6):
        Q, q = quotient(z8, submodule_generate(z8, [(4,)]))
        assert Q.size == 4
        assert sorted(x.residues for x in q.coset(z8.elem((2,)))) == [(2,), (6,)]
        Q0, _ = quotient(z8, z8.zero_submodule)
        assert Q0.size == 8
        assert quotient(z6, submodule_generate(z6, [(2,)]))[0].size == 2

    @given(small_modules(), st.data())
    def test_correspondence(self, M, data):
        lattice = all_submodules(M)
        K = data.draw(st.sampled_from(lattice))
        Q, q = quotient(M, K)
        above = [N for N in lattice if K <= N]
        images = [q.image(N) for N in above]
        assert sorted(X.mask for X in images) == sorted(X.mask for X in all_submodules(Q))
        for A, qa in zip(above, images):
            assert q.lift(qa) == A
            for B, qb in zip(above, images):
                assert (A <= B) == (qa <= qb)

    def test_localization_examples(self, z6):
        R6 = z6.ring
        L, f = localize(z6, saturate(R6, [R6.elem((3,))]))
        assert L.size == 2
        assert f(z6.elem((1,))).residues == (3,)
        L, _ = localize(z6, saturate(R6, [R6.elem((2,))]))
        assert L.size == 3
        L, _ = localize(z6, saturate(R6, [R6.elem((1,))]))
        assert L.size == 6

    @given(small_modules(), st.data())
    def test_localization_contract(self, M, data):
        R = M.ring
        s = data.draw(st.integers(0, R.size - 1))
        S = saturate(R, [R.elements()[s]])
        L, f = localize(M, S)
        torsion = {x for x in range(M.size) if any(M.act[t][x] == 0 for t in S.indices)}
        assert {x for x in range(M.size) if f.table[x] == 0} == torsion
        for t in S.indices:
            assert sorted(L.act[t]) == list(range(L.size))


class TestProductsAndMaps:
    def test_product_counts(self, z6):
        P = product(z6, z6)
        assert P.size == 36
        assert len(all_submodules(P)) == 16
        for N in all_submodules(P):
            N1, N2 = split(N)
            assert join(N1, N2, P) == N

    def test_hom(self):
        R6 = ring_make([6])
        f = hom_make(module_make(R6, [3]), module_make(R6, [6]), [(2,)])
        assert f.is_mono()
        assert f.preimage(submodule_generate(f.target, [(2,)])).is_whole()
        assert f.image(f.source.zero_submodule).is_zero()

    def test_hom_must_respect_orders(self):
        R6 = ring_make([6])
        with pytest.raises(InputError):
            hom_make(module_make(R6, [3]), module_make(R6, [6]), [(1,)])


class TestIrreducibility:
    def test_z6(self, z6):
        three = submodule_generate(z6, [(3,)])
        assert is_completely_irreducible(three)
        assert not is_completely_irreducible(z6.zero_submodule)
        assert not is_completely_irreducible(z6.whole)
        parts = ci_decomposition(z6.zero_submodule)
        assert sorted(res(p) for p in parts) == [[(0,), (2,), (4,)], [(0,), (3,)]]
        assert ci_decomposition(three) == [three]

    def test_z66_zero(self, z66):
        parts = ci_decomposition(z66.zero_submodule)
        meet = z66.full_mask
        for p in parts:
            meet &= p.mask
        assert meet == 1

    @given(small_modules())
    def test_decomposition_meets_exactly(self, M):
        cis = {L.mask for L in completely_irreducibles(M)}
        for N in all_submodules(M):
            if N.is_whole():
                with pytest.raises(InputError):
                    ci_decomposition(N)
                continue
            parts = ci_decomposition(N)
            meet = M.full_mask
            for p in parts:
                assert p.mask in cis and N <= p
                meet &= p.mask
            assert meet == N.mask

    def test_multiplication_and_comultiplication(self, z6):
        assert is_multiplication_module(z6) and is_comultiplication_module(z6)
        z2 = module_make(ring_make([2]), [2])
        assert is_multiplication_module(z2) and is_comultiplication_module(z2)
        v = module_make(ring_make([2]), [2, 2])
        res_ = is_comultiplication_module(v)
        assert not res_
        W = res_.witness["N"]
        assert colon_module(v.zero_submodule, annihilator(W)) != W
        diagonal = submodule_generate(v, [(1, 1)])
        assert annihilator(diagonal).is_zero()
        assert colon_module(v.zero_submodule, annihilator(diagonal)).is_whole()
