"""
Тесты перечисления FNHT/MFT и инъекций
"""
import pytest

from parity_complement.models.fnht import (
    FNHT, MFT, ROOT, FNHTError, Marker, MarkerKind,
    is_full_fnht, is_full_marking, validate_fnht, validate_mft,
)
from parity_complement.services.fnht_service import (
    CapExceededError, FNHTService, canonical_key, fnht_service,
    inject_nonfull_fnht, inject_nonfull_mft,
)
from tests.oracles import brute_force_fnhts


@pytest.mark.parametrize("max_priority, trees, mfts", [(2, 1, 1), (3, 2, 2)])
def test_golden_counts_single_state(max_priority, trees, mfts):
    assert len(fnht_service.enumerate_fnhts(0b1, max_priority)) == trees
    assert len(fnht_service.enumerate_mfts(0b1, max_priority)) == mfts
    assert len(fnht_service.enumerate_fnhts(0b1, max_priority, full_only=True)) == trees


def test_single_state_trees(t0, root_leaf, m0, root_leaf_mft):
    assert fnht_service.enumerate_fnhts(0b1, 2) == [t0]
    assert fnht_service.enumerate_fnhts(0b1, 3) == [root_leaf, t0]
    assert set(fnht_service.enumerate_mfts(0b1, 3)) == {m0, root_leaf_mft}


@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("max_priority", [2, 3, 4])
def test_enumeration_matches_brute_force(n, max_priority):
    universe = (1 << n) - 1
    produced = fnht_service.enumerate_fnhts(universe, max_priority)
    expected = brute_force_fnhts(universe, max_priority)
    keys = [canonical_key(t) for t in produced]
    assert len(set(keys)) == len(keys)
    assert set(keys) == {canonical_key(t) for t in expected}
    assert keys == sorted(keys)
    for t in produced:
        assert validate_fnht(t, universe, max_priority) == []


@pytest.mark.parametrize("n, max_priority", [(1, 4), (2, 3), (2, 4)])
def test_mft_enumeration_is_valid_and_unique(n, max_priority):
    universe = (1 << n) - 1
    mfts = fnht_service.enumerate_mfts(universe, max_priority)
    assert len(set(mfts)) == len(mfts)
    for m in mfts:
        assert validate_mft(m, universe, max_priority) == []


def test_enumeration_rejects_bad_arguments():
    with pytest.raises(FNHTError):
        fnht_service.enumerate_fnhts(0b1, 1)
    with pytest.raises(FNHTError):
        fnht_service.enumerate_fnhts(0, 2)


def test_enumeration_cap_is_explicit():
    service = FNHTService()
    with pytest.raises(CapExceededError) as error:
        service.enumerate_fnhts(0b11, 2, cap=3)
    assert error.value.cap == 3


def test_inject_nonfull_fnht_example(t0):
    t = inject_nonfull_fnht(t0, 0b11)
    assert t.paths == ((), (0,), (1,))
    assert t.states[t.index[ROOT]] == 0b11
    assert (t.states[t.index[(1,)]], t.pure[t.index[(1,)]]) == (0b10, 0b10)
    assert validate_fnht(t, 0b11, 2) == []


def test_inject_nonfull_fnht_root_leaf():
    t = FNHT.from_labels({(): (0b01, 0, 0b01)}, 2)
    injected = inject_nonfull_fnht(t, 0b11)
    assert injected.labels() == {(): (0b11, 0, 0b01), (0,): (0b10, 0b10, 0)}
    assert validate_fnht(injected, 0b11, 3) == []


def test_inject_full_fnht_fails(t0):
    with pytest.raises(FNHTError, match="already full"):
        inject_nonfull_fnht(t0, 0b1)


def test_inject_nonfull_mft_examples():
    t = FNHT.from_labels({(): (0b11, 0, 0), (0,): (0b11, 0b11, 0)}, 2)
    result = inject_nonfull_mft(MFT(t, Marker((0,), MarkerKind.PURE), 0b01))
    assert result.base.labels() == {(): (0b11, 0, 0), (0,): (0b10, 0b10, 0), (1,): (0b01, 0b01, 0)}
    assert result.marker == Marker((0,), MarkerKind.PURE)
    assert result.marking == 0b10
    assert is_full_marking(result)

    root_leaf = FNHT.from_labels({(): (0b11, 0, 0b11)}, 2)
    corner = inject_nonfull_mft(MFT(root_leaf, Marker(ROOT, MarkerKind.RECURRENT), 0b01))
    assert corner.base.labels() == {(): (0b11, 0, 0b01), (0,): (0b10, 0b10, 0)}
    assert corner.marker == Marker(ROOT, MarkerKind.RECURRENT)
    assert corner.marking == 0b01
    assert validate_mft(corner, 0b11, 3) == []


def test_inject_full_marking_fails(m0):
    with pytest.raises(FNHTError, match="already full"):
        inject_nonfull_mft(m0)


def _check_injections(n, max_priority):
    universe = (1 << n) - 1
    trees = fnht_service.enumerate_fnhts(universe, max_priority)
    images = set()
    nonfull = 0
    for t in trees:
        if is_full_fnht(t, universe):
            continue
        nonfull += 1
        image = inject_nonfull_fnht(t, universe)
        assert validate_fnht(image, universe, max_priority) == []
        assert is_full_fnht(image, universe)
        images.add(image)
    assert len(images) == nonfull
    assert nonfull <= len(trees) - nonfull

    mfts = fnht_service.enumerate_mfts(universe, max_priority)
    marked_images = set()
    partial = 0
    for m in mfts:
        if is_full_marking(m):
            continue
        partial += 1
        image = inject_nonfull_mft(m)
        assert validate_mft(image, universe, max_priority) == []
        assert is_full_marking(image)
        marked_images.add(image)
    assert len(marked_images) == partial
    assert partial <= len(mfts) - partial


@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("max_priority", [2, 3, 4])
def test_injections_are_total_and_injective(n, max_priority):
    _check_injections(n, max_priority)


@pytest.mark.slow
@pytest.mark.parametrize("max_priority", [2, 3, 4])
def test_injections_three_states(max_priority):
    _check_injections(3, max_priority)
