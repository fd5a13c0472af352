import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from colexgraph.bitvec import BitVector, PackedArray, bisect_left_packed, width_for


class TestBitVector:
    @given(st.lists(st.integers(0, 1), max_size=300))
    @settings(max_examples=80)
    def test_rank_matches_prefix_sums(self, bits):
        bv = BitVector(bits)
        assert len(bv) == len(bits)
        for i in range(len(bits) + 1):
            assert bv.rank1(i) == sum(bits[:i])

    @given(st.lists(st.integers(0, 1), min_size=1, max_size=300))
    @settings(max_examples=80)
    def test_select_inverts_rank(self, bits):
        bv = BitVector(bits)
        positions = [i for i, b in enumerate(bits) if b]
        assert bv.ones == len(positions)
        for k, pos in enumerate(positions):
            assert bv.select1(k) == pos
            assert bv.rank1(pos) == k

    def test_bounds(self):
        bv = BitVector([1, 0, 1])
        with pytest.raises(IndexError):
            bv.rank1(4)
        with pytest.raises(IndexError):
            bv.select1(2)
        with pytest.raises(IndexError):
            bv[3]

    def test_payload_counts_raw_bits_only(self):
        bv = BitVector([0] * 130)
        assert bv.payload_bits == 130
        assert bv.aux_bits > 0


class TestPackedArray:
    @given(st.integers(1, 17), st.lists(st.integers(0, 2**17 - 1), max_size=120))
    @settings(max_examples=80)
    def test_roundtrip_at_fitting_width(self, extra, values):
        width = max([width_for(max(values))] if values else [1]) + extra % 3
        width = min(width, 64)
        pa = PackedArray(width, values)
        assert list(pa) == values
        again = PackedArray.from_words(width, len(values), pa.to_bytes())
        assert list(again) == values
        assert pa.payload_bits == width * len(values)

    def test_rejects_oversized_values(self):
        with pytest.raises(ValueError):
            PackedArray(2, [4])

    def test_word_boundary_crossing(self):
        values = [(1 << 13) - 1] * 40  # 13-bit values straddle 64-bit words
        pa = PackedArray(13, values)
        assert [pa.get(i) for i in range(40)] == values

    @given(st.lists(st.integers(0, 50), min_size=1, max_size=60), st.integers(0, 55))
    @settings(max_examples=60)
    def test_bisect_matches_list_bisect(self, values, needle):
        from bisect import bisect_left
        values.sort()
        pa = PackedArray(width_for(max(values)), values)
        assert bisect_left_packed(pa, needle, 0, len(values)) == bisect_left(values, needle)


def test_width_for():
    assert width_for(0) == 1
    assert width_for(1) == 1
    assert width_for(2) == 2
    assert width_for(255) == 8
    assert width_for(256) == 9
