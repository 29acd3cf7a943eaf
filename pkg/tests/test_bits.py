import random

import pytest

from colog.bits import (
    BitsError,
    InfBits,
    defusion,
    fuse_inf,
    fusions,
    is_prefix,
    ones,
    shortlex,
    zeros,
)


def brute_shortlex(n):
    """First n bitstrings by length then binary value, starting at epsilon."""
    out = [""]
    length = 1
    while len(out) < n:
        out.extend(format(v, "b").zfill(length) for v in range(2 ** length))
        length += 1
    return out[:n]


class TestInfBits:
    def test_canonical_form(self):
        assert zeros("10") == InfBits("1000000", "0")
        assert ones("01") == InfBits("0111", "1")
        assert zeros("") == zeros("0000")

    def test_bits_and_take(self):
        x = zeros("101")
        assert [x.bit(i) for i in range(1, 7)] == ["1", "0", "1", "0", "0", "0"]
        assert ones("").take(4) == "1111"

    def test_essential_finiteness(self):
        assert zeros("111").essentially_finite
        assert not ones("0").essentially_finite
        assert zeros("1101").one_count() == 3
        with pytest.raises(BitsError):
            ones("").one_count()

    def test_textual_round_trip(self):
        for spec in ["e:0*", "11:1*", "101:0*"]:
            x = InfBits.parse(spec)
            assert InfBits.parse(str(x)) == x
        with pytest.raises(BitsError):
            InfBits.parse("12:0*")
        with pytest.raises(BitsError):
            InfBits.parse("101")


class TestIsPrefix:
    def test_empty_prefix(self):
        assert is_prefix("", "10")

    def test_tail_expansion(self):
        assert is_prefix("111", ones("11"))

    def test_expanded_mismatch(self):
        # 1110000... disagrees with 10 at the second bit
        assert not is_prefix("10", zeros("111"))

    def test_finite_cases(self):
        assert is_prefix("10", "101")
        assert not is_prefix("101", "10")


class TestShortlex:
    def test_first_element(self):
        assert shortlex(1) == ""

    def test_against_enumeration(self):
        assert [shortlex(i) for i in range(1, 64)] == brute_shortlex(63)
        assert shortlex(4) == "00"
        assert shortlex(7) == "11"

    def test_rejects_zero(self):
        with pytest.raises(BitsError):
            shortlex(0)

    def test_is_a_bijection_on_lengths(self):
        # the first 2^(k+1) - 1 values are exactly the strings of length <= k
        for k in range(5):
            seen = {shortlex(i) for i in range(1, 2 ** (k + 1))}
            assert seen == {
                format(v, "b").zfill(length)[:length] if length else ""
                for length in range(k + 1)
                for v in range(2 ** length)
            }


class TestFusions:
    def test_unique_fusion(self):
        assert fusions(["001", "110"]) == ("010110",)

    def test_two_fusions(self):
        assert fusions(["01", "110"]) == ("011100", "011110")

    def test_three_way(self):
        assert fusions(["000", "11", "001"]) == ("010010001", "010010011")

    def test_all_empty(self):
        assert fusions(["", ""]) == ("",)

    def test_rejects_empty_family(self):
        with pytest.raises(BitsError):
            fusions([])

    def test_shortest_length_law(self):
        rng = random.Random(7)
        for _ in range(200):
            n = rng.randint(1, 3)
            xs = [
                "".join(rng.choice("01") for _ in range(rng.randint(0, 5)))
                for _ in range(n)
            ]
            want = max(n * len(x) - n + i for i, x in enumerate(xs, start=1))
            for z in fusions(xs):
                assert len(z) == want

    def test_defusion_covers_inputs(self):
        rng = random.Random(8)
        for _ in range(200):
            n = rng.randint(1, 3)
            xs = [
                "".join(rng.choice("01") for _ in range(rng.randint(0, 5)))
                for _ in range(n)
            ]
            for z in fusions(xs):
                parts = defusion(z, n)
                for x, part in zip(xs, parts):
                    assert part.startswith(x)


class TestDefusion:
    def test_pair(self):
        assert defusion("100110101", 2) == ("10111", "0100")

    def test_four_way(self):
        assert defusion("00110101101001111", 4) == ("00101", "0101", "1011", "1101")

    def test_all_zero_infinite(self):
        assert defusion(zeros(""), 3) == (zeros(""), zeros(""), zeros(""))

    def test_infinite_keeps_tail_kind(self):
        parts = defusion(ones("0011"), 2)
        assert all(p.tail == "1" for p in parts)


class TestFuseInf:
    def test_all_zero(self):
        assert fuse_inf([zeros(""), zeros("")]) == zeros("")

    def test_positional_law_on_prefix(self):
        z = fuse_inf([zeros("1"), zeros("1")])
        assert z.take(8) == "11000000"

    def test_rejects_ones_tail(self):
        with pytest.raises(BitsError):
            fuse_inf([ones(""), zeros("")])

    def test_round_trip_random(self):
        rng = random.Random(9)
        for _ in range(1000):
            n = rng.randint(1, 4)
            xs = [
                zeros("".join(rng.choice("01") for _ in range(rng.randint(0, 6))))
                for _ in range(n)
            ]
            assert defusion(fuse_inf(xs), n) == tuple(xs)
