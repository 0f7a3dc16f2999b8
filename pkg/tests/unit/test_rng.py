from stabsim.rng import CounterRng


def test_bits_depend_only_on_seed_and_ordinal():
    a = CounterRng(42)
    b = CounterRng(42)
    assert [a.bit(k) for k in range(64)] == [b.bit(k) for k in range(64)]
    assert a.bit(17) == b.bit(17)
    assert [a.bit(k) for k in (15, 10, 12)] == [b.bit(k) for k in (15, 10, 12)]


def test_bits_are_balanced():
    bits = [CounterRng(7).bit(k) for k in range(2000)]
    assert set(bits) == {0, 1}
    assert 800 < sum(bits) < 1200


def test_derive_is_seed_xor_shot():
    base = CounterRng(0b1010)
    assert base.derive(0).seed == base.seed
    assert base.derive(0b0110).seed == 0b1100
    assert [CounterRng(3).bit(k) for k in range(32)] != [CounterRng(4).bit(k) for k in range(32)]
