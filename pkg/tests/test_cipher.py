import random

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from snow3g_lab.cipher import (
    KeyMaterial,
    Snow3G,
    initialize,
    load_kat,
    parse_kat,
    words_to_bytes,
)
from snow3g_lab.gf import BackendKind, MulBackend
from snow3g_lab.lfsr import Layout

TABLE = MulBackend.table()
RECURSIVE = MulBackend.recursive()
SET1 = KeyMaterial.from_hex("2BD6459F82C5B300952C49104881FF48", "EA024714AD5C4D84DF1F9B251C0BF45F")


def backends():
    return [TABLE, RECURSIVE]


def test_kat_fixture_loads():
    vectors = load_kat()
    assert len(vectors) == 3
    assert vectors[0].keystream == (0xABEE9704, 0x7AC31373)


@pytest.mark.parametrize("layout", list(Layout))
@pytest.mark.parametrize("backend", backends(), ids=["table", "recursive"])
def test_known_answers(layout, backend):
    for vec in load_kat():
        core = initialize(vec.key_material, layout, backend)
        assert tuple(core.generate_keystream(len(vec.keystream))) == vec.keystream


def test_reference_oracle_reproduces_known_answers():
    for vec in load_kat():
        ref = oracles.ReferenceSnow3G(bytes.fromhex(vec.key), bytes.fromhex(vec.iv))
        assert tuple(ref.keystream(len(vec.keystream))) == vec.keystream


def test_matches_reference_over_long_stream():
    key = bytes(range(16))
    iv = bytes(range(16, 32))
    ref = oracles.ReferenceSnow3G(key, iv).keystream(2000)
    core = initialize(KeyMaterial.from_bytes(key, iv), Layout.SLIDING_WINDOW, TABLE)
    assert core.generate_keystream(2000) == ref


def test_lfsr_fill_schedule():
    km = KeyMaterial((1, 2, 3, 4), (0x10, 0x20, 0x30, 0x40))
    n = 0xFFFFFFFF
    fill = km.lfsr_fill()
    assert fill[15] == 4 ^ 0x10
    assert fill[12] == 1 ^ 0x20
    assert fill[10] == 3 ^ n ^ 0x30
    assert fill[9] == 2 ^ n ^ 0x40
    assert fill[:4] == [1 ^ n, 2 ^ n, 3 ^ n, 4 ^ n]
    assert fill[4:8] == [1, 2, 3, 4]


def test_initialization_is_deterministic_and_configuration_independent():
    states = []
    for layout in Layout:
        for backend in backends():
            core = initialize(SET1, layout, backend)
            assert core.ready and core.words_emitted == 0
            states.append(core.state())
    assert all(s == states[0] for s in states)


def test_uninitialized_core_refuses():
    core = Snow3G(Layout.TRADITIONAL, TABLE)
    with pytest.raises(RuntimeError):
        core.generate_keystream(1)


def test_zero_words_leaves_state():
    core = initialize(SET1)
    before = core.state()
    assert core.generate_keystream(0) == []
    assert core.state() == before
    with pytest.raises(ValueError):
        core.generate_keystream(-1)


@given(st.lists(st.integers(0, 40), max_size=8))
@settings(max_examples=30, deadline=None)
def test_stream_splitting(parts):
    whole = initialize(SET1).generate_keystream(sum(parts))
    core = initialize(SET1)
    pieces = []
    for n in parts:
        pieces.extend(core.generate_keystream(n))
    assert pieces == whole
    assert core.words_emitted == sum(parts)


def test_xor_stream_examples():
    assert initialize(SET1).xor_stream(b"") == b""
    core = initialize(SET1)
    out = core.xor_stream(b"\x00" * 5)
    assert core.words_emitted == 2
    assert out == words_to_bytes([0xABEE9704, 0x7AC31373])[:5]


@given(st.binary(max_size=300))
@settings(max_examples=50, deadline=None)
def test_xor_round_trip(data):
    enc = initialize(SET1).xor_stream(data)
    assert len(enc) == len(data)
    assert initialize(SET1).xor_stream(enc) == data


def test_chunked_xor_matches_one_shot():
    rng = random.Random(8)
    data = rng.randbytes(1000)
    core = initialize(SET1)
    chunked = b"".join(core.xor_stream(data[i:i + 64]) for i in range(0, 1000, 64))
    assert chunked == initialize(SET1).xor_stream(data)


def test_cross_configuration_keystreams():
    rng = random.Random(77)
    for _ in range(3):
        km = KeyMaterial.from_bytes(rng.randbytes(16), rng.randbytes(16))
        ref = initialize(km, Layout.TRADITIONAL, RECURSIVE).generate_keystream(64)
        for layout in Layout:
            assert initialize(km, layout, TABLE).generate_keystream(64) == ref
        assert initialize(km, Layout.CIRCULAR_BUFFER, TABLE, general_modulo=True).generate_keystream(64) == ref
        assert initialize(km, Layout.SLIDING_WINDOW, TABLE, window=33).generate_keystream(64) == ref
        assert initialize(km, Layout.HARDCODE, TABLE, sbox_tables=True).generate_keystream(64) == ref


@pytest.mark.parametrize("key, iv, message", [
    ("00" * 15, "00" * 16, "32 hex"),
    ("zz" * 16, "00" * 16, "not valid hex"),
])
def test_key_material_validation(key, iv, message):
    with pytest.raises(ValueError, match=message):
        KeyMaterial.from_hex(key, iv)


def test_key_material_words_checked():
    with pytest.raises(ValueError):
        KeyMaterial((1, 2, 3), (1, 2, 3, 4))
    with pytest.raises(ValueError):
        KeyMaterial((1, 2, 3, 1 << 32), (1, 2, 3, 4))


def test_hex_is_case_insensitive():
    assert KeyMaterial.from_hex("2bd6459f82c5b300952c49104881ff48", "ea024714ad5c4d84df1f9b251c0bf45f") == SET1


def test_parse_kat_format():
    text = "# comment\n\n" + "00" * 16 + " " + "11" * 16 + " deadBEEF 00000001\n"
    (rec,) = parse_kat(text)
    assert rec.keystream == (0xDEADBEEF, 1)
    with pytest.raises(ValueError, match="line 1"):
        parse_kat("00" * 16 + " " + "11" * 16)
    with pytest.raises(ValueError, match="8 hex"):
        parse_kat("00" * 16 + " " + "11" * 16 + " ABC")
