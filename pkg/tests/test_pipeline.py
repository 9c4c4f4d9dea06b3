import random

import pytest

from spatialstego.codec import CryptoMap, SigmaMap
from spatialstego.errors import (
    CapacityExceeded,
    ConfigError,
    DuplicatePath,
    MacFailure,
    MessageSizeMismatch,
    SeqMismatch,
    TotalSizeMismatch,
    WrongCount,
)
from spatialstego.files import fixture_carriers
from spatialstego.fragmentation import TearPlan
from spatialstego.pipeline import (
    StegoEnvelope,
    inspect_envelope,
    prepare,
    receiver_decode,
    sender_encode,
)
from spatialstego import auth

import demo


@pytest.fixture(scope="module")
def cfg():
    return demo.session()


@pytest.fixture(scope="module")
def envelopes(cfg):
    return sender_encode(demo.PLAINTEXT, cfg, demo.plan(), filler_seed=2010)


def test_prepare_demo(cfg):
    t = prepare(demo.PLAINTEXT, cfg, demo.plan())
    assert t.bits == demo.B
    assert t.encoded == demo.E
    assert [s.header for s in t.streams] == demo.HEADERS
    assert [s.trailer for s in t.streams] == demo.TRAILERS
    assert t.templates == [0, 1, 2, 0]


def test_demo_round_trip(cfg, envelopes):
    assert [e.seq_bits for e in envelopes] == demo.SEQ_BITS
    shuffled = list(envelopes)
    random.Random(4).shuffle(shuffled)
    assert receiver_decode(shuffled, cfg) == demo.PLAINTEXT


def test_demo_inspect(cfg, envelopes):
    for env, header, size, trailer in zip(envelopes, demo.HEADERS, demo.SIZES, demo.TRAILERS):
        r = inspect_envelope(env, cfg)
        assert (r.header, r.size, r.trailer, r.mac_ok) == (header, size, trailer, True)


def test_deterministic(cfg, envelopes):
    assert sender_encode(demo.PLAINTEXT, cfg, demo.plan(), filler_seed=2010) == envelopes
    assert sender_encode(demo.PLAINTEXT, cfg, demo.plan(), filler_seed=2011) != envelopes


def test_one_byte_two_packets():
    cfg = demo.session(n_packets=2, total_message_bits=8)
    envs = sender_encode(b"Z", cfg, TearPlan([2, 2]), filler_seed=0)
    assert len(envs) == 2
    assert receiver_decode(envs[::-1], cfg) == b"Z"


def test_capacity_exceeded():
    cfg = demo.session(n_packets=2, total_message_bits=8 * 100)
    with pytest.raises(CapacityExceeded):
        sender_encode(b"x" * 100, cfg, TearPlan([200, 200]), filler_seed=0)


def test_fixed_template_policy():
    cfg = demo.session(template_policy="fixed:1")
    t = prepare(demo.PLAINTEXT, cfg, demo.plan())
    assert t.templates == [1, 1, 1, 1]
    envs = sender_encode(demo.PLAINTEXT, cfg, demo.plan(), 0)
    assert all(len(e.sequence) == len(cfg.carriers[1]) for e in envs)
    assert receiver_decode(envs, cfg) == demo.PLAINTEXT


@pytest.mark.parametrize("overrides", [
    dict(n_packets=1),
    dict(total_message_bits=0),
    dict(total_message_bits=7),
    dict(carriers=("ACGT",)),
    dict(carriers=("ACGT", "ACGT")),
    dict(mac_key=b"short"),
    dict(template_policy="fixed:3"),
    dict(template_policy="random"),
    dict(max_packet_bits=128),
    dict(n_packets=73),
])
def test_config_validation(overrides):
    with pytest.raises(ConfigError):
        demo.session(**overrides)


def test_wrong_plaintext_length(cfg):
    with pytest.raises(MessageSizeMismatch):
        sender_encode(b"short", cfg, demo.plan())


def test_mac_failure_names_packet(cfg, envelopes):
    bad = envelopes[2]
    seq = bad.sequence
    i = 100
    tampered = StegoEnvelope(bad.seq_bits, seq[:i] + ("A" if seq[i] != "A" else "C") + seq[i + 1:], bad.mac)
    with pytest.raises(MacFailure) as info:
        receiver_decode([envelopes[0], envelopes[1], tampered, envelopes[3]], cfg)
    assert info.value.seq_bits == bad.seq_bits


def test_wrong_count(cfg, envelopes):
    with pytest.raises(WrongCount):
        receiver_decode(envelopes[:3], cfg)


def test_seq_mismatch(cfg, envelopes):
    # a correctly MACed envelope whose header claims another packet number
    env = envelopes[0]
    relabeled = StegoEnvelope("001001", env.sequence, auth.compute_mac(cfg.mac_key, "001001", env.sequence))
    with pytest.raises(SeqMismatch):
        receiver_decode([relabeled, *envelopes[1:]], cfg)


def test_duplicate_packet_rejected(cfg, envelopes):
    with pytest.raises(DuplicatePath):
        receiver_decode([envelopes[0], envelopes[0], envelopes[2], envelopes[3]], cfg)


def test_total_size_mismatch():
    # a sender using a different message size but the same keys
    cfg = demo.session()
    other = demo.session(total_message_bits=152)
    envs = sender_encode(demo.PLAINTEXT + b"!", other, TearPlan([24, [8, [9, 35]]]), 0)
    with pytest.raises(TotalSizeMismatch):
        receiver_decode(envs, cfg)


def test_round_trip_all_sigmas_and_crypto():
    rng = random.Random(99)
    carriers = fixture_carriers()
    for sigma in SigmaMap.all_maps():
        crypto = rng.choice([CryptoMap.complement(), CryptoMap.xor(rng.randbytes(3))])
        cfg = demo.session(sigma=sigma, crypto=crypto, carriers=carriers)
        envs = sender_encode(demo.PLAINTEXT, cfg, demo.plan(), rng.random())
        rng.shuffle(envs)
        assert receiver_decode(envs, cfg) == demo.PLAINTEXT
