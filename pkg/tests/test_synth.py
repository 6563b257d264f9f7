import pytest

from aphc.errors import ConfigurationError
from aphc.synth import (
    SplitMix64, TrafficProfile, default_profile, describe_profile, gen_trace, generate,
)
from aphc.trace_io import trace_stats


def test_splitmix_reference_values():
    # first outputs for seed 0 from the published SplitMix64 reference
    rng = SplitMix64(0)
    assert [rng.next_u64() for _ in range(3)] == [
        0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F]


def test_same_seed_same_bytes():
    assert gen_trace(n_packets=2000) == gen_trace(n_packets=2000)


def test_different_seed_differs():
    p = default_profile()
    p.seed = 2
    assert gen_trace(p, 500) != gen_trace(n_packets=500)


def test_zero_packets():
    assert generate(default_profile(), 0) == ([], 0)
    with pytest.raises(ConfigurationError):
        generate(default_profile(), -1)


def test_packets_start_with_type_byte():
    kinds = {p[0] for p in gen_trace(n_packets=3000)}
    assert kinds <= {0x01, 0x02, 0x05, 0x0B, 0x22, 0x23, 0x2A, 0x2B, 0x30, 0x33, 0x40, 0x41, 0x50}


def test_default_distribution(default_synth):
    trace, text = default_synth
    s = trace_stats(trace)
    assert abs(s.fraction_at_most(10) - 0.38) <= 0.02
    assert abs(s.fraction_at_most(20) - 0.84) <= 0.02
    assert abs(s.total_bytes - (1 << 20)) <= 0.15 * (1 << 20)
    assert abs(text / s.total_bytes - 0.11) <= 0.03


def test_describe_default():
    text = describe_profile(default_profile())
    assert "target fraction <= 10 bytes: 0.38" in text
    assert "target fraction <= 20 bytes: 0.84" in text
    assert "target text byte fraction: 0.11" in text


def test_profile_text_round_trip():
    p = default_profile()
    p.stat_repeat_prob = 0.5
    p.seed = 77
    assert TrafficProfile.from_text(p.to_text()) == p


def test_default_fixture_matches_dataclass_defaults():
    assert default_profile() == TrafficProfile()


@pytest.mark.parametrize("text", [
    "mix.0-10=0.5\nmix.11-20=0.46\nmix.21-100=0.13\nmix.101-1000=0.028\nmix.1001+=0.002",
    "stat_repeat_prob=1.5",
    "bogus=1",
    "seed=abc",
    "no equals sign",
])
def test_bad_profiles(text):
    with pytest.raises(ConfigurationError):
        TrafficProfile.from_text(text)


def test_describe_rejects_bad_mix():
    p = TrafficProfile(size_mix={"0-10": 0.5, "11-20": 0.5, "21-100": 0.5,
                                 "101-1000": 0.0, "1001+": 0.0})
    with pytest.raises(ConfigurationError):
        describe_profile(p)
