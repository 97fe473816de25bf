import hashlib
import json

import numpy as np
import pytest

from softmmse.constellations import by_name
from softmmse.errors import BadSpecError
from softmmse.linalg import save_matrix
from softmmse.simulate import (
    ChannelSpec,
    GeneratorSpec,
    SimConfig,
    TrialReport,
    _point_setup,
    _run_chunk,
    config_from_dict,
    gen_channel,
    gen_generator,
    histogram_estimates,
    load_config,
    noise_sigma2,
    propriety_ratio,
    run_trials,
    write_csv_tables,
    write_report_json,
)

# regression pin for the seeded frequency-selective channel generator
CHANNEL_DIAG_SHA256 = "25e423b04b2d97351040ff6aa8e19ae2068ba0fe433a5a8558768904d959db75"


def small_config(**over):
    base = dict(
        constellation="8qam-rect",
        channel=ChannelSpec(kind="awgn-identity", m=6),
        generator=GeneratorSpec(kind="random-semi-unitary", m=6, n=4, seed=5),
        snr_db=(6.0,),
        trials=240,
        seed=11,
    )
    base.update(over)
    return SimConfig(**base)


def test_channel_golden_hash():
    H = gen_channel(ChannelSpec(kind="frequency-selective", m=52, taps=16, seed=42))
    digest = hashlib.sha256(np.ascontiguousarray(np.diag(H)).tobytes()).hexdigest()
    assert digest == CHANNEL_DIAG_SHA256
    H2 = gen_channel(ChannelSpec(kind="frequency-selective", m=52, taps=16, seed=42))
    assert np.array_equal(H, H2)
    H3 = gen_channel(ChannelSpec(kind="frequency-selective", m=52, taps=16, seed=43))
    assert not np.array_equal(H, H3)


def test_single_tap_channel_is_flat():
    H = gen_channel(ChannelSpec(kind="frequency-selective", m=8, taps=1, seed=3))
    d = np.diag(H)
    assert np.allclose(d, d[0])
    assert np.max(np.abs(H - np.diag(d))) == 0


def test_awgn_and_identity_kinds():
    assert np.array_equal(gen_channel(ChannelSpec(kind="awgn-identity", m=4)), np.eye(4))
    assert np.array_equal(gen_generator(GeneratorSpec(kind="identity", m=3, n=3)), np.eye(3))
    with pytest.raises(BadSpecError):
        gen_generator(GeneratorSpec(kind="identity", m=3, n=2))
    with pytest.raises(BadSpecError):
        gen_channel(ChannelSpec(kind="awgn-identity"))
    with pytest.raises(BadSpecError):
        gen_channel(ChannelSpec(kind="warp", m=4))


def test_random_semi_unitary_generator():
    G = gen_generator(GeneratorSpec(kind="random-semi-unitary", m=52, n=36, seed=2024))
    assert G.shape == (52, 36)
    assert np.max(np.abs(G.conj().T @ G - np.eye(36))) < 1e-10
    G2 = gen_generator(GeneratorSpec(kind="random-semi-unitary", m=52, n=36, seed=2024))
    assert np.array_equal(G, G2)


def test_from_file_roundtrips(tmp_path):
    hp = tmp_path / "h.json"
    save_matrix(hp, np.diag([1.0 + 0j, 2.0j, -0.5]))
    H = gen_channel(ChannelSpec(kind="from-file", m=3, path=str(hp)))
    assert np.allclose(np.diag(H), [1.0, 2.0j, -0.5])

    gp = tmp_path / "g.json"
    G0, _ = np.linalg.qr(np.random.default_rng(0).standard_normal((4, 2)))
    save_matrix(gp, G0)
    G = gen_generator(GeneratorSpec(kind="from-file", m=4, n=2, path=str(gp)))
    assert np.allclose(G, G0)

    save_matrix(hp, np.ones((3, 3)))
    with pytest.raises(BadSpecError):
        gen_channel(ChannelSpec(kind="from-file", path=str(hp)))  # not diagonal
    with pytest.raises(BadSpecError):
        gen_generator(GeneratorSpec(kind="from-file", m=5, n=2, path=str(gp)))
    with pytest.raises(BadSpecError):
        gen_generator(GeneratorSpec(kind="from-file"))


def test_noise_sigma2_frozen_value():
    # 52x36 semi-unitary, unit-variance 3-bit alphabet:
    # Eb = 36 * 1 / (36 * 3) = 1/3, so 10 dB gives sigma^2 = 1/30
    G = gen_generator(GeneratorSpec(kind="random-semi-unitary", m=52, n=36, seed=1))
    c = by_name("8qam-rect")
    assert noise_sigma2(G, c, 10.0) == pytest.approx(1.0 / 30.0, rel=1e-9)
    assert noise_sigma2(G, c, 0.0) == pytest.approx(1.0 / 3.0, rel=1e-9)


def test_propriety_ratio_values():
    assert propriety_ratio(np.array([[1.0, 5e-4], [5e-4, 1.0]])) == pytest.approx(5e-4)
    assert propriety_ratio(np.array([[2.0, 0.0], [0.0, 1.0]])) == 0.0
    with pytest.raises(BadSpecError):
        propriety_ratio(np.eye(3))


def test_run_is_deterministic():
    cfg = small_config()
    r1 = run_trials(cfg)
    r2 = run_trials(cfg)
    assert json.dumps(r1.points) == json.dumps(r2.points)


def test_jobs_split_is_equivalent():
    cfg = small_config(trials=2100)  # forces more than one chunk
    r1 = run_trials(cfg, jobs=1)
    r2 = run_trials(cfg, jobs=3)
    assert json.dumps(r1.points) == json.dumps(r2.points)


def test_seed_changes_results():
    r1 = run_trials(small_config())
    r2 = run_trials(small_config(seed=12))
    assert json.dumps(r1.points) != json.dumps(r2.points)


def test_ber_identity_within_pairs():
    pt = run_trials(small_config(trials=500)).points[0]
    banks = pt["banks"]
    assert banks["lmmse"]["bit_errors"] == banks["cwcu-lmmse"]["bit_errors"]
    assert banks["wlmmse"]["bit_errors"] == banks["cwcu-wlmmse"]["bit_errors"]
    assert banks["lmmse"]["symbol_errors"] == banks["cwcu-lmmse"]["symbol_errors"]
    # improper alphabet: the widely linear pair should not lose to the
    # linear pair
    assert banks["wlmmse"]["bit_errors"] <= banks["lmmse"]["bit_errors"]


def test_noiseless_limit():
    pt = run_trials(small_config(snr_db=(60.0,), trials=60)).points[0]
    for b in pt["banks"].values():
        assert b["bit_errors"] == 0
        assert b["bmse_empirical_avg"] < 1e-5


def test_empirical_bmse_tracks_closed_form():
    pt = run_trials(small_config(trials=3000)).points[0]
    for b in pt["banks"].values():
        assert b["bmse_empirical_avg"] == pytest.approx(b["bmse_closed_avg"], rel=0.1)


def test_merge_is_order_independent():
    cfg = small_config(trials=90, histogram_bins=9)
    setup = _point_setup(cfg, 0)
    parts = [_run_chunk(setup, cfg, a, b) for a, b in ((0, 30), (30, 60), (60, 90))]
    whole = _run_chunk(setup, cfg, 0, 90)
    merged_fwd = parts[0].merge(parts[1]).merge(parts[2])
    merged_rev = parts[2].merge(parts[0].merge(parts[1]))
    for merged in (merged_fwd, merged_rev):
        assert merged.n_trials == whole.n_trials
        assert merged.bit_errors == whole.bit_errors
        assert merged.symbol_errors == whole.symbol_errors
        for bank in whole.sqerr:
            assert np.allclose(merged.sqerr[bank], whole.sqerr[bank], rtol=1e-12)
            assert np.array_equal(merged.hist[bank]["counts"], whole.hist[bank]["counts"])
        assert merged.llr_diff_max == whole.llr_diff_max


def test_empty_run():
    rep = run_trials(small_config(trials=0))
    pt = rep.points[0]
    assert pt["trials"] == 0
    for b in pt["banks"].values():
        assert b["ber"] == 0.0 and b["bit_errors"] == 0


def test_frequency_selective_channel_varies_per_point():
    cfg = small_config(
        channel=ChannelSpec(kind="frequency-selective", m=6, taps=4, seed=9),
        generator=GeneratorSpec(kind="identity", m=6, n=6),
        snr_db=(8.0, 8.0),
        trials=10,
    )
    rep = run_trials(cfg)
    h0 = rep.points[0]["channel"]["diag_sha256"]
    h1 = rep.points[1]["channel"]["diag_sha256"]
    assert h0 != h1
    rep2 = run_trials(cfg)
    assert rep2.points[0]["channel"]["diag_sha256"] == h0


def test_histogram_estimates_moments():
    cfg = small_config(
        channel=ChannelSpec(kind="awgn-identity", m=6),
        generator=GeneratorSpec(kind="random-semi-unitary", m=6, n=4, seed=5),
        snr_db=(10.0,),
        trials=2000,
    )
    out = histogram_estimates(cfg, bins=21)
    banks = out[0]["banks"]
    c = by_name("8qam-rect")
    blk = banks["cwcu-wlmmse"]
    assert blk["counts"].shape == (8, 21, 21)
    assert blk["edges"].shape == (22,)
    assert int(blk["count"].sum()) == 2000 * 4
    # conditional unbiasedness: per-component sample means sit on the symbols
    for i in range(4):
        for q in range(8):
            n_iq = blk["count"][i, q]
            se = np.sqrt(blk["second_moment"][i, q] / max(n_iq, 1))
            assert abs(blk["mean"][i, q] - c.symbols[q]) < 5 * se
    # the plain WLMMSE means are visibly shrunk instead
    shrunk = banks["wlmmse"]["mean"]
    bias = np.abs(shrunk - c.symbols[None, :]).mean()
    assert bias > 0.01


def test_histogram_requires_bins():
    with pytest.raises(BadSpecError):
        histogram_estimates(small_config(), bins=0)


def test_channel_generator_size_mismatch():
    cfg = small_config(channel=ChannelSpec(kind="awgn-identity", m=5))
    with pytest.raises(BadSpecError):
        run_trials(cfg)


def test_config_parsing(tmp_path):
    raw = {
        "constellation": "qpsk",
        "channel": {"kind": "awgn-identity", "m": 4},
        "generator": {"kind": "identity", "m": 4, "n": 4},
        "snr_db": [3.0],
        "trials": 5,
        "seed": 1,
    }
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps(raw))
    cfg = load_config(p)
    assert cfg.constellation == "qpsk"
    assert cfg.snr_db == (3.0,)
    assert cfg.echo == raw

    for breakage in (
        lambda d: d.pop("seed"),
        lambda d: d.update(seed="one"),
        lambda d: d.update(snr_db=[]),
        lambda d: d.update(extra=1),
        lambda d: d.update(trials=-3),
        lambda d: d["channel"].update(wobble=2),
        lambda d: d["generator"].pop("kind"),
        lambda d: d.update(histogram_bins=-1),
    ):
        bad = json.loads(json.dumps(raw))
        breakage(bad)
        with pytest.raises(BadSpecError):
            config_from_dict(bad)
    p.write_text("{nope")
    with pytest.raises(BadSpecError):
        load_config(p)


def test_config_relative_paths_resolve(tmp_path):
    save_matrix(tmp_path / "chan.json", np.diag([1.0 + 0j, 1.0]))
    raw = {
        "constellation": "qpsk",
        "channel": {"kind": "from-file", "path": "chan.json"},
        "generator": {"kind": "identity", "m": 2, "n": 2},
        "snr_db": [3.0],
        "trials": 4,
        "seed": 1,
    }
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps(raw))
    rep = run_trials(load_config(p))
    assert rep.points[0]["trials"] == 4


def test_report_writers(tmp_path):
    rep = run_trials(small_config(trials=64, histogram_bins=7))
    jp = tmp_path / "report.json"
    write_report_json(rep, jp)
    loaded = json.loads(jp.read_text())
    assert loaded["points"][0]["banks"]["lmmse"]["bits"] == 64 * 4 * 3
    assert "timestamp" in loaded["meta"]

    paths = write_csv_tables(rep, tmp_path)
    names = sorted(p.split("/")[-1] for p in paths)
    assert names == [
        "ber.csv",
        "bmse.csv",
        "conditional_means.csv",
        "histogram.csv",
        "llr.csv",
        "propriety.csv",
    ]
    ber = (tmp_path / "ber.csv").read_text().splitlines()
    assert ber[0].startswith("#")
    assert ber[1].split(",")[0] == "snr_db"
    assert len(ber) == 2 + 4  # one row per bank at the single point
