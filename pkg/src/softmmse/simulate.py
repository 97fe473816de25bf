"""Seeded Monte Carlo link simulation over the four estimator banks.

A run sweeps Eb/N0 points. At each point the channel realization is drawn
(frequency-selective channels get a fresh realization per point, derived
from the channel seed and the point index), the four banks and their
per-component conditional laws are built once, and then independent trials
stream symbol vectors through them. Every trial's randomness comes from its
own generator seeded by (master seed, point index, trial index), so any
split of the trial range across workers produces bit-identical results.

Noise calibration: Cnn = sigma^2 I with
sigma^2 = (||G||_F^2 variance / (n k)) / 10^(EbN0_dB / 10),
i.e. Eb is the average transmitted energy per information bit through the
generator matrix. The convention is echoed in every report.
"""
from __future__ import annotations

import hashlib
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from functools import reduce

import numpy as np

from .constellations import Constellation, bit_sets, by_name
from .errors import BadSpecError, DegenerateComponentError
from .linalg import load_matrix
from .linear import bmse, cwcu_lmmse, lmmse
from .llr import augmented, build_law_linear, build_law_widely, llr_general, llr_proper
from .model import augment, build_model
from .widely import bmse_widely, cwcu_wlmmse, wlmmse

__all__ = [
    "ChannelSpec",
    "GeneratorSpec",
    "SimConfig",
    "TrialReport",
    "RunReport",
    "gen_channel",
    "gen_generator",
    "noise_sigma2",
    "propriety_ratio",
    "random_linear_model",
    "run_trials",
    "histogram_estimates",
    "load_config",
    "write_report_json",
    "write_csv_tables",
]

BANKS = ("lmmse", "cwcu-lmmse", "wlmmse", "cwcu-wlmmse")
PAIRS = {"linear": ("lmmse", "cwcu-lmmse"), "widely": ("wlmmse", "cwcu-wlmmse")}

_CHUNK = 1024


@dataclass(frozen=True)
class ChannelSpec:
    """Channel description. kind: awgn-identity | frequency-selective | from-file."""

    kind: str
    m: int = 0
    taps: int = 16
    decay_db_per_tap: float = 3.0
    seed: object = 0
    path: str | None = None


@dataclass(frozen=True)
class GeneratorSpec:
    """Generator matrix description. kind: identity | random-semi-unitary | from-file."""

    kind: str
    m: int = 0
    n: int = 0
    seed: object = 0
    path: str | None = None


@dataclass(frozen=True)
class SimConfig:
    constellation: str
    channel: ChannelSpec
    generator: GeneratorSpec
    snr_db: tuple
    trials: int
    seed: int
    histogram_bins: int = 0
    histogram_range: float = 2.5
    output_dir: str = "."
    echo: dict = field(default_factory=dict, repr=False)


@dataclass
class TrialReport:
    """Aggregated metrics of one or more trials; merge() is commutative."""

    n_trials: int
    bit_errors: dict
    symbol_errors: dict
    sqerr: dict
    llr_diff_max: dict
    llr_diff_sum: dict
    llr_diff_count: dict
    hist: dict | None = None

    @staticmethod
    def empty(n: int, hist_template=None) -> "TrialReport":
        return TrialReport(
            n_trials=0,
            bit_errors={b: 0 for b in BANKS},
            symbol_errors={b: 0 for b in BANKS},
            sqerr={b: np.zeros(n) for b in BANKS},
            llr_diff_max={p: 0.0 for p in PAIRS},
            llr_diff_sum={p: 0.0 for p in PAIRS},
            llr_diff_count={p: 0 for p in PAIRS},
            hist=hist_template,
        )

    def merge(self, other: "TrialReport") -> "TrialReport":
        hist = self.hist
        if other.hist is not None:
            if hist is None:
                hist = other.hist
            else:
                hist = {
                    b: {k: hist[b][k] + other.hist[b][k] for k in hist[b]}
                    for b in hist
                }
        return TrialReport(
            n_trials=self.n_trials + other.n_trials,
            bit_errors={b: self.bit_errors[b] + other.bit_errors[b] for b in BANKS},
            symbol_errors={
                b: self.symbol_errors[b] + other.symbol_errors[b] for b in BANKS
            },
            sqerr={b: self.sqerr[b] + other.sqerr[b] for b in BANKS},
            llr_diff_max={
                p: max(self.llr_diff_max[p], other.llr_diff_max[p]) for p in PAIRS
            },
            llr_diff_sum={p: self.llr_diff_sum[p] + other.llr_diff_sum[p] for p in PAIRS},
            llr_diff_count={
                p: self.llr_diff_count[p] + other.llr_diff_count[p] for p in PAIRS
            },
            hist=hist,
        )


@dataclass(frozen=True)
class RunReport:
    meta: dict
    config: dict
    points: list


# ---------------------------------------------------------------------------
# channel / generator construction


def gen_channel(spec: ChannelSpec) -> np.ndarray:
    """Diagonal channel matrix for the given spec."""
    if spec.kind == "awgn-identity":
        if spec.m < 1:
            raise BadSpecError("awgn-identity channel needs a positive size m")
        return np.eye(spec.m, dtype=complex)
    if spec.kind == "frequency-selective":
        if spec.m < 1 or spec.taps < 1:
            raise BadSpecError("frequency-selective channel needs m >= 1 and taps >= 1")
        if spec.decay_db_per_tap < 0:
            raise BadSpecError("tap decay must be nonnegative dB")
        rng = np.random.default_rng(spec.seed)
        profile = 10.0 ** (-spec.decay_db_per_tap * np.arange(spec.taps) / 10.0)
        profile /= profile.sum()  # expected total tap energy 1
        taps = np.sqrt(profile / 2.0) * (
            rng.standard_normal(spec.taps) + 1j * rng.standard_normal(spec.taps)
        )
        return np.diag(np.fft.fft(taps, spec.m))
    if spec.kind == "from-file":
        if not spec.path:
            raise BadSpecError("from-file channel needs a path")
        H = load_matrix(spec.path)
        if H.shape[0] != H.shape[1]:
            raise BadSpecError(f"channel file {spec.path} is not square")
        off = H - np.diag(np.diag(H))
        if np.max(np.abs(off)) > 1e-12 * max(1.0, float(np.max(np.abs(H)))):
            raise BadSpecError(f"channel file {spec.path} is not diagonal")
        if spec.m and spec.m != H.shape[0]:
            raise BadSpecError(
                f"channel file {spec.path} is {H.shape[0]}x{H.shape[0]}, config says m={spec.m}"
            )
        return H
    raise BadSpecError(f"unknown channel kind {spec.kind!r}")


def gen_generator(spec: GeneratorSpec) -> np.ndarray:
    """Generator matrix for the given spec."""
    if spec.kind == "identity":
        if spec.m != spec.n or spec.m < 1:
            raise BadSpecError("identity generator needs m == n >= 1")
        return np.eye(spec.m, dtype=complex)
    if spec.kind == "random-semi-unitary":
        if spec.m < spec.n or spec.n < 1:
            raise BadSpecError("random-semi-unitary generator needs m >= n >= 1")
        rng = np.random.default_rng(spec.seed)
        M = rng.standard_normal((spec.m, spec.n)) + 1j * rng.standard_normal(
            (spec.m, spec.n)
        )
        G, _ = np.linalg.qr(M)
        gram_err = np.max(np.abs(G.conj().T @ G - np.eye(spec.n)))
        assert gram_err < 1e-10
        return G
    if spec.kind == "from-file":
        if not spec.path:
            raise BadSpecError("from-file generator needs a path")
        G = load_matrix(spec.path)
        if G.shape[0] < G.shape[1]:
            raise BadSpecError(f"generator file {spec.path} must be tall (m >= n)")
        if (spec.m and spec.m != G.shape[0]) or (spec.n and spec.n != G.shape[1]):
            raise BadSpecError(
                f"generator file {spec.path} is {G.shape[0]}x{G.shape[1]}, "
                f"config says {spec.m}x{spec.n}"
            )
        return G
    raise BadSpecError(f"unknown generator kind {spec.kind!r}")


def noise_sigma2(G: np.ndarray, c: Constellation, ebn0_db: float) -> float:
    """White-noise variance for a target Eb/N0 through generator G."""
    m, n = G.shape
    eb = float(np.linalg.norm(G)) ** 2 * c.variance / (n * c.bits_per_symbol)
    return eb / 10.0 ** (ebn0_db / 10.0)


def propriety_ratio(cond_cov: np.ndarray) -> float:
    """|off-diagonal| / min(diagonal) of a 2x2 conditional covariance.

    Below 1e-3 the conditioned estimate is treated as practically proper.
    """
    cond_cov = np.asarray(cond_cov)
    if cond_cov.shape != (2, 2):
        raise BadSpecError(f"propriety ratio needs a 2x2 matrix, got {cond_cov.shape}")
    return float(
        abs(cond_cov[0, 1]) / min(cond_cov[0, 0].real, cond_cov[1, 1].real)
    )


def random_linear_model(rng: np.random.Generator, m: int, n: int, c: Constellation,
                        noise_scale: float = 0.1):
    """Random dense model with HPD noise, for diagnostics and checks."""
    H = (rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))) / np.sqrt(2.0)
    V = (rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))) / np.sqrt(2.0 * m)
    Cnn = noise_scale * (V @ V.conj().T + 0.1 * np.eye(m))
    return build_model(H, c, Cnn)


# ---------------------------------------------------------------------------
# the run itself


@dataclass(frozen=True, eq=False)
class _PointSetup:
    si: int
    snr_db: float
    sigma2: float
    A: np.ndarray
    c: Constellation
    bits: object
    banks: dict
    laws: dict
    channel_info: dict
    model: object
    am: object


def _point_setup(config: SimConfig, si: int) -> _PointSetup:
    c = by_name(config.constellation)
    G = gen_generator(config.generator)
    ch_spec = config.channel
    if ch_spec.kind == "frequency-selective":
        ch_spec = replace(ch_spec, seed=[_as_seed_int(ch_spec.seed), si])
    H = gen_channel(ch_spec)
    if H.shape[1] != G.shape[0]:
        raise BadSpecError(
            f"channel size {H.shape[0]} does not match generator rows {G.shape[0]}"
        )
    A = H @ G
    sigma2 = noise_sigma2(G, c, config.snr_db[si])
    model = build_model(A, c, sigma2 * np.eye(A.shape[0], dtype=complex))
    am = augment(model)
    try:
        banks = {
            "lmmse": lmmse(model),
            "cwcu-lmmse": cwcu_lmmse(model),
            "wlmmse": wlmmse(am),
            "cwcu-wlmmse": cwcu_wlmmse(am),
        }
    except DegenerateComponentError as exc:
        raise DegenerateComponentError(
            exc.component,
            f"at Eb/N0 = {config.snr_db[si]} dB: {exc}",
        ) from exc
    n = A.shape[1]
    laws = {}
    for name in ("lmmse", "cwcu-lmmse"):
        laws[name] = [build_law_linear(banks[name], c, i) for i in range(n)]
    for name in ("wlmmse", "cwcu-wlmmse"):
        laws[name] = [build_law_widely(banks[name], c, i) for i in range(n)]
    digest = hashlib.sha256(np.ascontiguousarray(np.diag(H)).tobytes()).hexdigest()
    channel_info = {"kind": config.channel.kind, "seed_used": _seed_echo(ch_spec.seed),
                    "diag_sha256": digest[:16]}
    return _PointSetup(
        si=si, snr_db=config.snr_db[si], sigma2=sigma2, A=A, c=c, bits=bit_sets(c),
        banks=banks, laws=laws, channel_info=channel_info, model=model, am=am,
    )


def _as_seed_int(seed) -> int:
    if isinstance(seed, (list, tuple)):
        raise BadSpecError("channel seed in a config must be a single integer")
    return int(seed)


def _seed_echo(seed):
    return list(seed) if isinstance(seed, (list, tuple)) else int(seed)


def _hist_template(n: int, q: int, bins: int):
    return {
        b: {
            "counts": np.zeros((q, bins, bins), dtype=np.int64),
            "mean_sum": np.zeros((n, q), dtype=complex),
            "sq_sum": np.zeros((n, q)),
            "count": np.zeros((n, q), dtype=np.int64),
        }
        for b in BANKS
    }


def _draw_block(setup: _PointSetup, config: SimConfig, t0: int, t1: int):
    """Symbol indices, sent symbols and observations for trials [t0, t1).

    Trial t always uses its own generator seeded by (seed, point, t), so the
    block boundaries never influence the data.
    """
    A, c = setup.A, setup.c
    m, n = A.shape
    qn = c.symbols.size
    ntr = t1 - t0
    d_idx = np.empty((ntr, n), dtype=np.int64)
    noise = np.empty((ntr, m), dtype=complex)
    sig = np.sqrt(setup.sigma2 / 2.0)
    for t in range(t0, t1):
        rng = np.random.default_rng([config.seed, setup.si, t])
        d_idx[t - t0] = rng.integers(0, qn, size=n)
        g = rng.standard_normal((2, m))
        noise[t - t0] = sig * (g[0] + 1j * g[1])
    x = c.symbols[d_idx]
    return d_idx, x, x @ A.T + noise


def _bank_llrs(setup: _PointSetup, estimates: dict) -> dict:
    """Unclamped per-bit LLRs, (trials, n, bits) per bank."""
    n = setup.A.shape[1]
    lam = {}
    for name in ("lmmse", "cwcu-lmmse"):
        lam[name] = np.stack(
            [
                llr_proper(estimates[name][:, i], setup.laws[name][i], setup.bits,
                           clamp=None)
                for i in range(n)
            ],
            axis=1,
        )
    for name in ("wlmmse", "cwcu-wlmmse"):
        lam[name] = np.stack(
            [
                llr_general(
                    augmented(estimates[name][:, i]), setup.laws[name][i], setup.bits,
                    clamp=None,
                )
                for i in range(n)
            ],
            axis=1,
        )
    return lam


def _run_chunk(setup: _PointSetup, config: SimConfig, t0: int, t1: int) -> TrialReport:
    c = setup.c
    n = setup.A.shape[1]
    qn = c.symbols.size
    k = c.bits_per_symbol
    ntr = t1 - t0
    d_idx, x, y = _draw_block(setup, config, t0, t1)
    ya = np.concatenate([y, np.conj(y)], axis=1)

    estimates = {}
    for name in ("lmmse", "cwcu-lmmse"):
        estimates[name] = y @ setup.banks[name].E.T
    for name in ("wlmmse", "cwcu-wlmmse"):
        estimates[name] = ya @ setup.banks[name].E_aug.T[:, :n]
    lam = _bank_llrs(setup, estimates)

    hist_on = config.histogram_bins > 0
    rep = TrialReport.empty(n, _hist_template(n, qn, config.histogram_bins) if hist_on else None)
    rep.n_trials = ntr
    tx_bits = c.labels[d_idx]  # (ntr, n, k)
    weights = 1 << np.arange(k - 1, -1, -1)
    rng_range = [[-config.histogram_range, config.histogram_range]] * 2
    for name in BANKS:
        dec = (lam[name] > 0).astype(np.uint8)
        rep.bit_errors[name] = int(np.sum(dec != tx_bits))
        q_hat = dec @ weights
        rep.symbol_errors[name] = int(np.sum(q_hat != d_idx))
        rep.sqerr[name] = np.sum(np.abs(estimates[name] - x) ** 2, axis=0)
        if hist_on:
            blk = rep.hist[name]
            xh = estimates[name]
            for q in range(qn):
                mask = d_idx == q
                vals = xh[mask]
                blk["counts"][q] += np.histogram2d(
                    vals.real, vals.imag, bins=config.histogram_bins, range=rng_range
                )[0].astype(np.int64)
                blk["mean_sum"][:, q] = np.sum(np.where(mask, xh, 0.0), axis=0)
                blk["sq_sum"][:, q] = np.sum(np.where(mask, np.abs(xh) ** 2, 0.0), axis=0)
                blk["count"][:, q] = np.sum(mask, axis=0)
    for pair, (a, b) in PAIRS.items():
        diff = np.abs(lam[a] - lam[b])
        rep.llr_diff_max[pair] = float(np.max(diff)) if diff.size else 0.0
        rep.llr_diff_sum[pair] = float(np.sum(diff))
        rep.llr_diff_count[pair] = int(diff.size)
    return rep


def _pool_chunk(args):
    config, si, t0, t1 = args
    setup = _point_setup(config, si)
    return _run_chunk(setup, config, t0, t1)


def _finalize_point(setup: _PointSetup, rep: TrialReport) -> dict:
    n = setup.A.shape[1]
    k = setup.c.bits_per_symbol
    trials = rep.n_trials
    banks_out = {}
    for name in BANKS:
        bank = setup.banks[name]
        if name in ("lmmse", "cwcu-lmmse"):
            closed = bmse(bank.E, setup.model)
        else:
            closed = bmse_widely(bank.E_aug, setup.am)
        nbits = trials * n * k
        nsym = trials * n
        emp = rep.sqerr[name] / trials if trials else np.zeros(n)
        banks_out[name] = {
            "bits": nbits,
            "bit_errors": rep.bit_errors[name],
            "ber": rep.bit_errors[name] / nbits if nbits else 0.0,
            "symbols": nsym,
            "symbol_errors": rep.symbol_errors[name],
            "ser": rep.symbol_errors[name] / nsym if nsym else 0.0,
            "bmse_empirical": [float(v) for v in emp],
            "bmse_empirical_avg": float(np.mean(emp)),
            "bmse_closed": [float(v) for v in closed],
            "bmse_closed_avg": float(np.mean(closed)),
        }
    llr_pairs = {
        pair: {
            "max_abs_diff": rep.llr_diff_max[pair],
            "mean_abs_diff": (
                rep.llr_diff_sum[pair] / rep.llr_diff_count[pair]
                if rep.llr_diff_count[pair]
                else 0.0
            ),
        }
        for pair in PAIRS
    }
    propriety = {
        name: [propriety_ratio(setup.banks[name].cond_cov[i]) for i in range(n)]
        for name in ("wlmmse", "cwcu-wlmmse")
    }
    point = {
        "snr_db": setup.snr_db,
        "sigma2": setup.sigma2,
        "trials": trials,
        "channel": setup.channel_info,
        "banks": banks_out,
        "llr_pairs": llr_pairs,
        "propriety": propriety,
    }
    if rep.hist is not None:
        point["histograms"] = {
            name: {
                "bins": int(rep.hist[name]["counts"].shape[-1]),
                "range": None,  # filled by run_trials, which knows the config
                "counts": rep.hist[name]["counts"].tolist(),
                "mean_sum_re": rep.hist[name]["mean_sum"].real.tolist(),
                "mean_sum_im": rep.hist[name]["mean_sum"].imag.tolist(),
                "sq_sum": rep.hist[name]["sq_sum"].tolist(),
                "count": rep.hist[name]["count"].tolist(),
            }
            for name in BANKS
        }
    return point


def run_trials(config: SimConfig, jobs: int = 1) -> RunReport:
    """Run the configured sweep and aggregate everything into a RunReport.

    jobs > 1 splits each point's trial range across processes; results are
    identical at any jobs value because every trial seeds its own generator.
    """
    points = []
    for si in range(len(config.snr_db)):
        setup = _point_setup(config, si)
        n = setup.A.shape[1]
        qn = setup.c.symbols.size
        hist_template = (
            _hist_template(n, qn, config.histogram_bins)
            if config.histogram_bins > 0
            else None
        )
        edges = [(t, min(t + _CHUNK, config.trials)) for t in range(0, config.trials, _CHUNK)]
        if jobs > 1 and len(edges) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                reports = list(
                    pool.map(_pool_chunk, [(config, si, t0, t1) for t0, t1 in edges])
                )
        else:
            reports = [_run_chunk(setup, config, t0, t1) for t0, t1 in edges]
        merged = reduce(
            TrialReport.merge, reports, TrialReport.empty(n, hist_template)
        )
        point = _finalize_point(setup, merged)
        if "histograms" in point:
            for name in BANKS:
                point["histograms"][name]["range"] = config.histogram_range
        points.append(point)
    meta = {
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "llr_clamp": 50.0,
        "noise_convention": "sigma2 = ||G||_F^2 var / (n k) / 10^(EbN0/10), Cnn = sigma2 I",
        "channel_policy": "frequency-selective realizations derive from [seed, point_index]",
    }
    # echo the parameters actually used, not the raw input, so overrides
    # (seed, output dir) are visible in the report
    return RunReport(meta=meta, config=_config_echo(config), points=points)


def _config_echo(config: SimConfig) -> dict:
    from dataclasses import asdict

    d = asdict(config)
    d.pop("echo", None)
    d["snr_db"] = list(config.snr_db)
    return d


def histogram_estimates(config: SimConfig, bins: int | None = None) -> list:
    """Per-symbol conditional histograms and moments for each bank.

    Returns one entry per Eb/N0 point: normalized 2-D bin frequencies per
    transmitted symbol (pooled over components; samples falling outside the
    square +-range are dropped from the bins but not from the moments), plus
    per-component conditional sample means and counts.
    """
    if bins is not None:
        config = replace(config, histogram_bins=int(bins))
    if config.histogram_bins < 1:
        raise BadSpecError("histogram collection needs a positive bin count")
    report = run_trials(config)
    out = []
    for point in report.points:
        banks = {}
        for name in BANKS:
            blk = point["histograms"][name]
            counts = np.asarray(blk["counts"], dtype=np.int64)
            totals = counts.sum(axis=(1, 2), keepdims=True)
            freq = np.where(totals > 0, counts / np.maximum(totals, 1), 0.0)
            mean_sum = np.asarray(blk["mean_sum_re"]) + 1j * np.asarray(blk["mean_sum_im"])
            cnt = np.asarray(blk["count"], dtype=np.int64)
            with np.errstate(invalid="ignore", divide="ignore"):
                mean = np.where(cnt > 0, mean_sum / np.maximum(cnt, 1), 0.0)
                second = np.where(cnt > 0, np.asarray(blk["sq_sum"]) / np.maximum(cnt, 1), 0.0)
            banks[name] = {
                "counts": counts,
                "freq": freq,
                "edges": np.linspace(
                    -config.histogram_range, config.histogram_range, config.histogram_bins + 1
                ),
                "mean": mean,
                "second_moment": second,
                "count": cnt,
            }
        out.append({"snr_db": point["snr_db"], "sigma2": point["sigma2"], "banks": banks})
    return out


# ---------------------------------------------------------------------------
# config and output files


def load_config(path) -> SimConfig:
    """Parse and validate a JSON run config."""
    with open(path) as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise BadSpecError(f"config {path} is not valid JSON: {exc}") from exc
    base = os.path.dirname(os.path.abspath(path))
    return config_from_dict(raw, base_dir=base)


def config_from_dict(raw: dict, base_dir: str = ".") -> SimConfig:
    if not isinstance(raw, dict):
        raise BadSpecError("config root must be a JSON object")
    required = {"constellation", "channel", "generator", "snr_db", "trials", "seed"}
    missing = required - raw.keys()
    if missing:
        raise BadSpecError(f"config is missing keys: {sorted(missing)}")
    known = required | {"histogram_bins", "histogram_range", "output_dir"}
    unknown = raw.keys() - known
    if unknown:
        raise BadSpecError(f"config has unknown keys: {sorted(unknown)}")

    channel = _channel_from_dict(raw["channel"], base_dir)
    generator = _generator_from_dict(raw["generator"], base_dir)
    snr = raw["snr_db"]
    if not isinstance(snr, list) or not snr or not all(
        isinstance(v, (int, float)) for v in snr
    ):
        raise BadSpecError("snr_db must be a non-empty list of numbers")
    trials = raw["trials"]
    if not isinstance(trials, int) or trials < 0:
        raise BadSpecError("trials must be a nonnegative integer")
    seed = raw["seed"]
    if not isinstance(seed, int):
        raise BadSpecError("seed must be an integer")
    bins = raw.get("histogram_bins", 0)
    if not isinstance(bins, int) or bins < 0:
        raise BadSpecError("histogram_bins must be a nonnegative integer")
    hr = raw.get("histogram_range", 2.5)
    if not isinstance(hr, (int, float)) or hr <= 0:
        raise BadSpecError("histogram_range must be positive")
    return SimConfig(
        constellation=str(raw["constellation"]),
        channel=channel,
        generator=generator,
        snr_db=tuple(float(v) for v in snr),
        trials=trials,
        seed=seed,
        histogram_bins=bins,
        histogram_range=float(hr),
        output_dir=str(raw.get("output_dir", ".")),
        echo=raw,
    )


def _channel_from_dict(d, base_dir) -> ChannelSpec:
    if not isinstance(d, dict) or "kind" not in d:
        raise BadSpecError("channel must be an object with a 'kind'")
    kind = d["kind"]
    known = {"kind", "m", "taps", "decay_db_per_tap", "seed", "path"}
    unknown = d.keys() - known
    if unknown:
        raise BadSpecError(f"channel has unknown keys: {sorted(unknown)}")
    path = d.get("path")
    if path is not None:
        path = os.path.join(base_dir, path) if not os.path.isabs(path) else path
    return ChannelSpec(
        kind=kind,
        m=int(d.get("m", 0)),
        taps=int(d.get("taps", 16)),
        decay_db_per_tap=float(d.get("decay_db_per_tap", 3.0)),
        seed=int(d.get("seed", 0)),
        path=path,
    )


def _generator_from_dict(d, base_dir) -> GeneratorSpec:
    if not isinstance(d, dict) or "kind" not in d:
        raise BadSpecError("generator must be an object with a 'kind'")
    known = {"kind", "m", "n", "seed", "path"}
    unknown = d.keys() - known
    if unknown:
        raise BadSpecError(f"generator has unknown keys: {sorted(unknown)}")
    path = d.get("path")
    if path is not None:
        path = os.path.join(base_dir, path) if not os.path.isabs(path) else path
    return GeneratorSpec(
        kind=d["kind"],
        m=int(d.get("m", 0)),
        n=int(d.get("n", 0)),
        seed=int(d.get("seed", 0)),
        path=path,
    )


def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def write_report_json(report: RunReport, path) -> None:
    with open(path, "w") as fh:
        json.dump(
            {"meta": report.meta, "config": report.config, "points": report.points},
            fh,
            indent=1,
        )
        fh.write("\n")


def write_csv_tables(report: RunReport, outdir) -> list:
    """Write the CSV views of a report; returns the paths written."""
    os.makedirs(outdir, exist_ok=True)
    written = []

    def _write(name, comment, header, rows):
        p = os.path.join(outdir, name)
        with open(p, "w") as fh:
            fh.write(f"# {comment}\n")
            fh.write(",".join(header) + "\n")
            for row in rows:
                fh.write(",".join(_fmt(v) for v in row) + "\n")
        written.append(p)

    rows = []
    for pt in report.points:
        for bank in BANKS:
            b = pt["banks"][bank]
            rows.append(
                (pt["snr_db"], bank, b["bits"], b["bit_errors"], b["ber"],
                 b["symbols"], b["symbol_errors"], b["ser"])
            )
    _write(
        "ber.csv",
        "bit and symbol error ratios per Eb/N0 point and estimator bank",
        ("snr_db", "bank", "bits", "bit_errors", "ber", "symbols", "symbol_errors", "ser"),
        rows,
    )

    rows = []
    for pt in report.points:
        for bank in BANKS:
            b = pt["banks"][bank]
            for i, (cl, em) in enumerate(zip(b["bmse_closed"], b["bmse_empirical"])):
                rows.append((pt["snr_db"], bank, i, cl, em))
    _write(
        "bmse.csv",
        "per-component Bayesian MSE: closed form and empirical average",
        ("snr_db", "bank", "component", "bmse_closed", "bmse_empirical"),
        rows,
    )

    rows = []
    for pt in report.points:
        for pair in PAIRS:
            d = pt["llr_pairs"][pair]
            rows.append((pt["snr_db"], pair, d["max_abs_diff"], d["mean_abs_diff"]))
    _write(
        "llr.csv",
        "LLR discrepancy between each CWCU bank and its plain counterpart (pre-clamp)",
        ("snr_db", "pair", "max_abs_diff", "mean_abs_diff"),
        rows,
    )

    rows = []
    for pt in report.points:
        for bank, ratios in pt["propriety"].items():
            for i, r in enumerate(ratios):
                rows.append((pt["snr_db"], bank, i, r))
    _write(
        "propriety.csv",
        "conditional propriety ratio |off-diag|/min(diag) per component",
        ("snr_db", "bank", "component", "ratio"),
        rows,
    )

    if report.points and "histograms" in report.points[0]:
        rows = []
        mrows = []
        for pt in report.points:
            for bank in BANKS:
                blk = pt["histograms"][bank]
                bins = blk["bins"]
                rng = blk["range"]
                counts = np.asarray(blk["counts"], dtype=np.int64)
                centers = (np.arange(bins) + 0.5) * (2 * rng / bins) - rng
                totals = counts.sum(axis=(1, 2))
                for q in range(counts.shape[0]):
                    total = max(int(totals[q]), 1)
                    nz = np.argwhere(counts[q] > 0)
                    for bi, bj in nz:
                        rows.append(
                            (pt["snr_db"], bank, q, centers[bi], centers[bj],
                             int(counts[q, bi, bj]), counts[q, bi, bj] / total)
                        )
                mean_sum = np.asarray(blk["mean_sum_re"]) + 1j * np.asarray(blk["mean_sum_im"])
                cnt = np.asarray(blk["count"], dtype=np.int64)
                for i in range(mean_sum.shape[0]):
                    for q in range(mean_sum.shape[1]):
                        if cnt[i, q]:
                            mu = mean_sum[i, q] / cnt[i, q]
                            mrows.append(
                                (pt["snr_db"], bank, i, q, mu.real, mu.imag, int(cnt[i, q]))
                            )
        _write(
            "histogram.csv",
            "nonzero conditional 2-D histogram bins of estimates, pooled over components; "
            "re/im are bin centers, frequency is count/total for that symbol",
            ("snr_db", "bank", "symbol", "re_center", "im_center", "count", "frequency"),
            rows,
        )
        _write(
            "conditional_means.csv",
            "per-component sample mean of estimates conditioned on the sent symbol",
            ("snr_db", "bank", "component", "symbol", "mean_re", "mean_im", "count"),
            mrows,
        )
    return written
