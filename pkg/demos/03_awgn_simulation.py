"""Monte Carlo sweep of the bundled AWGN profile, trimmed for a quick run.

Loads configs/awgn-8qam.json, cuts the sweep down to four Eb/N0 points and
1500 symbol vectors per point, and prints the per-point summary: bit error
rates, average Bayesian MSE (closed form next to the empirical estimate),
the worst LLR gap inside each plain/CWCU pair, and the propriety of the
conditioned widely linear errors.
"""
from dataclasses import replace
from pathlib import Path

from softmmse import load_config, run_trials

config_path = Path(__file__).resolve().parent.parent / "configs" / "awgn-8qam.json"
cfg = replace(load_config(config_path), snr_db=(0.0, 4.0, 8.0, 10.0), trials=1500)

print(f"profile: {config_path.name}, {cfg.trials} trials per point, "
      f"channel {cfg.channel.kind}, generator {cfg.generator.kind} "
      f"{cfg.generator.m}x{cfg.generator.n}")
report = run_trials(cfg)

print(f"\n{'Eb/N0':>6s} {'ber lmmse':>10s} {'ber wlmmse':>11s} "
      f"{'bmse l':>8s} {'bmse wl':>8s} {'bmse wl (mc)':>13s} {'llr gap':>9s} {'propriety':>10s}")
for pt in report.points:
    b = pt["banks"]
    gap = max(pair["max_abs_diff"] for pair in pt["llr_pairs"].values())
    prop = max(pt["propriety"]["cwcu-wlmmse"])
    print(f"{pt['snr_db']:>6.1f} {b['lmmse']['ber']:>10.5f} {b['wlmmse']['ber']:>11.5f} "
          f"{b['lmmse']['bmse_closed_avg']:>8.5f} {b['wlmmse']['bmse_closed_avg']:>8.5f} "
          f"{b['wlmmse']['bmse_empirical_avg']:>13.5f} {gap:>9.1e} {prop:>10.1e}")

same = all(
    pt["banks"]["lmmse"]["bit_errors"] == pt["banks"]["cwcu-lmmse"]["bit_errors"]
    and pt["banks"]["wlmmse"]["bit_errors"] == pt["banks"]["cwcu-wlmmse"]["bit_errors"]
    for pt in report.points
)
print(f"\nbit errors identical within both plain/CWCU pairs at every point: {same}")
print("with an orthogonal spreading generator every bank sees the same sufficient")
print("statistic, so all four BER columns coincide; the widely linear pair still")
print("wins on MSE because rectangular 8-QAM is improper")
