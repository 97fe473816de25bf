"""Conditional estimate clouds: shrunk for plain banks, centered for CWCU.

Conditioned on the sent symbol, the plain WLMMSE estimate clusters around
a point pulled toward the origin, while the CWCU-WLMMSE estimate clusters
around the symbol itself. The demo collects 2-D histograms of the
estimates at 10 dB, prints the pooled conditional mean next to each sent
symbol, and draws one conditional cloud as ASCII art.
"""
import numpy as np

from softmmse import (
    ChannelSpec,
    GeneratorSpec,
    SimConfig,
    by_name,
    histogram_estimates,
)

cfg = SimConfig(
    constellation="8qam-rect",
    channel=ChannelSpec(kind="awgn-identity", m=52),
    generator=GeneratorSpec(kind="random-semi-unitary", m=52, n=36, seed=2024),
    snr_db=(10.0,),
    trials=6_000,
    seed=3,
    histogram_bins=17,
    histogram_range=1.6,
)
c = by_name(cfg.constellation)

print(f"collecting {cfg.trials} trials x {cfg.generator.n} components at 10 dB")
point = histogram_estimates(cfg)[0]

print(f"\n{'sent symbol':>16s} {'wlmmse mean':>16s} {'cwcu-wlmmse mean':>17s} "
      f"{'wl bias':>8s} {'cwcu bias':>10s}")
for q, s in enumerate(c.symbols):
    pooled = {}
    for name in ("wlmmse", "cwcu-wlmmse"):
        blk = point["banks"][name]
        cnt = blk["count"][:, q]
        pooled[name] = (blk["mean"][:, q] * cnt).sum() / cnt.sum()
    print(f"{s:>16.3f} {pooled['wlmmse']:>16.3f} {pooled['cwcu-wlmmse']:>17.3f} "
          f"{abs(pooled['wlmmse'] - s):>8.3f} {abs(pooled['cwcu-wlmmse'] - s):>10.3f}")

# one conditional cloud, pooled over components
q = int(np.argmax(np.abs(c.symbols)))
shades = " .:-=+*#%@"
print(f"\nconditional density of the cwcu-wlmmse estimate given symbol {c.symbols[q]:.3f}")
freq = point["banks"]["cwcu-wlmmse"]["freq"][q]
edges = point["banks"]["cwcu-wlmmse"]["edges"]
top = freq.max()
for j in range(freq.shape[1] - 1, -1, -1):  # imaginary axis upward
    row = "".join(
        shades[min(int(freq[i, j] / top * (len(shades) - 1)), len(shades) - 1)] * 2
        for i in range(freq.shape[0])
    )
    print(f"  {edges[j]:+.2f} |{row}|")
print("        " + "^ sent symbol sits at "
      f"re={c.symbols[q].real:+.3f}, im={c.symbols[q].imag:+.3f}")
