#!/usr/bin/env python3
"""Plot N(mu) from a spectrum CSV against a fitted two-term Weyl law.

    sgweyl spectrum --mapping sinh --half-width 600 --grid 16000 --count 700 --csv model.csv
    sgweyl fit --input model.csv --json fit.json
    python3 tools/plot_counting.py model.csv fit.json -o counting.png

Eigenvalues are raised to --power (default 0.5, the P scale) before counting.
"""

import argparse
import json

import matplotlib.pyplot as plt
import numpy as np


def read_spectrum(path):
    header = {}
    values = []
    with open(path) as f:
        for line in f:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, sep, value = line[1:].partition("=")
                if sep:
                    header[key.strip()] = value.strip()
                continue
            try:
                values.append(float(line))
            except ValueError:
                pass  # column name
    trusted = int(header.get("trusted_count", len(values)))
    return np.array(values[:trusted]), header


def weyl(fit, lam):
    a = fit["d_over_m"]
    total = np.zeros_like(lam)
    for k in (0, 1):
        for j in (0, 1):
            w = fit.get(f"w_{j}_{k}")
            if w is not None:
                total += w * lam ** (a - k) * np.log(lam) ** j
    return total


def main():
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("spectrum")
    p.add_argument("fit", nargs="?")
    p.add_argument("--power", type=float, default=0.5)
    p.add_argument("-o", "--output", default="counting.png")
    args = p.parse_args()

    ev, header = read_spectrum(args.spectrum)
    mu = ev ** args.power
    counts = np.arange(1, len(mu) + 1)

    fig, (top, bottom) = plt.subplots(2, 1, sharex=True, figsize=(7, 7))
    top.step(mu, counts, where="post", label="N(mu)")
    if args.fit:
        with open(args.fit) as f:
            fit = json.load(f)
        grid = np.linspace(max(mu[0], 1.01), mu[-1], 800)
        top.plot(grid, weyl(fit, grid), label="Weyl fit")
        mid = 0.5 * (mu[:-1] + mu[1:])
        bottom.plot(mid, counts[:-1] - weyl(fit, mid), ".", ms=2)
        bottom.axvspan(fit["window_min"], fit["window_max"], alpha=0.1)
        bottom.set_ylabel("N - fit")
    top.set_ylabel("count")
    top.legend()
    bottom.set_xlabel("mu")
    title = ", ".join(f"{k}={header[k]}" for k in ("operator", "mapping", "grid_points") if k in header)
    fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(args.output, dpi=150)


if __name__ == "__main__":
    main()
