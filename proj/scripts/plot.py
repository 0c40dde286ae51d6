#!/usr/bin/env python3
"""Quick looks at wsim output: population curves or the two sweep panels."""

import argparse
import csv
import pathlib

import matplotlib.pyplot as plt
import numpy as np


def plot_trajectory(path, out):
    with open(path) as f:
        rows = list(csv.DictReader(f))
    t = np.array([float(r["time_us"]) for r in rows])
    fig, ax = plt.subplots(figsize=(7, 4))
    for key in rows[0]:
        if key.startswith("p_"):
            ax.plot(t, [float(r[key]) for r in rows], label=key[2:])
    ax.set_xlabel("t (us)")
    ax.set_ylabel("population")
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(out, dpi=150)


def plot_grid(path, out):
    data = np.genfromtxt(path, delimiter=",", names=True)
    z0 = np.unique(data["z0_um"])
    d = np.unique(data["d_um"])
    shape = (len(z0), len(d))
    fig, axes = plt.subplots(2, 1, figsize=(6, 8), sharex=True)
    for ax, key, title in zip(axes, ["dev_p0", "leakage_final"], ["|1/3 - P(g1g2g2_0)|", "final leakage"]):
        im = ax.pcolormesh(d, z0, data[key].reshape(shape), shading="nearest", cmap="gray")
        ax.set_ylabel("z0 (um)")
        ax.set_title(title)
        fig.colorbar(im, ax=ax)
    axes[-1].set_xlabel("d (um)")
    fig.tight_layout()
    fig.savefig(out, dpi=150)


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("csv", type=pathlib.Path, help="trajectory.csv or grid.csv")
    p.add_argument("-o", "--out", type=pathlib.Path)
    args = p.parse_args()
    out = args.out or args.csv.with_suffix(".png")
    if args.csv.name.startswith("grid"):
        plot_grid(args.csv, out)
    else:
        plot_trajectory(args.csv, out)
    print(out)


if __name__ == "__main__":
    main()
