#!/usr/bin/env python3
"""Render a learning-curve CSV (train output) as a PNG."""
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def main() -> None:
    if len(sys.argv) != 3:
        sys.exit("usage: plot_curve.py curve.csv out.png")
    df = pd.read_csv(sys.argv[1], comment="#")
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(df.trial_index, df.mean_qubits, lw=1.2, color="tab:blue")
    ax.fill_between(
        df.trial_index,
        df.mean_qubits - df.std_qubits,
        df.mean_qubits + df.std_qubits,
        alpha=0.25,
        color="tab:blue",
        lw=0,
    )
    ax.set_xlabel("trial")
    ax.set_ylabel("qubits added until reward")
    ax2 = ax.twinx()
    ax2.plot(df.trial_index, df.reward_rate, lw=0.8, color="tab:green", alpha=0.6)
    ax2.set_ylabel("reward rate", color="tab:green")
    ax2.set_ylim(0, 1.05)
    fig.tight_layout()
    fig.savefig(sys.argv[2], dpi=150)


if __name__ == "__main__":
    main()
