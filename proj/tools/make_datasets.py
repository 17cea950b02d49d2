#!/usr/bin/env python3
"""Regenerate the bundled synthetic fit datasets in data/.

low_power.csv  : noiseless, y = 11.25 + 0.36 x (+) and 12.80 + 0.029 x (-), x = 10..100 uW.
high_power.csv : seeded Gaussian noise, y = 17.31 + 0.24 x (+, sd 2 kHz) and
                 y = q2 + 2324 / x (-, sd 1 kHz) with q2 = 12.80 + 150 * 0.029, x = 200..1000 uW.
"""
import random
from pathlib import Path

DATA = Path(__file__).resolve().parent.parent / "data"
HEADER = "direction,power_uW,linewidth_kHz\n"


def low_power():
    rows = [("+", x, 11.25 + 0.36 * x) for x in range(10, 101, 10)]
    rows += [("-", x, 12.80 + 0.029 * x) for x in range(10, 101, 10)]
    return rows


def high_power(seed=20160504):
    rng = random.Random(seed)
    q2 = 12.80 + 150.0 * 0.029
    xs = range(200, 1001, 50)
    rows = [("+", x, 17.31 + 0.24 * x + rng.gauss(0.0, 2.0)) for x in xs]
    rows += [("-", x, q2 + 2324.0 / x + rng.gauss(0.0, 1.0)) for x in xs]
    return rows


def write(name, rows):
    with open(DATA / name, "w") as f:
        f.write(HEADER)
        for d, x, y in rows:
            f.write(f"{d},{x},{y!r}\n")


if __name__ == "__main__":
    DATA.mkdir(exist_ok=True)
    write("low_power.csv", low_power())
    write("high_power.csv", high_power())
