"""Independent float64 AdaNAG on a problem dumped by the `dump_least_squares` example.

    cargo run --release -q -p adanag-core --example dump_least_squares > /tmp/ls.json
    python3 scripts/adanag_reference.py /tmp/ls.json

Prints the largest relative gap to the Rust trace and f_K / f_0.
"""
import json
import sys

import numpy as np


def main(path):
    d = json.load(open(path))
    A, b, s = np.array(d["A"]), np.array(d["b"]), d["s0"]
    rust = np.array(d["f"])
    m, n = A.shape
    iters = len(rust) - 1

    def fg(x):
        r = A @ x - b
        return r @ r / m, 2 * A.T @ r / m

    th = [1.0]
    for _ in range(iters + 4):
        th.append((1 + np.sqrt(1 + 4 * th[-1] ** 2)) / 2)
    al = [None] + [0.5 * (1 - 1 / th[k + 2]) for k in range(1, iters + 2)]
    al[0] = (2 * th[2] / (th[2] - 1)) / (1 / al[3] + 1 / al[2] ** 2 - 1 / al[1])

    x = np.zeros(n)
    z = x.copy()
    f, g = fg(x)
    fs = [f]
    for k in range(iters):
        y = x - s * g
        z = z - s * al[k] * th[k + 2] * g
        xn = (1 - 1 / th[k + 3]) * y + z / th[k + 3]
        fn, gn = fg(xn)
        den = fn - f + gn @ (x - xn)
        num = 0.5 * np.sum((gn - g) ** 2)
        lk = (0.0 if num == 0 else np.inf) if den >= 0 else -num / den
        if k == 0:
            grow = al[0] / al[1] * th[2] / (th[3] * (th[3] - 1))
            coef = al[2] ** 2 * al[3] / (al[3] + al[2] ** 2) / al[1]
        else:
            grow = al[k] / al[k + 1]
            coef = al[k] ** 2 / (al[k + 1] + al[k] ** 2)
        s = min(grow * s, coef / lk) if 0 < lk < np.inf else grow * s
        x, f, g = xn, fn, gn
        fs.append(f)
    fs = np.array(fs)
    print("max relative gap", np.max(np.abs(rust - fs) / np.maximum(fs, 1e-300)))
    print("f_K / f_0 =", repr(fs[-1] / fs[0]))


if __name__ == "__main__":
    main(sys.argv[1])
