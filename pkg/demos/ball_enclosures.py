"""How the rigorous ball-measure enclosures behave.

Dyadic centers resolve exactly at finite depth; non-dyadic centers leave a
straddle chain whose mass shrinks with the tolerance. Every bound is sound,
so scans built on the enclosures certify dimension inequalities.
"""

from multifractal import ball_measure, load_system

S1 = load_system({"probs": [1 / 3, 2 / 3], "ratios": [0.5, 0.5],
                  "translations": [0.0, 0.5]})
UNIFORM = load_system({"probs": [0.5, 0.5], "ratios": [0.5, 0.5],
                       "translations": [0.0, 0.5]})


def main():
    print("exact resolution at a dyadic center: mu(B(1/2, 2^-k))")
    print("k    lower            upper            depth")
    for k in (1, 4, 8, 16):
        mb = ball_measure(S1, 0.5, 0.5 ** k, tol=1e-9)
        print(f"{k:2d}   {mb.lower:.12e}  {mb.upper:.12e}  {mb.depth_used:3d}")
    print("both chains of touching cylinders end at the center, so the")
    print("enclosure closes with zero width.")
    print()

    x = 1 / 3
    print(f"non-dyadic center x = 1/3: the boundary never lands on a cylinder")
    print("tol      lower              upper              width")
    for tol in (1e-3, 1e-6, 1e-9, 1e-12):
        mb = ball_measure(S1, x, 0.1, tol=tol)
        print(f"{tol:7.0e}  {mb.lower:.12f}     {mb.upper:.12f}     "
              f"{mb.upper - mb.lower:.2e}")
    print()

    print("uniform weights reduce to interval length:")
    for x, r in ((0.3, 0.1), (0.05, 0.2)):
        mb = ball_measure(UNIFORM, x, r, tol=1e-11)
        length = min(1.0, x + r) - max(0.0, x - r)
        print(f"  mu(B({x}, {r})) in [{mb.lower:.12f}, {mb.upper:.12f}], "
              f"length {length:.12f}")


if __name__ == "__main__":
    main()
