"""Walk through the spectrum machinery on the canonical two-map system.

Prints tau on a q grid, the attainable exponent interval, the spectrum at a
few exponents with its two evaluation routes, and the flat envelope above
the peak.
"""

from multifractal import (
    alpha_bounds,
    alpha_of_q,
    f_bar,
    f_of_alpha,
    legendre_numeric,
    load_system,
    solve_tau,
    tilted_vector,
)

S1 = load_system({"probs": [1 / 3, 2 / 3], "ratios": [0.5, 0.5],
                  "translations": [0.0, 0.5]})


def main():
    print("system: probs (1/3, 2/3), ratios (1/2, 1/2), touching at 1/2")
    print()
    print("q      tau(q)       alpha(q)     tilted weights")
    for q in (-4.0, -2.0, 0.0, 1.0, 2.0, 4.0):
        w = tilted_vector(S1, q)
        print(f"{q:5.1f}  {solve_tau(S1, q):11.8f}  {alpha_of_q(S1, q):11.8f}"
              f"  ({w[0]:.4f}, {w[1]:.4f})")
    print()

    a_lo, a_hi = alpha_bounds(S1)
    a_peak = alpha_of_q(S1, 0.0)
    print(f"exponent interval: [{a_lo:.10f}, {a_hi:.10f}]")
    print(f"peak at alpha(0) = {a_peak:.10f}, f there = tau(0) = "
          f"{f_of_alpha(S1, a_peak):.10f}")
    print()

    print("alpha    f(alpha)     grid Legendre   envelope")
    for alpha in (0.7, 0.9, 1.0, a_peak, 1.2, 1.4):
        f = f_of_alpha(S1, alpha)
        g = legendre_numeric(S1, alpha)
        print(f"{alpha:6.4f}  {f:11.8f}  {g:13.8f}  {f_bar(S1, alpha):9.6f}")
    print()
    print("below the peak the envelope follows f; above it stays at tau(0),")
    print("which is why level sets keep full size past alpha(0).")


if __name__ == "__main__":
    main()
