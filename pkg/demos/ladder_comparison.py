"""Three-level cascade vs two-photon effective model.

The photon-pair coupling Omega_b = g^2/Delta arises from a three-level
cascade whose middle level sits a detuning Delta away.  This script
integrates the full cascade at g/Delta = 1e-2 and compares it with the
two-level model obtained by eliminating the middle level.

Two lessons fall out:
  1. The middle level really is bypassed - its population stays at the
     (g/Delta)^2 level throughout.
  2. Elimination also shifts the outer levels by g^2/Delta and
     2 g^2/Delta.  That differential shift is the same size as the
     two-photon coupling sqrt(2) g^2/Delta itself, so the bare Rabi
     model is detuned by an O(1) fraction of its own rate and its
     transfer caps at 8/9 - no matter how small g/Delta gets.  Keeping
     the shifts restores agreement to a residual that shrinks ~
     quadratically in g/Delta.

Run:  python3 demos/ladder_comparison.py
"""

from squidsim.ladder import LadderParams, compare_effective_vs_full


def main():
    for g_over_delta in (2e-2, 1e-2, 5e-3):
        g = g_over_delta  # Delta = 1 with these gaps
        p = LadderParams.from_gaps(g, 9.0, 11.0)
        c = compare_effective_vs_full(p)
        print(f"g/Delta = {g_over_delta:g}")
        print(f"  nominal two-photon Rabi rate sqrt(2) g^2/Delta = "
              f"{c.rabi_rate_nominal:.3e}")
        print(f"  measured rate in the full cascade            = "
              f"{c.rabi_rate_measured:.3e}")
        print(f"  max intermediate-level population            = "
              f"{c.max_intermediate_population:.3e} "
              f"(bound 10 (g/Delta)^2 = {10 * g_over_delta ** 2:.1e})")
        print(f"  outer-population mismatch, bare model        = "
              f"{c.max_outer_discrepancy:.3f}")
        print(f"  outer-population mismatch, with level shifts = "
              f"{c.max_outer_discrepancy_shift_corrected:.2e}")
        print()
    print("The bare-model mismatch is rate-independent (detuned-Rabi cap")
    print("1/9 of the population), while the shift-corrected residual")
    print("vanishes with g/Delta.")


if __name__ == "__main__":
    main()
