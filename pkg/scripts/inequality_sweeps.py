"""Run the polynomial positivity sweeps and the comparison claim over their full grids."""

from spectral_kmatch.extremal import (
    compare_section1_claim,
    sweep_T_identity,
    sweep_g_positive,
    sweep_psi_positive,
    sweep_rho_bound,
)


def main() -> None:
    for r in (sweep_g_positive(), sweep_psi_positive(), sweep_T_identity(), sweep_rho_bound()):
        print(f"{r.name:12s} points={r.points:6d} min={r.minimum:.6g} {'ok' if r.ok else 'FAIL ' + repr(r.failures[:3])}")
    pairs = [(n, t) for t in (2, 3, 4) for n in range(max(8, 2 * t + 2), 31, 2)]
    bad = [(n, t) for n, t in pairs if not compare_section1_claim(n, t)]
    print(f"comparison   pairs={len(pairs)} {'ok' if not bad else 'FAIL ' + repr(bad)}")


if __name__ == "__main__":
    main()
