"""Rate against distance for both QKD presets and the KEM reference.

Writes one CSV per curve (default: ./out) and prints the crossover distances.
"""

import argparse
from pathlib import Path

from hybridkd.linkrates import KEM_PRESETS, QKD_PRESETS, curve_csv, kem_rate, qkd_rate, rate_curve


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="out")
    ap.add_argument("--max-km", type=float, default=300)
    ap.add_argument("--step", type=float, default=1)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    curves = {name: rate_curve(p, 0, args.max_km, args.step) for name, p in QKD_PRESETS.items()}
    curves.update({name: rate_curve(p, 0, args.max_km, args.step) for name, p in KEM_PRESETS.items()})
    for name, pts in curves.items():
        (out / f"curve_{name}.csv").write_text(curve_csv(pts))

    kem = kem_rate(KEM_PRESETS["kyber1024-pc"])
    for name, params in QKD_PRESETS.items():
        pts = curves[name]
        above = [d for d, r in pts if r > kem]
        cutoff = next((d for d, r in pts if r == 0), None)
        print(f"{name:>10}: 10 km {qkd_rate(params, 10):.4e} bps, above KEM up to {max(above):g} km, zero from {cutoff} km")
    print(f"kyber1024-pc: {kem:.4e} bps; CSVs in {out}/")


if __name__ == "__main__":
    main()
