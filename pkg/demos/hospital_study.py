"""Robust aggregation of per-unit covariance estimates under contamination.

Each simulated unit samples a contaminated Gaussian cloud (the
contamination fraction is Beta-distributed, about 10% on average), fits
a concentration-step robust location-scatter estimate, and the per-unit
estimates are aggregated three ways.  Units whose clouds were heavily
contaminated yield estimates far from the clean target; the trimmed
barycenter down-weights them automatically, so it usually lands closer
to the truth than both the plain barycenter and the linear mean.
"""

import numpy as np

from wcons.simulation import HospitalConfig, hospital_experiment


def main():
    print("seed   w2_sq bary   w2_sq trim   w2_sq lin   over20  winner")
    wins = 0
    seeds = range(5)
    for seed in seeds:
        cfg = HospitalConfig(k=40, n=80, seed=seed)
        rep = hospital_experiment(cfg)
        scores = {"barycenter": rep.w2_sq_barycenter,
                  "trimmed": rep.w2_sq_trimmed,
                  "linear": rep.w2_sq_linear}
        winner = min(scores, key=scores.get)
        wins += winner == "trimmed"
        print(f"{seed:4d}   {rep.w2_sq_barycenter:10.4f}   "
              f"{rep.w2_sq_trimmed:10.4f}   {rep.w2_sq_linear:9.4f}   "
              f"{rep.units_over_20pct:6d}  {winner}")
    print(f"\ntrimmed barycenter closest in {wins}/{len(list(seeds))} runs")

    rep = hospital_experiment(HospitalConfig(k=40, n=80, seed=0))
    counts = np.array(rep.unit_outlier_counts)
    print(f"contamination per unit: mean {counts.mean() / 80:.1%}, "
          f"max {counts.max() / 80:.1%}, "
          f"{rep.units_over_20pct} units above 20%")


if __name__ == "__main__":
    main()
