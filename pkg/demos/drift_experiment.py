"""Cold start against batch and online predictors as instances drift.

Prints mean counters over a sweep of drift magnitudes and writes one CSV.
"""

from warmstart.bench import ExperimentConfig, rows_to_csv, run_experiment, sigma_sweep

for kind in ("matching", "sp", "flow"):
    print(kind)
    for cell in sigma_sweep(kind, 6, 12, [0, 1, 2, 4], range(10)):
        l0 = "-" if cell.mean_l0 is None else f"{cell.mean_l0:5.2f}"
        print(f"  sigma {cell.sigma}  {cell.predictor:>6}  mean l0 {l0:>5}  mean work {cell.mean_counter:5.2f}")

csv_text = rows_to_csv(run_experiment(ExperimentConfig("matching", n=6, steps=4, sigma=1, seed=3)))
print(csv_text)
