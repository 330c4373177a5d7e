"""Estimation error shrinks as the sample grows.

Replicates the plug-in estimator at several sample sizes and tabulates
the median absolute error.  The medians fall roughly like 1/sqrt(n),
which the built-in "lln" check asserts as strict decrease.
"""

from symkl import ExperimentConfig, PopulationModel, run_experiment


def main() -> None:
    model = PopulationModel(
        label_prob=0.5, cond_p=(0.5, 0.5), cond_q=(0.25, 0.75)
    )
    config = ExperimentConfig(
        model=model,
        n_values=(1_000, 10_000, 100_000),
        replications=200,
        master_seed=42,
        checks=("lln",),
    )
    result = run_experiment(config)

    print(f"true divergence: {result.summary.true_divergence:.6f}")
    print(f"{'n':>8}  {'median |error|':>15}  {'sqrt(n) * median':>17}")
    for stats in result.summary.per_n:
        scaled = stats.median_abs_eta * stats.n ** 0.5
        print(f"{stats.n:>8}  {stats.median_abs_eta:>15.6f}  {scaled:>17.4f}")
    print("\nthe last column hovers near a constant: the error decays like "
          "1/sqrt(n)")

    for check in result.summary.checks:
        status = "pass" if check.passed else "FAIL"
        print(f"\ncheck {check.name}: {status}")
        print(f"  {check.detail}")


if __name__ == "__main__":
    main()
