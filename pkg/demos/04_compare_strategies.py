"""Compare the four search strategies over many seeds.

With a 50-trial budget on the default surrogate, regularized evolution and
the policy-gradient controller typically beat random search, while TPE sits
near the random baseline on this small space.
"""

from mfnas import RunConfig, compare_strategies

cfgs = [RunConfig(strategy=name, trials=50)
        for name in ("random", "tpe", "policy_rl", "evolution")]
rows = compare_strategies(cfgs, seeds=range(10), jobs=4)

print(f"{'strategy':<12} {'median M':>9} {'best M':>9} {'accuracy':>9} {'params':>9}")
for row in sorted(rows, key=lambda r: -r["median_best_m"]):
    print(f"{row['strategy']:<12} {row['median_best_m']:>9.4f} {row['best_m']:>9.4f} "
          f"{row['accuracy']:>9.4f} {row['params']:>9,}")

print("\nper-seed best M for the winner:")
winner = max(rows, key=lambda r: r["median_best_m"])
for seed, m in winner["per_seed"].items():
    print(f"  seed {seed}: {m:.4f}")
