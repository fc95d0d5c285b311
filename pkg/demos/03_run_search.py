"""Run one seeded search end to end and inspect the results.

The default evaluator is the deterministic surrogate: accuracy grows with
the number of slots matching a fixed pattern that mixes expensive kernels,
so accuracy and size genuinely compete.
"""

from mfnas import RunConfig, run_experiment, best_so_far_curve, top_quintile_analysis
from mfnas.harness import oracle_best
from mfnas.evaluators import surrogate_accuracy
from mfnas.space import PAPER_SPACE, genotype_to_string

summary = run_experiment(RunConfig(strategy="evolution", trials=50, seed=7))

best = summary.best
print(f"best of 50 trials: {genotype_to_string(best.genotype)} "
      f"M={best.m_value:.4f} (accuracy {best.accuracy:.3f}, {best.params:,} params)")

print("\nbest-so-far curve (every 10th trial):")
for trial, m in best_so_far_curve(summary.trial_log)[::10]:
    print(f"  trial {trial:>3}: {m:.4f}")

analysis = top_quintile_analysis(summary.trial_log)
acc, par = analysis["accuracy"], analysis["params"]
print(f"\ntop quintile ({len(analysis['records'])} trials): "
      f"accuracy {acc['min']:.3f}..{acc['max']:.3f}, "
      f"params {par['min']:,}..{par['max']:,}")

# The surrogate is cheap enough to brute-force, so we can see how close the
# search got to the true optimum.
opt_g, opt_m = oracle_best(PAPER_SPACE, surrogate_accuracy, alpha=1.0)
print(f"\nexact optimum: {genotype_to_string(opt_g)} M={opt_m:.4f} "
      f"(search reached {best.m_value / opt_m:.1%} of it)")
