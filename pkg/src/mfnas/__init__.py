"""mfnas: harmonic accuracy/size trade-off search over a ResNet kernel-choice space."""

from .costs import ModelCost, conv_params, count_macs, count_params, model_cost, p_min
from .evaluators import (DEFAULT_SURROGATE, Evaluation, ExternalSession,
                         SurrogateEvaluator, SurrogateSpec, TableEvaluator,
                         surrogate_accuracy, table_accuracy)
from .harness import (RunConfig, RunSummary, TrialRecord, best_so_far_curve,
                      compare_strategies, oracle_best, run_experiment,
                      top_quintile_analysis)
from .metrics import m_alpha, m_factor, netscore, s_prime
from .space import (PAPER_SPACE, Genotype, KernelChoice, SpaceSpec, decode, encode,
                    enumerate_space, genotype_from_string, genotype_to_string,
                    mutate_one_slot, sample_uniform)
from .strategies import (PolicyGradient, RandomSearch, RegularizedEvolution,
                         SearchStrategy, TpeSearch, make_strategy)

__version__ = "0.1.0"
