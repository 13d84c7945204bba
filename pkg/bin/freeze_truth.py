#!/usr/bin/env python3
"""Freeze Monte Carlo truths of the truncated exposure effect for every
benchmark scenario into a JSON table, next to the analytic values."""
import json
import os
import sys
from typing import Dict, List

from spatial_iv.model.sim_scenario import Mechanism, OutcomeModel, \
    SimScenario
from spatial_iv.numerics.gp_sim import ScenarioSampler, \
    analytic_truncated_effect, true_truncated_effect

DEFAULT_CUTOFFS = [0.5]
DEFAULT_REPS = 100000


def freeze(cutoffs: List[float], reps: int, seed: int) -> List[Dict]:
    rows = []
    for mechanism in Mechanism:
        for outcome_model in OutcomeModel:
            scenario = SimScenario(
                mechanism=mechanism, outcome_model=outcome_model, seed=seed
            )
            sampler = ScenarioSampler(scenario)
            for c in cutoffs:
                print(f"freezing {mechanism.value}/{outcome_model.value} "
                      f"c={c} with {reps} draws")
                truth = true_truncated_effect(
                    scenario, c, reps, sampler=sampler
                )
                rows.append({
                    'mechanism': mechanism.value,
                    'outcome_model': outcome_model.value,
                    'cutoff': c,
                    'monte_carlo': truth.value,
                    'mc_se': truth.mc_se,
                    'analytic': analytic_truncated_effect(scenario, c),
                    'reps': reps,
                    'seed': seed,
                })
    return rows


def get_settings():
    return {
        'cutoffs': [
            float(c) for c in
            os.environ.get('FREEZE_CUTOFFS', '').split(',') if c
        ] or DEFAULT_CUTOFFS,
        'reps': int(os.environ.get('FREEZE_REPS', DEFAULT_REPS)),
        'seed': int(os.environ.get('FREEZE_SEED', 0)),
    }


if __name__ == "__main__":
    target = sys.argv[1] if len(sys.argv) > 1 else 'frozen_truth.json'
    settings = get_settings()

    table = freeze(settings['cutoffs'], settings['reps'], settings['seed'])
    with open(target, 'w') as out:
        out.write(json.dumps(table, indent=2) + '\n')
    print(f"wrote {len(table)} truths to {target}")
