import os

from coalescent import Orchestrator
from coalescent.traffic.trace import generate_poisson_trace

os.makedirs('generated', exist_ok=True)

# Create orchestrator instance from file.
orchestrator = Orchestrator.read_config('test-experiment.yaml')

# Write the load sweep to 'generated'.
orchestrator.write(orchestrator.sweep(), 'generated/sweep.csv')

# Replay a synthetic 10 Gb/s Poisson trace of 10 ms.
records = generate_poisson_trace(10e9 / (8 * 1500), 1500, 0.01, seed=7)
orchestrator.write(orchestrator.trace(records), 'generated/trace.csv')
