"""The evaluation harness, end to end, entirely offline.

Replaying the expert responses through the full prompt -> complete ->
parse -> simulate -> score pipeline is the oracle: every task must come
back with perfect agreement. A degraded model (final command dropped)
shows how bma and aa separate.
"""

import random

from ptzbench import EvalRunConfig, compare, evaluate
from ptzbench.fixtures import load_shipped_expert_dataset
from ptzbench.gateway import scripted_from_dataset, scripted_transform

dataset = load_shipped_expert_dataset()
print(f"expert benchmark: {len(dataset)} tasks")

replay = evaluate(EvalRunConfig(dataset_path="", endpoint=scripted_from_dataset(dataset)), instances=dataset)
print(f"replay aggregates: bma={replay['aggregate']['bma_mean']:.3f} aa={replay['aggregate']['aa_mean']:.3f}")
print()


def drop_last_command(response: str) -> str:
    return "\n".join(response.splitlines()[:-1])


rng = random.Random(0)


def sometimes_silent(response: str) -> str:
    return "I would rather wait." if rng.random() < 0.3 else response


truncated = evaluate(
    EvalRunConfig(dataset_path="", endpoint=scripted_transform(dataset, drop_last_command)),
    instances=dataset,
)
flaky = evaluate(
    EvalRunConfig(dataset_path="", endpoint=scripted_transform(dataset, sometimes_silent)),
    instances=dataset,
)
print("degraded models:")
print(
    f"  truncated: bma={truncated['aggregate']['bma_mean']:.3f} "
    f"aa={truncated['aggregate']['aa_mean']:.3f}  (aa forgives a missing tail more than bma)"
)
parse_failures = sum(1 for t in flaky["tasks"] if not t["parse_accepted"])
print(
    f"  flaky:     bma={flaky['aggregate']['bma_mean']:.3f} "
    f"aa={flaky['aggregate']['aa_mean']:.3f}  ({parse_failures} unparseable replies scored zero)"
)
print()

report = compare(truncated, flaky, metric="bma", iterations=1000, sample_size=100, alpha=0.05, seed=1)
print(
    f"bootstrap truncated-vs-flaky on bma: mean_diff={report.mean_diff:+.3f}, "
    f"p={report.p_value:.4f}, significant={report.significant}"
)
