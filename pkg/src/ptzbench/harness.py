"""End-to-end evaluation: prompt, complete, parse, simulate, score, report.

Per-task isolation: a parse rejection or a gateway error never aborts the
run; the task lands in the report with zero scores and an explicit
status. With a scripted endpoint and a fixed seed the whole report is
byte-deterministic, which the replay and regression tests rely on.
"""

from __future__ import annotations

import json
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Sequence

from .camera import simulate
from .commands import parse_response
from .datagen import Instance, load_dataset
from .gateway import EndpointSpec, GatewayError, complete
from .metrics import BootstrapReport, aa, bma, bootstrap_compare
from .prompting import PromptConfig, build_prompt


class TaskSetMismatch(ValueError):
    pass


SCORING_CONVENTIONS = {
    "bma_normalization": "max(n_model, n_expert)",
    "empty_frames": "both empty -> 1.0, exactly one empty -> 0.0",
    "unparseable_response": "scored (0.0, 0.0) with parse_accepted = false",
}


@dataclass(frozen=True)
class EvalRunConfig:
    dataset_path: str
    endpoint: EndpointSpec
    prompt: PromptConfig = field(default_factory=PromptConfig)
    concurrency: int = 4
    output_path: str | None = None
    seed: int = 0
    shuffle_examples: bool = False

    def __post_init__(self) -> None:
        if self.concurrency < 1:
            raise ValueError("concurrency must be >= 1")


def _run_task(instance: Instance, endpoint: EndpointSpec, prompt_config: PromptConfig) -> dict:
    expert_outcome = parse_response(instance.response, instance.scene)
    expert_sim = simulate(instance.scene, instance.initial_state, expert_outcome.commands)
    expert_frames = expert_sim.viewports()
    record = {
        "task_id": instance.instance_id,
        "n_expert_frames": len(expert_frames),
        "n_model_frames": 0,
        "parse_accepted": False,
        "bma": 0.0,
        "aa": 0.0,
        "status": "ok",
    }
    prompt = build_prompt(instance.scene, instance.initial_state, instance.request, prompt_config)
    try:
        exchange = complete(endpoint, prompt)
    except GatewayError as exc:
        record["status"] = "gateway_error"
        record["error"] = f"{type(exc).__name__}: {exc}"
        return record
    outcome = parse_response(exchange.response_text, instance.scene)
    model_frames = []
    if outcome.accepted:
        model_sim = simulate(instance.scene, instance.initial_state, outcome.commands)
        model_frames = model_sim.viewports()
    record["parse_accepted"] = outcome.accepted
    record["n_model_frames"] = len(model_frames)
    record["bma"] = bma(model_frames, expert_frames)
    record["aa"] = aa(model_frames, expert_frames)
    return record


def evaluate(config: EvalRunConfig, instances: Sequence[Instance] | None = None) -> dict:
    """Evaluate one endpoint over an expert dataset and build the report.

    Loads the dataset (unless instances are passed directly), runs tasks
    concurrently up to the configured cap, merges results by task id, and
    writes the report JSON to config.output_path when set.
    """
    if instances is None:
        instances = load_dataset(config.dataset_path)
    if not instances:
        raise ValueError("dataset is empty")

    prompt_config = config.prompt
    if config.shuffle_examples and prompt_config.example_pool:
        shuffled = list(prompt_config.example_pool)
        random.Random(config.seed).shuffle(shuffled)
        prompt_config = replace(prompt_config, example_pool=tuple(shuffled))

    results: dict[str, dict] = {}
    if config.concurrency == 1:
        for instance in instances:
            results[instance.instance_id] = _run_task(instance, config.endpoint, prompt_config)
    else:
        with ThreadPoolExecutor(max_workers=config.concurrency) as pool:
            futures = {
                instance.instance_id: pool.submit(_run_task, instance, config.endpoint, prompt_config)
                for instance in instances
            }
            for task_id, future in futures.items():
                results[task_id] = future.result()

    tasks = [results[task_id] for task_id in sorted(results)]
    n = len(tasks)
    report = {
        "meta": {
            "dataset": config.dataset_path or "(in-memory)",
            "model_name": config.endpoint.model_name,
            "shots": prompt_config.shots,
            "seed": config.seed,
            "task_count": n,
            "conventions": SCORING_CONVENTIONS,
        },
        "tasks": tasks,
        "aggregate": {
            "bma_mean": sum(t["bma"] for t in tasks) / n,
            "aa_mean": sum(t["aa"] for t in tasks) / n,
        },
        "bootstrap": [],
    }
    if config.output_path:
        write_report(report, config.output_path)
    return report


def write_report(report: dict, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_report(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def paired_scores(report_a: dict, report_b: dict, metric: str) -> tuple[list[float], list[float]]:
    """Per-task scores from two reports, paired by task id."""
    if metric not in ("bma", "aa"):
        raise ValueError(f"metric must be 'bma' or 'aa', got {metric!r}")
    by_id_a = {t["task_id"]: t for t in report_a["tasks"]}
    by_id_b = {t["task_id"]: t for t in report_b["tasks"]}
    if set(by_id_a) != set(by_id_b):
        only_a = sorted(set(by_id_a) - set(by_id_b))[:3]
        only_b = sorted(set(by_id_b) - set(by_id_a))[:3]
        raise TaskSetMismatch(f"task sets differ (a-only {only_a}, b-only {only_b})")
    task_ids = sorted(by_id_a)
    return (
        [float(by_id_a[t][metric]) for t in task_ids],
        [float(by_id_b[t][metric]) for t in task_ids],
    )


def compare(
    report_a: dict,
    report_b: dict,
    metric: str = "bma",
    iterations: int = 1000,
    sample_size: int = 100,
    alpha: float = 0.05,
    seed: int = 0,
) -> BootstrapReport:
    """Bootstrap comparison of two evaluation reports on one metric."""
    scores_a, scores_b = paired_scores(report_a, report_b, metric)
    return bootstrap_compare(
        scores_a,
        scores_b,
        iterations=iterations,
        sample_size=sample_size,
        alpha=alpha,
        seed=seed,
        metric=metric,
    )
