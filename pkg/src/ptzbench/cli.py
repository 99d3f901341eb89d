"""Command-line surface.

Subcommands: simulate, eval, datagen, filter, score, compare, validate,
serve, prompt. Every command exits 0 on success and nonzero with a
diagnostic on stderr otherwise; --seed is accepted wherever randomness
exists.
"""

from __future__ import annotations

import argparse
import json
import sys

from .camera import CameraState, SimResult, simulate
from .commands import parse_response
from .datagen import (
    DEFAULT_BATCH_SIZE,
    DEFAULT_TARGET,
    STYLES,
    filter_instances,
    load_dataset,
    run_generation,
    save_dataset,
)
from .gateway import load_endpoint_config
from .harness import EvalRunConfig, compare, evaluate, load_report
from .metrics import aa, bma
from .prompting import PromptConfig, build_prompt
from .scene import ENVIRONMENTS, load_scene
from .service import serve


def _write_json(payload: dict, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _cmd_simulate(args: argparse.Namespace) -> int:
    scene = load_scene(args.scene)
    with open(args.commands, "r", encoding="utf-8") as fh:
        command_text = fh.read()
    outcome = parse_response(command_text, scene)
    if not outcome.accepted:
        for diag in outcome.diagnostics:
            print(f"commands rejected: {diag.kind} at {diag.position}: {diag.text}", file=sys.stderr)
        return 1
    initial = CameraState(pan=args.pan, tilt=args.tilt, zoom=args.zoom)
    result = simulate(scene, initial, outcome.commands)
    _write_json(result.to_dict(), args.out)
    print(f"simulated {len(outcome.commands)} commands into {len(result.frames)} frames -> {args.out}")
    return 0


def _cmd_score(args: argparse.Namespace) -> int:
    def frames_of(path: str):
        with open(path, "r", encoding="utf-8") as fh:
            return SimResult.from_dict(json.load(fh)).viewports()

    model_frames = frames_of(args.model_frames)
    expert_frames = frames_of(args.expert_frames)
    scores = {"bma": bma(model_frames, expert_frames), "aa": aa(model_frames, expert_frames)}
    print(json.dumps(scores, indent=2, sort_keys=True))
    return 0


def _cmd_eval(args: argparse.Namespace) -> int:
    endpoint = load_endpoint_config(args.endpoint_config)
    example_pool = ()
    if args.examples:
        example_pool = tuple(load_dataset(args.examples))
    config = EvalRunConfig(
        dataset_path=args.dataset,
        endpoint=endpoint,
        prompt=PromptConfig(shots=args.shots, example_pool=example_pool),
        concurrency=args.concurrency,
        output_path=args.out,
        seed=args.seed,
        shuffle_examples=args.shuffle_examples,
    )
    report = evaluate(config)
    aggregate = report["aggregate"]
    print(
        f"evaluated {report['meta']['task_count']} tasks: "
        f"bma_mean={aggregate['bma_mean']:.4f} aa_mean={aggregate['aa_mean']:.4f} -> {args.out}"
    )
    return 0


def _cmd_compare(args: argparse.Namespace) -> int:
    report = compare(
        load_report(args.a),
        load_report(args.b),
        metric=args.metric,
        iterations=args.iterations,
        sample_size=args.sample_size,
        alpha=args.alpha,
        seed=args.seed,
    )
    print(json.dumps(report.to_dict(), indent=2, sort_keys=True))
    if args.out:
        _write_json(report.to_dict(), args.out)
    return 0


def _cmd_datagen(args: argparse.Namespace) -> int:
    seed_pool = load_dataset(args.seeds)
    endpoint = load_endpoint_config(args.endpoint_config, default_temperature=1.0)
    environments = args.environments.split(",") if args.environments else sorted(ENVIRONMENTS)
    styles = args.styles.split(",") if args.styles else list(STYLES)
    result = run_generation(
        endpoint=endpoint,
        target_count=args.target,
        env_mix={name: 1.0 for name in environments},
        style_mix={name: 1.0 for name in styles},
        seed=args.seed,
        seed_pool=seed_pool,
        batch_size=args.batch_size,
        checkpoint_path=args.checkpoint,
        max_batches=args.max_batches,
    )
    save_dataset(result.dataset, args.out)
    if args.stats:
        _write_json(result.stats.to_dict(), args.stats)
    print(
        f"kept {len(result.dataset)} instances over {len(result.audits)} batches "
        f"(reject_rate={result.stats.reject_rate:.3f}) -> {args.out}"
    )
    return 0


def _cmd_filter(args: argparse.Namespace) -> int:
    candidates = load_dataset(getattr(args, "in"), validate=False)
    kept, stats = filter_instances(candidates)
    save_dataset(kept, args.out)
    if args.stats:
        _write_json(stats.to_dict(), args.stats)
    print(f"kept {stats.kept}/{stats.total} (reject_rate={stats.reject_rate:.3f}) -> {args.out}")
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    instances = load_dataset(args.dataset, validate=False)
    failures = 0
    for instance in instances:
        outcome = parse_response(instance.response, instance.scene)
        if outcome.accepted:
            simulate(instance.scene, instance.initial_state, outcome.commands)
        else:
            failures += 1
            kinds = ",".join(outcome.diagnostic_kinds())
            print(f"{instance.instance_id}: rejected ({kinds})", file=sys.stderr)
    print(f"{len(instances) - failures}/{len(instances)} instances valid")
    return 0 if failures == 0 else 1


def _cmd_prompt(args: argparse.Namespace) -> int:
    instances = load_dataset(args.instance, validate=False)
    if not instances:
        print("no instances in file", file=sys.stderr)
        return 1
    target, pool = instances[0], tuple(instances[1:])
    config = PromptConfig(shots=args.shots, example_pool=pool)
    prompt = build_prompt(target.scene, target.initial_state, target.request, config)
    _write_json({"system_text": prompt.system_text, "user_text": prompt.user_text}, args.dump)
    print(f"prompt fingerprint {prompt.fingerprint} ({prompt.example_count} examples) -> {args.dump}")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    endpoint = load_endpoint_config(args.endpoint_config) if args.endpoint_config else None
    serve(port=args.port, host=args.host, endpoint=endpoint, persist_path=args.persist)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ptzbench", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="expand a command file into frames")
    p.add_argument("--scene", required=True)
    p.add_argument("--commands", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--pan", type=float, default=0.0)
    p.add_argument("--tilt", type=float, default=0.0)
    p.add_argument("--zoom", type=float, default=1.0)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("eval", help="evaluate an endpoint over an expert dataset")
    p.add_argument("--dataset", required=True)
    p.add_argument("--endpoint-config", required=True)
    p.add_argument("--shots", type=int, default=0)
    p.add_argument("--examples", help="example pool JSONL for multi-shot prompts")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--concurrency", type=int, default=4)
    p.add_argument("--shuffle-examples", action="store_true")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("datagen", help="generate a synthetic dataset from a seed store")
    p.add_argument("--seeds", required=True)
    p.add_argument("--target", type=int, default=DEFAULT_TARGET)
    p.add_argument("--out", required=True)
    p.add_argument("--stats")
    p.add_argument("--endpoint-config", required=True)
    p.add_argument("--checkpoint")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--batch-size", type=int, default=DEFAULT_BATCH_SIZE)
    p.add_argument("--max-batches", type=int, default=None)
    p.add_argument("--environments", help="comma-separated environment mix (uniform weights)")
    p.add_argument("--styles", help="comma-separated style mix (uniform weights)")
    p.set_defaults(func=_cmd_datagen)

    p = sub.add_parser("filter", help="run the validity filter over candidates")
    p.add_argument("--in", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--stats")
    p.set_defaults(func=_cmd_filter)

    p = sub.add_parser("score", help="score two frame-sequence files")
    p.add_argument("--model-frames", required=True)
    p.add_argument("--expert-frames", required=True)
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser("compare", help="bootstrap-compare two evaluation reports")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--metric", choices=("bma", "aa"), default="bma")
    p.add_argument("--iterations", type=int, default=1000)
    p.add_argument("--sample-size", type=int, default=100)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("validate", help="check every instance of a dataset")
    p.add_argument("--dataset", required=True)
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("serve", help="run the interactive camera service")
    p.add_argument("--port", type=int, required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--endpoint-config")
    p.add_argument("--persist", help="JSONL transcript persistence path")
    p.set_defaults(func=_cmd_serve)

    p = sub.add_parser("prompt", help="dump the assembled prompt for an instance")
    p.add_argument("--instance", required=True, help="JSONL file; first line is the target")
    p.add_argument("--shots", type=int, default=0)
    p.add_argument("--dump", required=True)
    p.set_defaults(func=_cmd_prompt)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
