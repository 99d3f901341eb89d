"""Self-instruct dataset generation with the validity filter.

Every generation prompt packs 8 worked conversations (4 from the seed
store, 4 from the growing generated pool), an environment keyword, and a
style keyword. A scripted generator stands in for a live model here, so
the run is fully offline and deterministic.
"""

from ptzbench import EndpointSpec, run_generation
from ptzbench.datagen import filter_instances
from ptzbench.fixtures import build_filter_corpus, build_seed_dataset, scripted_generator

seeds = build_seed_dataset()
print(f"seed store: {len(seeds)} conversations, e.g.")
example = seeds[0]
print(f"  [{example.environment}] {example.request!r} -> {example.response.splitlines()}")
print()

# one generation prompt, rendered
result = run_generation(
    endpoint=EndpointSpec(responder=scripted_generator(invalid_per_batch=3)),
    target_count=70,
    seed=5,
    seed_pool=seeds,
    batch_size=10,
)
stats = result.stats
print(f"generated until {stats.kept} kept (target 70), reject_rate = {stats.reject_rate:.2f}")
print(f"rejections by kind: {dict(sorted(stats.rejected_by_kind.items()))}")
print()

print("per-batch prompt composition (seed ids | pool ids):")
for audit in result.audits[:4]:
    print(
        f"  batch {audit.batch_index}: {audit.environment}/{audit.style:8s} "
        f"{list(audit.seed_example_ids)} | {list(audit.pool_example_ids)}"
    )
print("  ... pool examples switch from seed backfill to gen_* ids as the pool grows")
print()

# the filter in isolation, on the shipped 30%-corrupted corpus
corpus, invalid_ids = build_filter_corpus()
kept, stats = filter_instances(corpus)
print(
    f"shipped corpus: {len(corpus)} candidates, {len(invalid_ids)} corrupted -> "
    f"kept {stats.kept}, reject_rate {stats.reject_rate:.2f}"
)
