"""ptzbench: language-driven PTZ camera control at desk scale.

A deterministic pan-tilt-zoom camera simulator with a small command DSL,
trajectory agreement metrics with bootstrap significance, a self-instruct
dataset pipeline, and an evaluation harness that treats any
chat-completion endpoint (remote, local, or scripted) as the model under
test. See the demos/ directory of the source tree for worked tours of
each capability.
"""

from .camera import CameraState, Frame, SimResult, fit_zoom, simulate, viewport_of
from .commands import (
    Command,
    CommandDoc,
    Diagnostic,
    ParseOutcome,
    api_docs,
    parse_response,
    serialize,
)
from .datagen import (
    FilterStats,
    GenBatchSpec,
    Instance,
    build_generation_prompt,
    filter_instances,
    load_dataset,
    parse_generation_output,
    run_generation,
    save_dataset,
)
from .gateway import (
    ChatExchange,
    EndpointSpec,
    complete,
    scripted_from_dataset,
    scripted_transform,
)
from .geometry import WORLD, AngularRect
from .harness import EvalRunConfig, compare, evaluate
from .metrics import BootstrapReport, ScorePair, aa, bma, bootstrap_compare, iou, union_area
from .prompting import AssembledPrompt, PromptConfig, build_prompt
from .scene import (
    ENVIRONMENTS,
    Scene,
    SceneObject,
    describe_observations,
    generate_scene,
    load_scene,
    save_scene,
)

__version__ = "0.1.0"

__all__ = [
    "AngularRect",
    "AssembledPrompt",
    "BootstrapReport",
    "CameraState",
    "ChatExchange",
    "Command",
    "CommandDoc",
    "Diagnostic",
    "ENVIRONMENTS",
    "EndpointSpec",
    "EvalRunConfig",
    "FilterStats",
    "Frame",
    "GenBatchSpec",
    "Instance",
    "ParseOutcome",
    "PromptConfig",
    "Scene",
    "SceneObject",
    "ScorePair",
    "SimResult",
    "WORLD",
    "aa",
    "api_docs",
    "bma",
    "bootstrap_compare",
    "build_generation_prompt",
    "build_prompt",
    "compare",
    "complete",
    "describe_observations",
    "evaluate",
    "filter_instances",
    "fit_zoom",
    "generate_scene",
    "iou",
    "load_dataset",
    "load_scene",
    "parse_generation_output",
    "parse_response",
    "run_generation",
    "save_dataset",
    "save_scene",
    "scripted_from_dataset",
    "scripted_transform",
    "serialize",
    "simulate",
    "union_area",
    "viewport_of",
]
