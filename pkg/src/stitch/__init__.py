"""Reference-guided tutoring engine for Scratch projects.

Compares a student's project against a teacher's reference, reports
semantically meaningful differences one step at a time with rendered block
fragments and short explanations, and applies accepted fixes until the two
projects are functionally equivalent.
"""

from .diff import DiffConfig, DiffItem, DiffReport, diff_projects
from .llm import ProviderConfig
from .model import ProjectAst
from .normalize import NormalizedAst, normalize
from .render import RenderSpec, to_render_spec, to_text
from .repair import Patch, apply_patch, synthesize_patch
from .sb3 import load_project, pack_project, serialize_project
from .session import SessionStore, TutorEngine, run_batch

__all__ = [
    "DiffConfig",
    "DiffItem",
    "DiffReport",
    "NormalizedAst",
    "Patch",
    "ProjectAst",
    "ProviderConfig",
    "RenderSpec",
    "SessionStore",
    "TutorEngine",
    "apply_patch",
    "diff_projects",
    "load_project",
    "normalize",
    "pack_project",
    "run_batch",
    "serialize_project",
    "synthesize_patch",
    "to_render_spec",
    "to_text",
]

__version__ = "0.1.0"
