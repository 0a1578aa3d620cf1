"""Graph reasoning problems, grading and path selection."""

import json

from . import _core
from ._core import (
    GraphReasonError,
    dpo_loss,
    extract_answer,
    similarity,
    solve_text,
    stub_complete,
    tasks,
)

__all__ = [
    "GraphReasonError",
    "cot_prompt",
    "dpo_loss",
    "evaluate",
    "extract_answer",
    "generate",
    "grade",
    "instruction",
    "render",
    "select_diverse",
    "similarity",
    "solve_text",
    "stub_complete",
    "tasks",
]


def _line(problem):
    return problem if isinstance(problem, str) else json.dumps(problem)


def generate(task, count, seed=0):
    """List of problem dicts in the problems.jsonl schema."""
    return [json.loads(line) for line in _core.generate(task, count, seed)]


def render(problem):
    return _core.render(_line(problem))


def instruction(problem):
    return _core.instruction(_line(problem))


def cot_prompt(problem, shots=2):
    return _core.cot_prompt(_line(problem), shots)


def grade(problem, text, validate_witness=True):
    return _core.grade(_line(problem), text, validate_witness)


def select_diverse(paths, cap=5, seed=0, embed=True):
    return _core.select_diverse(list(paths), cap, seed, embed)


def evaluate(problems, predictions):
    """predictions maps problem id to model output; returns the report dict."""
    return json.loads(_core.evaluate([_line(p) for p in problems], dict(predictions)))
