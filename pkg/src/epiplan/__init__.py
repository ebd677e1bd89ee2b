"""Online epistemic planning with sensing, postdiction and explanation.

Submodules:
  language    domain/problem parsing, validation, grounding
  engine      knowledge-closure backend (compiled or pure Python)
  kernel      branching epistemic tree and closure operations
  planner     weak conditional plan search, quality, selection
  controller  online plan-execute-sense-replan loop
  simworld    ground-truth simulator for closed-loop runs
  cli         command-line entry point
"""

__version__ = "1.0.0"
