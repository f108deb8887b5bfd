"""trace-explain: mine and serve concept-level explanations for trace links."""

__version__ = "0.1.0"
