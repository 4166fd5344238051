"""Detect item-writing flaws in multiple-choice questions."""

from .model import CRITERIA, Criterion, FlawReport, FlawSet, LabelMatrix, Question

__version__ = "0.1.0"

__all__ = ["CRITERIA", "Criterion", "FlawReport", "FlawSet", "LabelMatrix", "Question", "__version__"]
