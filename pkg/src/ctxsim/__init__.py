"""Graded word-similarity-in-context toolkit.

Predicts how much a shared sentence context pulls a word pair's meanings
together or apart, from layer-wise contextual embeddings stored in a
line-delimited interchange format, and scores the predictions with the
task's official correlation metrics.
"""

__version__ = "0.1.0"
