"""Layer-wise embedding extractor.

Runs a pretrained contextual model over the two contexts of every dataset
item, aligns the marked target words to the model's sub-tokens, and writes
one interchange record per (item, context, word) with all hidden layers.
"""

__version__ = "0.1.0"
