"""
char2char

Character-level MR-to-text generation with beam search and n-best
re-ranking by a reverse model or an adequacy classifier.
"""

__version__ = "0.1.0"
