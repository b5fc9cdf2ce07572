"""File formats: CSV corpora, checkpoints, n-best records, async text files."""
