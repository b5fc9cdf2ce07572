"""N-best re-rankers: forward top-1, reverse-model edit distance, adequacy classifier."""
