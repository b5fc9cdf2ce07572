"""Corpus BLEU and slot-coverage reports."""
