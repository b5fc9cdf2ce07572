"""Adequacy classifier: match lexicon, string-matching features, logistic regression."""
