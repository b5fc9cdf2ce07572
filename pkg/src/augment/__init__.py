"""Synthetic (MR, RF, label) triplets for adequacy classification."""
