"""Character-level encoder-decoder with attention, written against numpy."""
