"""Domain types, abstract bases and the error hierarchy."""
