"""Coherence checks: Beck-Chevalley, substitution composition, pseudo-limits,
and the span bicategory with its path strictification."""
