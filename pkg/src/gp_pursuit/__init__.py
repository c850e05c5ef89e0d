"""Cops and robbers on generalised Petersen graphs."""
