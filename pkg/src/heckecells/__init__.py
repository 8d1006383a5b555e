"""Exact Kazhdan-Lusztig cell data and stratifying-system verification
for finite Weyl groups over cyclotomic localizations of Z[t, t^-1]."""

__version__ = "0.1.0"
