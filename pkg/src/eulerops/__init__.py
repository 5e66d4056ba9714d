"""Monomial-space solutions of linear ODEs with exact arithmetic."""
