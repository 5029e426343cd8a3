"""Brute-force matrix oracle for the classifier's predictions."""
