"""Storage layer for configurations, reports and verification history."""
