"""File schemas and command handlers."""
