"""slcheck test suite."""
