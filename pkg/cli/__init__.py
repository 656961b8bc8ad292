"""slcheck command-line interface."""
