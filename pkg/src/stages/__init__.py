"""Pipeline stages, one per CLI subcommand, and the Pipeline that runs them."""
