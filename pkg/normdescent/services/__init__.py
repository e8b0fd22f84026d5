# Work behind the CLI commands and the HTTP routes
