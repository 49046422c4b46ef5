class ConfigError(ValueError):
    """Invalid or incomplete configuration, detected before any work starts."""
