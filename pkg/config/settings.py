# =========================================
# KERNEL CONFIGURATION
# Nominal Equational Logic - reasoning kernel
# =========================================

import logging

from pydantic_settings import BaseSettings


class KernelSettings(BaseSettings):
    """Kernel, search and command line settings"""

    # Application Settings
    APP_NAME: str = "nominal-kernel"
    APP_VERSION: str = "1.0.0"

    # Fresh atom supply: FRESH_ATOM_PREFIX + 0, 1, 2, ...
    FRESH_ATOM_PREFIX: str = "a"

    # Search oracle defaults
    SEARCH_MAX_DEPTH: int = 4
    SEARCH_ATOMS: int = 3
    SEARCH_PERM_LEN: int = 1
    SEARCH_MAX_CANDIDATE_TERMS: int = 64

    # Logging
    LOG_LEVEL: str = "WARNING"
    LOG_FORMAT: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

    # Output
    OUTPUT_FORMAT: str = "text"

    class Config:
        env_file = ".env"
        case_sensitive = True
        extra = "ignore"

    @property
    def log_level(self) -> int:
        """Numeric logging level for LOG_LEVEL"""
        return logging.getLevelName(self.LOG_LEVEL.upper()) if self.LOG_LEVEL else logging.WARNING


# Global settings instance
settings = KernelSettings()


def configure_logging(level: int | str | None = None) -> None:
    """Configure root logging once for command line use"""
    if level is None:
        level = settings.log_level
    logging.basicConfig(level=level, format=settings.LOG_FORMAT, force=True)


def print_config():
    """Print current configuration"""
    print("Kernel Configuration:")
    print(f"  App Name: {settings.APP_NAME}")
    print(f"  Version: {settings.APP_VERSION}")
    print(f"  Fresh atom prefix: {settings.FRESH_ATOM_PREFIX}")
    print(f"  Search depth: {settings.SEARCH_MAX_DEPTH}")
    print(f"  Search atoms: {settings.SEARCH_ATOMS}")
    print(f"  Search perm length: {settings.SEARCH_PERM_LEN}")
    print(f"  Search candidate terms: {settings.SEARCH_MAX_CANDIDATE_TERMS}")
    print(f"  Log level: {settings.LOG_LEVEL}")
    print(f"  Output format: {settings.OUTPUT_FORMAT}")


if __name__ == "__main__":
    print_config()
