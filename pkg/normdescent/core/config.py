from pydantic_settings import BaseSettings, SettingsConfigDict
from typing import List, Union
from functools import lru_cache
import json
from pydantic import Field, field_validator


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_prefix="NORMDESCENT_",
        env_file=".env",
        case_sensitive=True,
        extra="ignore",  # Ignore extra fields in .env
    )

    # Application
    APP_NAME: str = "normdescent"
    APP_VERSION: str = "0.3.0"
    ENVIRONMENT: str = "development"
    DEBUG: bool = False

    # Logging
    LOG_LEVEL: str = "INFO"
    LOG_FORMAT: str = "console"  # console | json

    # Experiments
    THREADS: int = Field(1, ge=1)
    OUTPUT_DIR: str = "./runs"
    CHECKPOINT_EVERY: int = Field(100, ge=1)
    CSV_FLOAT_FORMAT: str = "%.17g"
    DEFAULT_SEED: int = 0

    # API
    API_V1_STR: str = "/api/v1"
    BACKEND_CORS_ORIGINS: Union[List[str], str] = [
        "http://localhost:3000",
        "http://localhost:8888",
    ]

    @field_validator("BACKEND_CORS_ORIGINS", mode="before")
    @classmethod
    def parse_cors_origins(cls, v):
        """Parse CORS origins from string or list"""
        if isinstance(v, str):
            if v.strip():
                try:
                    return json.loads(v)
                except json.JSONDecodeError:
                    return [origin.strip() for origin in v.split(",") if origin.strip()]
            return ["http://localhost:3000"]
        return v

    @field_validator("LOG_LEVEL")
    @classmethod
    def normalize_log_level(cls, v: str) -> str:
        level = v.upper()
        if level not in {"CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG"}:
            raise ValueError(f"unknown log level {v!r}")
        return level


@lru_cache()
def get_settings() -> Settings:
    return Settings()


# Global settings instance
settings = get_settings()
