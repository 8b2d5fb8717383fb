"""
Application Configuration Module.

Centralized configuration using Pydantic Settings. Values come from
environment variables (prefixed ``VFKIT_``) or a ``.env`` file, and every
desk-scale cap used by the algebra and the oracle is declared here.
Command-line flags override these per invocation.
"""
import os

from pydantic import Field, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

_LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


class Settings(BaseSettings):
    """
    Toolkit settings.

    Environment Variables:
        VFKIT_SEED: Seed for random words and corpus generation
        VFKIT_LOG_LEVEL: Logging level (DEBUG, INFO, WARNING, ERROR)
        VFKIT_LOG_TO_FILE: Also write a plain-text log file
        VFKIT_LOG_DIR: Directory for log files
        VFKIT_OUTPUT_DIR: Directory for report files

        VFKIT_MAX_GROUP_ORDER: Largest accepted vertex/edge group order
        VFKIT_MAX_ISO_VERTICES: Largest graph accepted by the isomorphism test
        VFKIT_MAX_BALL_RADIUS: Largest tree-ball radius
        VFKIT_MAX_BALL_VERTICES: Vertex cap for tree balls
        VFKIT_MAX_ELEMENT_SET: Cap on enumerated subgroup elements

        VFKIT_ORACLE_RADIUS / VFKIT_ORACLE_LENGTH: Oracle defaults (R, L)
        VFKIT_STAB_RADIUS: Radius of edges inspected for stabilizer counts

        VFKIT_CORPUS_*: Corpus generation knobs
    """

    # === Reproducibility ===
    seed: int = Field(
        default=0,
        validation_alias='VFKIT_SEED',
        ge=0,
        description="Seed for random words and corpus generation"
    )

    # === Logging / Output ===
    log_level: str = Field(
        default="WARNING",
        validation_alias='VFKIT_LOG_LEVEL',
        description="Logging level"
    )
    log_to_file: bool = Field(
        default=False,
        validation_alias='VFKIT_LOG_TO_FILE',
        description="Also write logs to a timestamped file"
    )
    log_dir: str = Field(
        default="logs",
        validation_alias='VFKIT_LOG_DIR',
        description="Directory for log files"
    )
    output_dir: str = Field(
        default="output",
        validation_alias='VFKIT_OUTPUT_DIR',
        description="Directory for report and DOT files"
    )

    # === Algebra Caps ===
    max_group_order: int = Field(
        default=64,
        validation_alias='VFKIT_MAX_GROUP_ORDER',
        ge=1,
        le=64,
        description="Largest accepted group order"
    )
    max_iso_vertices: int = Field(
        default=64,
        validation_alias='VFKIT_MAX_ISO_VERTICES',
        ge=1,
        le=64,
        description="Largest graph accepted by graphs_isomorphic"
    )

    # === Oracle Caps ===
    max_ball_radius: int = Field(
        default=12,
        validation_alias='VFKIT_MAX_BALL_RADIUS',
        ge=0,
        le=12,
        description="Largest tree-ball radius"
    )
    max_ball_vertices: int = Field(
        default=1_000_000,
        validation_alias='VFKIT_MAX_BALL_VERTICES',
        ge=1,
        le=1_000_000,
        description="Vertex cap for tree balls"
    )
    max_element_set: int = Field(
        default=100_000,
        validation_alias='VFKIT_MAX_ELEMENT_SET',
        ge=1,
        le=100_000,
        description="Cap on enumerated subgroup elements"
    )
    oracle_radius: int = Field(
        default=8,
        validation_alias='VFKIT_ORACLE_RADIUS',
        ge=0,
        le=12,
        description="Default ball radius R for the oracle"
    )
    oracle_length: int = Field(
        default=6,
        validation_alias='VFKIT_ORACLE_LENGTH',
        ge=0,
        description="Default generator length L for the oracle"
    )
    stab_radius: int = Field(
        default=4,
        validation_alias='VFKIT_STAB_RADIUS',
        ge=0,
        le=12,
        description="Edges within this radius are inspected for stabilizer counts"
    )

    # === Corpus ===
    corpus_max_generators: int = Field(
        default=4,
        validation_alias='VFKIT_CORPUS_MAX_GENERATORS',
        ge=1,
        le=4,
        description="Generators per random subgroup"
    )
    corpus_max_syllables: int = Field(
        default=8,
        validation_alias='VFKIT_CORPUS_MAX_SYLLABLES',
        ge=1,
        le=8,
        description="Edge syllables per random generator"
    )
    corpus_oracle_radius: int = Field(
        default=4,
        validation_alias='VFKIT_CORPUS_ORACLE_RADIUS',
        ge=0,
        le=12,
        description="Oracle radius used inside corpus runs"
    )
    corpus_oracle_length: int = Field(
        default=3,
        validation_alias='VFKIT_CORPUS_ORACLE_LENGTH',
        ge=0,
        description="Oracle generator length used inside corpus runs"
    )
    corpus_workers: int = Field(
        default=1,
        validation_alias='VFKIT_CORPUS_WORKERS',
        ge=1,
        le=32,
        description="Concurrent corpus workers"
    )
    corpus_max_attempts: int = Field(
        default=40,
        validation_alias='VFKIT_CORPUS_MAX_ATTEMPTS',
        ge=1,
        description="Resampling attempts per corpus subgroup"
    )

    model_config = SettingsConfigDict(
        env_file='.env',
        env_file_encoding='utf-8',
        extra='ignore',
        case_sensitive=False,
    )

    @model_validator(mode='after')
    def validate_and_normalize(self) -> 'Settings':
        """Normalize the log level and check cross-field caps."""
        level = self.log_level.upper()
        if level not in _LOG_LEVELS:
            raise ValueError(f"VFKIT_LOG_LEVEL must be one of {', '.join(_LOG_LEVELS)}")
        object.__setattr__(self, 'log_level', level)

        for name in ("oracle_radius", "corpus_oracle_radius", "stab_radius"):
            if getattr(self, name) > self.max_ball_radius:
                raise ValueError(
                    f"{name}={getattr(self, name)} exceeds max_ball_radius={self.max_ball_radius}"
                )
        return self

    @property
    def output_path(self) -> str:
        """Get absolute path to output directory."""
        return os.path.abspath(self.output_dir)

    @property
    def log_path(self) -> str:
        """Get absolute path to log directory."""
        return os.path.abspath(self.log_dir)


# Global settings instance - loaded once at import time
settings = Settings()
