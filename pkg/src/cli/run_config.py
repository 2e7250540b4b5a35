import logging
from pathlib import Path
from typing import Any, Literal, Optional

import yaml
from pydantic import ConfigDict, Field, ValidationError, field_validator, model_validator

from src.domain import AttackConfig, DefenseSpec, StyleCloakError, parse_defense_pipeline
from src.domain.base import BaseModel
from .error import usage_error

logger = logging.getLogger(__name__)

# Keys that describe the run rather than the optimization
RUN_KEYS = {"input", "output", "defenses", "jobs", "bit_depth"}


class RunConfigFile(BaseModel):
    """
    Flat YAML document: AttackConfig keys (`lambda`, `steps`, `learning_rate`, ...)
    next to run keys (`input`, `output`, `defenses`, `jobs`, `bit_depth`).
    Unknown keys are rejected.
    """

    model_config = ConfigDict(extra="forbid")

    input: Optional[Path] = None
    output: Optional[Path] = None
    defenses: list[str] = Field(default_factory=list)
    jobs: Optional[int] = Field(None, ge=1)
    bit_depth: Optional[Literal[8, 16]] = None
    attack: dict[str, Any] = Field(default_factory=dict)

    @field_validator("defenses")
    @classmethod
    def _check_defenses(cls, value: list[str]) -> list[str]:
        for text in value:
            try:
                parse_defense_pipeline(text)
            except StyleCloakError as e:
                raise ValueError(str(e)) from e
        return value

    @model_validator(mode="before")
    @classmethod
    def _split_attack_keys(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            raise ValueError("Run configuration must be a mapping of keys to values")
        if "attack" in data:
            raise ValueError("Unknown key 'attack': write AttackConfig keys at the top level")
        run = {k: v for k, v in data.items() if k in RUN_KEYS}
        run["attack"] = {k: v for k, v in data.items() if k not in RUN_KEYS}
        return run

    @model_validator(mode="after")
    def _check_attack(self) -> "RunConfigFile":
        # fails on unknown keys and on invariant violations before any work starts
        try:
            AttackConfig.model_validate(self.attack)
        except ValidationError as e:
            raise ValueError(str(e)) from e
        return self

    def defense_pipelines(self) -> list[list[DefenseSpec]]:
        return [parse_defense_pipeline(text) for text in self.defenses]

    @classmethod
    def load(cls, path: Path) -> "RunConfigFile":
        try:
            with open(path, "r", encoding="utf-8") as r_file:
                data = yaml.safe_load(r_file) or dict()
        except OSError as e:
            raise usage_error(f"Cannot read config file '{path}': {e}", code="config_error") from e
        except yaml.YAMLError as e:
            raise usage_error(f"Config file '{path}' is not valid YAML: {e}", code="config_error") from e
        try:
            config = cls.model_validate(data)
        except ValidationError as e:
            raise usage_error(f"Invalid config file '{path}': {e}", code="config_error") from e
        logger.debug(f"Loaded run config '{path}': {sorted(data)}")
        return config


def resolve_attack_config(overrides: dict[str, Any], config_file: Optional[RunConfigFile] = None) -> AttackConfig:
    """Flags > config file > defaults. `overrides` holds only the flags actually given."""
    merged = dict(config_file.attack) if config_file else {}
    merged.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return AttackConfig.model_validate(merged)
    except ValidationError as e:
        raise usage_error(f"Invalid attack configuration: {e}", code="config_error") from e
