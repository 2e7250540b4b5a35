import uuid

from pydantic import BaseModel as PydanticBaseModel
from pydantic import ConfigDict


class BaseModel(PydanticBaseModel):
    """Base model for all serializable domain records"""

    model_config = ConfigDict(arbitrary_types_allowed=True, populate_by_name=True)


def generate_run_id() -> str:
    """Generate a short id used to correlate the log lines of one CLI run"""
    return uuid.uuid4().hex[:12]
