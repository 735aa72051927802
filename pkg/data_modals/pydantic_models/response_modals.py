from pydantic import BaseModel, Field
from typing import Literal, Optional, List, Dict, Any
from datetime import datetime


# Outcome of one experiment run
class RunSummary(BaseModel):
    mode: str
    status: Literal["pass", "fail"]
    checks: Dict[str, bool] = Field(default_factory=dict, description="invariant check name -> passed")
    diagnostics: Dict[str, Any] = Field(default_factory=dict)
    artifacts: List[str] = Field(default_factory=list)


# General error record
class ErrorResponse(BaseModel):
    detail: str = Field(..., description="Error message explaining what went wrong")
    status: Literal["error", "invalid"] = Field(..., description="Status of the response")
    error_type: str = Field(..., description="Exception class name")
    timestamp: datetime = Field(default_factory=datetime.utcnow, description="Time the error occurred")
    context: Optional[Dict[str, Any]] = None
